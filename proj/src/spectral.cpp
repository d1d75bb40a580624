#include "lpcalc/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "lpcalc/errors.hpp"

namespace lpcalc {

namespace {

// FFTW planning is not thread-safe; plans are created once under a lock and then
// executed through the new-array interface, which is.
class PlanCache {
  public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(int dim, std::size_t points, int sign) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_tuple(dim, points, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        const std::size_t total = dim == 1 ? points : points * points;
        std::vector<cplx> scratch(total);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        const int n = static_cast<int>(points);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan plan = dim == 1 ? fftw_plan_dft_1d(n, buf, buf, sign, flags)
                                  : fftw_plan_dft_2d(n, n, buf, buf, sign, flags);
        plans_.emplace(key, plan);
        return plan;
    }

  private:
    std::mutex mutex_;
    std::map<std::tuple<int, std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

}  // namespace

void fft_inplace(std::vector<cplx>& data, int dim, std::size_t points, int sign) {
    fftw_plan plan = plan_cache().get(dim, points, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
}

Spectrum forward_transform(const GridFunction& f) {
    const Grid& g = f.grid();
    std::vector<cplx> data(f.samples().begin(), f.samples().end());
    fft_inplace(data, g.dim(), g.points_per_axis(), -1);
    const double w = g.cell_volume();
    for (auto& z : data) z *= w;
    return Spectrum(g, std::move(data));
}

GridFunction inverse_transform(const Spectrum& F) {
    const Grid& g = F.grid();
    std::vector<cplx> data(F.coefficients().begin(), F.coefficients().end());
    fft_inplace(data, g.dim(), g.points_per_axis(), +1);
    const double w = 1.0 / g.volume();
    for (auto& z : data) z *= w;
    return GridFunction(g, std::move(data));
}

double parseval_constant(const Grid& grid) { return grid.volume() * grid.cell_volume(); }

Spectrum apply_multiplier(const Multiplier& a, double t, const Spectrum& F) {
    if (!(t > 0.0)) throw InvalidArgument("multiplier scale t must be positive");
    const Grid& g = F.grid();
    std::vector<cplx> out(F.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        Point xi = g.frequency(i);
        xi[0] *= t;
        xi[1] *= t;
        const cplx v = a(xi);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::ostringstream msg;
            msg << "multiplier is not finite at frequency (" << xi[0];
            if (g.dim() == 2) msg << ", " << xi[1];
            msg << ")";
            throw InvalidArgument(msg.str());
        }
        out[i] = v * F[i];
    }
    return Spectrum(g, std::move(out));
}

GridFunction apply_multiplier(const Multiplier& a, double t, const GridFunction& f) {
    return inverse_transform(apply_multiplier(a, t, forward_transform(f)));
}

double lp_norm(std::span<const double> magnitudes, const Grid& grid, double p) {
    if (!(p > 0.0)) throw InvalidArgument("lp_norm requires p > 0");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : magnitudes) m = std::max(m, v);
        return m;
    }
    double acc = 0.0;
    for (double v : magnitudes) acc += std::pow(v, p);
    return std::pow(grid.cell_volume() * acc, 1.0 / p);
}

double lp_norm(const GridFunction& f, double p) {
    std::vector<double> mag(f.size());
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::abs(f[i]);
    return lp_norm(mag, f.grid(), p);
}

GridFunction pointwise_product(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f.grid(), g.grid(), "pointwise_product");
    std::vector<cplx> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f[i] * g[i];
    return GridFunction(f.grid(), std::move(v));
}

double spectral_radius(const Spectrum& F, double threshold) {
    double peak = 0.0;
    for (const auto& z : F.coefficients()) peak = std::max(peak, std::abs(z));
    if (peak == 0.0) return 0.0;
    double radius = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i)
        if (std::abs(F[i]) > threshold * peak) radius = std::max(radius, F.grid().frequency_norm(i));
    return radius;
}

}  // namespace lpcalc
