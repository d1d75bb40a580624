#pragma once

#include <functional>
#include <limits>

#include "lpcalc/grid.hpp"

namespace lpcalc {

/// Fourier multiplier symbol a(xi).
using Multiplier = std::function<cplx(const Point& xi)>;

/// Radial multiplier built from a profile of |xi|.
template <class F>
Multiplier radial(F profile) {
    return [profile](const Point& xi) -> cplx { return profile(euclidean_norm(xi)); };
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Coefficient at k is h^n sum_x f(x) exp(-i x.xi_k): the trapezoid rule on the
/// torus applied to the continuous transform.
Spectrum forward_transform(const GridFunction& f);

/// Exact inverse of forward_transform: f(x) = L^{-n} sum_k F_k exp(i x.xi_k).
GridFunction inverse_transform(const Spectrum& F);

/// sum_k |F_k|^2 = parseval_constant(grid) * sum_x |f(x)|^2.
double parseval_constant(const Grid& grid);

/// a(tD)f. Throws InvalidArgument naming the first grid frequency where a(t xi)
/// is not finite.
GridFunction apply_multiplier(const Multiplier& a, double t, const GridFunction& f);
Spectrum apply_multiplier(const Multiplier& a, double t, const Spectrum& F);

/// (h^n sum |f|^p)^{1/p}; the sample maximum for p = infinity. p < 1 gives the
/// quasi-norm.
double lp_norm(const GridFunction& f, double p);
double lp_norm(std::span<const double> magnitudes, const Grid& grid, double p);

GridFunction pointwise_product(const GridFunction& f, const GridFunction& g);

/// Largest |xi| carrying a coefficient with |F_k| > threshold * max|F|.
double spectral_radius(const Spectrum& F, double threshold = 1e-13);

/// Unnormalised DFT helpers (sign -1 forward, +1 backward) over an n-dimensional
/// cube of side `points`, backed by a cached FFTW plan.
void fft_inplace(std::vector<cplx>& data, int dim, std::size_t points, int sign);

}  // namespace lpcalc
