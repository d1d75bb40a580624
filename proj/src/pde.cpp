#include "lpcalc/pde.hpp"

#include <algorithm>
#include <cmath>

#include "lpcalc/errors.hpp"
#include "lpcalc/experiments.hpp"
#include "lpcalc/parallel.hpp"

namespace lpcalc {

namespace {

double sobolev_norm(const GridFunction& f, const ResolutionOfUnity& R) {
    return triebel_lizorkin_norm(f, SpaceSpec{f.grid().dim() / 2.0, 2.0, 2.0, std::nullopt}, R);
}

/// Norm of a difference of iterates. The exact difference is band-limited; the
/// projection removes the rounding floor, which dominates once iterates agree.
double update_norm(const GridFunction& a, const GridFunction& b, const ResolutionOfUnity& R) {
    const double top = std::ldexp(1.0, R.jmax());
    const Multiplier band = [top](const Point& xi) -> cplx { return euclidean_norm(xi) <= top ? 1.0 : 0.0; };
    return sobolev_norm(apply_multiplier(band, 1.0, a.minus(b)), R);
}

std::vector<cplx> spectrum_of(const GridFunction& f) {
    const Spectrum F = forward_transform(f);
    return {F.coefficients().begin(), F.coefficients().end()};
}

std::function<double(double)> damping_of(const EvolutionSpec& spec) {
    return spec.damping ? spec.damping : log_damping(spec.R.jmax());
}

struct Attempt {
    PicardState state;
    bool diverged = false;
    double growth = 0.0;
};

Attempt iterate(const EvolutionSpec& spec, double T) {
    Attempt out;
    PicardState& st = out.state;
    st.T = T;
    const int M = spec.nodes;
    for (int k = 0; k <= M; ++k) st.times.push_back(T * k / M);
    std::vector<GridFunction> u(static_cast<std::size_t>(M + 1), spec.u0);
    parallel_for(u.size(), [&](std::size_t k) { u[k] = propagator(spec.s, st.times[k], spec.u0); });

    int rising = 0;
    for (int it = 1; it <= spec.max_iterations; ++it) {
        std::vector<GridFunction> next = duhamel_map(spec, T, u);
        std::vector<double> diffs(next.size());
        parallel_for(next.size(), [&](std::size_t k) { diffs[k] = update_norm(next[k], u[k], spec.R); });
        const double d = *std::max_element(diffs.begin(), diffs.end());
        if (!std::isfinite(d)) {
            out.diverged = true;
            out.growth = kInf;
            break;
        }
        if (!st.update_norms.empty()) {
            const double prev = st.update_norms.back();
            st.contraction_factors.push_back(prev > 0.0 ? d / prev : 0.0);
            rising = d >= prev && d > 0.0 ? rising + 1 : 0;
        }
        st.update_norms.push_back(d);
        st.iterations = it;
        u = std::move(next);
        if (d < spec.tolerance) {
            st.converged = true;
            break;
        }
        if (rising >= 3) {
            out.diverged = true;
            out.growth = st.contraction_factors.back();
            break;
        }
    }
    if (!out.diverged) {
        const std::vector<GridFunction> check = duhamel_map(spec, T, u);
        std::vector<double> res(check.size());
        parallel_for(check.size(), [&](std::size_t k) { res[k] = update_norm(check[k], u[k], spec.R); });
        st.residual = *std::max_element(res.begin(), res.end());
    }
    st.trajectory = std::move(u);
    return out;
}

}  // namespace

GridFunction propagator(double s, double t, const GridFunction& f) {
    if (!(s > 0.0)) throw InvalidArgument("dispersion exponent s must be positive");
    if (t == 0.0) return f;
    const Multiplier phase = [s, t](const Point& xi) {
        return std::polar(1.0, t * std::pow(euclidean_norm(xi), s));
    };
    return apply_multiplier(phase, 1.0, f);
}

std::function<double(double)> log_damping(int jmax) {
    if (jmax < 1) throw InvalidArgument("log damping needs jmax >= 1");
    const ResolutionOfUnity cut(BumpProfile{}, jmax);
    return [cut, jmax](double r) { return cut.low_pass(jmax - 1, r) / std::sqrt(1.0 + log_plus(r)); };
}

double EvolutionSpec::validate() const {
    if (!(s > 0.0)) throw InvalidArgument("dispersion exponent s must be positive");
    if (!(T > 0.0)) throw InvalidArgument("horizon T must be positive");
    if (nodes < 1) throw InvalidArgument("time lattice needs at least one node");
    if (max_iterations < 1) throw InvalidArgument("max_iterations must be positive");
    if (max_halvings < 0) throw InvalidArgument("max_halvings must be non-negative");
    R.require_fits(u0.grid());
    require_band_limited(u0, R);
    const auto m = damping ? damping : log_damping(R.jmax());
    const Grid& g = u0.grid();
    double C = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.frequency_norm(i);
        const double v = m(r);
        if (!std::isfinite(v)) throw InvalidArgument("damping multiplier is not finite at |xi| = " + std::to_string(r));
        C = std::max(C, std::abs(v) * std::sqrt(1.0 + log_plus(r)));
    }
    return C;
}

std::vector<GridFunction> duhamel_map(const EvolutionSpec& spec, double T, const std::vector<GridFunction>& u) {
    const int M = static_cast<int>(u.size()) - 1;
    if (M < 1) throw InvalidArgument("Duhamel map needs at least two nodes");
    const Grid& grid = spec.u0.grid();
    const double dt = T / M;
    const auto m = damping_of(spec);
    const Multiplier damp = [m](const Point& xi) -> cplx { return m(euclidean_norm(xi)); };

    // Interaction-picture integrand e^{-i r|D|^s} N(u(r)) at each midpoint r.
    std::vector<std::vector<cplx>> integrand(static_cast<std::size_t>(M));
    parallel_for(integrand.size(), [&](std::size_t l) {
        const double r = (static_cast<double>(l) + 0.5) * dt;
        const GridFunction mid = u[l].plus(u[l + 1]).scaled(0.5);
        const GridFunction N = apply_multiplier(damp, 1.0, apply_bilinear(spec.sigma, mid, mid));
        integrand[l] = spectrum_of(propagator(spec.s, -r, N));
    });

    const std::vector<cplx> U0 = spectrum_of(spec.u0);
    std::vector<std::vector<cplx>> partial(static_cast<std::size_t>(M + 1), U0);
    for (int k = 1; k <= M; ++k) {
        auto& P = partial[static_cast<std::size_t>(k)];
        P = partial[static_cast<std::size_t>(k - 1)];
        const auto& I = integrand[static_cast<std::size_t>(k - 1)];
        for (std::size_t i = 0; i < P.size(); ++i) P[i] += cplx(0.0, -dt) * I[i];
    }
    std::vector<GridFunction> out(partial.size(), spec.u0);
    parallel_for(out.size(), [&](std::size_t k) {
        const GridFunction v = inverse_transform(Spectrum(grid, partial[k]));
        out[k] = propagator(spec.s, T * static_cast<double>(k) / M, v);
    });
    return out;
}

PicardState picard_solve(const EvolutionSpec& spec) {
    const double C = spec.validate();
    double T = spec.T;
    double growth = 0.0;
    for (int h = 0; h <= spec.max_halvings; ++h, T *= 0.5) {
        Attempt a = iterate(spec, T);
        if (!a.diverged) {
            a.state.halvings = h;
            a.state.damping_constant = C;
            return a.state;
        }
        growth = a.growth;
    }
    throw DivergenceError("Picard iteration does not contract after " + std::to_string(spec.max_halvings) +
                              " halvings of T; last growth factor " + std::to_string(growth),
                          growth);
}

OrderReport time_step_order(EvolutionSpec spec, int refinements) {
    if (refinements < 2) throw InvalidArgument("order estimate needs at least two refinements");
    spec.max_halvings = 0;
    OrderReport out;
    const int base = spec.nodes;
    for (int r = 0; r <= refinements; ++r) {
        spec.nodes = base << r;
        const PicardState st = picard_solve(spec);
        out.nodes.push_back(spec.nodes);
        out.finals.push_back(st.trajectory.back());
    }
    for (std::size_t i = 0; i + 1 < out.finals.size(); ++i)
        out.differences.push_back(update_norm(out.finals[i], out.finals[i + 1], spec.R));
    const double a = out.differences[out.differences.size() - 2], b = out.differences.back();
    out.order = b > 0.0 ? std::log2(a / b) : kInf;
    return out;
}

double log_schrodinger_symbol(const Point& xi) {
    const double r = euclidean_norm(xi);
    return 1.0 + std::log1p(r * r);
}

LogSchrodingerReport log_schrodinger_solve(const BilinearSymbol& sigma, const GridFunction& f, const GridFunction& g,
                                           const ResolutionOfUnity& R, double p, double q) {
    product_gate(p, q);
    const Multiplier v = [](const Point& xi) -> cplx { return log_schrodinger_symbol(xi); };
    const Multiplier inv = [](const Point& xi) -> cplx { return 1.0 / log_schrodinger_symbol(xi); };
    LogSchrodingerReport out{GridFunction::zeros(f.grid()), apply_bilinear(sigma, f, g)};
    out.u = apply_multiplier(inv, 1.0, out.rhs);
    const double scale = lp_norm(out.rhs, 2.0);
    out.residual = scale > 0.0 ? lp_norm(apply_multiplier(v, 1.0, out.u).minus(out.rhs), 2.0) / scale : 0.0;

    const int n = f.grid().dim();
    const SpaceSpec target{n / p, p, q, AdmissibleWeight::prototype(1.0 / p)};
    const SpaceSpec source{n / p + sigma.order(), p, q, std::nullopt};
    out.solution_norm = f_norm(out.u, target, R);
    out.data_norm = f_norm(f, source, R) * f_norm(g, source, R);
    out.ratio = out.data_norm > 0.0 ? out.solution_norm / out.data_norm : 0.0;
    return out;
}

}  // namespace lpcalc
