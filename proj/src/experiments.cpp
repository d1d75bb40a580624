#include "lpcalc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "lpcalc/bilinear.hpp"
#include "lpcalc/errors.hpp"
#include "lpcalc/parallel.hpp"

namespace lpcalc {

namespace {

constexpr double kE = std::numbers::e;

double slope_or_zero(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() < 2) return 0.0;
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    if (*lo == *hi) return 0.0;
    return log_slope(xs, ys);
}

double conjugate(double r) {
    if (r == 1.0) return kInf;
    if (std::isinf(r)) return 1.0;
    return r / (r - 1.0);
}

/// 1/r' for r = max(1, p).
double inverse_conjugate(double p) {
    const double rc = conjugate(std::max(1.0, p));
    return std::isinf(rc) ? 0.0 : 1.0 / rc;
}

template <class F>
std::vector<RatioSample> per_member(const Ensemble& E, F&& ratio_of) {
    std::vector<RatioSample> out(static_cast<std::size_t>(E.size()));
    parallel_for(out.size(), [&](std::size_t i) {
        const int m = static_cast<int>(i);
        const auto [num, den] = ratio_of(E.member(m));
        out[i] = RatioSample{m, E.level(m), num, den, den > 0.0 ? num / den : 0.0};
    });
    return out;
}

}  // namespace

GridFunction random_band_limited(const Grid& grid, int level, double s, double epsilon, std::uint64_t seed,
                                 std::uint64_t index) {
    if (level < 0) throw InvalidArgument("bandwidth level must be non-negative");
    const double radius = std::ldexp(1.0, level);
    if (radius >= grid.nyquist())
        throw NyquistViolation("bandwidth 2^" + std::to_string(level) + " does not fit under the Nyquist bound " +
                               std::to_string(grid.nyquist()));
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;
    const double decay = s + grid.dim() / 2.0 + epsilon;

    std::vector<cplx> F(grid.size(), cplx{});
    // Visit modes in a fixed order and fill each Hermitian pair once.
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Point xi = grid.frequency(i);
        const double r = euclidean_norm(xi);
        if (r >= radius) continue;
        const auto idx = grid.unflatten(i);
        const long k0 = grid.mode(idx[0]);
        const long k1 = grid.dim() == 2 ? grid.mode(idx[1]) : 0;
        const std::size_t j = grid.mode_index(-k0, -k1);
        if (j < i) continue;
        const double amp = std::pow(1.0 + r * r, -decay / 2.0);
        if (j == i) {
            F[i] = amp * normal(rng);
        } else {
            const double re = normal(rng), im = normal(rng);
            F[i] = amp * cplx(re, im) / std::numbers::sqrt2;
            F[j] = std::conj(F[i]);
        }
    }
    GridFunction f = inverse_transform(Spectrum(grid, std::move(F)));
    std::vector<cplx> v(f.samples().begin(), f.samples().end());
    for (auto& z : v) z = z.real();
    GridFunction real(grid, std::move(v));
    const double sup = lp_norm(real, kInf);
    return sup > 0.0 ? real.scaled(1.0 / sup) : real;
}

Ensemble::Ensemble(EnsembleSpec spec, Grid grid) : spec_(std::move(spec)), grid_(std::move(grid)) {
    if (spec_.count < 0) throw InvalidArgument("ensemble count must be non-negative");
    if (spec_.levels.empty()) throw InvalidArgument("ensemble needs at least one bandwidth level");
    resolution().require_fits(grid_);
    for (int i = 0; i < spec_.count; ++i) levels_.push_back(spec_.levels[static_cast<std::size_t>(i) % spec_.levels.size()]);
    members_.assign(levels_.size(), GridFunction::zeros(grid_));
    parallel_for(members_.size(), [&](std::size_t i) {
        members_[i] = random_band_limited(grid_, levels_[i], spec_.s, spec_.epsilon, spec_.seed, i);
    });
}

Ensemble::Ensemble(Grid grid, std::vector<GridFunction> members, std::vector<int> member_levels)
    : grid_(std::move(grid)), members_(std::move(members)), levels_(std::move(member_levels)) {
    if (members_.size() != levels_.size()) throw InvalidArgument("one bandwidth level per member is required");
    if (members_.empty()) throw InvalidArgument("ensemble needs at least one member");
    for (const auto& f : members_) require_same_grid(f.grid(), grid_, "Ensemble");
    spec_.count = static_cast<int>(members_.size());
    spec_.levels = levels_;
    std::sort(spec_.levels.begin(), spec_.levels.end());
    spec_.levels.erase(std::unique(spec_.levels.begin(), spec_.levels.end()), spec_.levels.end());
    resolution().require_fits(grid_);
    for (const auto& f : members_) require_band_limited(f, build_resolution(BumpProfile{}, jmax() - 1));
}

int Ensemble::level(int i) const { return levels_.at(static_cast<std::size_t>(i)); }

int Ensemble::jmax() const { return *std::max_element(spec_.levels.begin(), spec_.levels.end()) + 1; }

ResolutionOfUnity Ensemble::resolution(const BumpProfile& profile) const { return build_resolution(profile, jmax()); }

Grid ensemble_grid(int max_level) {
    const double L = 64.0;
    std::size_t N = 8;
    while (std::numbers::pi * static_cast<double>(N) / L < std::ldexp(1.0, max_level + 2)) N *= 2;
    return Grid(1, N, L);
}

RatioReport summarize_ratios(std::string name, std::vector<RatioSample> samples, double band,
                             double trend_tolerance) {
    RatioReport out;
    out.name = std::move(name);
    out.band = band;
    out.trend_tolerance = trend_tolerance;
    std::erase_if(samples, [](const RatioSample& s) { return !(s.denominator > 0.0) || !(s.ratio > 0.0); });
    std::stable_sort(samples.begin(), samples.end(),
                     [](const RatioSample& a, const RatioSample& b) { return a.member < b.member; });
    out.samples = std::move(samples);
    if (out.samples.empty()) return out;
    out.min = kInf;
    std::vector<double> xs, ys;
    for (const auto& s : out.samples) {
        out.min = std::min(out.min, s.ratio);
        out.max = std::max(out.max, s.ratio);
        xs.push_back(s.level);
        ys.push_back(s.ratio);
    }
    out.spread = out.max / out.min;
    out.trend_slope = slope_or_zero(xs, ys);
    return out;
}

RatioReport merge_ratios(std::string name, const std::vector<RatioReport>& parts, double band,
                         double trend_tolerance) {
    std::vector<RatioSample> all;
    for (const auto& p : parts) all.insert(all.end(), p.samples.begin(), p.samples.end());
    RatioReport out = summarize_ratios(std::move(name), std::move(all), band, trend_tolerance);
    // The union mixes configurations; its trend is the worst of the parts.
    out.trend_slope = parts.empty() ? 0.0 : -kInf;
    for (const auto& p : parts) out.trend_slope = std::max(out.trend_slope, p.trend_slope);
    return out;
}

void embedding_gate(double p, double q) {
    if (!(p > 0.0) || !(q > 0.0)) throw GateViolation("embedding needs p > 0 and q > 0");
    if (std::isinf(p) && !(q <= 2.0))
        throw GateViolation("embedding with p = inf needs 0 < q <= 2, got q = " + std::to_string(q));
}

void product_gate(double p, double q) {
    if (!(p > 0.0) || std::isinf(p) || !(q > 0.0))
        throw GateViolation("product estimate needs 0 < p < inf and 0 < q <= inf");
    const double m = std::min({1.0, p, q});
    // min(1, p, q) > p / (p + 1), cleared of the denominator.
    if (!(m * (p + 1.0) > p))
        throw GateViolation("product estimate needs min(1, p, q) > p/(p+1): min(1, " + std::to_string(p) + ", " +
                            std::to_string(q) + ") = " + std::to_string(m) + " <= " + std::to_string(p / (p + 1.0)));
}

RatioReport embedding_ratio(const Ensemble& E, double p, double q, std::optional<double> w_exponent) {
    embedding_gate(p, q);
    const int n = E.grid().dim();
    const double exponent = w_exponent.value_or(inverse_conjugate(p));
    const AdmissibleWeight w = AdmissibleWeight::prototype(exponent);
    const ResolutionOfUnity R = E.resolution();
    const DyadicCubeSet cubes(E.grid());
    const SpaceSpec spec{n / p, p, q, std::nullopt};
    XwOptions xo;
    xo.levels = R.jmax();
    auto samples = per_member(E, [&](const GridFunction& f) {
        return std::pair{xw_norm(f, w, cubes, xo), f_norm(f, spec, R)};
    });
    return summarize_ratios("embedding", std::move(samples));
}

RatioReport product_estimate_ratio(const Ensemble& E, double p, double q) {
    product_gate(p, q);
    const int n = E.grid().dim();
    const ResolutionOfUnity R = E.resolution();
    const SpaceSpec plain{n / p, p, q, std::nullopt};
    const SpaceSpec weighted{n / p, p, q, AdmissibleWeight::prototype(-inverse_conjugate(p))};
    std::vector<std::pair<int, int>> pairs;
    std::vector<bool> used(static_cast<std::size_t>(E.size()), false);
    for (int a = 0; a < E.size(); ++a) {
        if (used[static_cast<std::size_t>(a)]) continue;
        for (int b = a + 1; b < E.size(); ++b) {
            if (used[static_cast<std::size_t>(b)] || E.level(b) != E.level(a)) continue;
            used[static_cast<std::size_t>(a)] = used[static_cast<std::size_t>(b)] = true;
            pairs.emplace_back(a, b);
            break;
        }
    }
    std::vector<RatioSample> out(pairs.size());
    parallel_for(out.size(), [&](std::size_t i) {
        const auto [a, b] = pairs[i];
        const GridFunction& f = E.member(a);
        const GridFunction& g = E.member(b);
        const double num = f_norm(pointwise_product(f, g), weighted, R);
        const double den = f_norm(f, plain, R) * f_norm(g, plain, R);
        out[i] = RatioSample{a, E.level(a), num, den, den > 0.0 ? num / den : 0.0};
    });
    return summarize_ratios("product", std::move(out));
}

RatioReport resolution_independence_check(const Ensemble& E, const SpaceSpec& spec) {
    spec.validate();
    const ResolutionOfUnity R1 = E.resolution();
    const ResolutionOfUnity R2 = build_alternative_resolution(E.jmax());
    const DyadicCubeSet cubes(E.grid());
    SpaceSpec s = spec;
    s.p = kInf;
    auto samples = per_member(E, [&](const GridFunction& f) {
        return std::pair{tl_infinity_norm(f, s, R1, cubes), tl_infinity_norm(f, s, R2, cubes)};
    });
    return summarize_ratios("resolution", std::move(samples));
}

RatioReport lifting_ratio(const Ensemble& E, const SpaceSpec& spec) {
    const ResolutionOfUnity R = E.resolution();
    auto samples = per_member(E, [&](const GridFunction& f) {
        const LiftingReport r = lifting_check(f, spec, R);
        return std::pair{r.weighted_norm, r.lifted_norm};
    });
    return summarize_ratios("lifting", std::move(samples));
}

void embedding_params_gate(const EmbeddingParams& P, int dim) {
    if (!(P.p > 0.0) || std::isinf(P.p)) throw GateViolation("embedding needs 0 < p < inf");
    if (!(P.q > 0.0)) throw GateViolation("embedding needs q > 0");
    if (P.kind == EmbeddingParams::Kind::BesovIntoTlInfinity) {
        if (std::isinf(P.q)) throw GateViolation("F_{inf,q} is evaluated for q < inf only");
        return;
    }
    if (!(P.q1 > 0.0) || !(P.p1 > 0.0)) throw GateViolation("embedding needs p1 > 0 and q1 > 0");
    if (!(P.p < P.p1)) throw GateViolation("embedding needs p < p1");
    const double lhs = P.s - dim / P.p;
    const double rhs = P.s1 - (std::isinf(P.p1) ? 0.0 : dim / P.p1);
    if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, std::abs(lhs)))
        throw GateViolation("embedding needs s - n/p = s1 - n/p1, got " + std::to_string(lhs) + " and " +
                            std::to_string(rhs));
    if (!(P.p <= P.q1)) throw GateViolation("embedding holds if and only if p <= q1");
}

RatioReport besov_tl_embedding_check(const Ensemble& E, const EmbeddingParams& P) {
    const int n = E.grid().dim();
    embedding_params_gate(P, n);
    const ResolutionOfUnity R = E.resolution();
    if (P.kind == EmbeddingParams::Kind::BesovIntoTlInfinity) {
        const DyadicCubeSet cubes(E.grid());
        const SpaceSpec target{P.s, kInf, P.q, std::nullopt};
        const SpaceSpec source{P.s + n / P.p, P.p, kInf, std::nullopt};
        auto samples = per_member(E, [&](const GridFunction& f) {
            return std::pair{tl_infinity_norm(f, target, R, cubes), besov_norm(f, source, R)};
        });
        return summarize_ratios("besov-into-tl", std::move(samples));
    }
    const SpaceSpec target{P.s1, P.p1, P.q1, std::nullopt};
    const SpaceSpec source{P.s, P.p, P.q, std::nullopt};
    auto samples = per_member(E, [&](const GridFunction& f) {
        return std::pair{besov_norm(f, target, R), triebel_lizorkin_norm(f, source, R)};
    });
    return summarize_ratios("tl-into-besov", std::move(samples));
}

TelescopingReport telescoping_growth_check(const GridFunction& f, double r, const ResolutionOfUnity& R) {
    if (!(r >= 1.0)) throw InvalidArgument("telescoping check needs r >= 1");
    TelescopingReport out;
    out.besov_norm = besov_norm(f, SpaceSpec{0.0, kInf, r, std::nullopt}, R);
    const double a = inverse_conjugate(r);
    const Spectrum F = forward_transform(f);
    const BumpProfile profile = R.profile();
    const Multiplier phi = radial([profile](double x) { return ball_cutoff(profile, x); });
    std::vector<double> xs, ys;
    for (int j = 0; j <= R.jmax(); ++j) {
        const double sup = lp_norm(inverse_transform(apply_multiplier(phi, std::ldexp(1.0, -j), F)), kInf);
        const double denom = std::pow(1.0 + j * std::numbers::ln2, a) * out.besov_norm;
        const double v = denom > 0.0 ? sup / denom : 0.0;
        out.levels.push_back(j);
        out.values.push_back(v);
        out.max = std::max(out.max, v);
        if (2 * j >= R.jmax() && v > 0.0) {
            xs.push_back(j);
            ys.push_back(v);
        }
    }
    out.trend_slope = slope_or_zero(xs, ys);
    return out;
}

void SharpnessProfile::validate() const {
    if (!(delta > 0.5)) throw InvalidArgument("sharpness profile needs delta > 1/2");
    if (!std::isfinite(gamma)) throw InvalidArgument("sharpness profile needs a finite gamma");
    if (kmin < 1 || kmax < kmin + 2) throw InvalidArgument("sharpness sweep needs 1 <= kmin and kmax >= kmin + 2");
    if (oracle_kmax < kmin + 2) throw InvalidArgument("oracle sweep needs oracle_kmax >= kmin + 2");
}

double sharpness_density(double delta, double xi) {
    const double r = std::abs(xi);
    if (!(r > kE)) return 0.0;
    return 1.0 / (r * std::pow(std::log(r), delta));
}

GridFunction sharpness_function(const Grid& grid, double delta, double R) {
    if (grid.dim() != 1) throw InvalidArgument("sharpness functions are one-dimensional");
    if (R >= grid.nyquist()) throw NyquistViolation("truncation radius above the Nyquist bound");
    std::vector<cplx> F(grid.size(), cplx{});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double xi = grid.frequency(i)[0];
        if (std::abs(xi) <= R) F[i] = sharpness_density(delta, xi);
    }
    return inverse_transform(Spectrum(grid, std::move(F)));
}

namespace {

struct GaussLegendre {
    std::vector<double> nodes, weights;
    explicit GaussLegendre(int n) {
        for (int i = 1; i <= n; ++i) {
            double x = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            nodes.push_back(x);
            weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
        }
    }
    template <class F>
    double integrate(F&& f, double a, double b) const {
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(c + h * nodes[i]);
        return h * acc;
    }
};

}  // namespace

double sharpness_integral(double exponent, double R) {
    static const GaussLegendre rule(20);
    const double lo = 2.0 * kE;
    if (!(R > lo)) return 0.0;
    const auto integrand = [exponent](double x) { return std::pow(std::log(x), exponent) / x; };
    double acc = 0.0;
    // Each dyadic piece [a, 2a] is split further so the rule sees a smooth, nearly linear integrand.
    for (double a = lo; a < R; a *= 2.0) {
        const double b = std::min(2.0 * a, R);
        constexpr int pieces = 4;
        for (int i = 0; i < pieces; ++i)
            acc += rule.integrate(integrand, a + (b - a) * i / pieces, a + (b - a) * (i + 1) / pieces);
    }
    return acc;
}

double growth_exponent(const std::vector<double>& radii, const std::vector<double>& values) {
    if (radii.size() != values.size() || radii.size() < 3)
        throw InvalidArgument("growth exponent needs at least three radii");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
        const double x0 = std::log(std::log(radii[i])), x1 = std::log(std::log(radii[i + 1]));
        const double d = (values[i + 1] - values[i]) / (x1 - x0);
        if (!(d > 0.0)) throw InvalidArgument("growth exponent needs increasing values");
        xs.push_back(0.5 * (x0 + x1));
        ys.push_back(d);
    }
    return log_slope(xs, ys);
}

CauchyReport cauchy_increments(const std::vector<double>& partial) {
    CauchyReport out;
    for (std::size_t i = 0; i + 1 < partial.size(); ++i) out.increments.push_back(std::abs(partial[i + 1] - partial[i]));
    if (out.increments.empty()) return out;
    out.decreasing = true;
    for (std::size_t i = 0; i + 1 < out.increments.size(); ++i)
        if (!(out.increments[i + 1] < out.increments[i])) out.decreasing = false;
    out.last_over_first = out.increments.front() > 0.0 ? out.increments.back() / out.increments.front() : 0.0;
    return out;
}

SharpnessReport sharpness_scan(const SharpnessProfile& P) {
    P.validate();
    SharpnessReport out;
    out.profile = P;
    out.predicted = P.exponent();
    const double a = 2.0 - 4.0 * P.delta - 2.0 * P.gamma;

    for (int k = P.kmin; k <= P.oracle_kmax; ++k) {
        const double R = std::ldexp(kE, k);
        out.oracle_radii.push_back(R);
        out.oracle_values.push_back(sharpness_integral(a, R));
    }
    out.oracle_exponent = growth_exponent(out.oracle_radii, out.oracle_values);
    out.oracle_ok = std::abs(out.oracle_exponent - out.predicted) <= 0.02 * std::abs(out.predicted);

    const Grid grid(1, P.points, 2.0 * std::numbers::pi);
    const ResolutionOfUnity R = build_resolution(BumpProfile{}, P.jmax, grid);
    const SpaceSpec plain{0.5, 2.0, 2.0, std::nullopt};
    const SpaceSpec weighted{0.5, 2.0, 2.0, AdmissibleWeight::prototype(-P.gamma)};
    for (int k = P.kmin; k <= P.kmax; ++k) out.radii.push_back(std::ldexp(kE, k));
    out.membership_norms.resize(out.radii.size());
    out.squared_norms.resize(out.radii.size());
    parallel_for(out.radii.size(), [&](std::size_t i) {
        const GridFunction f = sharpness_function(grid, P.delta, out.radii[i]);
        out.membership_norms[i] = triebel_lizorkin_norm(f, plain, R);
        const double v = triebel_lizorkin_norm(pointwise_product(f, f), weighted, R);
        out.squared_norms[i] = v * v;
    });
    out.membership = cauchy_increments(out.membership_norms);
    std::vector<double> roots;
    for (double v : out.squared_norms) roots.push_back(std::sqrt(v));
    out.growth_cauchy = cauchy_increments(roots);
    out.fitted_exponent = growth_exponent(out.radii, out.squared_norms);
    out.growth_ok = out.predicted > 0.0
                        ? std::abs(out.fitted_exponent - out.predicted) <= 0.05 * std::abs(out.predicted) + 0.05
                        : out.growth_cauchy.cauchy();

    // (g * g)(xi) by the lattice sum over integer frequencies, against the closed-form lower bound.
    const double Rmax = out.radii.back();
    const long top = static_cast<long>(std::floor(Rmax));
    std::vector<double> g(static_cast<std::size_t>(2 * top + 1));
    for (long b = -top; b <= top; ++b) g[static_cast<std::size_t>(b + top)] = sharpness_density(P.delta, double(b));
    out.convolution_bound_ratio = kInf;
    for (long xi = static_cast<long>(std::ceil(2.0 * kE)); xi <= top; xi = std::max(xi + 1, xi * 9 / 8)) {
        double conv = 0.0;
        for (long b = -top; b <= top; ++b) {
            const long c = xi - b;
            if (c < -top || c > top) continue;
            conv += g[static_cast<std::size_t>(b + top)] * g[static_cast<std::size_t>(c + top)];
        }
        const double x = static_cast<double>(xi);
        const double num = std::pow(std::log(x - kE), 1.0 - P.delta) - 1.0;
        const double bound = num / ((1.0 - P.delta) * (2.0 * x - kE) * std::pow(std::log(2.0 * x - kE), P.delta));
        if (bound > 0.0) out.convolution_bound_ratio = std::min(out.convolution_bound_ratio, conv / bound);
    }
    out.convolution_ok = out.convolution_bound_ratio >= 0.95;
    return out;
}

}  // namespace lpcalc
