#include "lpcalc/norms.hpp"

#include <algorithm>
#include <cmath>

#include "lpcalc/errors.hpp"

namespace lpcalc {

namespace {

double lq_combine(const std::vector<double>& values, double q) {
    if (std::isinf(q)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, v);
        return m;
    }
    double acc = 0.0;
    for (double v : values) acc += std::pow(v, q);
    return std::pow(acc, 1.0 / q);
}

void require_unweighted(const SpaceSpec& spec, const char* where) {
    if (spec.weight && !spec.weight->is_constant())
        throw InvalidArgument(std::string(where) + " is defined for the unweighted scale only");
}

SpaceSpec without_weight(SpaceSpec spec) {
    spec.weight.reset();
    return spec;
}

}  // namespace

void SpaceSpec::validate() const {
    if (!(p > 0.0)) throw InvalidArgument("integrability p must be positive");
    if (!(q > 0.0)) throw InvalidArgument("summability q must be positive");
    if (!std::isfinite(s)) throw InvalidArgument("smoothness s must be finite");
}

double SpaceSpec::tau(int dim) const { return dim * (1.0 / std::min({1.0, p, q}) - 1.0); }

double SpaceSpec::r() const { return std::max(1.0, p); }

double SpaceSpec::r_conjugate() const {
    const double rr = r();
    if (rr == 1.0) return kInf;
    if (std::isinf(rr)) return 1.0;
    return rr / (rr - 1.0);
}

double SpaceSpec::level_factor(int j) const {
    const double w = weight ? weight->dyadic(j) : 1.0;
    return std::exp2(j * s) * w;
}

double spectral_mass_beyond(const GridFunction& f, double radius) {
    const Spectrum F = forward_transform(f);
    double total = 0.0, outside = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
        const double m = std::norm(F[i]);
        total += m;
        if (F.grid().frequency_norm(i) > radius) outside += m;
    }
    return total > 0.0 ? std::sqrt(outside / total) : 0.0;
}

void require_band_limited(const GridFunction& f, const ResolutionOfUnity& R) {
    const double radius = std::ldexp(1.0, R.jmax());
    const double leaked = spectral_mass_beyond(f, radius);
    if (leaked > 1e-10)
        throw BandLeakage("relative spectral mass " + std::to_string(leaked) + " above |xi| = " +
                              std::to_string(radius),
                          leaked);
}

LittlewoodPaleyBlocks::LittlewoodPaleyBlocks(const GridFunction& f, const ResolutionOfUnity& R) {
    R.require_fits(f.grid());
    require_band_limited(f, R);
    const Spectrum F = forward_transform(f);
    const Grid& g = f.grid();
    // Coefficients at rounding level are exact zeros; otherwise q < 1 sums would
    // amplify transform noise in blocks that should vanish.
    double peak = 0.0;
    for (const auto& z : F.coefficients()) peak = std::max(peak, std::abs(z));
    const double floor = 1e-13 * peak;
    blocks_.reserve(static_cast<std::size_t>(R.jmax()) + 1);
    std::vector<cplx> c(F.size());
    for (int j = 0; j <= R.jmax(); ++j) {
        for (std::size_t i = 0; i < F.size(); ++i) {
            const double phi = R.phi(j, g.frequency_norm(i));
            c[i] = phi == 0.0 || std::abs(F[i]) <= floor ? cplx{} : phi * F[i];
        }
        blocks_.push_back(inverse_transform(Spectrum(g, c)));
    }
}

std::vector<double> LittlewoodPaleyBlocks::magnitude(int j) const {
    const auto s = block(j).samples();
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = std::abs(s[i]);
    return out;
}

NormResult besov_norm_detail(const GridFunction& f, const SpaceSpec& spec, const ResolutionOfUnity& R) {
    spec.validate();
    require_unweighted(spec, "the Besov norm");
    const LittlewoodPaleyBlocks B(f, R);
    NormResult out;
    for (int j = 0; j <= B.jmax(); ++j) out.blocks.push_back(spec.level_factor(j) * lp_norm(B.block(j), spec.p));
    out.value = lq_combine(out.blocks, spec.q);
    return out;
}

double besov_norm(const GridFunction& f, const SpaceSpec& spec, const ResolutionOfUnity& R) {
    return besov_norm_detail(f, spec, R).value;
}

NormResult triebel_lizorkin_detail(const GridFunction& f, const SpaceSpec& spec, const ResolutionOfUnity& R) {
    spec.validate();
    if (std::isinf(spec.p)) throw InvalidArgument("triebel_lizorkin_norm needs p < inf; use tl_infinity_norm");
    const LittlewoodPaleyBlocks B(f, R);
    const Grid& g = f.grid();
    std::vector<double> pointwise(g.size(), 0.0);
    NormResult out;
    for (int j = 0; j <= B.jmax(); ++j) {
        const double c = spec.level_factor(j);
        const auto mag = B.magnitude(j);
        out.blocks.push_back(c * lp_norm(mag, g, spec.p));
        for (std::size_t i = 0; i < mag.size(); ++i) {
            const double v = c * mag[i];
            if (std::isinf(spec.q))
                pointwise[i] = std::max(pointwise[i], v);
            else
                pointwise[i] += std::pow(v, spec.q);
        }
    }
    if (!std::isinf(spec.q))
        for (double& v : pointwise) v = std::pow(v, 1.0 / spec.q);
    out.value = lp_norm(pointwise, g, spec.p);
    return out;
}

double triebel_lizorkin_norm(const GridFunction& f, const SpaceSpec& spec, const ResolutionOfUnity& R) {
    return triebel_lizorkin_detail(f, spec, R).value;
}

NormResult tl_infinity_detail(const GridFunction& f, const SpaceSpec& spec, const ResolutionOfUnity& R,
                              const DyadicCubeSet& cubes, TlInfinityOptions opts) {
    spec.validate();
    if (std::isinf(spec.q)) throw InvalidArgument("tl_infinity_norm needs q < inf");
    require_same_grid(f.grid(), cubes.grid(), "tl_infinity_norm");
    const LittlewoodPaleyBlocks B(f, R);
    const Grid& g = f.grid();
    const int J = B.jmax();

    NormResult out;
    // suffix[k](x) = sum_{j >= k} c_j^q |phi_j(D) f(x)|^q
    std::vector<std::vector<double>> suffix(static_cast<std::size_t>(J) + 2, std::vector<double>(g.size(), 0.0));
    for (int j = J; j >= 0; --j) {
        const double c = spec.level_factor(j);
        const auto mag = B.magnitude(j);
        out.blocks.push_back(0.0);
        auto& cur = suffix[static_cast<std::size_t>(j)];
        const auto& next = suffix[static_cast<std::size_t>(j) + 1];
        for (std::size_t i = 0; i < g.size(); ++i) cur[i] = next[i] + std::pow(c * mag[i], spec.q);
        out.blocks.back() = c * lp_norm(mag, g, kInf);
    }
    std::reverse(out.blocks.begin(), out.blocks.end());

    out.first_part = lp_norm(B.block(0), kInf);

    double best = 0.0;
    const int k_lo = std::max(0, cubes.coarsest_level());
    const int k_hi = std::min(cubes.finest_level(), J);
    for (int k = k_lo; k <= k_hi; ++k) {
        const int start = opts.include_level_zero_in_cubes ? k : std::max(k, 1);
        if (start > J) continue;
        const auto& field = suffix[static_cast<std::size_t>(start)];
        for (const Cube& q : cubes.cubes(k)) {
            const double m = cubes.mean(field, q);
            if (m > best) {
                best = m;
                out.argmax_cube = q;
            }
        }
    }
    out.second_part = std::pow(best, 1.0 / spec.q);
    out.value = out.first_part + out.second_part;
    return out;
}

double tl_infinity_norm(const GridFunction& f, const SpaceSpec& spec, const ResolutionOfUnity& R,
                        const DyadicCubeSet& cubes, TlInfinityOptions opts) {
    return tl_infinity_detail(f, spec, R, cubes, opts).value;
}

double f_norm(const GridFunction& f, const SpaceSpec& spec, const ResolutionOfUnity& R) {
    if (std::isinf(spec.p)) return tl_infinity_norm(f, spec, R, DyadicCubeSet(f.grid()));
    return triebel_lizorkin_norm(f, spec, R);
}

namespace {

NormResult cube_scan(const GridFunction& f, const DyadicCubeSet& cubes, bool local) {
    require_same_grid(f.grid(), cubes.grid(), "bmo_norm");
    const auto s = f.samples();
    std::vector<double> mag(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) mag[i] = std::abs(s[i]);

    NormResult out;
    double osc_best = 0.0, mean_best = 0.0;
    std::optional<Cube> osc_arg, mean_arg;
    for (int k = cubes.coarsest_level(); k <= cubes.finest_level(); ++k) {
        const bool large = k <= 0;  // side >= 1
        for (const Cube& q : cubes.cubes(k)) {
            if (local && large) {
                const double m = cubes.mean(mag, q);
                if (m > mean_best) {
                    mean_best = m;
                    mean_arg = q;
                }
            } else {
                const double o = cubes.oscillation(s, q);
                if (o > osc_best) {
                    osc_best = o;
                    osc_arg = q;
                }
            }
        }
    }
    out.first_part = osc_best;
    out.second_part = mean_best;
    out.value = osc_best + mean_best;
    out.argmax_cube = mean_best > osc_best ? mean_arg : osc_arg;
    return out;
}

}  // namespace

NormResult bmo_detail(const GridFunction& f, const DyadicCubeSet& cubes) { return cube_scan(f, cubes, true); }
double bmo_norm(const GridFunction& f, const DyadicCubeSet& cubes) { return bmo_detail(f, cubes).value; }

NormResult big_bmo_detail(const GridFunction& f, const DyadicCubeSet& cubes) { return cube_scan(f, cubes, false); }
double big_bmo_norm(const GridFunction& f, const DyadicCubeSet& cubes) { return big_bmo_detail(f, cubes).value; }

NormResult xw_detail(const GridFunction& f, const AdmissibleWeight& w, const DyadicCubeSet& cubes, XwOptions opts) {
    if (opts.levels < 0) throw InvalidArgument("X_w needs a non-negative level range");
    if (!w.is_constant() && !w.non_increasing(opts.levels))
        throw AdmissibilityViolation("X_w needs a non-increasing or constant weight, got " + w.describe());
    NormResult out;
    out.first_part = big_bmo_norm(f, cubes);
    const Spectrum F = forward_transform(f);
    const BumpProfile profile = opts.profile;
    const Multiplier phi = radial([profile](double r) { return ball_cutoff(profile, r); });
    double best = 0.0;
    for (int j = -opts.levels; j <= opts.levels; ++j) {
        const double t = std::ldexp(1.0, -j);
        const double v = lp_norm(inverse_transform(apply_multiplier(phi, t, F)), kInf) / w(t);
        out.blocks.push_back(v);
        if (v > best || !out.argmax_t) {
            best = std::max(best, v);
            out.argmax_t = t;
        }
    }
    out.second_part = best;
    out.value = out.first_part + out.second_part;
    return out;
}

double xw_norm(const GridFunction& f, const AdmissibleWeight& w, const DyadicCubeSet& cubes, XwOptions opts) {
    return xw_detail(f, w, cubes, opts).value;
}

LiftingReport lifting_check(const GridFunction& f, const SpaceSpec& spec, const ResolutionOfUnity& R) {
    spec.validate();
    if (std::isinf(spec.p) && std::isinf(spec.q)) throw InvalidArgument("lifting for p = inf needs q < inf");
    const RegularizedWeight rw = regularize(spec.weight.value_or(AdmissibleWeight::constant()), R);
    LiftingReport out;
    out.weighted_norm = f_norm(f, spec, R);
    out.lifted_norm = f_norm(apply_multiplier(rw.multiplier(), 1.0, f), without_weight(spec), R);
    out.ratio = out.lifted_norm > 0.0 ? out.weighted_norm / out.lifted_norm : 1.0;
    out.equivalence_constant = rw.equivalence_constant();
    return out;
}

PowerLiftingReport lifting_power_check(const GridFunction& f, const SpaceSpec& spec, double lambda,
                                       const ResolutionOfUnity& R) {
    spec.validate();
    if (std::isinf(spec.p) && !(spec.q > 1.0 && std::isfinite(spec.q)))
        throw InvalidArgument("power lifting for p = inf needs 1 < q < inf");
    const AdmissibleWeight w = spec.weight.value_or(AdmissibleWeight::constant());
    const RegularizedWeight rw = regularize(w, R);
    const AdmissibleWeight wl = w.power(lambda);
    const RegularizedWeight u = regularize(wl, R);
    const SpaceSpec plain = without_weight(spec);

    const Multiplier powered = [rw, lambda](const Point& xi) -> cplx { return std::pow(rw(xi), lambda); };
    PowerLiftingReport out;
    out.power_of_regularized = f_norm(apply_multiplier(powered, 1.0, f), plain, R);
    out.regularized_of_power = f_norm(apply_multiplier(u.multiplier(), 1.0, f), plain, R);
    SpaceSpec weighted = spec;
    weighted.weight = wl;
    out.weighted_norm = f_norm(f, weighted, R);
    return out;
}

}  // namespace lpcalc
