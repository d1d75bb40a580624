#pragma once

#include <optional>
#include <vector>

#include "lpcalc/cubes.hpp"
#include "lpcalc/weights.hpp"

namespace lpcalc {

/// Smoothness s, integrability p, summability q (p, q in (0, inf]) and an
/// optional admissible weight (absent means w = 1).
struct SpaceSpec {
    double s = 0.0;
    double p = 2.0;
    double q = 2.0;
    std::optional<AdmissibleWeight> weight;

    void validate() const;
    /// n (1/min(1, p, q) - 1).
    double tau(int dim) const;
    /// max(1, p).
    double r() const;
    /// Conjugate of r; infinity when r = 1.
    double r_conjugate() const;
    /// 2^{js} w(2^{-j}).
    double level_factor(int j) const;
};

/// phi_j(D) f for j = 0..jmax, after checking the partition fits the grid and f
/// has no spectral mass beyond 2^{jmax} (where the truncated partition sums to one).
class LittlewoodPaleyBlocks {
  public:
    LittlewoodPaleyBlocks(const GridFunction& f, const ResolutionOfUnity& R);

    int jmax() const { return static_cast<int>(blocks_.size()) - 1; }
    const GridFunction& block(int j) const { return blocks_.at(static_cast<std::size_t>(j)); }
    std::vector<double> magnitude(int j) const;

  private:
    std::vector<GridFunction> blocks_;
};

/// Relative l2 spectral mass of f beyond |xi| > radius.
double spectral_mass_beyond(const GridFunction& f, double radius);
void require_band_limited(const GridFunction& f, const ResolutionOfUnity& R);

struct NormResult {
    double value = 0.0;
    /// Per-level contribution (2^{js} w(2^{-j}) ||phi_j(D) f||_p for the
    /// Besov/Triebel-Lizorkin family).
    std::vector<double> blocks;
    /// Cube attaining the supremum, for cube-based norms.
    std::optional<Cube> argmax_cube;
    /// Dyadic t attaining the supremum in X_w.
    std::optional<double> argmax_t;
    /// BMO part of X_w, or the phi_0 sup part of F_{inf, q}.
    double first_part = 0.0;
    double second_part = 0.0;
};

NormResult besov_norm_detail(const GridFunction& f, const SpaceSpec& spec, const ResolutionOfUnity& R);
double besov_norm(const GridFunction& f, const SpaceSpec& spec, const ResolutionOfUnity& R);

NormResult triebel_lizorkin_detail(const GridFunction& f, const SpaceSpec& spec, const ResolutionOfUnity& R);
double triebel_lizorkin_norm(const GridFunction& f, const SpaceSpec& spec, const ResolutionOfUnity& R);

struct TlInfinityOptions {
    /// Start the cube sum at j = -log2 l(Q) also for l(Q) = 1, i.e. include the
    /// j = 0 block there. Off by default: the cube part then only sees j >= 1,
    /// and a constant has norm |c|.
    bool include_level_zero_in_cubes = false;
};

NormResult tl_infinity_detail(const GridFunction& f, const SpaceSpec& spec, const ResolutionOfUnity& R,
                              const DyadicCubeSet& cubes, TlInfinityOptions opts = {});
double tl_infinity_norm(const GridFunction& f, const SpaceSpec& spec, const ResolutionOfUnity& R,
                        const DyadicCubeSet& cubes, TlInfinityOptions opts = {});

/// Triebel-Lizorkin norm for any p: F_{p,q} for p < inf, the cube form for p = inf.
double f_norm(const GridFunction& f, const SpaceSpec& spec, const ResolutionOfUnity& R);

/// sup_{l(Q) < 1} mean oscillation + sup_{l(Q) >= 1} mean |f|.
NormResult bmo_detail(const GridFunction& f, const DyadicCubeSet& cubes);
double bmo_norm(const GridFunction& f, const DyadicCubeSet& cubes);
/// sup over all cubes of the mean oscillation.
NormResult big_bmo_detail(const GridFunction& f, const DyadicCubeSet& cubes);
double big_bmo_norm(const GridFunction& f, const DyadicCubeSet& cubes);

struct XwOptions {
    BumpProfile profile{};
    /// t ranges over 2^{-j}, -levels <= j <= levels.
    int levels = 8;
};

/// BMO(f) + max_t ||phi(tD) f||_inf / w(t), phi the X_w ball cutoff. Throws
/// AdmissibilityViolation unless w is non-increasing or constant.
NormResult xw_detail(const GridFunction& f, const AdmissibleWeight& w, const DyadicCubeSet& cubes,
                     XwOptions opts = {});
double xw_norm(const GridFunction& f, const AdmissibleWeight& w, const DyadicCubeSet& cubes, XwOptions opts = {});

struct LiftingReport {
    double weighted_norm = 0.0;   ///< ||f||_{F^{s,w}_{p,q}}
    double lifted_norm = 0.0;     ///< ||w(D) f||_{F^s_{p,q}}
    double ratio = 0.0;           ///< weighted / lifted
    double equivalence_constant = 1.0;
};

/// Compares ||f||_{F^{s,w}_{p,q}} with ||w(D) f||_{F^s_{p,q}}, w the
/// regularisation of spec.weight. For p = inf requires q < inf.
LiftingReport lifting_check(const GridFunction& f, const SpaceSpec& spec, const ResolutionOfUnity& R);

struct PowerLiftingReport {
    double power_of_regularized = 0.0;   ///< ||w^lambda(D) f||_{F^s}
    double regularized_of_power = 0.0;   ///< ||u(D) f||_{F^s}, u the regularisation of w^lambda
    double weighted_norm = 0.0;          ///< ||f||_{F^{s, w^lambda}}
};

/// Three-way comparison for the power lambda of spec.weight. For p = inf
/// requires q > 1.
PowerLiftingReport lifting_power_check(const GridFunction& f, const SpaceSpec& spec, double lambda,
                                       const ResolutionOfUnity& R);

}  // namespace lpcalc
