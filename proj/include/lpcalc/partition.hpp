#pragma once

#include <vector>

#include "lpcalc/grid.hpp"
#include "lpcalc/spectral.hpp"

namespace lpcalc {

/// Smooth monotone transition eta: R -> [0, 1] with eta = 1 on t <= 0 and
/// eta = 0 on t >= 1.
class BumpProfile {
  public:
    enum class Kind {
        /// g(1-t) / (g(t) + g(1-t)) with g(t) = exp(-1/t).
        Exponential,
        /// 1 - S7(t^2), S7 the degree-7 smoothstep; C^3 at the junctions.
        Smoothstep7,
    };

    explicit BumpProfile(Kind kind = Kind::Exponential) : kind_(kind) {}

    Kind kind() const { return kind_; }
    double operator()(double t) const;

  private:
    Kind kind_;
};

/// Dyadic resolution of unity {phi_j}, j = 0..jmax, built from a radial cutoff
/// phi_0 = eta(2(|xi| - 1)): equal to one on |xi| <= 1 and zero on |xi| >= 3/2.
class ResolutionOfUnity {
  public:
    ResolutionOfUnity(BumpProfile profile, int jmax);

    int jmax() const { return jmax_; }
    const BumpProfile& profile() const { return profile_; }

    double phi0(double r) const;
    /// phi_j(r); j = 0 gives phi_0.
    double phi(int j, double r) const;
    double phi(int j, const Point& xi) const { return phi(j, euclidean_norm(xi)); }
    /// phi_0(2^{-j} r) = sum_{i <= j} phi_i(r).
    double low_pass(int j, double r) const;

    Multiplier block(int j) const;
    Multiplier low_pass_multiplier(int j) const;

    /// True when the top annulus 2^{jmax+1} fits under the grid's Nyquist bound.
    bool fits(const Grid& grid) const;
    /// Throws NyquistViolation naming the smallest admissible N (or largest L).
    void require_fits(const Grid& grid) const;

  private:
    BumpProfile profile_;
    int jmax_;
};

ResolutionOfUnity build_resolution(const BumpProfile& profile, int jmax);
ResolutionOfUnity build_resolution(const BumpProfile& profile, int jmax, const Grid& grid);
/// Same construction with the Smoothstep7 profile.
ResolutionOfUnity build_alternative_resolution(int jmax);
ResolutionOfUnity build_alternative_resolution(int jmax, const Grid& grid);

/// phi_j(D) f. Throws InvalidArgument for j outside [0, jmax].
GridFunction band_project(const ResolutionOfUnity& R, int j, const GridFunction& f);

/// Telescoping family psi_0 = c, psi_l(xi) = c(2^{-l} xi) - c(2^{-l+1} xi) of a
/// radial cutoff c, so that c(2^{-j} xi) = sum_{l <= j} psi_l(xi).
class TelescopingFamily {
  public:
    using Cutoff = double (*)(const BumpProfile&, double);

    TelescopingFamily(BumpProfile profile, Cutoff cutoff) : profile_(profile), cutoff_(cutoff) {}

    double cutoff(double r) const { return cutoff_(profile_, r); }
    double psi(int l, double r) const;

  private:
    BumpProfile profile_;
    Cutoff cutoff_;
};

/// Auxiliary cutoffs of the symbol decomposition and lifting arguments.
///   chi0: one on |xi| <= 2, zero on |xi| >= 3
///   chi : one on 1/2 <= |xi| <= 2, zero outside 1/3 < |xi| < 3
///   ring: one on 1/2 <= |xi| <= 2, zero outside 1/4 < |xi| < 4
class AnnulusCutoffs {
  public:
    explicit AnnulusCutoffs(BumpProfile profile = BumpProfile{}) : profile_(profile) {}

    double chi0(double r) const;
    double chi(double r) const;
    double ring(double r) const;

  private:
    BumpProfile profile_;
};

/// Cutoff used for X_w: chi0(3r/2), supported in |xi| <= 2 and one on |xi| <= 1.
double ball_cutoff(const BumpProfile& profile, double r);

struct PartitionReport {
    int jmax = 0;
    double lattice_step = 0;
    /// max |sum_{j<=J} phi_j - 1| over lattice points with |xi| <= 2^{J-1}.
    double partition_residual = 0;
    /// max |phi_0 + sum_{l<=j} psi_l - phi_0(2^{-j} .)| over lattice and j.
    double telescoping_residual = 0;
    /// Largest value of phi_j found outside its stated support.
    double support_violation = 0;
    /// Largest |phi_0 - 1| on the plateau |xi| <= 1.
    double plateau_violation = 0;
    /// Per derivative order k = 1..4: max over j of 2^{jk} sup |d^k phi_j|, and the
    /// ratio of the largest to the smallest of these over j >= 1.
    std::vector<double> derivative_bound;
    std::vector<double> derivative_spread;
};

/// Residuals of every ResolutionOfUnity invariant on the radial lattice
/// {m * step : 0 <= m * step <= 2^{jmax+1}}.
PartitionReport check_partition(const ResolutionOfUnity& R, double lattice_step);

}  // namespace lpcalc
