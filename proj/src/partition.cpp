#include "lpcalc/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lpcalc/errors.hpp"
#include "lpcalc/finite_difference.hpp"

namespace lpcalc {

namespace {

double mollifier(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double smoothstep7(double t) {
    const double t4 = t * t * t * t;
    return t4 * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)));
}

}  // namespace

double BumpProfile::operator()(double t) const {
    if (t <= 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    switch (kind_) {
        case Kind::Exponential: {
            const double a = mollifier(1.0 - t);
            return a / (mollifier(t) + a);
        }
        case Kind::Smoothstep7:
            return 1.0 - smoothstep7(t * t);
    }
    return 0.0;
}

ResolutionOfUnity::ResolutionOfUnity(BumpProfile profile, int jmax) : profile_(profile), jmax_(jmax) {
    if (jmax < 2) throw InvalidArgument("resolution of unity needs jmax >= 2");
    if (jmax > 40) throw InvalidArgument("jmax too large");
}

double ResolutionOfUnity::phi0(double r) const { return profile_(2.0 * (r - 1.0)); }

double ResolutionOfUnity::phi(int j, double r) const {
    if (j < 0) throw InvalidArgument("negative dyadic level");
    if (j == 0) return phi0(r);
    const double scaled = std::ldexp(r, -j);
    return phi0(scaled) - phi0(2.0 * scaled);
}

double ResolutionOfUnity::low_pass(int j, double r) const { return phi0(std::ldexp(r, -j)); }

Multiplier ResolutionOfUnity::block(int j) const {
    if (j < 0 || j > jmax_)
        throw InvalidArgument("dyadic level " + std::to_string(j) + " outside [0, " +
                              std::to_string(jmax_) + "]");
    return [self = *this, j](const Point& xi) -> cplx { return self.phi(j, euclidean_norm(xi)); };
}

Multiplier ResolutionOfUnity::low_pass_multiplier(int j) const {
    return [self = *this, j](const Point& xi) -> cplx { return self.low_pass(j, euclidean_norm(xi)); };
}

bool ResolutionOfUnity::fits(const Grid& grid) const {
    return std::ldexp(1.0, jmax_ + 1) <= grid.nyquist();
}

void ResolutionOfUnity::require_fits(const Grid& grid) const {
    if (fits(grid)) return;
    const double top = std::ldexp(1.0, jmax_ + 1);
    // pi N / L >= top  <=>  N >= top L / pi
    std::size_t n_req = 8;
    while (std::numbers::pi * static_cast<double>(n_req) / grid.period() < top) n_req *= 2;
    std::ostringstream msg;
    msg << "top annulus 2^" << (jmax_ + 1) << " = " << top << " exceeds the Nyquist bound "
        << grid.nyquist() << "; need N >= " << n_req << " or L <= "
        << std::numbers::pi * static_cast<double>(grid.points_per_axis()) / top;
    throw NyquistViolation(msg.str());
}

ResolutionOfUnity build_resolution(const BumpProfile& profile, int jmax) {
    return ResolutionOfUnity(profile, jmax);
}

ResolutionOfUnity build_resolution(const BumpProfile& profile, int jmax, const Grid& grid) {
    ResolutionOfUnity R(profile, jmax);
    R.require_fits(grid);
    return R;
}

ResolutionOfUnity build_alternative_resolution(int jmax) {
    return ResolutionOfUnity(BumpProfile(BumpProfile::Kind::Smoothstep7), jmax);
}

ResolutionOfUnity build_alternative_resolution(int jmax, const Grid& grid) {
    return build_resolution(BumpProfile(BumpProfile::Kind::Smoothstep7), jmax, grid);
}

GridFunction band_project(const ResolutionOfUnity& R, int j, const GridFunction& f) {
    return apply_multiplier(R.block(j), 1.0, f);
}

double TelescopingFamily::psi(int l, double r) const {
    if (l < 0) throw InvalidArgument("negative telescoping index");
    if (l == 0) return cutoff(r);
    return cutoff(std::ldexp(r, -l)) - cutoff(std::ldexp(r, -l + 1));
}

double AnnulusCutoffs::chi0(double r) const { return profile_(r - 2.0); }

double AnnulusCutoffs::chi(double r) const {
    return profile_(6.0 * (0.5 - r)) * profile_(r - 2.0);
}

double AnnulusCutoffs::ring(double r) const {
    return profile_(4.0 * (0.5 - r)) * profile_(0.5 * (r - 2.0));
}

double ball_cutoff(const BumpProfile& profile, double r) { return AnnulusCutoffs(profile).chi0(1.5 * r); }

PartitionReport check_partition(const ResolutionOfUnity& R, double step) {
    if (!(step > 0.0)) throw InvalidArgument("lattice step must be positive");
    PartitionReport rep;
    rep.jmax = R.jmax();
    rep.lattice_step = step;
    const int J = R.jmax();
    const double top = std::ldexp(1.0, J + 1);
    const double ident_radius = std::ldexp(1.0, J - 1);
    TelescopingFamily tele(R.profile(), [](const BumpProfile& p, double r) {
        return ResolutionOfUnity(p, 2).phi0(r);
    });

    for (long m = 0; static_cast<double>(m) * step <= top; ++m) {
        const double r = static_cast<double>(m) * step;
        if (r <= ident_radius) {
            double sum = 0.0;
            for (int j = 0; j <= J; ++j) sum += R.phi(j, r);
            rep.partition_residual = std::max(rep.partition_residual, std::abs(sum - 1.0));
        }
        double running = tele.psi(0, r);
        for (int j = 1; j <= J; ++j) {
            running += tele.psi(j, r);
            rep.telescoping_residual = std::max(rep.telescoping_residual, std::abs(running - R.low_pass(j, r)));
        }
        if (r <= 1.0) rep.plateau_violation = std::max(rep.plateau_violation, std::abs(R.phi0(r) - 1.0));
        if (r >= 1.5) rep.support_violation = std::max(rep.support_violation, std::abs(R.phi0(r)));
        for (int j = 1; j <= J; ++j) {
            const bool outside = r < std::ldexp(1.0, j - 1) || r > std::ldexp(1.0, j + 1);
            if (outside) rep.support_violation = std::max(rep.support_violation, std::abs(R.phi(j, r)));
        }
    }

    // Derivative decay: with h_j = 2^j h_0 the scaled differences of phi_j are those
    // of phi_1 up to rounding, so 2^{jk} sup|d^k phi_j| should not depend on j.
    const double h0 = 1.0 / 64.0;
    for (int k = 1; k <= 4; ++k) {
        double bound = 0.0, lo = kInf, hi = 0.0;
        for (int j = 0; j <= J; ++j) {
            const double hj = std::ldexp(h0, std::max(j, 0));
            const double lo_r = j == 0 ? 0.0 : std::ldexp(1.0, j - 1);
            const double hi_r = std::ldexp(1.0, j + 1);
            double sup = 0.0;
            for (long m = 0; lo_r + static_cast<double>(m) * hj <= hi_r; ++m) {
                const double r = lo_r + static_cast<double>(m) * hj;
                const double d = fd::derivative([&](double x) { return R.phi(j, std::abs(x)); }, r, k, hj);
                sup = std::max(sup, std::abs(d));
            }
            const double scaled = std::ldexp(sup, j * k);
            bound = std::max(bound, scaled);
            if (j >= 1) {
                lo = std::min(lo, scaled);
                hi = std::max(hi, scaled);
            }
        }
        rep.derivative_bound.push_back(bound);
        rep.derivative_spread.push_back(hi / lo);
    }
    return rep;
}

}  // namespace lpcalc
