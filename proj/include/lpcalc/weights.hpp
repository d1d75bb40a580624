#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lpcalc/partition.hpp"

namespace lpcalc {

/// log_+ x = max(0, ln x).
inline double log_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

/// Monotone weight w on (0, 1], extended by w(t) = w(1) for t >= 1.
///
/// Either the prototype (1 + log_+ 1/t)^lambda (1 + log(1 + log_+ 1/t))^mu with
/// lambda * mu >= 0, or a table of values on the dyadic nodes t = 2^{-j},
/// j = 0..J, interpolated geometrically in between. Any weight can be raised to a
/// real power.
class AdmissibleWeight {
  public:
    static AdmissibleWeight constant(double value = 1.0);
    static AdmissibleWeight prototype(double lambda, double mu = 0.0);
    static AdmissibleWeight table(std::vector<double> dyadic_values);

    /// w(t); throws InvalidArgument for t <= 0 or below the last table node.
    double operator()(double t) const;
    /// w(2^{-j}).
    double dyadic(int j) const;

    AdmissibleWeight power(double exponent) const;

    bool is_constant() const;
    /// Monotone non-increasing on the dyadic nodes 0..levels.
    bool non_increasing(int levels) const;
    bool monotone(int levels) const;

    double lambda() const { return lambda_; }
    double mu() const { return mu_; }
    double exponent() const { return exponent_; }
    std::string describe() const;

  private:
    enum class Kind { Prototype, Table };
    AdmissibleWeight(Kind kind, double lambda, double mu, std::vector<double> table, double exponent)
        : kind_(kind), lambda_(lambda), mu_(mu), table_(std::move(table)), exponent_(exponent) {}
    double base(double t) const;

    Kind kind_;
    double lambda_ = 0.0;
    double mu_ = 0.0;
    std::vector<double> table_;
    double exponent_ = 1.0;
};

/// Alias kept for call sites that read better as a verb.
inline double eval_weight(const AdmissibleWeight& w, double t) { return w(t); }

/// Extremal ratios c = min_j, d = max_j of w(2^{-2j}) / w(2^{-j}) for 1 <= j <= J.
struct AdmissibilityReport {
    double c = 0;
    double d = 0;
    std::vector<double> ratios;
    bool admissible = false;
    std::string violation;
};
AdmissibilityReport check_admissible(const AdmissibleWeight& w, int levels);

/// Smallest b on the quarter-integer grid [0, 4] for which
/// C1 (1+j-k)^{-b} <= w(2^{-j}) / w(2^{-k}) <= C2 (1+j-k)^b holds for all
/// 0 <= k <= j <= J with C1 >= 1/band and C2 <= band.
struct ComparisonBound {
    double c1 = 0;
    double c2 = 0;
    double b = 0;
    bool found = false;
};
ComparisonBound comp_weights_bound(const AdmissibleWeight& w, int levels, double band = 2.0);

/// Two-sided bound [d1, d2] on w(t)/w(s) over dyadic nodes with t/s in [1/4, 4].
std::pair<double, double> comparable_values_bounds(const AdmissibleWeight& w, int levels);

/// w^lambda, re-checked for admissibility over `levels` dyadic nodes.
AdmissibleWeight power_weight(const AdmissibleWeight& w, double lambda, int levels = 32);

/// Smooth multiplier sum_{j <= jmax} w(2^{-j}) phi_j(xi), continued by
/// w(2^{-jmax}) (1 - phi_0(2^{-jmax} xi)) beyond the top annulus.
class RegularizedWeight {
  public:
    RegularizedWeight(AdmissibleWeight w, ResolutionOfUnity R);

    double operator()(double r) const;
    double operator()(const Point& xi) const { return (*this)(euclidean_norm(xi)); }
    Multiplier multiplier() const;
    Multiplier reciprocal_multiplier() const;

    const AdmissibleWeight& weight() const { return w_; }
    const ResolutionOfUnity& resolution() const { return R_; }
    /// w(1/<xi>) for |xi| = r.
    double reference(double r) const;
    /// C such that value / reference lies in [1/C, C] for |xi| <= 2^{jmax}.
    double equivalence_constant() const { return equivalence_; }

  private:
    AdmissibleWeight w_;
    ResolutionOfUnity R_;
    std::vector<double> nodes_;
    double equivalence_ = 1.0;
};

RegularizedWeight regularize(const AdmissibleWeight& w, const ResolutionOfUnity& R);

/// sup over the lattice {m h : |m h| + 3h <= extent} of
/// |d^alpha a(xi)| <xi>^alpha / envelope(xi), alpha = 0..K (1-D, fourth-order
/// central differences at spacing h).
std::vector<double> symbol_seminorms(const std::function<double(double)>& a,
                                     const std::function<double(double)>& envelope, int max_order,
                                     double extent, double h);

struct SymbolDecayReport {
    std::vector<std::size_t> points;          ///< resolution sweep
    std::vector<std::vector<double>> values;  ///< [sweep][alpha]
    bool bounded = false;
};

/// Bounds of the regularised weight (or its reciprocal) against
/// w(1/<xi>)^{+-1} <xi>^{-alpha}, repeated over a sweep of grids with period L.
SymbolDecayReport check_symbol_decay(const AdmissibleWeight& w, bool reciprocal, int max_order,
                                     const std::vector<std::size_t>& points, double period,
                                     const BumpProfile& profile = BumpProfile{});

/// sup <xi>^alpha |d^alpha a(xi)| for alpha = 0..K over |xi| <= extent.
std::vector<double> zero_order_symbol_check(const std::function<double(double)>& a, int max_order,
                                            double extent, double h);

}  // namespace lpcalc
