#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpcalc/norms.hpp"

namespace lpcalc {

/// Seeded family of random real band-limited functions. Member i has bandwidth
/// level J_i = levels[i mod levels.size()]: Gaussian spectral coefficients with
/// amplitude <xi>^{-(s + n/2 + epsilon)} on |xi| < 2^{J_i}, Hermitian so the
/// samples are real, scaled to sup norm one.
struct EnsembleSpec {
    std::uint64_t seed = 42;
    int count = 50;
    std::vector<int> levels = {4, 5, 6, 7};
    double s = 0.5;
    double epsilon = 0.1;
};

class Ensemble {
  public:
    Ensemble(EnsembleSpec spec, Grid grid);
    /// Explicit members with their bandwidth levels; spec() then only records
    /// the distinct levels.
    Ensemble(Grid grid, std::vector<GridFunction> members, std::vector<int> member_levels);

    const EnsembleSpec& spec() const { return spec_; }
    const Grid& grid() const { return grid_; }
    int size() const { return static_cast<int>(members_.size()); }
    int level(int i) const;
    const GridFunction& member(int i) const { return members_.at(static_cast<std::size_t>(i)); }
    /// Top partition level: max J_i + 1, so products of members stay inside the partition.
    int jmax() const;
    ResolutionOfUnity resolution(const BumpProfile& profile = BumpProfile{}) const;

  private:
    EnsembleSpec spec_;
    Grid grid_;
    std::vector<GridFunction> members_;
    std::vector<int> levels_;
};

/// One member of an ensemble; depends only on (seed, index) and the parameters.
GridFunction random_band_limited(const Grid& grid, int level, double s, double epsilon, std::uint64_t seed,
                                 std::uint64_t index);

/// Grid used by the ensemble experiments in one dimension: L = 64 and the
/// smallest power-of-two N whose Nyquist bound admits partition level J + 1.
Grid ensemble_grid(int max_level);

struct RatioSample {
    int member = 0;
    int level = 0;
    double numerator = 0.0;
    double denominator = 0.0;
    double ratio = 0.0;
};

struct RatioReport {
    std::string name;
    std::vector<RatioSample> samples;
    double min = 0.0;
    double max = 0.0;
    double spread = 0.0;       ///< max / min
    double trend_slope = 0.0;  ///< least-squares slope of log ratio against J
    double band = 16.0;
    double trend_tolerance = 0.05;
    bool bounded() const { return samples.empty() || spread <= band; }
    bool no_trend() const { return trend_slope <= trend_tolerance; }
};

/// Sorts by member, drops zero denominators and computes the summary.
RatioReport summarize_ratios(std::string name, std::vector<RatioSample> samples, double band = 16.0,
                             double trend_tolerance = 0.05);
/// Summary over the union of several reports.
RatioReport merge_ratios(std::string name, const std::vector<RatioReport>& parts, double band = 16.0,
                         double trend_tolerance = 0.05);

/// Throws GateViolation unless 0 < p < inf, or p = inf and 0 < q <= 2.
void embedding_gate(double p, double q);
/// Throws GateViolation naming the inequality unless min(1, p, q) > p / (p + 1).
void product_gate(double p, double q);

/// ||f||_{X_w} / ||f||_{F^{n/p}_{p,q}} per member, w = (1 + log_+ 1/t)^{exponent};
/// the exponent defaults to 1/r', r = max(1, p).
RatioReport embedding_ratio(const Ensemble& E, double p, double q, std::optional<double> w_exponent = {});

/// ||fg||_{F^{n/p, 1/w}_{p,q}} / (||f|| ||g||) in F^{n/p}_{p,q}, w = (1 + log_+ 1/t)^{1/r'},
/// over pairs of members of equal level: each member with the next unused one of
/// the same level (i and i + levels.size() for a generated ensemble).
RatioReport product_estimate_ratio(const Ensemble& E, double p, double q);

/// F^{s,w}_{inf,q} norms under the exponential and the alternative resolution.
RatioReport resolution_independence_check(const Ensemble& E, const SpaceSpec& spec);

/// ||f||_{F^{s,w}_{p,q}} / ||w(D) f||_{F^s_{p,q}} per member, w the regularisation of spec.weight.
RatioReport lifting_ratio(const Ensemble& E, const SpaceSpec& spec);

struct EmbeddingParams {
    enum class Kind {
        BesovIntoTlInfinity,  ///< B^{s+n/p}_{p,inf} -> F^s_{inf,q}
        TlIntoBesov,          ///< F^s_{p,q} -> B^{s1}_{p1,q1}
    };
    Kind kind = Kind::BesovIntoTlInfinity;
    double p = 2.0;
    double s = 0.0;
    double q = 2.0;
    double p1 = 4.0;
    double s1 = 0.25;
    double q1 = 2.0;
};

/// Throws GateViolation when the index relations of the embedding do not hold.
void embedding_params_gate(const EmbeddingParams& params, int dim);
/// Target norm / source norm per member.
RatioReport besov_tl_embedding_check(const Ensemble& E, const EmbeddingParams& params);

struct TelescopingReport {
    std::vector<int> levels;
    /// ||phi(2^{-j} D) f||_inf / ((1 + j ln 2)^{1/r'} ||f||_{B^0_{inf,r}})
    std::vector<double> values;
    double besov_norm = 0.0;
    double max = 0.0;
    double trend_slope = 0.0;  ///< log slope over the upper half of the levels
};

TelescopingReport telescoping_growth_check(const GridFunction& f, double r, const ResolutionOfUnity& R);

struct SharpnessProfile {
    double delta = 0.51;
    double gamma = 0.4;
    int kmin = 2;
    int kmax = 9;               ///< radii R = 2^k e, k = kmin..kmax
    std::size_t points = 16384;  ///< grid on [0, 2 pi)
    int jmax = 12;
    int oracle_kmax = 40;       ///< sweep of the scalar quadrature oracle

    void validate() const;
    double exponent() const { return 3.0 - 4.0 * delta - 2.0 * gamma; }
    /// 3 - 4 delta - 2 gamma > 0, i.e. gamma < 3/2 - 2 delta.
    bool divergent() const { return exponent() > 0.0; }
};

/// g_delta(xi) = 1_{|xi| > e} / (|xi| log^delta |xi|) (n = 1).
double sharpness_density(double delta, double xi);

/// Truncated f_delta^R on the grid: spectrum g_delta(xi) on e < |xi| <= R.
GridFunction sharpness_function(const Grid& grid, double delta, double R);

/// Slope of log(dS / d log log R) against log log R, the differences taken
/// between consecutive radii.
double growth_exponent(const std::vector<double>& radii, const std::vector<double>& values);

struct CauchyReport {
    std::vector<double> increments;
    bool decreasing = false;
    double last_over_first = 0.0;
    bool cauchy() const { return decreasing && last_over_first < 0.1; }
};
CauchyReport cauchy_increments(const std::vector<double>& partial_norms);

struct SharpnessReport {
    SharpnessProfile profile;
    double predicted = 0.0;
    std::vector<double> radii;
    /// Scalar oracle: int_{2e <= xi <= R} log^{2-4delta-2gamma} xi / xi, by quadrature.
    std::vector<double> oracle_radii;
    std::vector<double> oracle_values;
    double oracle_exponent = 0.0;
    bool oracle_ok = false;  ///< within 2% of the prediction
    /// ||f_delta^R||_{F^{1/2}_{2,2}}.
    std::vector<double> membership_norms;
    CauchyReport membership;
    /// S(R) = ||(f_delta^R)^2||^2_{F^{1/2,w}_{2,2}}, w = (1 + log_+ 1/t)^{-gamma}.
    std::vector<double> squared_norms;
    double fitted_exponent = 0.0;
    CauchyReport growth_cauchy;  ///< increments of S(R)^{1/2}
    bool growth_ok = false;
    /// min over sampled xi >= 2e of (g * g)(xi) / closed-form lower bound.
    double convolution_bound_ratio = 0.0;
    bool convolution_ok = false;
};

SharpnessReport sharpness_scan(const SharpnessProfile& profile);

/// Scalar quadrature oracle alone (Gauss-Legendre on dyadic pieces).
double sharpness_integral(double exponent, double R);

}  // namespace lpcalc
