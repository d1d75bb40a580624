#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "lpcalc/partition.hpp"

namespace lpcalc {

using SymbolFunction = std::function<cplx(const Point& x, const Point& xi, const Point& eta)>;

/// Bilinear symbol sigma(x, xi, eta) of order m. Copies share one cache of the
/// sampled frequency table, keyed by grid, used by the x-independent fast path.
class BilinearSymbol {
  public:
    BilinearSymbol(std::string name, SymbolFunction fn, double order, bool x_independent);

    cplx operator()(const Point& x, const Point& xi, const Point& eta) const { return fn_(x, xi, eta); }
    const std::string& name() const { return name_; }
    double order() const { return order_; }
    bool x_independent() const { return x_independent_; }

    /// sigma(0, xi_a, xi_b) over all pairs of grid frequencies, a-major.
    /// Throws InvalidArgument on a non-finite value.
    std::shared_ptr<const std::vector<cplx>> table(const Grid& grid) const;

  private:
    struct Cache {
        std::mutex mutex;
        std::map<std::tuple<int, std::size_t, double>, std::shared_ptr<const std::vector<cplx>>> tables;
    };

    std::string name_;
    SymbolFunction fn_;
    double order_;
    bool x_independent_;
    std::shared_ptr<Cache> cache_;
};

/// Built-in symbols:
///   zero            0                                      (m = 0)
///   one             1                                      (m = 0)
///   bracket         (1 + |xi|^2 + |eta|^2)^{1/2}           (m = 1)
///   inverse-bracket (1 + |xi|^2 + |eta|^2)^{-1/2}          (m = -1)
///   modulated       (2 + cos(x_1/4)) (1 + |xi|^2) / (1 + |xi|^2 + |eta|^2)  (m = 0)
///   chirp           exp(i |xi|^2), declared m = 0 (not a symbol of that class)
BilinearSymbol builtin_symbol(const std::string& name);
std::vector<std::string> builtin_symbol_names();

/// Separable symbol a(xi) b(eta).
BilinearSymbol separable_symbol(std::string name, Multiplier a, Multiplier b, double order);

/// T_sigma(f, g)(x) = L^{-2n} sum_{xi, eta} sigma(x, xi, eta) F(xi) G(eta) e^{ix(xi + eta)}.
/// Uses the frequency-convolution path for x-independent symbols and the direct
/// sum otherwise.
GridFunction apply_bilinear(const BilinearSymbol& sigma, const GridFunction& f, const GridFunction& g);
/// Reference double sum, evaluated independently at every grid point.
GridFunction apply_bilinear_direct(const BilinearSymbol& sigma, const GridFunction& f, const GridFunction& g);
/// Fast path for x-independent symbols: H_k = L^{-n} sum_{a + b = k mod N} sigma F_a G_b,
/// then the inverse transform.
GridFunction apply_bilinear_fast(const BilinearSymbol& sigma, const GridFunction& f, const GridFunction& g);

struct BsLattice {
    double extent = 16.0;              ///< |xi|, |eta| <= extent
    int points = 17;                   ///< lattice points per frequency axis
    std::vector<double> x = {0.0, 1.3, 2.9, 4.7, 7.1};
    double step = 0.05;                ///< finite-difference step in every variable
};

struct BsSeminormReport {
    double value = 0.0;
    /// Largest normalised value among terms with alpha + beta + gamma > 0.
    double difference_max = 0.0;
    /// values[alpha][beta][gamma], each in 0..N.
    std::vector<double> terms;
    int max_order = 0;
    double term(int a, int b, int c) const {
        const int n = max_order + 1;
        return terms[static_cast<std::size_t>((a * n + b) * n + c)];
    }
};

/// Finite-difference surrogate of ||sigma||_{BS^m_{1,1;N}} (n = 1):
/// max over alpha, beta, gamma <= N of sup (1+|xi|+|eta|)^{-(m+alpha-beta-gamma)}
/// |d_x^alpha d_xi^beta d_eta^gamma sigma| on the lattice.
BsSeminormReport bs_seminorm(const BilinearSymbol& sigma, int N, const BsLattice& lattice = {});

/// sigma = sum_j sigma0_j + sum_k sigma1_k with
///   sigma0_j = sigma phi_j(xi) phi_0(2^{-j} eta),      0 <= j <= jmax
///   sigma1_k = sigma phi_0(2^{1-k} xi) phi_k(eta),     1 <= k <= jmax
class SymbolDecomposition {
  public:
    SymbolDecomposition(BilinearSymbol sigma, ResolutionOfUnity R) : sigma_(std::move(sigma)), R_(std::move(R)) {}

    int jmax() const { return R_.jmax(); }
    const BilinearSymbol& symbol() const { return sigma_; }
    const ResolutionOfUnity& resolution() const { return R_; }

    cplx first(int j, const Point& x, const Point& xi, const Point& eta) const;
    cplx second(int k, const Point& x, const Point& xi, const Point& eta) const;
    cplx reconstruct(const Point& x, const Point& xi, const Point& eta) const;

    /// max |reconstruct - sigma| over pairs of grid frequencies with
    /// |xi|, |eta| <= 2^{jmax-1}, at the given points x.
    double reconstruction_residual(const Grid& grid, const std::vector<Point>& xs = {Point{}}) const;

  private:
    BilinearSymbol sigma_;
    ResolutionOfUnity R_;
};

SymbolDecomposition split_paraproduct(const BilinearSymbol& sigma, const ResolutionOfUnity& R);

enum class PieceKind {
    First,   ///< sigma0_j: window chi(xi) chi0(eta) (chi0 for both when j = 0)
    Second,  ///< sigma1_k: window chi0(xi) chi(eta)
};

struct SeriesOptions {
    int samples = 1024;        ///< M per axis on [-pi, pi)
    double tolerance = 1e-6;   ///< largest admissible tail
    bool check_tail = true;    ///< throw SeriesTailError when the tail exceeds tolerance
    Point x{};                 ///< evaluation point of x-dependent symbols
    BumpProfile profile{};
};

/// Fourier coefficients c_{j,k,l} = (2pi)^{-2} int sigma(x, 2^j xi, 2^j eta) W(xi, eta)
/// e^{-i(k xi + l eta)}, |k|, |l| <= kmax (n = 1).
class ElementarySymbolSeries {
  public:
    ElementarySymbolSeries(PieceKind kind, int level, int kmax, std::vector<cplx> coefficients, double tail,
                           std::vector<double> row_envelope, std::vector<double> column_envelope);

    PieceKind kind() const { return kind_; }
    int level() const { return level_; }
    int kmax() const { return kmax_; }
    cplx coefficient(int k, int l) const;
    /// sum of |c| outside the truncation box, over all sampled coefficients
    double tail() const { return tail_; }
    /// max_l |c_{k,l}| and max_k |c_{k,l}| for |k|, |l| < M/2
    const std::vector<double>& row_envelope() const { return row_env_; }
    const std::vector<double>& column_envelope() const { return col_env_; }

    /// sum_{|k|,|l| <= kmax} c e^{i(k 2^{-j} xi + l 2^{-j} eta)} times the piece's
    /// partition factors, i.e. the truncated expansion of the piece.
    cplx evaluate(const ResolutionOfUnity& R, const Point& xi, const Point& eta) const;

    /// max_{k,l} 2^{-jm} (1+|k|)^a (1+|l|)^b |c_{j,k,l}|.
    double normalized_max(double order, double a, double b) const;

  private:
    PieceKind kind_;
    int level_;
    int kmax_;
    std::vector<cplx> coeffs_;
    double tail_;
    std::vector<double> row_env_;
    std::vector<double> col_env_;
};

ElementarySymbolSeries fourier_coefficients(const BilinearSymbol& sigma, PieceKind kind, int level, int kmax,
                                            const SeriesOptions& opts = {});

/// Decay exponent of |c| in k (rows) and l (columns): minus the least-squares
/// slope of log(running max envelope) against log(1+|k|) over kmax/2 <= |k| <= kmax,
/// ignoring values below 1e-14 of the peak.
std::pair<double, double> decay_exponents(const ElementarySymbolSeries& s, int kmax);

/// Least-squares slope of log(values) against the index; used as a trend statistic.
double log_slope(const std::vector<double>& xs, const std::vector<double>& values);

struct CoefficientTrend {
    std::vector<double> levels;
    std::vector<double> values;  ///< normalized_max per level
    double slope = 0.0;          ///< log_slope over the upper half of the levels
};

/// normalized_max(m, a, b) for levels 1..jmax of one piece kind; the trend is
/// measured on levels ceil(jmax/2)..jmax, past the pre-asymptotic range.
CoefficientTrend coefficient_trend(const BilinearSymbol& sigma, PieceKind kind, int jmax, int kmax, double a = 4.0,
                                   double b = 4.0, SeriesOptions opts = {});

struct ElementaryTerm {
    int level = 0;
    std::function<cplx(const Point&)> amplitude;  ///< m_j(x)
    Multiplier first;                             ///< psi_j(xi)
    Multiplier second;                            ///< phi_j(eta)
};

/// sum_j m_j(x) psi_j(xi) phi_j(eta). The annulus condition (supp in |xi| ~ 2^j
/// for j >= 1) applies to the first factor, or to the second when `swapped`.
struct ElementaryFamily {
    std::vector<ElementaryTerm> terms;
    bool swapped = false;
    double support_slack = 4.0;
};

/// Throws SupportViolation naming the term and frequency where a factor is
/// nonzero outside its allowed region (on the grid's frequencies).
void check_support(const ElementaryFamily& family, const Grid& grid);

/// sum_j m_j(x) (psi_j(D) f)(x) (phi_j(D) g)(x), after check_support.
GridFunction apply_elementary(const ElementaryFamily& family, const GridFunction& f, const GridFunction& g);
GridFunction apply_elementary(const std::vector<ElementaryFamily>& families, const GridFunction& f,
                              const GridFunction& g);

/// Families of sigma = 1 split along the partition: phi_j (x) phi_0(2^{-j} .) and
/// phi_0(2^{1-k} .) (x) phi_k, all amplitudes one.
std::vector<ElementaryFamily> paraproduct_families(const ResolutionOfUnity& R);

/// T_sigma(f, g) assembled from the truncated Fourier series of every piece of an
/// x-independent symbol (tails are not checked here; see fourier_coefficients).
GridFunction apply_series(const BilinearSymbol& sigma, const ResolutionOfUnity& R, int kmax,
                          const GridFunction& f, const GridFunction& g, const SeriesOptions& opts = {});

}  // namespace lpcalc
