#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lpcalc/bilinear.hpp"
#include "lpcalc/norms.hpp"

namespace lpcalc {

/// e^{it|D|^s} f.
GridFunction propagator(double s, double t, const GridFunction& f);

/// (1 + log_+ |xi|)^{-1/2}, cut off smoothly above 2^{jmax-1} (one on |xi| <= 2^{jmax-1},
/// zero on |xi| >= 3 2^{jmax-2}) so iterates stay inside the partition.
std::function<double(double)> log_damping(int jmax);

/// i u_t + |D|^s u = m(D) T_sigma(u, u), u(0) = u0.
struct EvolutionSpec {
    double s = 2.0;
    std::function<double(double)> damping;  ///< m(|xi|); defaults to log_damping(R.jmax())
    BilinearSymbol sigma = builtin_symbol("one");
    GridFunction u0;
    double T = 0.1;
    double tolerance = 1e-10;
    int max_iterations = 50;
    int nodes = 32;          ///< midpoint nodes on [0, T]
    int max_halvings = 6;    ///< retries with T / 2 after divergence
    ResolutionOfUnity R;     ///< for the L^2_{n/2} = F^{n/2}_{2,2} norm

    EvolutionSpec(GridFunction u0_, ResolutionOfUnity R_) : u0(std::move(u0_)), R(std::move(R_)) {}

    /// Checks s > 0, T > 0, the band of u0 and m(xi) <= C (1 + log_+ |xi|)^{-1/2} on the
    /// grid frequencies; returns the measured C.
    double validate() const;
};

struct PicardState {
    int iterations = 0;
    double T = 0.0;              ///< horizon actually solved (after halvings)
    int halvings = 0;
    std::vector<double> times;   ///< t_k = k T / nodes, k = 0..nodes
    std::vector<GridFunction> trajectory;
    std::vector<double> update_norms;          ///< sup_k ||u^{(i+1)}(t_k) - u^{(i)}(t_k)||
    std::vector<double> contraction_factors;   ///< consecutive update ratios
    double residual = 0.0;       ///< sup_k ||u(t_k) - T_{u0}(u)(t_k)||
    bool converged = false;
    double damping_constant = 0.0;
};

/// One application of the Duhamel map on the time lattice: the integral
/// int_0^{t_k} e^{i(t_k - r)|D|^s} N(u(r)) dr by the composite midpoint rule with
/// u at the midpoint taken as the mean of the neighbouring nodes.
std::vector<GridFunction> duhamel_map(const EvolutionSpec& spec, double T, const std::vector<GridFunction>& u);

/// Picard iteration started from the free evolution. Halves T after a divergence
/// (update norms non-decreasing over three consecutive iterations); throws
/// DivergenceError with the measured growth factor once max_halvings is used up.
PicardState picard_solve(const EvolutionSpec& spec);

struct OrderReport {
    std::vector<int> nodes;
    std::vector<GridFunction> finals;  ///< u(T) per lattice
    std::vector<double> differences;   ///< ||u_M(T) - u_{2M}(T)||
    double order = 0.0;                ///< log2 of the last ratio of consecutive differences
};

/// Converged solutions on lattices nodes, 2 nodes, 4 nodes (T fixed; no halving).
OrderReport time_step_order(EvolutionSpec spec, int refinements = 2);

/// v(xi) = 1 + log(1 + |xi|^2).
double log_schrodinger_symbol(const Point& xi);

struct LogSchrodingerReport {
    GridFunction u;
    GridFunction rhs;           ///< T_sigma(f, g)
    double residual = 0.0;      ///< ||v(D) u - rhs||_2 / ||rhs||_2
    double solution_norm = 0.0; ///< ||u||_{F^{n/p, omega}_{p,q}}, omega = (1 + log_+ 1/t)^{1/p}
    double data_norm = 0.0;     ///< ||f|| ||g|| in F^{n/p + m}_{p,q}
    double ratio = 0.0;
};

/// Solves v(D) u = T_sigma(f, g).
LogSchrodingerReport log_schrodinger_solve(const BilinearSymbol& sigma, const GridFunction& f, const GridFunction& g,
                                           const ResolutionOfUnity& R, double p = 2.0, double q = 2.0);

}  // namespace lpcalc
