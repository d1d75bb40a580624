#include "lpcalc/bilinear.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lpcalc/errors.hpp"
#include "lpcalc/finite_difference.hpp"
#include "lpcalc/parallel.hpp"

namespace lpcalc {

namespace {

constexpr double kPi = std::numbers::pi;
// Largest sampled table kept in the cache (entries).
constexpr std::size_t kTableLimit = std::size_t{1} << 22;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double norm2(const Point& p) { return p[0] * p[0] + p[1] * p[1]; }

// Indices of coefficients above a tiny fraction of the peak.
std::vector<std::size_t> support_of(const Spectrum& F) {
    double peak = 0.0;
    for (const auto& z : F.coefficients()) peak = std::max(peak, std::abs(z));
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < F.size(); ++i)
        if (std::abs(F[i]) > 1e-14 * peak) out.push_back(i);
    return out;
}

std::size_t index_sum(const Grid& g, std::size_t a, std::size_t b) {
    const std::size_t n = g.points_per_axis();
    if (g.dim() == 1) return (a + b) % n;
    const auto ia = g.unflatten(a), ib = g.unflatten(b);
    return g.flatten((ia[0] + ib[0]) % n, (ia[1] + ib[1]) % n);
}

void require_finite(cplx v, const Point& xi, const Point& eta) {
    if (!finite(v)) {
        std::ostringstream msg;
        msg << "symbol is not finite at xi = (" << xi[0] << ", " << xi[1] << "), eta = (" << eta[0] << ", "
            << eta[1] << ")";
        throw InvalidArgument(msg.str());
    }
}

}  // namespace

BilinearSymbol::BilinearSymbol(std::string name, SymbolFunction fn, double order, bool x_independent)
    : name_(std::move(name)), fn_(std::move(fn)), order_(order), x_independent_(x_independent),
      cache_(std::make_shared<Cache>()) {
    if (!fn_) throw InvalidArgument("symbol evaluator is empty");
}

std::shared_ptr<const std::vector<cplx>> BilinearSymbol::table(const Grid& grid) const {
    const auto key = std::make_tuple(grid.dim(), grid.points_per_axis(), grid.period());
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->tables.find(key); it != cache_->tables.end()) return it->second;
    const std::size_t n = grid.size();
    if (n * n > kTableLimit) return nullptr;
    auto t = std::make_shared<std::vector<cplx>>(n * n);
    const Point origin{};
    for (std::size_t a = 0; a < n; ++a) {
        const Point xi = grid.frequency(a);
        for (std::size_t b = 0; b < n; ++b) {
            const Point eta = grid.frequency(b);
            const cplx v = fn_(origin, xi, eta);
            require_finite(v, xi, eta);
            (*t)[a * n + b] = v;
        }
    }
    cache_->tables.emplace(key, t);
    return t;
}

BilinearSymbol builtin_symbol(const std::string& name) {
    if (name == "zero")
        return BilinearSymbol(name, [](const Point&, const Point&, const Point&) { return cplx{}; }, 0.0, true);
    if (name == "one")
        return BilinearSymbol(name, [](const Point&, const Point&, const Point&) { return cplx(1.0); }, 0.0, true);
    if (name == "bracket")
        return BilinearSymbol(
            name, [](const Point&, const Point& xi, const Point& eta) { return cplx(std::sqrt(1.0 + norm2(xi) + norm2(eta))); },
            1.0, true);
    if (name == "inverse-bracket")
        return BilinearSymbol(
            name,
            [](const Point&, const Point& xi, const Point& eta) { return cplx(1.0 / std::sqrt(1.0 + norm2(xi) + norm2(eta))); },
            -1.0, true);
    if (name == "modulated")
        return BilinearSymbol(
            name,
            [](const Point& x, const Point& xi, const Point& eta) {
                return cplx((2.0 + std::cos(0.25 * x[0])) * (1.0 + norm2(xi)) / (1.0 + norm2(xi) + norm2(eta)));
            },
            0.0, false);
    if (name == "chirp")
        return BilinearSymbol(
            name, [](const Point&, const Point& xi, const Point&) { return std::polar(1.0, norm2(xi)); }, 0.0, true);
    throw InvalidArgument("unknown builtin symbol '" + name + "'");
}

std::vector<std::string> builtin_symbol_names() {
    return {"zero", "one", "bracket", "inverse-bracket", "modulated", "chirp"};
}

BilinearSymbol separable_symbol(std::string name, Multiplier a, Multiplier b, double order) {
    return BilinearSymbol(
        std::move(name), [a = std::move(a), b = std::move(b)](const Point&, const Point& xi, const Point& eta) {
            return a(xi) * b(eta);
        },
        order, true);
}

GridFunction apply_bilinear_fast(const BilinearSymbol& sigma, const GridFunction& f, const GridFunction& g) {
    require_same_grid(f.grid(), g.grid(), "apply_bilinear");
    if (!sigma.x_independent()) throw InvalidArgument("the fast bilinear path needs an x-independent symbol");
    const Grid& grid = f.grid();
    const Spectrum F = forward_transform(f), G = forward_transform(g);
    const auto A = support_of(F), B = support_of(G);
    const auto table = sigma.table(grid);
    const std::size_t n = grid.size();
    std::vector<cplx> H(n);
    const Point origin{};
    for (std::size_t a : A) {
        const Point xi = grid.frequency(a);
        for (std::size_t b : B) {
            cplx s;
            if (table) {
                s = (*table)[a * n + b];
            } else {
                const Point eta = grid.frequency(b);
                s = sigma(origin, xi, eta);
                require_finite(s, xi, eta);
            }
            H[index_sum(grid, a, b)] += s * F[a] * G[b];
        }
    }
    const double scale = 1.0 / grid.volume();
    for (auto& z : H) z *= scale;
    return inverse_transform(Spectrum(grid, std::move(H)));
}

GridFunction apply_bilinear_direct(const BilinearSymbol& sigma, const GridFunction& f, const GridFunction& g) {
    require_same_grid(f.grid(), g.grid(), "apply_bilinear");
    const Grid& grid = f.grid();
    const Spectrum F = forward_transform(f), G = forward_transform(g);
    const auto A = support_of(F), B = support_of(G);
    const auto table = sigma.x_independent() ? sigma.table(grid) : nullptr;
    const std::size_t n = grid.size();
    const double scale = 1.0 / (grid.volume() * grid.volume());
    std::vector<cplx> out(n);
    parallel_for(n, [&](std::size_t i) {
        const Point x = grid.position(i);
        std::vector<cplx> eb(B.size());
        for (std::size_t q = 0; q < B.size(); ++q) {
            const Point eta = grid.frequency(B[q]);
            eb[q] = G[B[q]] * std::polar(1.0, x[0] * eta[0] + x[1] * eta[1]);
        }
        cplx acc = 0.0;
        for (std::size_t a : A) {
            const Point xi = grid.frequency(a);
            cplx inner = 0.0;
            for (std::size_t q = 0; q < B.size(); ++q) {
                cplx s;
                if (table) {
                    s = (*table)[a * n + B[q]];
                } else {
                    const Point eta = grid.frequency(B[q]);
                    s = sigma(x, xi, eta);
                    require_finite(s, xi, eta);
                }
                inner += s * eb[q];
            }
            acc += F[a] * std::polar(1.0, x[0] * xi[0] + x[1] * xi[1]) * inner;
        }
        out[i] = acc * scale;
    });
    return GridFunction(grid, std::move(out));
}

GridFunction apply_bilinear(const BilinearSymbol& sigma, const GridFunction& f, const GridFunction& g) {
    return sigma.x_independent() ? apply_bilinear_fast(sigma, f, g) : apply_bilinear_direct(sigma, f, g);
}

BsSeminormReport bs_seminorm(const BilinearSymbol& sigma, int N, const BsLattice& lat) {
    if (N < 0 || N > 3) throw InvalidArgument("seminorm order N must be in [0, 3]");
    if (lat.points < 2 || !(lat.extent > 0.0) || !(lat.step > 0.0) || lat.x.empty())
        throw InvalidArgument("invalid seminorm lattice");
    const int n = N + 1;
    BsSeminormReport rep;
    rep.max_order = N;
    rep.terms.assign(static_cast<std::size_t>(n * n * n), 0.0);
    const double h = lat.step;
    const double m = sigma.order();

    for (double x0 : lat.x)
        for (int p = 0; p < lat.points; ++p)
            for (int r = 0; r < lat.points; ++r) {
                const double xi0 = -lat.extent + 2.0 * lat.extent * p / (lat.points - 1);
                const double eta0 = -lat.extent + 2.0 * lat.extent * r / (lat.points - 1);
                cplx Vc[7][7][7];
                for (int a = 0; a < 7; ++a)
                    for (int b = 0; b < 7; ++b)
                        for (int c = 0; c < 7; ++c)
                            Vc[a][b][c] = sigma(Point{x0 + (a - 3) * h, 0.0}, Point{xi0 + (b - 3) * h, 0.0},
                                                Point{eta0 + (c - 3) * h, 0.0});
                const double weight = 1.0 + std::abs(xi0) + std::abs(eta0);
                // separable application keeps cancellation errors at the level of a
                // single one-dimensional stencil
                std::vector<cplx> Uc(static_cast<std::size_t>(n) * 49);
                for (int gam = 0; gam < n; ++gam) {
                    const auto& w = fd::stencil(gam);
                    for (int a = 0; a < 7; ++a)
                        for (int b = 0; b < 7; ++b) {
                            cplx acc = 0.0;
                            for (int c = 0; c < 7; ++c)
                                if (w[static_cast<std::size_t>(c)] != 0.0) acc += w[static_cast<std::size_t>(c)] * Vc[a][b][c];
                            Uc[static_cast<std::size_t>(gam * 49 + a * 7 + b)] = acc / std::pow(h, gam);
                        }
                }
                std::vector<cplx> Wc(static_cast<std::size_t>(n * n) * 7);
                for (int bet = 0; bet < n; ++bet) {
                    const auto& w = fd::stencil(bet);
                    for (int gam = 0; gam < n; ++gam)
                        for (int a = 0; a < 7; ++a) {
                            cplx acc = 0.0;
                            for (int b = 0; b < 7; ++b)
                                if (w[static_cast<std::size_t>(b)] != 0.0)
                                    acc += w[static_cast<std::size_t>(b)] * Uc[static_cast<std::size_t>(gam * 49 + a * 7 + b)];
                            Wc[static_cast<std::size_t>((bet * n + gam) * 7 + a)] = acc / std::pow(h, bet);
                        }
                }
                for (int alp = 0; alp < n; ++alp) {
                    const auto& w = fd::stencil(alp);
                    for (int bet = 0; bet < n; ++bet)
                        for (int gam = 0; gam < n; ++gam) {
                            cplx acc = 0.0;
                            for (int a = 0; a < 7; ++a)
                                if (w[static_cast<std::size_t>(a)] != 0.0)
                                    acc += w[static_cast<std::size_t>(a)] * Wc[static_cast<std::size_t>((bet * n + gam) * 7 + a)];
                            const double d = std::abs(acc) / std::pow(h, alp);
                            const double v = d * std::pow(weight, -(m + alp - bet - gam));
                            auto& slot = rep.terms[static_cast<std::size_t>((alp * n + bet) * n + gam)];
                            slot = std::max(slot, v);
                        }
                }
            }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                const double v = rep.term(a, b, c);
                rep.value = std::max(rep.value, v);
                if (a + b + c > 0) rep.difference_max = std::max(rep.difference_max, v);
            }
    return rep;
}

cplx SymbolDecomposition::first(int j, const Point& x, const Point& xi, const Point& eta) const {
    if (j < 0 || j > R_.jmax()) throw InvalidArgument("piece index out of range");
    const double a = R_.phi(j, xi);
    if (a == 0.0) return 0.0;
    const double b = R_.low_pass(j, euclidean_norm(eta));
    if (b == 0.0) return 0.0;
    return sigma_(x, xi, eta) * a * b;
}

cplx SymbolDecomposition::second(int k, const Point& x, const Point& xi, const Point& eta) const {
    if (k < 1 || k > R_.jmax()) throw InvalidArgument("piece index out of range");
    const double a = R_.low_pass(k - 1, euclidean_norm(xi));
    if (a == 0.0) return 0.0;
    const double b = R_.phi(k, eta);
    if (b == 0.0) return 0.0;
    return sigma_(x, xi, eta) * a * b;
}

cplx SymbolDecomposition::reconstruct(const Point& x, const Point& xi, const Point& eta) const {
    cplx acc = 0.0;
    for (int j = 0; j <= R_.jmax(); ++j) acc += first(j, x, xi, eta);
    for (int k = 1; k <= R_.jmax(); ++k) acc += second(k, x, xi, eta);
    return acc;
}

double SymbolDecomposition::reconstruction_residual(const Grid& grid, const std::vector<Point>& xs) const {
    const double radius = std::ldexp(1.0, R_.jmax() - 1);
    std::vector<std::size_t> inside;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid.frequency_norm(i) <= radius) inside.push_back(i);
    double worst = 0.0;
    for (const Point& x : xs)
        for (std::size_t a : inside)
            for (std::size_t b : inside) {
                const Point xi = grid.frequency(a), eta = grid.frequency(b);
                worst = std::max(worst, std::abs(reconstruct(x, xi, eta) - sigma_(x, xi, eta)));
            }
    return worst;
}

SymbolDecomposition split_paraproduct(const BilinearSymbol& sigma, const ResolutionOfUnity& R) {
    return SymbolDecomposition(sigma, R);
}

ElementarySymbolSeries::ElementarySymbolSeries(PieceKind kind, int level, int kmax, std::vector<cplx> coefficients,
                                               double tail, std::vector<double> row_envelope,
                                               std::vector<double> column_envelope)
    : kind_(kind), level_(level), kmax_(kmax), coeffs_(std::move(coefficients)), tail_(tail),
      row_env_(std::move(row_envelope)), col_env_(std::move(column_envelope)) {}

cplx ElementarySymbolSeries::coefficient(int k, int l) const {
    if (std::abs(k) > kmax_ || std::abs(l) > kmax_) throw InvalidArgument("coefficient index outside the truncation box");
    const int w = 2 * kmax_ + 1;
    return coeffs_[static_cast<std::size_t>((k + kmax_) * w + (l + kmax_))];
}

cplx ElementarySymbolSeries::evaluate(const ResolutionOfUnity& R, const Point& xi, const Point& eta) const {
    double window;
    if (kind_ == PieceKind::First)
        window = R.phi(level_, xi) * R.low_pass(level_, euclidean_norm(eta));
    else
        window = R.low_pass(level_ - 1, euclidean_norm(xi)) * R.phi(level_, eta);
    if (window == 0.0) return 0.0;
    const double u = std::ldexp(xi[0], -level_), v = std::ldexp(eta[0], -level_);
    cplx acc = 0.0;
    for (int k = -kmax_; k <= kmax_; ++k)
        for (int l = -kmax_; l <= kmax_; ++l) acc += coefficient(k, l) * std::polar(1.0, k * u + l * v);
    return acc * window;
}

double ElementarySymbolSeries::normalized_max(double order, double a, double b) const {
    double best = 0.0;
    const double scale = std::exp2(-level_ * order);
    for (int k = -kmax_; k <= kmax_; ++k)
        for (int l = -kmax_; l <= kmax_; ++l)
            best = std::max(best, scale * std::pow(1.0 + std::abs(k), a) * std::pow(1.0 + std::abs(l), b) *
                                      std::abs(coefficient(k, l)));
    return best;
}

ElementarySymbolSeries fourier_coefficients(const BilinearSymbol& sigma, PieceKind kind, int level, int kmax,
                                            const SeriesOptions& opts) {
    const int M = opts.samples;
    if (M < 8 || (M & (M - 1)) != 0) throw InvalidArgument("series sample count must be a power of two >= 8");
    if (kmax < 0 || 2 * kmax >= M) throw InvalidArgument("kmax must satisfy 0 <= 2 kmax < samples");
    if (level < 0 || (kind == PieceKind::Second && level < 1)) throw InvalidArgument("piece level out of range");
    const AnnulusCutoffs cut(opts.profile);
    const double scale = std::ldexp(1.0, level);
    const auto m = static_cast<std::size_t>(M);

    std::vector<double> wx(m), wy(m), grid(m);
    for (std::size_t a = 0; a < m; ++a) {
        const double t = -kPi + 2.0 * kPi * static_cast<double>(a) / M;
        grid[a] = t;
        const double r = std::abs(t);
        const bool low_first = kind == PieceKind::Second || level == 0;
        wx[a] = low_first ? cut.chi0(r) : cut.chi(r);
        wy[a] = kind == PieceKind::Second ? cut.chi(r) : cut.chi0(r);
    }
    std::vector<cplx> data(m * m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            const double w = wx[a] * wy[b];
            if (w == 0.0) continue;
            const cplx v = sigma(opts.x, Point{scale * grid[a], 0.0}, Point{scale * grid[b], 0.0});
            if (!finite(v)) throw InvalidArgument("symbol is not finite while sampling the series");
            data[a * m + b] = v * w;
        }
    fft_inplace(data, 2, m, -1);

    const double norm = 1.0 / (static_cast<double>(M) * M);
    auto coeff = [&](int k, int l) {
        const std::size_t a = static_cast<std::size_t>((k % M + M) % M);
        const std::size_t b = static_cast<std::size_t>((l % M + M) % M);
        const double sign = ((k + l) % 2 == 0) ? 1.0 : -1.0;
        return data[a * m + b] * (sign * norm);
    };

    const int w = 2 * kmax + 1;
    std::vector<cplx> box(static_cast<std::size_t>(w * w));
    double tail = 0.0;
    const int half = M / 2;
    std::vector<double> rows(static_cast<std::size_t>(half), 0.0), cols(static_cast<std::size_t>(half), 0.0);
    for (int k = -half; k < half; ++k)
        for (int l = -half; l < half; ++l) {
            const cplx c = coeff(k, l);
            const double mag = std::abs(c);
            if (std::abs(k) <= kmax && std::abs(l) <= kmax)
                box[static_cast<std::size_t>((k + kmax) * w + (l + kmax))] = c;
            else
                tail += mag;
            if (std::abs(k) < half) rows[static_cast<std::size_t>(std::abs(k))] = std::max(rows[static_cast<std::size_t>(std::abs(k))], mag);
            if (std::abs(l) < half) cols[static_cast<std::size_t>(std::abs(l))] = std::max(cols[static_cast<std::size_t>(std::abs(l))], mag);
        }
    if (opts.check_tail && tail > opts.tolerance) {
        std::ostringstream msg;
        msg << "Fourier series of piece level " << level << " leaves tail " << tail << " above tolerance "
            << opts.tolerance << " at kmax = " << kmax;
        throw SeriesTailError(msg.str(), tail);
    }
    return ElementarySymbolSeries(kind, level, kmax, std::move(box), tail, std::move(rows), std::move(cols));
}

double log_slope(const std::vector<double>& xs, const std::vector<double>& values) {
    if (xs.size() != values.size() || xs.size() < 2) throw InvalidArgument("log_slope needs at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += std::log(values[i]);
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (std::log(values[i]) - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

CoefficientTrend coefficient_trend(const BilinearSymbol& sigma, PieceKind kind, int jmax, int kmax, double a,
                                   double b, SeriesOptions opts) {
    if (jmax < 2) throw InvalidArgument("coefficient trend needs jmax >= 2");
    opts.check_tail = false;
    CoefficientTrend out;
    for (int j = 1; j <= jmax; ++j) {
        out.levels.push_back(j);
        out.values.push_back(fourier_coefficients(sigma, kind, j, kmax, opts).normalized_max(sigma.order(), a, b));
    }
    const auto first = static_cast<std::size_t>((jmax + 1) / 2 - 1);
    const std::vector<double> xs(out.levels.begin() + static_cast<long>(first), out.levels.end());
    const std::vector<double> ys(out.values.begin() + static_cast<long>(first), out.values.end());
    out.slope = log_slope(xs, ys);
    return out;
}

std::pair<double, double> decay_exponents(const ElementarySymbolSeries& s, int kmax) {
    auto fit = [kmax](const std::vector<double>& env) {
        const int top = std::min(kmax, static_cast<int>(env.size()) - 1);
        const double peak = *std::max_element(env.begin(), env.end());
        std::vector<double> xs, ys;
        for (int k = std::max(1, top / 2); k <= top; ++k) {
            double run = 0.0;
            for (int i = k; i <= top; ++i) run = std::max(run, env[static_cast<std::size_t>(i)]);
            if (run <= 1e-14 * peak) break;
            xs.push_back(std::log1p(k));
            ys.push_back(run);
        }
        if (xs.size() < 2) return kInf;  // below rounding within the window: faster than any power
        return -log_slope(xs, ys);
    };
    return {fit(s.row_envelope()), fit(s.column_envelope())};
}

void check_support(const ElementaryFamily& family, const Grid& grid) {
    const double A = family.support_slack;
    for (const auto& term : family.terms) {
        const int j = term.level;
        const double lo = j == 0 ? 0.0 : std::ldexp(1.0, j) / A;
        const double hi = A * std::ldexp(1.0, j);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const Point xi = grid.frequency(i);
            const double r = euclidean_norm(xi);
            const bool annulus_ok = r >= lo && r <= (j == 0 ? A : hi);
            const bool ball_ok = r <= hi;
            const cplx va = family.swapped ? term.second(xi) : term.first(xi);
            const cplx vb = family.swapped ? term.first(xi) : term.second(xi);
            if ((!annulus_ok && std::abs(va) > 1e-14) || (!ball_ok && std::abs(vb) > 1e-14)) {
                std::ostringstream msg;
                msg << "elementary term " << j << " is nonzero outside its support at |xi| = " << r;
                throw SupportViolation(msg.str());
            }
        }
    }
}

GridFunction apply_elementary(const ElementaryFamily& family, const GridFunction& f, const GridFunction& g) {
    require_same_grid(f.grid(), g.grid(), "apply_elementary");
    check_support(family, f.grid());
    const Grid& grid = f.grid();
    const Spectrum F = forward_transform(f), G = forward_transform(g);
    std::vector<cplx> out(grid.size());
    for (const auto& term : family.terms) {
        const auto a = inverse_transform(apply_multiplier(term.first, 1.0, F));
        const auto b = inverse_transform(apply_multiplier(term.second, 1.0, G));
        for (std::size_t i = 0; i < out.size(); ++i) {
            const cplx amp = term.amplitude ? term.amplitude(grid.position(i)) : cplx(1.0);
            out[i] += amp * a[i] * b[i];
        }
    }
    return GridFunction(grid, std::move(out));
}

GridFunction apply_elementary(const std::vector<ElementaryFamily>& families, const GridFunction& f,
                              const GridFunction& g) {
    GridFunction acc = GridFunction::zeros(f.grid());
    for (const auto& fam : families) acc = acc.plus(apply_elementary(fam, f, g));
    return acc;
}

std::vector<ElementaryFamily> paraproduct_families(const ResolutionOfUnity& R) {
    ElementaryFamily low_high, high_low;
    high_low.swapped = false;
    low_high.swapped = true;
    for (int j = 0; j <= R.jmax(); ++j) high_low.terms.push_back({j, nullptr, R.block(j), R.low_pass_multiplier(j)});
    for (int k = 1; k <= R.jmax(); ++k)
        low_high.terms.push_back({k, nullptr, R.low_pass_multiplier(k - 1), R.block(k)});
    return {high_low, low_high};
}

GridFunction apply_series(const BilinearSymbol& sigma, const ResolutionOfUnity& R, int kmax, const GridFunction& f,
                          const GridFunction& g, const SeriesOptions& opts) {
    require_same_grid(f.grid(), g.grid(), "apply_series");
    if (!sigma.x_independent()) throw InvalidArgument("series application needs an x-independent symbol");
    const Grid& grid = f.grid();
    if (grid.dim() != 1) throw InvalidArgument("series application is implemented for n = 1");
    const Spectrum F = forward_transform(f), G = forward_transform(g);
    SeriesOptions o = opts;
    o.check_tail = false;
    const std::size_t n = grid.size();
    std::vector<cplx> out(n);

    auto run = [&](PieceKind kind, int level) {
        const auto series = fourier_coefficients(sigma, kind, level, kmax, o);
        const double s = std::ldexp(1.0, -level);
        std::vector<GridFunction> A, B;
        for (int k = -kmax; k <= kmax; ++k) {
            Multiplier first = kind == PieceKind::First
                                   ? Multiplier([&, k](const Point& xi) -> cplx {
                                         return R.phi(level, xi) * std::polar(1.0, k * s * xi[0]);
                                     })
                                   : Multiplier([&, k](const Point& xi) -> cplx {
                                         return R.low_pass(level - 1, euclidean_norm(xi)) * std::polar(1.0, k * s * xi[0]);
                                     });
            Multiplier second = kind == PieceKind::First
                                    ? Multiplier([&, k](const Point& eta) -> cplx {
                                          return R.low_pass(level, euclidean_norm(eta)) * std::polar(1.0, k * s * eta[0]);
                                      })
                                    : Multiplier([&, k](const Point& eta) -> cplx {
                                          return R.phi(level, eta) * std::polar(1.0, k * s * eta[0]);
                                      });
            A.push_back(inverse_transform(apply_multiplier(first, 1.0, F)));
            B.push_back(inverse_transform(apply_multiplier(second, 1.0, G)));
        }
        for (int k = -kmax; k <= kmax; ++k)
            for (int l = -kmax; l <= kmax; ++l) {
                const cplx c = series.coefficient(k, l);
                if (c == cplx{}) continue;
                const auto& a = A[static_cast<std::size_t>(k + kmax)];
                const auto& b = B[static_cast<std::size_t>(l + kmax)];
                for (std::size_t i = 0; i < n; ++i) out[i] += c * a[i] * b[i];
            }
    };
    for (int j = 0; j <= R.jmax(); ++j) run(PieceKind::First, j);
    for (int k = 1; k <= R.jmax(); ++k) run(PieceKind::Second, k);
    return GridFunction(grid, std::move(out));
}

}  // namespace lpcalc
