#include "lpcalc/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "lpcalc/bilinear.hpp"
#include "lpcalc/errors.hpp"
#include "lpcalc/experiments.hpp"
#include "lpcalc/lpgf.hpp"
#include "lpcalc/pde.hpp"

namespace lpcalc::cli {

namespace {

using json = nlohmann::ordered_json;

/// Any failure to read or write a file named on the command line.
class IoFailure : public Error {
  public:
    using Error::Error;
};

json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

json nums(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

class Report {
  public:
    explicit Report(std::string command) : command_(std::move(command)) {}

    json config = json::object();
    json results = json::object();
    std::optional<std::uint64_t> seed;

    void check(const std::string& name, double value, const std::string& relation, double bound) {
        bool pass = false;
        if (relation == "<=") pass = value <= bound;
        else if (relation == "<") pass = value < bound;
        else if (relation == ">=") pass = value >= bound;
        else if (relation == ">") pass = value > bound;
        else if (relation == "==") pass = value == bound;
        checks_.push_back(json{{"name", name},
                               {"value", num(value)},
                               {"relation", relation},
                               {"bound", num(bound)},
                               {"pass", pass}});
    }
    void check_flag(const std::string& name, bool pass, const std::string& detail = {}) {
        json c{{"name", name}, {"value", pass}, {"relation", "=="}, {"bound", true}, {"pass", pass}};
        if (!detail.empty()) c["detail"] = detail;
        checks_.push_back(std::move(c));
    }
    bool all_pass() const {
        for (const auto& c : checks_)
            if (!c["pass"].get<bool>()) return false;
        return true;
    }
    std::string dump() const {
        json j;
        j["tool"] = kToolName;
        j["version"] = kVersion;
        j["command"] = command_;
        j["config"] = config;
        j["checks"] = checks_;
        j["results"] = results;
        j["provenance"] = json{{"seed", seed ? json(*seed) : json(nullptr)}, {"timestamp", timestamp()}};
        return j.dump(2) + "\n";
    }

  private:
    static std::string timestamp() {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        std::ostringstream os;
        os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
        return os.str();
    }

    std::string command_;
    json checks_ = json::array();
};

struct Series {
    std::vector<double> x, y;
    void add(double a, double b) {
        x.push_back(a);
        y.push_back(b);
    }
};

struct Context {
    Report report;
    Series csv;
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoFailure("cannot open " + path + " for writing");
    os << text;
    if (!os) throw IoFailure("failed writing " + path);
}

GridFunction load(const std::string& path) {
    if (!std::filesystem::exists(path)) throw IoFailure("no such file: " + path);
    return read_lpgf(path);
}

BilinearSymbol symbol_from(std::string name) {
    const std::string prefix = "builtin:";
    if (name.rfind(prefix, 0) == 0) name = name.substr(prefix.size());
    return builtin_symbol(name);
}

std::vector<int> parse_levels(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw InvalidArgument("bad level list: " + text);
        out.push_back(v);
    }
    if (out.empty()) throw InvalidArgument("empty level list");
    return out;
}

/// Largest J with 2^{J+1} <= pi N / L.
int auto_jmax(const Grid& g) { return static_cast<int>(std::floor(std::log2(g.nyquist()))) - 1; }

BumpProfile profile_from(const std::string& name) {
    if (name == "exponential") return BumpProfile(BumpProfile::Kind::Exponential);
    if (name == "smoothstep7") return BumpProfile(BumpProfile::Kind::Smoothstep7);
    throw InvalidArgument("unknown profile " + name + " (exponential, smoothstep7)");
}

json ratio_json(const RatioReport& r) {
    json samples = json::array();
    for (const auto& s : r.samples)
        samples.push_back(json{{"member", s.member},
                               {"level", s.level},
                               {"numerator", num(s.numerator)},
                               {"denominator", num(s.denominator)},
                               {"ratio", num(s.ratio)}});
    return json{{"name", r.name},
                {"min", num(r.min)},
                {"max", num(r.max)},
                {"spread", num(r.spread)},
                {"trend_slope", num(r.trend_slope)},
                {"samples", samples}};
}

void ratio_checks(Context& ctx, const RatioReport& r) {
    ctx.report.check(r.name + ".spread", r.spread, "<=", r.band);
    ctx.report.check(r.name + ".trend_slope", r.trend_slope, "<=", r.trend_tolerance);
    for (const auto& s : r.samples) ctx.csv.add(s.level, s.ratio);
}

struct EnsembleOptions {
    std::uint64_t seed = 42;
    int count = 50;
    std::string levels = "4,5,6,7";
    double band = 16.0;

    void add(CLI::App* app) {
        app->add_option("--seed", seed, "ensemble seed");
        app->add_option("--count", count, "ensemble size");
        app->add_option("--levels", levels, "comma-separated bandwidth levels J");
        app->add_option("--band", band, "largest admissible max/min ratio");
    }
    Ensemble build(Context& ctx) const {
        ctx.report.seed = seed;
        const std::vector<int> L = parse_levels(levels);
        EnsembleSpec spec{seed, count, L};
        return Ensemble(spec, ensemble_grid(*std::max_element(L.begin(), L.end())));
    }
};

using Runner = std::function<void(Context&)>;

/// Default text that parses back to the same double.
std::string exact(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

// Every subcommand registers its options and returns the runner that uses them.

Runner add_norm(CLI::App* app) {
    struct P {
        std::string input, space = "tl", profile = "exponential";
        int n = 1, jmax = -1, level = 4;
        std::size_t N = 4096;
        double L = 64.0, s = 0.0, p = 2.0, q = 2.0, lambda = 0.0, mu = 0.0;
        std::uint64_t seed = 42;
    };
    auto P_ = std::make_shared<P>();
    app->add_option("--input", P_->input, "LPGF file (default: a seeded random function)");
    app->add_option("--space", P_->space, "besov, tl, tl-inf, bmo, big-bmo or xw")->check(
        CLI::IsMember({"besov", "tl", "tl-inf", "bmo", "big-bmo", "xw"}));
    app->add_option("--s", P_->s, "smoothness");
    app->add_option("--p", P_->p, "integrability (inf allowed)");
    app->add_option("--q", P_->q, "summability (inf allowed)");
    app->add_option("--lambda", P_->lambda, "weight exponent of (1 + log_+ 1/t)");
    app->add_option("--mu", P_->mu, "weight exponent of (1 + log(1 + log_+ 1/t))");
    app->add_option("--jmax", P_->jmax, "top partition level (default from the grid)");
    app->add_option("--profile", P_->profile, "exponential or smoothstep7");
    app->add_option("--n", P_->n, "dimension of the generated function");
    app->add_option("--N", P_->N, "points per axis of the generated function");
    app->add_option("--L", P_->L, "period of the generated function");
    app->add_option("--level", P_->level, "bandwidth level of the generated function");
    app->add_option("--seed", P_->seed, "seed of the generated function");
    return [P_](Context& ctx) {
        const P& p = *P_;
        GridFunction f = p.input.empty() ? GridFunction::zeros(Grid(p.n, p.N, p.L)) : load(p.input);
        if (p.input.empty()) {
            ctx.report.seed = p.seed;
            f = random_band_limited(f.grid(), p.level, 0.5, 0.1, p.seed, 0);
        }
        const Grid& g = f.grid();
        const int J = p.jmax >= 0 ? p.jmax : auto_jmax(g);
        const ResolutionOfUnity R = build_resolution(profile_from(p.profile), J, g);
        const AdmissibleWeight w = AdmissibleWeight::prototype(p.lambda, p.mu);
        const SpaceSpec spec{p.s, p.p, p.q, w};
        const DyadicCubeSet cubes(g);
        NormResult r;
        if (p.space == "besov") r = besov_norm_detail(f, spec, R);
        else if (p.space == "tl") r = triebel_lizorkin_detail(f, spec, R);
        else if (p.space == "tl-inf") r = tl_infinity_detail(f, spec, R, cubes);
        else if (p.space == "bmo") r = bmo_detail(f, cubes);
        else if (p.space == "big-bmo") r = big_bmo_detail(f, cubes);
        else {
            XwOptions xo;
            xo.levels = J;
            r = xw_detail(f, w, cubes, xo);
        }
        ctx.report.results["grid"] = json{{"n", g.dim()}, {"N", g.points_per_axis()}, {"L", g.period()}};
        ctx.report.results["jmax"] = J;
        ctx.report.results["value"] = num(r.value);
        ctx.report.results["blocks"] = nums(r.blocks);
        ctx.report.results["first_part"] = num(r.first_part);
        ctx.report.results["second_part"] = num(r.second_part);
        if (r.argmax_t) ctx.report.results["argmax_t"] = num(*r.argmax_t);
        if (r.argmax_cube)
            ctx.report.results["argmax_cube"] = json{{"level", r.argmax_cube->level},
                                                     {"shifted", r.argmax_cube->shifted},
                                                     {"start", r.argmax_cube->start},
                                                     {"side", num(r.argmax_cube->side)}};
        for (std::size_t j = 0; j < r.blocks.size(); ++j) ctx.csv.add(static_cast<double>(j), r.blocks[j]);
        ctx.report.check("value.finite", std::isfinite(r.value) ? r.value : kInf, "<", kInf);
    };
}

Runner add_partition_check(CLI::App* app) {
    struct P {
        int jmax = 5, n = 1;
        std::size_t N = 4096;
        double L = 64.0, step = 0.0, tol = 1e-12;
        std::string profile = "exponential";
    };
    auto P_ = std::make_shared<P>();
    app->add_option("--jmax", P_->jmax, "top partition level");
    app->add_option("--n", P_->n, "dimension");
    app->add_option("--N", P_->N, "points per axis");
    app->add_option("--L", P_->L, "period");
    app->add_option("--step", P_->step, "radial lattice step (default 2 pi / L)");
    app->add_option("--tol", P_->tol, "tolerance of the identities");
    app->add_option("--profile", P_->profile, "exponential or smoothstep7");
    return [P_](Context& ctx) {
        const P& p = *P_;
        const Grid g(p.n, p.N, p.L);
        const ResolutionOfUnity R = build_resolution(profile_from(p.profile), p.jmax, g);
        const double step = p.step > 0.0 ? p.step : g.frequency_step();
        const PartitionReport r = check_partition(R, step);
        ctx.report.results["lattice_step"] = num(r.lattice_step);
        ctx.report.results["nyquist"] = num(g.nyquist());
        ctx.report.results["derivative_bound"] = nums(r.derivative_bound);
        ctx.report.results["derivative_spread"] = nums(r.derivative_spread);
        ctx.report.check("partition_residual", r.partition_residual, "<=", p.tol);
        ctx.report.check("telescoping_residual", r.telescoping_residual, "<=", p.tol);
        ctx.report.check("support_violation", r.support_violation, "<=", p.tol);
        ctx.report.check("plateau_violation", r.plateau_violation, "<=", p.tol);
        for (std::size_t k = 0; k < r.derivative_bound.size(); ++k) ctx.csv.add(k + 1.0, r.derivative_bound[k]);
    };
}

Runner add_weight_check(CLI::App* app) {
    struct P {
        double lambda = 1.0, mu = 0.0, L = 64.0;
        int levels = 16, order = 3;
        std::string points = "1024,2048,4096";
    };
    auto P_ = std::make_shared<P>();
    app->add_option("--lambda", P_->lambda, "exponent of (1 + log_+ 1/t)");
    app->add_option("--mu", P_->mu, "exponent of (1 + log(1 + log_+ 1/t))");
    app->add_option("--levels", P_->levels, "dyadic levels checked");
    app->add_option("--order", P_->order, "symbol derivative order");
    app->add_option("--points", P_->points, "comma-separated grid sizes of the symbol sweep");
    app->add_option("--L", P_->L, "period of the symbol sweep grids");
    return [P_](Context& ctx) {
        const P& p = *P_;
        const AdmissibleWeight w = AdmissibleWeight::prototype(p.lambda, p.mu);
        const AdmissibilityReport a = check_admissible(w, p.levels);
        const ComparisonBound cb = comp_weights_bound(w, p.levels);
        const auto [d1, d2] = comparable_values_bounds(w, p.levels);
        std::vector<std::size_t> pts;
        for (int v : parse_levels(p.points)) pts.push_back(static_cast<std::size_t>(v));
        const SymbolDecayReport direct = check_symbol_decay(w, false, p.order, pts, p.L);
        const SymbolDecayReport inverse = check_symbol_decay(w, true, p.order, pts, p.L);
        json dyadic = json::array();
        for (int j = 0; j <= p.levels; ++j) {
            dyadic.push_back(num(w.dyadic(j)));
            ctx.csv.add(j, w.dyadic(j));
        }
        auto decay_json = [](const SymbolDecayReport& r) {
            json v = json::array();
            for (const auto& row : r.values) v.push_back(nums(row));
            return json{{"points", r.points}, {"values", v}};
        };
        ctx.report.results["weight"] = w.describe();
        ctx.report.results["dyadic_values"] = dyadic;
        ctx.report.results["c"] = num(a.c);
        ctx.report.results["d"] = num(a.d);
        ctx.report.results["comparison"] =
            json{{"found", cb.found}, {"b", num(cb.b)}, {"c1", num(cb.c1)}, {"c2", num(cb.c2)}};
        ctx.report.results["comparable_values"] = json{{"d1", num(d1)}, {"d2", num(d2)}};
        ctx.report.results["symbol_decay"] = decay_json(direct);
        ctx.report.results["reciprocal_symbol_decay"] = decay_json(inverse);
        ctx.report.check_flag("admissible", a.admissible, a.violation);
        ctx.report.check_flag("comparison_bound_found", cb.found);
        ctx.report.check_flag("symbol_decay_bounded", direct.bounded);
        ctx.report.check_flag("reciprocal_symbol_decay_bounded", inverse.bounded);
    };
}

Runner add_decompose(CLI::App* app) {
    struct P {
        std::string symbol = "builtin:one";
        int jmax = 6, kmax = 16, decay_kmax = 256, samples = 1024, order = 2;
        double tol = 1e-6, a = 4.0, b = 4.0, decay = 3.6;
        std::size_t N = 256;
        double L = 2.0 * std::numbers::pi;
    };
    auto P_ = std::make_shared<P>();
    app->add_option("--symbol", P_->symbol, "builtin:<name>");
    app->add_option("--jmax", P_->jmax, "top partition level");
    app->add_option("--kmax", P_->kmax, "Fourier truncation per axis");
    app->add_option("--samples", P_->samples, "samples per axis of the coefficient transform");
    app->add_option("--tol", P_->tol, "largest admissible series tail");
    app->add_option("--a", P_->a, "coefficient weight exponent in k");
    app->add_option("--b", P_->b, "coefficient weight exponent in l");
    app->add_option("--decay", P_->decay, "smallest accepted decay exponent of the coefficients");
    app->add_option("--decay-kmax", P_->decay_kmax, "truncation of the coefficient window used for decay fits");
    app->add_option("--order", P_->order, "derivative order of the BS seminorm (<= 3)");
    app->add_option("--N", P_->N, "points of the reconstruction grid");
    app->add_option("--L", P_->L, "period of the reconstruction grid")->default_str(exact(P_->L));
    return [P_](Context& ctx) {
        const P& p = *P_;
        const BilinearSymbol sigma = symbol_from(p.symbol);
        const Grid g(1, p.N, p.L);
        const ResolutionOfUnity R = build_resolution(BumpProfile{}, p.jmax, g);
        const SymbolDecomposition dec = split_paraproduct(sigma, R);
        const std::vector<Point> xs = sigma.x_independent() ? std::vector<Point>{Point{}}
                                                             : std::vector<Point>{Point{}, Point{1.3, 0.0}};
        const double residual = dec.reconstruction_residual(g, xs);
        const BsSeminormReport bs = bs_seminorm(sigma, p.order);

        SeriesOptions opts;
        opts.samples = p.samples;
        opts.tolerance = p.tol;
        opts.check_tail = false;
        json levels = json::array();
        double max_tail = 0.0, min_decay = kInf;
        for (PieceKind kind : {PieceKind::First, PieceKind::Second}) {
            for (int j = kind == PieceKind::First ? 0 : 1; j <= p.jmax; ++j) {
                const ElementarySymbolSeries s = fourier_coefficients(sigma, kind, j, p.kmax, opts);
                const ElementarySymbolSeries wide = fourier_coefficients(sigma, kind, j, p.decay_kmax, opts);
                const auto [dk, dl] = decay_exponents(wide, p.decay_kmax);
                max_tail = std::max(max_tail, s.tail() * std::exp2(-j * sigma.order()));
                min_decay = std::min({min_decay, dk, dl});
                levels.push_back(json{{"piece", kind == PieceKind::First ? "first" : "second"},
                                      {"level", j},
                                      {"tail", num(s.tail())},
                                      {"decay_k", num(dk)},
                                      {"decay_l", num(dl)},
                                      {"normalized_max", num(s.normalized_max(sigma.order(), p.a, p.b))}});
                if (kind == PieceKind::First) ctx.csv.add(j, s.tail());
            }
        }
        const CoefficientTrend t0 = coefficient_trend(sigma, PieceKind::First, p.jmax, p.kmax, p.a, p.b, opts);
        const CoefficientTrend t1 = coefficient_trend(sigma, PieceKind::Second, p.jmax, p.kmax, p.a, p.b, opts);
        ctx.report.results["symbol"] = sigma.name();
        ctx.report.results["order"] = num(sigma.order());
        ctx.report.results["reconstruction_residual"] = num(residual);
        ctx.report.results["bs_seminorm"] = json{{"value", num(bs.value)}, {"difference_max", num(bs.difference_max)}};
        ctx.report.results["levels"] = levels;
        ctx.report.results["trend_first"] = json{{"values", nums(t0.values)}, {"slope", num(t0.slope)}};
        ctx.report.results["trend_second"] = json{{"values", nums(t1.values)}, {"slope", num(t1.slope)}};
        ctx.report.check("reconstruction_residual", residual, "<=", 1e-10);
        ctx.report.check("max_tail_over_2^(jm)", max_tail, "<=", p.tol);
        ctx.report.check("min_decay_exponent", min_decay, ">=", p.decay);
        ctx.report.check("coefficient_trend_first", t0.slope, "<=", 0.05);
        ctx.report.check("coefficient_trend_second", t1.slope, "<=", 0.05);
    };
}

Runner add_embed_check(CLI::App* app) {
    struct P {
        EnsembleOptions ens;
        double p = 2.0, q = 2.0, exponent = NAN, compare = NAN;
    };
    auto P_ = std::make_shared<P>();
    P_->ens.add(app);
    app->add_option("--p", P_->p, "integrability");
    app->add_option("--q", P_->q, "summability");
    app->add_option("--w-exponent", P_->exponent, "weight exponent (default 1/r')");
    app->add_option("--compare-exponent", P_->compare,
                    "second weight exponent whose ratios must not exceed the first");
    return [P_](Context& ctx) {
        const P& p = *P_;
        const Ensemble E = p.ens.build(ctx);
        const std::optional<double> e = std::isnan(p.exponent) ? std::nullopt : std::optional<double>(p.exponent);
        RatioReport r = embedding_ratio(E, p.p, p.q, e);
        r.band = p.ens.band;
        ctx.report.results["ratios"] = ratio_json(r);
        ratio_checks(ctx, r);
        if (!std::isnan(p.compare)) {
            const RatioReport c = embedding_ratio(E, p.p, p.q, p.compare);
            int violations = 0;
            for (std::size_t i = 0; i < std::min(r.samples.size(), c.samples.size()); ++i)
                if (c.samples[i].ratio > r.samples[i].ratio) ++violations;
            ctx.report.results["comparison"] = ratio_json(c);
            ctx.report.check("comparison.violations", violations, "==", 0);
        }
    };
}

Runner add_product_check(CLI::App* app) {
    struct P {
        EnsembleOptions ens;
        double p = 2.0, q = 2.0;
    };
    auto P_ = std::make_shared<P>();
    P_->ens.add(app);
    app->add_option("--p", P_->p, "integrability");
    app->add_option("--q", P_->q, "summability");
    return [P_](Context& ctx) {
        const P& p = *P_;
        try {
            product_gate(p.p, p.q);
        } catch (const GateViolation& e) {
            ctx.report.check_flag("gate", false, e.what());
            return;
        }
        ctx.report.check_flag("gate", true);
        const Ensemble E = p.ens.build(ctx);
        RatioReport r = product_estimate_ratio(E, p.p, p.q);
        r.band = p.ens.band;
        ctx.report.results["ratios"] = ratio_json(r);
        ratio_checks(ctx, r);
    };
}

Runner add_resolution_check(CLI::App* app) {
    struct P {
        EnsembleOptions ens;
        double s = 0.0, q = 2.0, lambda = 0.0;
    };
    auto P_ = std::make_shared<P>();
    P_->ens.add(app);
    app->add_option("--s", P_->s, "smoothness");
    app->add_option("--q", P_->q, "summability");
    app->add_option("--lambda", P_->lambda, "weight exponent of (1 + log_+ 1/t)");
    return [P_](Context& ctx) {
        const P& p = *P_;
        const Ensemble E = p.ens.build(ctx);
        RatioReport r =
            resolution_independence_check(E, SpaceSpec{p.s, kInf, p.q, AdmissibleWeight::prototype(p.lambda)});
        r.band = p.ens.band;
        ctx.report.results["ratios"] = ratio_json(r);
        ratio_checks(ctx, r);
    };
}

Runner add_lift_check(CLI::App* app) {
    struct P {
        EnsembleOptions ens;
        double s = 0.0, p = 2.0, q = 2.0, lambda = 1.0;
    };
    auto P_ = std::make_shared<P>();
    P_->ens.add(app);
    app->add_option("--s", P_->s, "smoothness");
    app->add_option("--p", P_->p, "integrability (inf allowed)");
    app->add_option("--q", P_->q, "summability");
    app->add_option("--lambda", P_->lambda, "weight exponent of (1 + log_+ 1/t)");
    return [P_](Context& ctx) {
        const P& p = *P_;
        const Ensemble E = p.ens.build(ctx);
        RatioReport r = lifting_ratio(E, SpaceSpec{p.s, p.p, p.q, AdmissibleWeight::prototype(p.lambda)});
        r.band = p.ens.band;
        ctx.report.results["ratios"] = ratio_json(r);
        ratio_checks(ctx, r);
    };
}

Runner add_sharpness(CLI::App* app) {
    struct P {
        double delta = 0.51, gamma = 0.4, rmax = std::ldexp(std::numbers::e, 9);
        std::size_t N = 16384;
        int jmax = 12, oracle_kmax = 40;
    };
    auto P_ = std::make_shared<P>();
    app->add_option("--delta", P_->delta, "delta > 1/2");
    app->add_option("--gamma", P_->gamma, "weight exponent gamma");
    app->add_option("--rmax", P_->rmax, "largest truncation radius (radii 2^k e)")->default_str(exact(P_->rmax));
    app->add_option("--N", P_->N, "grid points on [0, 2 pi)");
    app->add_option("--jmax", P_->jmax, "top partition level");
    app->add_option("--oracle-kmax", P_->oracle_kmax, "largest k of the scalar oracle sweep");
    return [P_](Context& ctx) {
        const P& p = *P_;
        SharpnessProfile prof;
        prof.delta = p.delta;
        prof.gamma = p.gamma;
        prof.points = p.N;
        prof.jmax = p.jmax;
        prof.oracle_kmax = p.oracle_kmax;
        prof.kmax = static_cast<int>(std::floor(std::log2(p.rmax / std::numbers::e) + 1e-12));
        const SharpnessReport s = sharpness_scan(prof);
        ctx.report.results["predicted_exponent"] = num(s.predicted);
        ctx.report.results["divergent"] = prof.divergent();
        ctx.report.results["radii"] = nums(s.radii);
        ctx.report.results["squared_norms"] = nums(s.squared_norms);
        ctx.report.results["fitted_exponent"] = num(s.fitted_exponent);
        ctx.report.results["increments"] = nums(s.growth_cauchy.increments);
        ctx.report.results["membership_norms"] = nums(s.membership_norms);
        ctx.report.results["membership_increments"] = nums(s.membership.increments);
        ctx.report.results["oracle_exponent"] = num(s.oracle_exponent);
        ctx.report.results["convolution_bound_ratio"] = num(s.convolution_bound_ratio);
        for (std::size_t i = 0; i < s.radii.size(); ++i) ctx.csv.add(s.radii[i], s.squared_norms[i]);

        ctx.report.check("oracle.relative_error", std::abs(s.oracle_exponent - s.predicted) / std::abs(s.predicted),
                         "<=", 0.02);
        if (prof.divergent()) {
            ctx.report.check("growth.exponent_error", std::abs(s.fitted_exponent - s.predicted), "<=",
                             0.05 * std::abs(s.predicted) + 0.05);
        } else {
            ctx.report.check_flag("cauchy.increments_decreasing", s.growth_cauchy.decreasing);
            ctx.report.check("cauchy.last_over_first", s.growth_cauchy.last_over_first, "<", 0.1);
        }
        ctx.report.check_flag("membership.increments_decreasing", s.membership.decreasing);
        ctx.report.check("convolution_bound_ratio", s.convolution_bound_ratio, ">=", 0.95);
    };
}

Runner add_pde(CLI::App* app) {
    struct P {
        std::string u0, symbol = "builtin:one", snapshots;
        double s = 2.0, T = 0.1, tol = 1e-10, amplitude = 0.01;
        double L = 2.0 * std::numbers::pi;
        std::size_t N = 256;
        int nodes = 32, max_iter = 50, halvings = 6, jmax = -1, level = 4;
        std::uint64_t seed = 42;
        bool order = false;
    };
    auto P_ = std::make_shared<P>();
    app->add_option("--u0", P_->u0, "initial datum (LPGF); default a seeded random datum");
    app->add_option("--s", P_->s, "dispersion exponent");
    app->add_option("--T", P_->T, "horizon");
    app->add_option("--tol", P_->tol, "Picard tolerance");
    app->add_option("--nodes", P_->nodes, "midpoint nodes on [0, T]");
    app->add_option("--max-iter", P_->max_iter, "iteration cap");
    app->add_option("--max-halvings", P_->halvings, "retries with T / 2");
    app->add_option("--symbol", P_->symbol, "builtin:<name>");
    app->add_option("--jmax", P_->jmax, "top partition level (default from the grid)");
    app->add_option("--snapshots", P_->snapshots, "directory for LPGF snapshots of the trajectory");
    app->add_flag("--order", P_->order, "also measure the time-step order");
    app->add_option("--amplitude", P_->amplitude, "L^2_{n/2} size of the generated datum");
    app->add_option("--seed", P_->seed, "seed of the generated datum");
    app->add_option("--level", P_->level, "bandwidth level of the generated datum");
    app->add_option("--N", P_->N, "points of the generated datum's grid");
    app->add_option("--L", P_->L, "period of the generated datum's grid")->default_str(exact(P_->L));
    return [P_](Context& ctx) {
        const P& p = *P_;
        GridFunction u0 = p.u0.empty() ? GridFunction::zeros(Grid(1, p.N, p.L)) : load(p.u0);
        const Grid& g = u0.grid();
        const int J = p.jmax >= 0 ? p.jmax : auto_jmax(g);
        const ResolutionOfUnity R = build_resolution(BumpProfile{}, J, g);
        if (p.u0.empty()) {
            ctx.report.seed = p.seed;
            const GridFunction v = random_band_limited(g, p.level, 0.5, 0.1, p.seed, 0);
            u0 = v.scaled(p.amplitude / triebel_lizorkin_norm(v, SpaceSpec{g.dim() / 2.0, 2, 2, std::nullopt}, R));
        }
        EvolutionSpec spec(u0, R);
        spec.s = p.s;
        spec.T = p.T;
        spec.tolerance = p.tol;
        spec.nodes = p.nodes;
        spec.max_iterations = p.max_iter;
        spec.max_halvings = p.halvings;
        spec.sigma = symbol_from(p.symbol);
        ctx.report.results["jmax"] = J;
        PicardState st;
        try {
            st = picard_solve(spec);
        } catch (const DivergenceError& e) {
            ctx.report.results["growth_factor"] = num(e.growth());
            ctx.report.check_flag("contraction", false, e.what());
            return;
        }
        ctx.report.results["iterations"] = st.iterations;
        ctx.report.results["T"] = num(st.T);
        ctx.report.results["halvings"] = st.halvings;
        ctx.report.results["update_norms"] = nums(st.update_norms);
        ctx.report.results["contraction_factors"] = nums(st.contraction_factors);
        ctx.report.results["residual"] = num(st.residual);
        ctx.report.results["damping_constant"] = num(st.damping_constant);
        for (std::size_t i = 0; i < st.update_norms.size(); ++i) ctx.csv.add(i + 1.0, st.update_norms[i]);
        ctx.report.check_flag("converged", st.converged);
        ctx.report.check("residual", st.residual, "<=", p.tol);
        if (p.order) {
            const OrderReport o = time_step_order(spec);
            ctx.report.results["order"] = json{{"nodes", o.nodes}, {"differences", nums(o.differences)},
                                               {"order", num(o.order)}};
            ctx.report.check("time_step_order", o.order, ">=", 1.8);
        }
        if (!p.snapshots.empty()) {
            std::error_code ec;
            std::filesystem::create_directories(p.snapshots, ec);
            if (ec) throw IoFailure("cannot create " + p.snapshots + ": " + ec.message());
            json files = json::array();
            for (std::size_t k = 0; k < st.trajectory.size(); ++k) {
                std::ostringstream name;
                name << "u_" << std::setw(3) << std::setfill('0') << k << ".lpgf";
                const auto path = std::filesystem::path(p.snapshots) / name.str();
                try {
                    write_lpgf(st.trajectory[k], path);
                } catch (const std::exception& e) {
                    throw IoFailure(e.what());
                }
                files.push_back(json{{"t", num(st.times[k])}, {"file", name.str()}});
            }
            ctx.report.results["snapshots"] = files;
        }
    };
}

Runner add_logschrodinger(CLI::App* app) {
    struct P {
        std::vector<std::string> inputs;
        std::string symbol = "builtin:one";
        double p = 2.0, q = 2.0;
        int jmax = -1;
    };
    auto P_ = std::make_shared<P>();
    app->add_option("--input", P_->inputs, "f.lpgf g.lpgf")->expected(2)->required();
    app->add_option("--symbol", P_->symbol, "builtin:<name>");
    app->add_option("--p", P_->p, "integrability");
    app->add_option("--q", P_->q, "summability");
    app->add_option("--jmax", P_->jmax, "top partition level (default from the grid)");
    return [P_](Context& ctx) {
        const P& p = *P_;
        const GridFunction f = load(p.inputs[0]);
        const GridFunction g = load(p.inputs[1]);
        require_same_grid(f.grid(), g.grid(), "logschrodinger");
        const int J = p.jmax >= 0 ? p.jmax : auto_jmax(f.grid());
        const ResolutionOfUnity R = build_resolution(BumpProfile{}, J, f.grid());
        const auto r = log_schrodinger_solve(symbol_from(p.symbol), f, g, R, p.p, p.q);
        ctx.report.results["jmax"] = J;
        ctx.report.results["solution_norm"] = num(r.solution_norm);
        ctx.report.results["data_norm"] = num(r.data_norm);
        ctx.report.results["ratio"] = num(r.ratio);
        ctx.report.results["residual"] = num(r.residual);
        ctx.report.check("residual", r.residual, "<=", 1e-10);
    };
}

json echo(const CLI::App* app) {
    json out = json::object();
    for (const CLI::Option* opt : app->get_options()) {
        const std::string name = opt->get_single_name();
        if (name == "help" || name == "h") continue;
        std::vector<std::string> values = opt->count() > 0 ? opt->results() : std::vector<std::string>{};
        if (values.empty()) {
            const std::string d = opt->get_expected_max() == 0 ? "false" : opt->get_default_str();
            if (d.empty()) continue;
            values.push_back(d);
        }
        auto convert = [](const std::string& v) -> json {
            if (v == "true") return true;
            if (v == "false") return false;
            char* end = nullptr;
            const long long i = std::strtoll(v.c_str(), &end, 10);
            if (!v.empty() && end == v.c_str() + v.size()) return i;
            const double d = std::strtod(v.c_str(), &end);
            if (!v.empty() && end == v.c_str() + v.size()) return num(d);
            return v;
        };
        if (values.size() == 1 && opt->get_expected_max() <= 1) {
            out[name] = convert(values.front());
        } else {
            json a = json::array();
            for (const auto& v : values) a.push_back(convert(v));
            out[name] = a;
        }
    }
    return out;
}

/// Appends config-file entries for flags absent from the command line.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    std::ifstream is(path);
    if (!is) throw IoFailure("cannot read config " + path);
    json cfg;
    try {
        cfg = json::parse(is);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!cfg.is_object()) throw InvalidArgument("config must be a JSON object of flag values");
    auto present = [&](const std::string& flag) {
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        return false;
    };
    auto text = [](const json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_integer()) return std::to_string(v.get<long long>());
        if (v.is_number()) {
            std::ostringstream os;
            os << std::setprecision(17) << v.get<double>();
            return os.str();
        }
        throw InvalidArgument("unsupported config value " + v.dump());
    };
    std::vector<std::string> out = args;
    for (const auto& [key, value] : cfg.items()) {
        const std::string flag = "--" + key;
        if (key == "config" || present(flag)) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) out.push_back(flag);
        } else if (value.is_array()) {
            out.push_back(flag);
            for (const auto& v : value) out.push_back(text(v));
        } else {
            out.push_back(flag);
            out.push_back(text(value));
        }
    }
    return out;
}

}  // namespace

std::string strip_timestamp(const std::string& report) {
    json j = json::parse(report);
    if (j.contains("provenance")) j["provenance"].erase("timestamp");
    return j.dump(2) + "\n";
}

Outcome dispatch(const std::vector<std::string>& raw_args) {
    Outcome out;
    CLI::App app{"Littlewood-Paley calculus on the torus", kToolName};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    app.option_defaults()->always_capture_default();

    std::string out_path, csv_path, config_path;
    std::vector<std::pair<CLI::App*, Runner>> commands;
    auto add = [&](const char* name, const char* help, Runner (*make)(CLI::App*)) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->option_defaults()->always_capture_default();
        sub->add_option("--config", config_path, "JSON file of flag values (flags win)");
        sub->add_option("--out", out_path, "write the JSON report here instead of stdout");
        sub->add_option("--csv", csv_path, "write the plot series (x, y) here");
        commands.emplace_back(sub, make(sub));
    };
    add("norm", "evaluate one function-space norm", add_norm);
    add("partition-check", "verify the dyadic resolution of unity", add_partition_check);
    add("weight-check", "admissibility and regularisation of a logarithmic weight", add_weight_check);
    add("decompose", "paraproduct split and Fourier series of a bilinear symbol", add_decompose);
    add("embed-check", "X_w embedding ratios over a seeded ensemble", add_embed_check);
    add("product-check", "product estimate ratios over a seeded ensemble", add_product_check);
    add("resolution-check", "norm ratios under two resolutions of unity", add_resolution_check);
    add("sharpness", "growth of the squared counterexample", add_sharpness);
    add("lift-check", "lifting ratios over a seeded ensemble", add_lift_check);
    add("pde", "Picard iteration for the dispersive equation", add_pde);
    add("logschrodinger", "solve v(D) u = T_sigma(f, g)", add_logschrodinger);

    std::vector<std::string> args;
    try {
        args = merge_config(raw_args);
    } catch (const IoFailure& e) {
        out.exit_code = kIoError;
        out.diagnostics = std::string("error: ") + e.what() + "\n";
        return out;
    } catch (const Error& e) {
        out.exit_code = kUsageError;
        out.diagnostics = std::string("error: ") + e.what() + "\n";
        return out;
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out.diagnostics = app.help();
        for (const auto& [sub, run] : commands)
            if (sub->parsed()) out.diagnostics = sub->help();
        return out;
    } catch (const CLI::CallForVersion&) {
        out.diagnostics = std::string(kVersion) + "\n";
        return out;
    } catch (const CLI::ParseError& e) {
        out.exit_code = kUsageError;
        std::string usage = app.help();
        for (const auto& [sub, run] : commands)
            if (sub->parsed()) usage = sub->help();
        out.diagnostics = std::string("error: ") + e.what() + "\n" + usage;
        return out;
    }

    for (const auto& [sub, run] : commands) {
        if (!sub->parsed()) continue;
        Context ctx{Report(sub->get_name()), {}};
        ctx.report.config = echo(sub);
        try {
            run(ctx);
        } catch (const IoFailure& e) {
            out.exit_code = kIoError;
            out.diagnostics = std::string("error: ") + e.what() + "\n";
            return out;
        } catch (const FormatError& e) {
            out.exit_code = kIoError;
            out.diagnostics = std::string("error: ") + e.what() + " (offset " + std::to_string(e.offset()) + ")\n";
            return out;
        } catch (const GateViolation& e) {
            ctx.report.check_flag("gate", false, e.what());
        } catch (const Error& e) {
            out.exit_code = kUsageError;
            out.diagnostics = std::string("error: ") + e.what() + "\n" + sub->help();
            return out;
        }
        out.report = ctx.report.dump();
        out.exit_code = ctx.report.all_pass() ? kPass : kCheckFailure;
        try {
            if (!out_path.empty()) {
                write_text(out_path, out.report);
                out.written = true;
            }
            if (!csv_path.empty()) {
                std::ostringstream os;
                os << std::setprecision(17) << "x,y\n";
                for (std::size_t i = 0; i < ctx.csv.x.size(); ++i) os << ctx.csv.x[i] << ',' << ctx.csv.y[i] << '\n';
                write_text(csv_path, os.str());
            }
        } catch (const IoFailure& e) {
            out.exit_code = kIoError;
            out.diagnostics = std::string("error: ") + e.what() + "\n";
        }
        return out;
    }
    out.exit_code = kUsageError;
    out.diagnostics = app.help();
    return out;
}

}  // namespace lpcalc::cli
