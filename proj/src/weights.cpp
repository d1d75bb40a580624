#include "lpcalc/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lpcalc/errors.hpp"
#include "lpcalc/finite_difference.hpp"

namespace lpcalc {

AdmissibleWeight AdmissibleWeight::constant(double value) {
    if (!(value > 0.0)) throw InvalidArgument("constant weight must be positive");
    return AdmissibleWeight(Kind::Table, 0.0, 0.0, {value}, 1.0);
}

AdmissibleWeight AdmissibleWeight::prototype(double lambda, double mu) {
    if (lambda * mu < 0.0)
        throw AdmissibilityViolation("prototype weight needs lambda * mu >= 0");
    return AdmissibleWeight(Kind::Prototype, lambda, mu, {}, 1.0);
}

AdmissibleWeight AdmissibleWeight::table(std::vector<double> values) {
    if (values.empty()) throw InvalidArgument("weight table is empty");
    for (double v : values)
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("weight table values must be positive");
    return AdmissibleWeight(Kind::Table, 0.0, 0.0, std::move(values), 1.0);
}

double AdmissibleWeight::base(double t) const {
    if (!(t > 0.0)) throw InvalidArgument("weight argument must be positive");
    if (kind_ == Kind::Prototype) {
        const double l = 1.0 + log_plus(1.0 / t);
        double v = 1.0;
        if (lambda_ != 0.0) v *= std::pow(l, lambda_);
        if (mu_ != 0.0) v *= std::pow(1.0 + std::log(l), mu_);
        return v;
    }
    if (t >= 1.0 || table_.size() == 1) return table_[0];
    const double pos = -std::log2(t);  // t = 2^{-pos}
    const auto last = static_cast<double>(table_.size() - 1);
    if (pos > last + 1e-12)
        throw InvalidArgument("weight table does not extend to t = " + std::to_string(t));
    const auto j = std::min(static_cast<std::size_t>(pos), table_.size() - 1);
    if (j + 1 >= table_.size()) return table_.back();
    const double theta = pos - static_cast<double>(j);
    return std::pow(table_[j], 1.0 - theta) * std::pow(table_[j + 1], theta);
}

double AdmissibleWeight::operator()(double t) const {
    const double b = base(t);
    return exponent_ == 1.0 ? b : std::pow(b, exponent_);
}

double AdmissibleWeight::dyadic(int j) const { return (*this)(std::ldexp(1.0, -j)); }

AdmissibleWeight AdmissibleWeight::power(double exponent) const {
    AdmissibleWeight out = *this;
    out.exponent_ *= exponent;
    return out;
}

bool AdmissibleWeight::is_constant() const {
    if (kind_ == Kind::Prototype) return (lambda_ == 0.0 && mu_ == 0.0) || exponent_ == 0.0;
    return table_.size() == 1 || exponent_ == 0.0 ||
           std::all_of(table_.begin(), table_.end(), [&](double v) { return v == table_[0]; });
}

bool AdmissibleWeight::non_increasing(int levels) const {
    // in t: w(2^{-j}) must not decrease as j grows
    for (int j = 0; j < levels; ++j)
        if (dyadic(j + 1) < dyadic(j) * (1.0 - 1e-14)) return false;
    return true;
}

bool AdmissibleWeight::monotone(int levels) const {
    bool up = true, down = true;
    for (int j = 0; j < levels; ++j) {
        const double a = dyadic(j), b = dyadic(j + 1);
        if (b < a * (1.0 - 1e-14)) up = false;
        if (b > a * (1.0 + 1e-14)) down = false;
    }
    return up || down;
}

std::string AdmissibleWeight::describe() const {
    std::ostringstream s;
    if (kind_ == Kind::Prototype)
        s << "(1+log+1/t)^" << lambda_ << " (1+log(1+log+1/t))^" << mu_;
    else if (table_.size() == 1)
        s << "constant " << table_[0];
    else
        s << "table[" << table_.size() << "]";
    if (exponent_ != 1.0) s << " ^" << exponent_;
    return s.str();
}

AdmissibilityReport check_admissible(const AdmissibleWeight& w, int levels) {
    if (levels < 4) throw InvalidArgument("check_admissible needs at least 4 levels");
    AdmissibilityReport rep;
    rep.c = kInf;
    rep.d = 0.0;
    for (int j = 1; j <= levels; ++j) {
        double r;
        try {
            r = w.dyadic(2 * j) / w.dyadic(j);
        } catch (const InvalidArgument&) {
            break;  // table exhausted
        }
        rep.ratios.push_back(r);
        rep.c = std::min(rep.c, r);
        rep.d = std::max(rep.d, r);
    }
    if (rep.ratios.empty()) rep.c = rep.d = 1.0;
    const int top = std::min(levels, static_cast<int>(rep.ratios.size()));
    bool mono = true;
    try {
        mono = w.monotone(std::min(levels, 2 * top));
    } catch (const InvalidArgument&) {
        mono = w.monotone(top);
    }
    if (!mono) {
        rep.violation = "weight is not monotone on the dyadic nodes";
    } else if (!(rep.c > 0.0)) {
        rep.violation = "lower comparison constant c is zero";
    } else if (rep.ratios.size() >= 8) {
        // Unbounded trend: ratios still growing over the last quarter and at least
        // doubled since the midpoint.
        const std::size_t n = rep.ratios.size();
        bool rising = true;
        for (std::size_t i = n - n / 4; i < n; ++i)
            if (rep.ratios[i] <= rep.ratios[i - 1]) rising = false;
        const bool doubling = rep.ratios[n - 1] >= 2.0 * rep.ratios[n / 2];
        const bool falling_to_zero = rep.ratios[n - 1] <= 0.5 * rep.ratios[n / 2] &&
                                     std::is_sorted(rep.ratios.rbegin(), rep.ratios.rbegin() + n / 4);
        if (rising && doubling) rep.violation = "ratio w(2^{-2j})/w(2^{-j}) grows without bound";
        if (falling_to_zero) rep.violation = "ratio w(2^{-2j})/w(2^{-j}) decays to zero";
    }
    rep.admissible = rep.violation.empty();
    return rep;
}

ComparisonBound comp_weights_bound(const AdmissibleWeight& w, int levels, double band) {
    if (levels < 4) throw InvalidArgument("comp_weights_bound needs at least 4 levels");
    std::vector<double> values(static_cast<std::size_t>(levels) + 1);
    for (int j = 0; j <= levels; ++j) values[static_cast<std::size_t>(j)] = w.dyadic(j);
    ComparisonBound out;
    for (int step = 0; step <= 16; ++step) {
        const double b = 0.25 * step;
        double c1 = kInf, c2 = 0.0;
        for (int k = 0; k <= levels; ++k)
            for (int j = k; j <= levels; ++j) {
                const double ratio = values[static_cast<std::size_t>(j)] / values[static_cast<std::size_t>(k)];
                const double gap = std::pow(1.0 + j - k, b);
                c1 = std::min(c1, ratio * gap);
                c2 = std::max(c2, ratio / gap);
            }
        if (c1 >= 1.0 / band && c2 <= band) {
            out = {c1, c2, b, true};
            return out;
        }
        if (step == 16) out = {c1, c2, b, false};
    }
    return out;
}

std::pair<double, double> comparable_values_bounds(const AdmissibleWeight& w, int levels) {
    double lo = kInf, hi = 0.0;
    for (int j = 0; j <= levels; ++j)
        for (int k = std::max(0, j - 2); k <= std::min(levels, j + 2); ++k) {
            const double r = w.dyadic(j) / w.dyadic(k);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
    // nodes above t = 1 carry w(1)
    for (int k = 0; k <= std::min(levels, 2); ++k) {
        const double r = w(1.0) / w.dyadic(k);
        lo = std::min({lo, r, 1.0 / r});
        hi = std::max({hi, r, 1.0 / r});
    }
    return {lo, hi};
}

AdmissibleWeight power_weight(const AdmissibleWeight& w, double lambda, int levels) {
    AdmissibleWeight out = w.power(lambda);
    const auto rep = check_admissible(out, levels);
    if (!rep.admissible) throw AdmissibilityViolation("w^" + std::to_string(lambda) + ": " + rep.violation);
    return out;
}

RegularizedWeight::RegularizedWeight(AdmissibleWeight w, ResolutionOfUnity R)
    : w_(std::move(w)), R_(std::move(R)) {
    nodes_.resize(static_cast<std::size_t>(R_.jmax()) + 1);
    for (int j = 0; j <= R_.jmax(); ++j) nodes_[static_cast<std::size_t>(j)] = w_.dyadic(j);
    // 64 lattice points per dyadic shell up to 2^{jmax}
    double c = 1.0;
    for (int shell = 0; shell <= R_.jmax(); ++shell) {
        const double lo = shell == 0 ? 0.0 : std::ldexp(1.0, shell - 1);
        const double hi = std::ldexp(1.0, shell);
        for (int m = 0; m <= 64; ++m) {
            const double r = lo + (hi - lo) * m / 64.0;
            const double ratio = (*this)(r) / reference(r);
            c = std::max({c, ratio, 1.0 / ratio});
        }
    }
    equivalence_ = c;
}

double RegularizedWeight::operator()(double r) const {
    double acc = 0.0;
    for (int j = 0; j <= R_.jmax(); ++j) {
        const double p = R_.phi(j, r);
        if (p != 0.0) acc += nodes_[static_cast<std::size_t>(j)] * p;
    }
    // frozen at w(2^{-jmax}) beyond the top annulus so the symbol stays positive
    const double tail = 1.0 - R_.low_pass(R_.jmax(), r);
    if (tail != 0.0) acc += nodes_.back() * tail;
    return acc;
}

double RegularizedWeight::reference(double r) const { return w_(1.0 / std::sqrt(1.0 + r * r)); }

Multiplier RegularizedWeight::multiplier() const {
    return [self = *this](const Point& xi) -> cplx { return self(xi); };
}

Multiplier RegularizedWeight::reciprocal_multiplier() const {
    return [self = *this](const Point& xi) -> cplx { return 1.0 / self(xi); };
}

RegularizedWeight regularize(const AdmissibleWeight& w, const ResolutionOfUnity& R) {
    return RegularizedWeight(w, R);
}

std::vector<double> symbol_seminorms(const std::function<double(double)>& a,
                                     const std::function<double(double)>& envelope, int max_order,
                                     double extent, double h) {
    if (max_order < 0 || max_order > 4) throw InvalidArgument("symbol order K must be in [0, 4]");
    if (!(h > 0.0)) throw InvalidArgument("lattice spacing must be positive");
    std::vector<double> sup(static_cast<std::size_t>(max_order) + 1, 0.0);
    const long m_max = static_cast<long>(std::floor((extent - 3.0 * h) / h));
    for (long m = -m_max; m <= m_max; ++m) {
        const double xi = static_cast<double>(m) * h;
        const double bracket = std::sqrt(1.0 + xi * xi);
        const double env = envelope(xi);
        for (int k = 0; k <= max_order; ++k) {
            const double d = std::abs(fd::derivative(a, xi, k, h));
            sup[static_cast<std::size_t>(k)] =
                std::max(sup[static_cast<std::size_t>(k)], d * std::pow(bracket, k) / env);
        }
    }
    return sup;
}

std::vector<double> zero_order_symbol_check(const std::function<double(double)>& a, int max_order,
                                            double extent, double h) {
    return symbol_seminorms(a, [](double) { return 1.0; }, max_order, extent, h);
}

SymbolDecayReport check_symbol_decay(const AdmissibleWeight& w, bool reciprocal, int max_order,
                                     const std::vector<std::size_t>& points, double period,
                                     const BumpProfile& profile) {
    SymbolDecayReport rep;
    for (std::size_t n : points) {
        const Grid grid(1, n, period);
        const int jmax = static_cast<int>(std::floor(std::log2(grid.nyquist()))) - 1;
        const RegularizedWeight reg(w, build_resolution(profile, jmax, grid));
        std::function<double(double)> a = [&](double xi) { return reg(std::abs(xi)); };
        std::function<double(double)> env = [&](double xi) { return reg.reference(std::abs(xi)); };
        if (reciprocal) {
            a = [&](double xi) { return 1.0 / reg(std::abs(xi)); };
            env = [&](double xi) { return 1.0 / reg.reference(std::abs(xi)); };
        }
        rep.points.push_back(n);
        rep.values.push_back(symbol_seminorms(a, env, max_order, std::ldexp(1.0, jmax), grid.frequency_step()));
    }
    rep.bounded = true;
    for (std::size_t k = 0; k <= static_cast<std::size_t>(max_order); ++k) {
        const double first = rep.values.front()[k];
        for (const auto& v : rep.values)
            if (v[k] > 1.5 * first + 1e-9) rep.bounded = false;
    }
    return rep;
}

}  // namespace lpcalc
