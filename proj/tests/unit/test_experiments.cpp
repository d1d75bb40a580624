#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "lpcalc/errors.hpp"
#include "lpcalc/experiments.hpp"

using namespace lpcalc;

namespace {

const double kPi = std::numbers::pi;

GridFunction cosine(const Grid& g, long mode) {
    const double xi = 2 * kPi * mode / g.period();
    return GridFunction::sample(g, [xi](const Point& x) { return cplx(std::cos(xi * x[0])); });
}

// Mode of a grid with period 64 at frequency ~ target.
long mode_near(double target) { return std::lround(target * 64.0 / (2 * kPi)); }

}  // namespace

TEST_CASE("ensemble members are seeded, real and band-limited") {
    const Grid g = ensemble_grid(6);
    const auto a = random_band_limited(g, 5, 0.5, 0.1, 42, 3);
    const auto b = random_band_limited(g, 5, 0.5, 0.1, 42, 3);
    const auto c = random_band_limited(g, 5, 0.5, 0.1, 42, 4);
    bool same = true, differs = false;
    for (std::size_t i = 0; i < g.size(); ++i) {
        same = same && a[i] == b[i];
        differs = differs || a[i] != c[i];
        CHECK(a[i].imag() == 0.0);
    }
    CHECK(same);
    CHECK(differs);
    CHECK(lp_norm(a, kInf) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(spectral_mass_beyond(a, 32.0) <= 1e-14);
    CHECK(spectral_mass_beyond(a, 8.0) > 0.0);
}

TEST_CASE("ensemble does not depend on the thread count") {
    const Grid g = ensemble_grid(5);
    EnsembleSpec spec{7, 9, {3, 4, 5}};
    const Ensemble many(spec, g);
    setenv("LPCALC_THREADS", "1", 1);
    const Ensemble one(spec, g);
    unsetenv("LPCALC_THREADS");
    for (int m = 0; m < many.size(); ++m) {
        CHECK(many.level(m) == spec.levels[static_cast<std::size_t>(m) % 3]);
        for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(many.member(m)[i] == one.member(m)[i]);
    }
    CHECK(many.jmax() == 6);
}

TEST_CASE("ensemble rejects a grid without room for the partition") {
    CHECK_THROWS_AS(Ensemble(EnsembleSpec{1, 2, {7}}, Grid(1, 1024, 64.0)), NyquistViolation);
}

TEST_CASE("product gate") {
    CHECK_NOTHROW(product_gate(2.0, 2.0));
    CHECK_NOTHROW(product_gate(1.0, 1.0));
    CHECK_NOTHROW(product_gate(0.5, 3.0));
    try {
        product_gate(2.0, 0.5);
        FAIL("gate accepted (2, 1/2)");
    } catch (const GateViolation& e) {
        CHECK(std::string(e.what()).find("p/(p+1)") != std::string::npos);
    }
    // min(1, p, q) = p / (p + 1) exactly is rejected: q = 2/3 against p = 2.
    CHECK_THROWS_AS(product_gate(2.0, 2.0 / 3.0), GateViolation);
    CHECK_THROWS_AS(product_gate(kInf, 2.0), GateViolation);
}

TEST_CASE("embedding gates") {
    CHECK_NOTHROW(embedding_gate(2.0, 2.0));
    CHECK_NOTHROW(embedding_gate(kInf, 2.0));
    CHECK_THROWS_AS(embedding_gate(kInf, 3.0), GateViolation);

    EmbeddingParams P;
    P.kind = EmbeddingParams::Kind::TlIntoBesov;
    P.p = 2.0;
    P.s = 0.5;
    P.p1 = 4.0;
    P.s1 = 0.25;
    P.q1 = 2.0;
    CHECK_NOTHROW(embedding_params_gate(P, 1));
    P.q1 = 1.0;
    CHECK_THROWS_AS(embedding_params_gate(P, 1), GateViolation);
    P.q1 = 2.0;
    P.s1 = 0.3;
    CHECK_THROWS_AS(embedding_params_gate(P, 1), GateViolation);
    P.s1 = 0.25;
    P.p1 = 1.0;
    CHECK_THROWS_AS(embedding_params_gate(P, 1), GateViolation);
}

TEST_CASE("ratio summary") {
    std::vector<RatioSample> s = {{2, 5, 4, 2, 2}, {0, 4, 1, 1, 1}, {1, 6, 0, 0, 0}, {3, 6, 8, 2, 4}};
    const auto r = summarize_ratios("x", s);
    REQUIRE(r.samples.size() == 3);
    CHECK(r.samples[0].member == 0);
    CHECK(r.min == 1.0);
    CHECK(r.max == 4.0);
    CHECK(r.spread == 4.0);
    // log ratio = (J - 4) ln 2 exactly.
    CHECK(r.trend_slope == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(r.bounded());
    CHECK_FALSE(r.no_trend());
}

TEST_CASE("embedding ratio of a constant") {
    const Grid g = ensemble_grid(4);
    const GridFunction c = GridFunction::sample(g, [](const Point&) { return cplx(3.0); });
    const Ensemble E(g, {c}, {4});
    // X_w: BMO part 0, sup_t |c| / w(t) = |c|; F^{1/2}_{2,2}: only phi_0, |c| L^{1/2}.
    const auto r = embedding_ratio(E, 2.0, 2.0);
    REQUIRE(r.samples.size() == 1);
    CHECK(r.samples[0].ratio == doctest::Approx(1.0 / 8.0).epsilon(1e-10));
}

TEST_CASE("product ratio of a single mode") {
    const Grid g = ensemble_grid(6);
    const long k = mode_near(14.0);  // phi_4 plateau [12, 16]; 2 xi in phi_5's [24, 32]
    const GridFunction f = cosine(g, k);
    const Ensemble E(g, {f, f}, {4, 4});
    const auto r = product_estimate_ratio(E, 2.0, 2.0);
    REQUIRE(r.samples.size() == 1);
    const double L = g.period();
    const double fn = 4.0 * std::sqrt(L / 2.0);  // 2^{4/2} ||cos||_2
    const double w5 = std::pow(1.0 + 5.0 * std::log(2.0), -0.5);
    const double prod = std::sqrt(0.25 * L + std::pow(2.0, 5.0) * w5 * w5 * 0.25 * L / 2.0);
    CHECK(r.samples[0].ratio == doctest::Approx(prod / (fn * fn)).epsilon(1e-10));
}

TEST_CASE("resolution independence on a plateau mode") {
    const Grid g = ensemble_grid(6);
    const GridFunction f = cosine(g, mode_near(3.5));
    const Ensemble E(g, {f}, {3});
    const auto r = resolution_independence_check(E, SpaceSpec{0.0, kInf, 2.0, std::nullopt});
    REQUIRE(r.samples.size() == 1);
    CHECK(r.samples[0].ratio > 0.5);
    CHECK(r.samples[0].ratio < 2.0);
    const Ensemble Z(g, {GridFunction::zeros(g)}, {3});
    CHECK(resolution_independence_check(Z, SpaceSpec{0.0, kInf, 2.0, std::nullopt}).samples.empty());
}

TEST_CASE("telescoping growth of a low mode") {
    const Grid g = ensemble_grid(5);
    const GridFunction f = cosine(g, mode_near(0.9));
    const auto R = build_resolution(BumpProfile{}, 6, g);
    for (double r : {1.0, 2.0, 4.0}) {
        const auto t = telescoping_growth_check(f, r, R);
        CHECK(t.besov_norm == doctest::Approx(1.0).epsilon(1e-12));
        const double a = r == 1.0 ? 0.0 : 1.0 - 1.0 / r;
        for (std::size_t j = 0; j < t.values.size(); ++j)
            CHECK(t.values[j] == doctest::Approx(std::pow(1.0 + j * std::log(2.0), -a)).epsilon(1e-10));
    }
}

TEST_CASE("besov and triebel-lizorkin embeddings on an ensemble") {
    const Ensemble E(EnsembleSpec{42, 12, {3, 4, 5}}, ensemble_grid(5));
    const auto one = besov_tl_embedding_check(E, EmbeddingParams{});
    CHECK(one.samples.size() == 12);
    CHECK(one.bounded());
    EmbeddingParams P;
    P.kind = EmbeddingParams::Kind::TlIntoBesov;
    P.s = 0.5;
    const auto two = besov_tl_embedding_check(E, P);
    CHECK(two.bounded());
    CHECK(two.no_trend());
}

TEST_CASE("sharpness oracle quadrature") {
    for (double a : {-0.84, -1.24, 0.5}) {
        const double l0 = std::log(2.0 * std::numbers::e);
        for (double R : {20.0, 1e3, 1e9}) {
            const double exact = (std::pow(std::log(R), a + 1.0) - std::pow(l0, a + 1.0)) / (a + 1.0);
            CHECK(sharpness_integral(a, R) == doctest::Approx(exact).epsilon(1e-10));
        }
    }
    CHECK(sharpness_integral(0.0, 2.0) == 0.0);
}

TEST_CASE("growth exponent of a pure power of log R") {
    std::vector<double> radii, values;
    for (int k = 2; k <= 30; ++k) {
        radii.push_back(std::ldexp(std::numbers::e, k));
        values.push_back(std::pow(std::log(radii.back()), 0.7));
    }
    CHECK(growth_exponent(radii, values) == doctest::Approx(0.7).epsilon(1e-3));
}

TEST_CASE("cauchy increments") {
    const auto c = cauchy_increments({1.0, 2.0, 2.5, 2.55});
    CHECK(c.decreasing);
    CHECK(c.last_over_first == doctest::Approx(0.05));
    CHECK(c.cauchy());
    CHECK_FALSE(cauchy_increments({1.0, 2.0, 3.0}).decreasing);
}

TEST_CASE("sharpness profile") {
    CHECK(sharpness_density(0.6, 2.0) == 0.0);
    CHECK(sharpness_density(0.6, -10.0) == doctest::Approx(1.0 / (10.0 * std::pow(std::log(10.0), 0.6))));
    SharpnessProfile P;
    CHECK(P.exponent() == doctest::Approx(0.16));
    CHECK(P.divergent());
    P.gamma = 0.6;
    CHECK(P.exponent() == doctest::Approx(-0.24));
    CHECK_FALSE(P.divergent());
    P.delta = 0.5;
    CHECK_THROWS_AS(P.validate(), InvalidArgument);
}

TEST_CASE("sharpness scan on a small grid") {
    SharpnessProfile P;
    P.points = 4096;
    P.jmax = 10;
    P.kmax = 7;
    const auto s = sharpness_scan(P);
    CHECK(s.oracle_ok);
    CHECK(s.membership.decreasing);
    CHECK(s.convolution_ok);
    for (std::size_t i = 1; i < s.squared_norms.size(); ++i) CHECK(s.squared_norms[i] > s.squared_norms[i - 1]);
}
