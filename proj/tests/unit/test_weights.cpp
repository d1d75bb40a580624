#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lpcalc/errors.hpp"
#include "lpcalc/weights.hpp"

using namespace lpcalc;

TEST_CASE("prototype values") {
    const auto w = AdmissibleWeight::prototype(1.0);
    CHECK(w(1.0) == 1.0);
    CHECK(w(4.0) == 1.0);
    CHECK(w(std::exp(-1.0)) == doctest::Approx(2.0));
    const auto v = AdmissibleWeight::prototype(1.0, 1.0);
    CHECK(v(std::exp(-1.0)) == doctest::Approx(2.0 * (1.0 + std::log(2.0))));
    CHECK_THROWS_AS(AdmissibleWeight::prototype(1.0, -1.0), AdmissibilityViolation);
    CHECK_THROWS_AS(w(0.0), InvalidArgument);
    CHECK(w.power(0.5)(std::exp(-3.0)) == doctest::Approx(2.0));
}

TEST_CASE("table weights interpolate geometrically") {
    const auto w = AdmissibleWeight::table({1.0, 2.0, 4.0});
    CHECK(w.dyadic(1) == 2.0);
    CHECK(w(std::pow(2.0, -0.5)) == doctest::Approx(std::sqrt(2.0)));
    CHECK(w(3.0) == 1.0);
    CHECK_THROWS_AS(w(0.1), InvalidArgument);
    CHECK_THROWS_AS(AdmissibleWeight::table({1.0, -1.0}), InvalidArgument);
}

TEST_CASE("admissibility constants") {
    const auto w = AdmissibleWeight::prototype(1.0);
    const auto rep = check_admissible(w, 20);
    CHECK(rep.admissible);
    double c = 1e9, d = 0.0;
    for (int j = 1; j <= 20; ++j) {
        const double r = (1.0 + 2 * j * std::log(2.0)) / (1.0 + j * std::log(2.0));
        c = std::min(c, r);
        d = std::max(d, r);
    }
    CHECK(rep.c == doctest::Approx(c));
    CHECK(rep.d == doctest::Approx(d));
    CHECK(check_admissible(AdmissibleWeight::constant(), 8).c == 1.0);

    std::vector<double> zigzag;
    for (int j = 0; j <= 20; ++j) zigzag.push_back(j % 2 ? 2.0 : 1.0);
    CHECK_FALSE(check_admissible(AdmissibleWeight::table(zigzag), 10).admissible);

    std::vector<double> super;  // w(2^{-j}) = 2^{j}: w(2^{-2j})/w(2^{-j}) = 2^j unbounded
    for (int j = 0; j <= 40; ++j) super.push_back(std::ldexp(1.0, j));
    CHECK_FALSE(check_admissible(AdmissibleWeight::table(super), 20).admissible);
}

TEST_CASE("comparison exponent") {
    const auto b = comp_weights_bound(AdmissibleWeight::prototype(1.0), 16);
    CHECK(b.found);
    CHECK(b.c1 >= 0.5);
    CHECK(b.c2 <= 2.0);
    CHECK(comp_weights_bound(AdmissibleWeight::constant(), 8).b == 0.0);
    const auto [lo, hi] = comparable_values_bounds(AdmissibleWeight::prototype(1.0), 16);
    CHECK(lo > 0.0);
    CHECK(hi < 4.0);
    CHECK_THROWS_AS(power_weight(AdmissibleWeight::table({1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0}), 1.0, 4),
                    AdmissibilityViolation);
}

TEST_CASE("regularised weight") {
    const ResolutionOfUnity R(BumpProfile{}, 8);
    const auto one = regularize(AdmissibleWeight::constant(), R);
    for (double r = 0.0; r <= 256.0; r += 1.7) CHECK(one(r) == doctest::Approx(1.0).epsilon(1e-14));
    const auto w = regularize(AdmissibleWeight::prototype(1.0), R);
    CHECK(w(0.5) == 1.0);
    CHECK(w(16.0) == doctest::Approx(1.0 + 4 * std::log(2.0)));
    CHECK(w.equivalence_constant() >= 1.0);
    CHECK(w.equivalence_constant() < 2.0);
}

TEST_CASE("symbol estimates of the regularised weight") {
    const auto rep = check_symbol_decay(AdmissibleWeight::prototype(1.0), false, 3, {256, 512, 1024}, 64.0);
    CHECK(rep.bounded);
    const auto inv = check_symbol_decay(AdmissibleWeight::prototype(1.0), true, 3, {256, 512, 1024}, 64.0);
    CHECK(inv.bounded);
    const auto s = zero_order_symbol_check([](double x) { return std::cos(x); }, 2, 50.0, 0.01);
    CHECK(s[0] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(s[1] > 10.0);  // |sin x| <x> is unbounded: not a zero-order symbol
}
