#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lpcalc/errors.hpp"
#include "lpcalc/partition.hpp"

using namespace lpcalc;

namespace {

// eta written out from its definition, independent of the library profile.
double eta_ref(double t) {
    if (t <= 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    const double a = std::exp(-1.0 / (1.0 - t));
    const double b = std::exp(-1.0 / t);
    return a / (a + b);
}

}  // namespace

TEST_CASE("profile shape") {
    const BumpProfile eta;
    for (double t : {-1.0, 0.0, 0.1, 0.3, 0.5, 0.77, 1.0, 2.0}) CHECK(eta(t) == doctest::Approx(eta_ref(t)).epsilon(1e-14));
    CHECK(eta(0.5) == doctest::Approx(0.5));
    const BumpProfile alt(BumpProfile::Kind::Smoothstep7);
    CHECK(alt(0.0) == 1.0);
    CHECK(alt(1.0) == 0.0);
    double gap = 0.0;
    for (int i = 0; i <= 100; ++i) gap = std::max(gap, std::abs(alt(i / 100.0) - eta(i / 100.0)));
    CHECK(gap >= 0.05);
}

TEST_CASE("phi_0 plateau and support, annuli of phi_j") {
    const ResolutionOfUnity R(BumpProfile{}, 6);
    CHECK(R.phi0(0.0) == 1.0);
    CHECK(R.phi0(1.0) == 1.0);
    CHECK(R.phi0(1.5) == 0.0);
    CHECK(R.phi(3, 1.0) == 0.0);
    CHECK(R.phi(3, 3.9) == 0.0);
    CHECK(R.phi(3, 8.0) == doctest::Approx(1.0));
    CHECK(R.phi(3, 16.1) == 0.0);
    CHECK_THROWS_AS(ResolutionOfUnity(BumpProfile{}, 1), InvalidArgument);
}

TEST_CASE("partition of unity on the frequency lattice") {
    for (auto kind : {BumpProfile::Kind::Exponential, BumpProfile::Kind::Smoothstep7}) {
        const ResolutionOfUnity R(BumpProfile(kind), 5);
        const auto rep = check_partition(R, 2 * std::numbers::pi / 64.0);
        CHECK(rep.partition_residual <= 1e-12);
        CHECK(rep.telescoping_residual <= 1e-12);
        CHECK(rep.support_violation == 0.0);
        CHECK(rep.plateau_violation == 0.0);
        REQUIRE(rep.derivative_bound.size() == 4);
        for (double s : rep.derivative_spread) CHECK(s < 1.01);
    }
}

TEST_CASE("direct sum of blocks equals one") {
    const ResolutionOfUnity R(BumpProfile{}, 7);
    for (double r = 0.0; r <= 64.0; r += 0.173) {
        double sum = 0.0;
        for (int j = 0; j <= 7; ++j) sum += R.phi(j, r);
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("Nyquist precondition") {
    const Grid g(1, 1024, 64.0);  // Xi = 16 pi
    CHECK_NOTHROW(build_resolution(BumpProfile{}, 4, g));
    try {
        build_resolution(BumpProfile{}, 7, g);
        FAIL("expected a throw");
    } catch (const NyquistViolation& e) {
        CHECK(std::string(e.what()).find("N") != std::string::npos);
    }
    CHECK(build_resolution(BumpProfile{}, 7).fits(Grid(1, 8192, 64.0)));
}

TEST_CASE("band projection isolates one annulus") {
    const Grid g(1, 512, 64.0);
    const auto R = build_resolution(BumpProfile{}, 3, g);
    const double xi0 = 2 * std::numbers::pi * 35 / 64.0;  // |xi| ~ 3.44, where phi_2 = 1
    const auto f = GridFunction::sample(g, [&](const Point& x) { return std::polar(1.0, xi0 * x[0]); });
    const auto b2 = band_project(R, 2, f);
    const auto b1 = band_project(R, 1, f);
    CHECK(std::abs(b2[5] - f[5]) < 1e-12);
    CHECK(std::abs(b1[5]) < 1e-12);
    CHECK_THROWS_AS(band_project(R, 4, f), InvalidArgument);
}

TEST_CASE("auxiliary cutoffs") {
    const AnnulusCutoffs c;
    CHECK(c.chi0(2.0) == 1.0);
    CHECK(c.chi0(3.0) == 0.0);
    CHECK(c.chi(0.5) == 1.0);
    CHECK(c.chi(2.0) == 1.0);
    CHECK(c.chi(1.0 / 3.0) == 0.0);
    CHECK(c.chi(3.0) == 0.0);
    CHECK(c.ring(0.25) == 0.0);
    CHECK(c.ring(4.0) == 0.0);
    CHECK(ball_cutoff(BumpProfile{}, 1.0) == 1.0);
    CHECK(ball_cutoff(BumpProfile{}, 2.0) == 0.0);
}
