#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "lpcalc/bilinear.hpp"
#include "lpcalc/errors.hpp"

using namespace lpcalc;

namespace {

constexpr double kPi = std::numbers::pi;

// L = 2 pi: frequencies are integers, Xi = 128 fits jmax = 6.
const Grid kGrid(1, 256, 2 * kPi);
const ResolutionOfUnity kR(BumpProfile{}, 6);

GridFunction random_band_limited(unsigned seed, long kmax) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    std::vector<cplx> F(kGrid.size());
    for (long k = -kmax; k <= kmax; ++k) F[kGrid.mode_index(k)] = cplx(n(rng), n(rng)) / (1.0 + std::abs(k));
    return inverse_transform(Spectrum(kGrid, F));
}

GridFunction mode(long k) {
    return GridFunction::sample(kGrid, [&](const Point& x) { return std::polar(1.0, static_cast<double>(k) * x[0]); });
}

double max_diff(const GridFunction& a, const GridFunction& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_abs(const GridFunction& a) {
    double m = 0.0;
    for (auto z : a.samples()) m = std::max(m, std::abs(z));
    return m;
}

}  // namespace

TEST_CASE("sigma = 1 gives the pointwise product") {
    const auto f = random_band_limited(1, 60), g = random_band_limited(2, 60);
    const auto fg = pointwise_product(f, g);
    const auto one = builtin_symbol("one");
    CHECK(max_diff(apply_bilinear(one, f, g), fg) <= 1e-10 * max_abs(fg));
    CHECK(max_diff(apply_bilinear_direct(one, f, g), fg) <= 1e-10 * max_abs(fg));
}

TEST_CASE("separable symbol a(xi)") {
    const auto f = random_band_limited(3, 50), g = random_band_limited(4, 50);
    const Multiplier a = [](const Point& xi) -> cplx { return 1.0 / (1.0 + xi[0] * xi[0]); };
    const auto sigma = separable_symbol("a", a, [](const Point&) -> cplx { return 1.0; }, -2.0);
    const auto expected = pointwise_product(apply_multiplier(a, 1.0, f), g);
    CHECK(max_diff(apply_bilinear(sigma, f, g), expected) <= 1e-10 * max_abs(expected));
}

TEST_CASE("two single modes") {
    const auto sigma = builtin_symbol("modulated");
    const long k1 = 7, k2 = -3;
    const auto out = apply_bilinear(sigma, mode(k1), mode(k2));
    for (std::size_t i = 0; i < kGrid.size(); i += 17) {
        const Point x = kGrid.position(i);
        const cplx expected = sigma(x, Point{double(k1), 0}, Point{double(k2), 0}) * std::polar(1.0, (k1 + k2) * x[0]);
        CHECK(std::abs(out[i] - expected) <= 1e-12);
    }
}

TEST_CASE("fast path agrees with the direct sum") {
    const auto f = random_band_limited(5, 40), g = random_band_limited(6, 40);
    for (const char* name : {"bracket", "inverse-bracket", "chirp"}) {
        const auto sigma = builtin_symbol(name);
        const auto fast = apply_bilinear_fast(sigma, f, g);
        const auto direct = apply_bilinear_direct(sigma, f, g);
        CHECK(max_diff(fast, direct) <= 1e-10 * max_abs(direct));
    }
    CHECK_THROWS_AS(apply_bilinear_fast(builtin_symbol("modulated"), f, g), InvalidArgument);
}

TEST_CASE("2-D fast path agrees with the direct sum") {
    const Grid g2(2, 16, 2 * kPi);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    auto rnd = [&] {
        std::vector<cplx> F(g2.size());
        for (long a = -3; a <= 3; ++a)
            for (long b = -3; b <= 3; ++b) F[g2.mode_index(a, b)] = {n(rng), n(rng)};
        return inverse_transform(Spectrum(g2, F));
    };
    const auto f = rnd(), g = rnd();
    const auto sigma = builtin_symbol("bracket");
    const auto direct = apply_bilinear_direct(sigma, f, g);
    CHECK(max_diff(apply_bilinear_fast(sigma, f, g), direct) <= 1e-10 * max_abs(direct));
    CHECK(max_diff(apply_bilinear(builtin_symbol("one"), f, g), pointwise_product(f, g)) <= 1e-10 * max_abs(direct));
}

TEST_CASE("bilinearity") {
    const auto f = random_band_limited(7, 30), h = random_band_limited(8, 30), g = random_band_limited(9, 30);
    const auto sigma = builtin_symbol("bracket");
    const cplx a(0.3, -1.2);
    const auto lhs = apply_bilinear(sigma, f.scaled(a).plus(h), g);
    const auto rhs = apply_bilinear(sigma, f, g).scaled(a).plus(apply_bilinear(sigma, h, g));
    CHECK(max_diff(lhs, rhs) <= 1e-12 * max_abs(rhs));
    const auto lhs2 = apply_bilinear(sigma, g, f.scaled(a).plus(h));
    const auto rhs2 = apply_bilinear(sigma, g, f).scaled(a).plus(apply_bilinear(sigma, g, h));
    CHECK(max_diff(lhs2, rhs2) <= 1e-12 * max_abs(rhs2));
}

TEST_CASE("BS seminorm surrogate") {
    const auto one = bs_seminorm(builtin_symbol("one"), 3);
    CHECK(one.value == doctest::Approx(1.0));
    CHECK(one.difference_max <= 1e-8);

    std::vector<double> bracket, chirp;
    for (double extent : {8.0, 16.0, 32.0, 64.0}) {
        BsLattice lat;
        lat.extent = extent;
        bracket.push_back(bs_seminorm(builtin_symbol("bracket"), 2, lat).value);
        chirp.push_back(bs_seminorm(builtin_symbol("chirp"), 2, lat).value);
    }
    CHECK(bracket.back() <= 1.1 * bracket.front());
    CHECK(bracket.back() >= 0.9 * bracket.front());
    for (std::size_t i = 1; i < chirp.size(); ++i) CHECK(chirp[i] > 2.0 * chirp[i - 1]);
    const auto mod = bs_seminorm(builtin_symbol("modulated"), 2);
    CHECK(mod.term(1, 0, 0) > 0.0);
    CHECK(std::isfinite(mod.value));
    CHECK_THROWS_AS(bs_seminorm(builtin_symbol("one"), 4), InvalidArgument);
}

TEST_CASE("paraproduct split reconstructs the symbol") {
    for (const char* name : {"one", "bracket", "modulated"}) {
        const auto d = split_paraproduct(builtin_symbol(name), kR);
        CHECK(d.reconstruction_residual(kGrid, {Point{}, Point{1.7, 0}}) <= 1e-10);
    }
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    const double c1 = u(rng), c2 = u(rng), c3 = u(rng);
    const BilinearSymbol random("random", [=](const Point&, const Point& xi, const Point& eta) {
        return cplx(c1 + c2 * std::sin(xi[0] / 7), c3 * std::cos(eta[0] / 5));
    }, 0.0, true);
    CHECK(split_paraproduct(random, kR).reconstruction_residual(kGrid) <= 1e-10);

    const auto one = split_paraproduct(builtin_symbol("one"), kR);
    CHECK(one.first(3, {}, Point{1.0, 0}, Point{0.5, 0}) == cplx(0.0));
    // sigma0 of 1 is sum_j phi_j(xi) phi_0(2^{-j} eta): one where |eta| <= |xi| / 2 deep in the band
    cplx s0 = 0.0;
    for (int j = 0; j <= 6; ++j) s0 += one.first(j, {}, Point{20.0, 0}, Point{3.0, 0});
    CHECK(std::abs(s0 - 1.0) <= 1e-12);
}

TEST_CASE("Fourier coefficients of the unit symbol") {
    SeriesOptions o;
    o.check_tail = false;
    const auto one = builtin_symbol("one");
    const auto c1 = fourier_coefficients(one, PieceKind::First, 1, 16, o);
    const auto c3 = fourier_coefficients(one, PieceKind::First, 3, 16, o);
    for (int k = -16; k <= 16; k += 3)
        for (int l = -16; l <= 16; l += 5) CHECK(std::abs(c1.coefficient(k, l) - c3.coefficient(k, l)) <= 1e-15);

    // c_00 = (2 pi)^{-2} int chi int chi0 by a fine midpoint rule
    const AnnulusCutoffs cut;
    double ichi = 0.0, ichi0 = 0.0;
    const int steps = 200000;
    for (int i = 0; i < steps; ++i) {
        const double t = -kPi + 2 * kPi * (i + 0.5) / steps;
        ichi += cut.chi(std::abs(t));
        ichi0 += cut.chi0(std::abs(t));
    }
    ichi *= 2 * kPi / steps;
    ichi0 *= 2 * kPi / steps;
    CHECK(std::abs(c1.coefficient(0, 0) - ichi * ichi0 / (4 * kPi * kPi)) <= 1e-9);

    for (int k = -16; k <= 16; ++k)
        for (int l = -16; l <= 16; ++l)
            CHECK(std::abs(c1.coefficient(-k, -l) - std::conj(c1.coefficient(k, l))) <= 1e-12);

    try {
        fourier_coefficients(one, PieceKind::First, 1, 16);
        FAIL("expected a throw");
    } catch (const SeriesTailError& e) {
        CHECK(e.tail() > 1e-6);
    }
}

TEST_CASE("coefficient decay exponents of the unit symbol") {
    SeriesOptions o;
    o.check_tail = false;
    o.samples = 1024;
    const auto s = fourier_coefficients(builtin_symbol("one"), PieceKind::First, 1, 256, o);
    const auto [a, b] = decay_exponents(s, 256);
    CHECK(a >= 3.6);
    const auto [a2, b2] = decay_exponents(s, 32);
    CHECK(b2 >= 3.6);
    CHECK(b >= 3.6);
    (void)a2;
}

TEST_CASE("normalised coefficients do not grow with the level") {
    for (const char* name : {"one", "bracket", "inverse-bracket"}) {
        const auto sigma = builtin_symbol(name);
        for (auto kind : {PieceKind::First, PieceKind::Second}) {
            const auto t = coefficient_trend(sigma, kind, 6, 16);
            CHECK(t.slope <= 0.05);
            CHECK(std::isfinite(*std::max_element(t.values.begin(), t.values.end())));
        }
    }
}

TEST_CASE("elementary families") {
    const auto f = random_band_limited(12, 60), g = random_band_limited(13, 60);
    const auto fams = paraproduct_families(kR);
    const auto direct = apply_bilinear_direct(builtin_symbol("one"), f, g);
    CHECK(max_diff(apply_elementary(fams, f, g), direct) <= 1e-9 * max_abs(direct));

    ElementaryFamily single;
    single.terms.push_back({1, nullptr, kR.block(1), kR.low_pass_multiplier(1)});
    const auto expected = pointwise_product(band_project(kR, 1, f), apply_multiplier(kR.low_pass_multiplier(1), 1.0, g));
    CHECK(max_diff(apply_elementary(single, f, g), expected) <= 1e-12);

    ElementaryFamily bad;
    bad.terms.push_back({3, nullptr, kR.block(0), kR.block(0)});  // phi_0 is not an annulus at scale 2^3
    CHECK_THROWS_AS(apply_elementary(bad, f, g), SupportViolation);

    // m_j = 2^{-j}: amplitude decays with the band
    std::vector<double> norms;
    for (long band : {4L, 8L, 16L, 32L}) {
        const auto fb = mode(band), gb = mode(1);
        ElementaryFamily fam;
        for (int j = 0; j <= 6; ++j) {
            const double m = std::exp2(-j);
            fam.terms.push_back({j, [m](const Point&) { return cplx(m); }, kR.block(j), kR.low_pass_multiplier(j)});
        }
        norms.push_back(lp_norm(apply_elementary(fam, fb, gb), 2.0));
    }
    for (std::size_t i = 1; i < norms.size(); ++i) CHECK(norms[i] < norms[i - 1]);
}

TEST_CASE("series application converges to the operator") {
    const auto f = random_band_limited(14, 40), g = random_band_limited(15, 40);
    const auto one = builtin_symbol("one");
    const auto exact = apply_bilinear(one, f, g);
    SeriesOptions o;
    o.samples = 512;
    const double e16 = max_diff(apply_series(one, kR, 16, f, g, o), exact);
    const double e128 = max_diff(apply_series(one, kR, 128, f, g, o), exact);
    CHECK(e128 < e16);
    CHECK(e128 <= 1e-2 * max_abs(exact));
}
