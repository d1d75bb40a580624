#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <sstream>

#include "lpcalc/errors.hpp"
#include "lpcalc/lpgf.hpp"
#include "lpcalc/spectral.hpp"

using namespace lpcalc;

namespace {

GridFunction random_function(const Grid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    std::vector<cplx> v(g.size());
    for (auto& z : v) z = {n(rng), n(rng)};
    return GridFunction(g, v);
}

// h^n sum_x f(x) e^{-i x.xi}, evaluated term by term.
std::vector<cplx> direct_dft(const GridFunction& f) {
    const Grid& g = f.grid();
    std::vector<cplx> out(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        const Point xi = g.frequency(k);
        cplx acc = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const Point x = g.position(i);
            acc += f[i] * std::polar(1.0, -(x[0] * xi[0] + x[1] * xi[1]));
        }
        out[k] = acc * g.cell_volume();
    }
    return out;
}

double rel_err(std::span<const cplx> a, std::span<const cplx> b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("grid validation and geometry") {
    CHECK_THROWS_AS(Grid(3, 16, 1.0), InvalidArgument);
    CHECK_THROWS_AS(Grid(1, 12, 1.0), InvalidArgument);
    CHECK_THROWS_AS(Grid(1, 4, 1.0), InvalidArgument);
    CHECK_THROWS_AS(Grid(1, 16, 0.0), InvalidArgument);
    const Grid g(1, 64, 64.0);
    CHECK(g.spacing() == doctest::Approx(1.0));
    CHECK(g.nyquist() == doctest::Approx(std::numbers::pi));
    CHECK(g.mode(31) == 31);
    CHECK(g.mode(32) == -32);
    CHECK(g.mode_index(-1) == 63);
    const Grid g2(2, 8, 1.0);
    CHECK(g2.size() == 64);
    CHECK(g2.flatten(2, 3) == 19);
    CHECK(g2.unflatten(19) == std::array<std::size_t, 2>{2, 3});
}

TEST_CASE("forward transform matches direct DFT in 1-D and 2-D") {
    for (int dim : {1, 2}) {
        const Grid g(dim, 16, 5.0);
        const auto f = random_function(g, 7 + dim);
        const auto F = forward_transform(f);
        const auto ref = direct_dft(f);
        CHECK(rel_err(F.coefficients(), ref) < 1e-12);
    }
}

TEST_CASE("five-mode input lands on the expected coefficients") {
    const Grid g(1, 64, 64.0);
    const long modes[] = {0, 3, -5, 11, 31};
    const cplx amps[] = {1.0, {0.5, 0.25}, -2.0, {0, 1}, 0.125};
    const auto f = GridFunction::sample(g, [&](const Point& x) {
        cplx acc = 0.0;
        for (int m = 0; m < 5; ++m) acc += amps[m] * std::polar(1.0, 2 * std::numbers::pi * modes[m] * x[0] / 64.0);
        return acc;
    });
    const auto F = forward_transform(f);
    for (int m = 0; m < 5; ++m) CHECK(std::abs(F[g.mode_index(modes[m])] - amps[m] * 64.0) < 1e-10);
}

TEST_CASE("Parseval and round trip") {
    for (int dim : {1, 2}) {
        const Grid g(dim, 32, 7.0);
        const auto f = random_function(g, 3);
        const auto F = forward_transform(f);
        double sf = 0.0, sF = 0.0;
        for (auto z : f.samples()) sf += std::norm(z);
        for (auto z : F.coefficients()) sF += std::norm(z);
        CHECK(std::abs(sF - parseval_constant(g) * sf) / sF < 1e-12);
        CHECK(rel_err(inverse_transform(F).samples(), f.samples()) < 1e-12);
    }
}

TEST_CASE("multiplier application") {
    const Grid g(1, 32, 2 * std::numbers::pi);
    const auto f = GridFunction::sample(g, [](const Point& x) { return std::cos(3 * x[0]); });
    const auto d2 = apply_multiplier([](const Point& xi) -> cplx { return -xi[0] * xi[0]; }, 1.0, f);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(d2[i] + 9.0 * f[i]) < 1e-12);
    CHECK_THROWS_AS(apply_multiplier([](const Point&) -> cplx { return 1.0; }, 0.0, f), InvalidArgument);
    try {
        apply_multiplier([](const Point& xi) -> cplx { return 1.0 / xi[0]; }, 1.0, f);
        FAIL("expected a throw");
    } catch (const InvalidArgument& e) {
        CHECK(std::string(e.what()).find("frequency") != std::string::npos);
    }
}

TEST_CASE("Lp norms of a constant") {
    const Grid g(2, 8, 4.0);
    const auto c = GridFunction::sample(g, [](const Point&) { return cplx(3.0); });
    CHECK(lp_norm(c, 2.0) == doctest::Approx(3.0 * 4.0));
    CHECK(lp_norm(c, 1.0) == doctest::Approx(3.0 * 16.0));
    CHECK(lp_norm(c, kInf) == doctest::Approx(3.0));
    CHECK_THROWS_AS(lp_norm(c, 0.0), InvalidArgument);
}

TEST_CASE("LPGF round trip is bit exact") {
    const Grid g(2, 8, 3.5);
    const auto f = random_function(g, 11);
    const auto bytes = encode_lpgf(f);
    CHECK(bytes.size() == 4 + 4 + 4 + 4 + 8 + 16 * 64);
    const auto back = decode_lpgf(bytes);
    CHECK(back.grid() == g);
    CHECK(std::memcmp(back.samples().data(), f.samples().data(), 16 * 64) == 0);
}

TEST_CASE("LPGF errors") {
    const Grid g(1, 8, 1.0);
    auto bytes = encode_lpgf(GridFunction::zeros(g));
    auto bad = bytes;
    bad[0] = 'X';
    try {
        decode_lpgf(bad);
        FAIL("expected a throw");
    } catch (const FormatError& e) {
        CHECK(e.offset() == 0);
    }
    bad = bytes;
    bad[4] = 2;
    try {
        decode_lpgf(bad);
        FAIL("expected a throw");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("version") != std::string::npos);
    }
    bad = bytes;
    bad[8] = 3;
    CHECK_THROWS_AS(decode_lpgf(bad), FormatError);
    bad = bytes;
    bad.resize(bad.size() - 1);
    CHECK_THROWS_AS(decode_lpgf(bad), FormatError);
    CHECK_THROWS_AS(read_lpgf("/nonexistent/dir/file.lpgf"), std::ios_base::failure);
}

TEST_CASE("CSV output has one row per sample") {
    const Grid g(1, 8, 1.0);
    std::ostringstream s;
    write_csv(GridFunction::zeros(g), s);
    const auto text = s.str();
    CHECK(std::count(text.begin(), text.end(), '\n') >= 8);
}
