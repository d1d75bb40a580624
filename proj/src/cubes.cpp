#include "lpcalc/cubes.hpp"

#include <cmath>

#include "lpcalc/errors.hpp"

namespace lpcalc {

namespace {

struct AxisInterval {
    std::size_t start;
    std::size_t count;
};

std::vector<AxisInterval> axis_intervals(const Grid& g, double side, bool shifted) {
    const std::size_t n = g.points_per_axis();
    const double h = g.spacing();
    const double L = g.period();
    if (side >= L * (1.0 - 1e-12)) {
        if (shifted) return {};
        return {{0, n}};
    }
    const auto cubes = static_cast<std::size_t>(std::ceil(L / side - 1e-9));
    std::vector<AxisInterval> out;
    out.reserve(cubes);
    const double offset = shifted ? 0.5 * side : 0.0;
    for (std::size_t m = 0; m < cubes; ++m) {
        const double a = offset + static_cast<double>(m) * side;
        const auto lo = static_cast<long>(std::ceil(a / h - 1e-9));
        const auto hi = static_cast<long>(std::ceil((a + side) / h - 1e-9));
        const auto count = static_cast<std::size_t>(std::max(hi - lo, 0L));
        if (count == 0) continue;
        out.push_back({static_cast<std::size_t>(lo) % n, std::min(count, n)});
    }
    return out;
}

}  // namespace

DyadicCubeSet::DyadicCubeSet(const Grid& grid, bool half_shift)
    : grid_(grid), half_shift_(half_shift) {
    finest_ = static_cast<int>(std::floor(std::log2(1.0 / grid.spacing()) + 1e-9));
    coarsest_ = -static_cast<int>(std::floor(std::log2(grid.period()) + 1e-9));
}

DyadicCubeSet::DyadicCubeSet(const Grid& grid, int finest, int coarsest, bool half_shift)
    : grid_(grid), finest_(finest), coarsest_(coarsest), half_shift_(half_shift) {
    if (finest < coarsest) throw InvalidArgument("finest cube level must not be coarser than coarsest");
}

std::vector<Cube> DyadicCubeSet::cubes(int level) const {
    const double side = std::ldexp(1.0, -level);
    std::vector<Cube> out;
    for (int shift = 0; shift <= (half_shift_ ? 1 : 0); ++shift) {
        const auto axis = axis_intervals(grid_, side, shift == 1);
        if (grid_.dim() == 1) {
            for (const auto& a : axis) out.push_back({level, shift == 1, {a.start, 0}, {a.count, 1}, side});
        } else {
            for (const auto& a : axis)
                for (const auto& b : axis)
                    out.push_back({level, shift == 1, {a.start, b.start}, {a.count, b.count}, side});
        }
    }
    return out;
}

double DyadicCubeSet::mean(std::span<const double> field, const Cube& q) const {
    double acc = 0.0;
    std::size_t count = 0;
    for_each_sample(q, [&](std::size_t i) {
        acc += field[i];
        ++count;
    });
    return acc / static_cast<double>(count);
}

cplx DyadicCubeSet::mean(std::span<const cplx> field, const Cube& q) const {
    cplx acc = 0.0;
    std::size_t count = 0;
    for_each_sample(q, [&](std::size_t i) {
        acc += field[i];
        ++count;
    });
    return acc / static_cast<double>(count);
}

double DyadicCubeSet::oscillation(std::span<const cplx> field, const Cube& q) const {
    const cplx m = mean(field, q);
    double acc = 0.0;
    std::size_t count = 0;
    for_each_sample(q, [&](std::size_t i) {
        acc += std::abs(field[i] - m);
        ++count;
    });
    return acc / static_cast<double>(count);
}

}  // namespace lpcalc
