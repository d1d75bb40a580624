#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "lpcalc/grid.hpp"

namespace lpcalc {

/// Axis-aligned cube on the periodic grid: `count` samples per axis starting at
/// `start` (wrapping around the torus).
struct Cube {
    int level = 0;  ///< side 2^{-level}
    bool shifted = false;
    std::array<std::size_t, 2> start{};
    std::array<std::size_t, 2> count{};
    double side = 0;
};

/// Dyadic cubes of side 2^{-k} tiling [0, L)^n for every level k between
/// `coarsest` (side <= L) and `finest` (side >= h), optionally with the
/// half-shifted translates. A cube's integral is the sample mean over the grid
/// points it contains.
class DyadicCubeSet {
  public:
    explicit DyadicCubeSet(const Grid& grid, bool half_shift = true);
    DyadicCubeSet(const Grid& grid, int finest, int coarsest, bool half_shift);

    const Grid& grid() const { return grid_; }
    int finest_level() const { return finest_; }
    int coarsest_level() const { return coarsest_; }
    bool half_shift() const { return half_shift_; }

    std::vector<Cube> cubes(int level) const;

    double mean(std::span<const double> field, const Cube& q) const;
    cplx mean(std::span<const cplx> field, const Cube& q) const;
    /// (1/|Q|) int_Q |f - f_Q|.
    double oscillation(std::span<const cplx> field, const Cube& q) const;

    template <class F>
    void for_each_sample(const Cube& q, F&& visit) const {
        const std::size_t n = grid_.points_per_axis();
        if (grid_.dim() == 1) {
            for (std::size_t a = 0; a < q.count[0]; ++a) visit((q.start[0] + a) % n);
            return;
        }
        for (std::size_t a = 0; a < q.count[0]; ++a)
            for (std::size_t b = 0; b < q.count[1]; ++b)
                visit(grid_.flatten((q.start[0] + a) % n, (q.start[1] + b) % n));
    }

  private:
    Grid grid_;
    int finest_;
    int coarsest_;
    bool half_shift_;
};

}  // namespace lpcalc
