#include "lpcalc/grid.hpp"

#include <numbers>
#include <string>

#include "lpcalc/errors.hpp"

namespace lpcalc {

namespace {

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

}  // namespace

Grid::Grid(int dim, std::size_t points_per_axis, double period)
    : dim_(dim), points_(points_per_axis), period_(period) {
    if (dim != 1 && dim != 2) throw InvalidArgument("grid dimension must be 1 or 2");
    if (points_per_axis < 8 || !is_power_of_two(points_per_axis))
        throw InvalidArgument("points per axis must be a power of two >= 8, got " +
                              std::to_string(points_per_axis));
    if (!(period > 0.0) || !std::isfinite(period)) throw InvalidArgument("period must be positive");
    size_ = dim == 1 ? points_ : points_ * points_;
}

double Grid::frequency_step() const { return 2.0 * std::numbers::pi / period_; }

double Grid::nyquist() const { return std::numbers::pi * static_cast<double>(points_) / period_; }

long Grid::mode(std::size_t i) const {
    const auto n = static_cast<long>(points_);
    const auto k = static_cast<long>(i);
    return k < n / 2 ? k : k - n;
}

std::array<std::size_t, 2> Grid::unflatten(std::size_t flat) const {
    if (dim_ == 1) return {flat, 0};
    return {flat / points_, flat % points_};
}

std::size_t Grid::flatten(std::size_t i0, std::size_t i1) const {
    return dim_ == 1 ? i0 : i0 * points_ + i1;
}

Point Grid::position(std::size_t flat) const {
    const auto idx = unflatten(flat);
    const double h = spacing();
    Point x{h * static_cast<double>(idx[0]), 0.0};
    if (dim_ == 2) x[1] = h * static_cast<double>(idx[1]);
    return x;
}

Point Grid::frequency(std::size_t flat) const {
    const auto idx = unflatten(flat);
    const double dk = frequency_step();
    Point xi{dk * static_cast<double>(mode(idx[0])), 0.0};
    if (dim_ == 2) xi[1] = dk * static_cast<double>(mode(idx[1]));
    return xi;
}

std::size_t Grid::mode_index(long k0, long k1) const {
    const auto n = static_cast<long>(points_);
    auto wrap = [n](long k) { return static_cast<std::size_t>(((k % n) + n) % n); };
    return dim_ == 1 ? wrap(k0) : flatten(wrap(k0), wrap(k1));
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
    if (!(a == b)) throw InvalidArgument(std::string(where) + ": grid mismatch");
}

GridFunction::GridFunction(Grid grid, std::vector<cplx> samples)
    : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size())
        throw InvalidArgument("sample count " + std::to_string(samples_.size()) +
                              " does not match grid size " + std::to_string(grid_.size()));
}

GridFunction GridFunction::zeros(const Grid& grid) {
    return GridFunction(grid, std::vector<cplx>(grid.size()));
}

GridFunction GridFunction::scaled(cplx factor) const {
    std::vector<cplx> v(samples_);
    for (auto& z : v) z *= factor;
    return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::plus(const GridFunction& other) const {
    require_same_grid(grid_, other.grid_, "plus");
    std::vector<cplx> v(samples_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += other.samples_[i];
    return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::minus(const GridFunction& other) const {
    require_same_grid(grid_, other.grid_, "minus");
    std::vector<cplx> v(samples_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= other.samples_[i];
    return GridFunction(grid_, std::move(v));
}

Spectrum::Spectrum(Grid grid, std::vector<cplx> coefficients)
    : grid_(grid), coeffs_(std::move(coefficients)) {
    if (coeffs_.size() != grid_.size())
        throw InvalidArgument("coefficient count does not match grid size");
}

}  // namespace lpcalc
