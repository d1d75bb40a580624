#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lpcalc {

using cplx = std::complex<double>;

/// A point of R^n (n <= 2); unused trailing components are zero.
using Point = std::array<double, 2>;

inline double euclidean_norm(const Point& v) { return std::hypot(v[0], v[1]); }

/// Uniform periodic grid on [0, L)^n with N points per axis.
///
/// Samples are stored row-major (last axis fastest). Spectral data uses the
/// usual FFT ordering per axis: index i carries the integer mode
/// k = i for i < N/2 and k = i - N otherwise, so the mode set is
/// [-N/2, N/2) and the frequency is 2*pi*k/L.
class Grid {
  public:
    Grid(int dim, std::size_t points_per_axis, double period);

    int dim() const { return dim_; }
    std::size_t points_per_axis() const { return points_; }
    double period() const { return period_; }
    std::size_t size() const { return size_; }

    double spacing() const { return period_ / static_cast<double>(points_); }
    double frequency_step() const;
    /// pi N / L, the largest representable frequency magnitude per axis.
    double nyquist() const;
    /// h^n, the quadrature weight of one sample.
    double cell_volume() const { return std::pow(spacing(), dim_); }
    /// L^n.
    double volume() const { return std::pow(period_, dim_); }

    long mode(std::size_t axis_index) const;
    /// Flat index -> per-axis indices.
    std::array<std::size_t, 2> unflatten(std::size_t flat) const;
    std::size_t flatten(std::size_t i0, std::size_t i1 = 0) const;

    Point position(std::size_t flat) const;
    Point frequency(std::size_t flat) const;
    double frequency_norm(std::size_t flat) const { return euclidean_norm(frequency(flat)); }
    /// Flat spectral index of the integer mode vector (k0, k1), wrapped mod N.
    std::size_t mode_index(long k0, long k1 = 0) const;

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.dim_ == b.dim_ && a.points_ == b.points_ && a.period_ == b.period_;
    }

  private:
    int dim_;
    std::size_t points_;
    double period_;
    std::size_t size_;
};

/// Immutable complex samples of a function on a grid.
class GridFunction {
  public:
    GridFunction(Grid grid, std::vector<cplx> samples);
    static GridFunction zeros(const Grid& grid);

    template <class F>
    static GridFunction sample(const Grid& grid, F&& f) {
        std::vector<cplx> v(grid.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.position(i));
        return GridFunction(grid, std::move(v));
    }

    const Grid& grid() const { return grid_; }
    std::span<const cplx> samples() const { return samples_; }
    cplx operator[](std::size_t i) const { return samples_[i]; }
    std::size_t size() const { return samples_.size(); }

    GridFunction scaled(cplx factor) const;
    GridFunction plus(const GridFunction& other) const;
    GridFunction minus(const GridFunction& other) const;

  private:
    Grid grid_;
    std::vector<cplx> samples_;
};

/// Immutable Fourier coefficients, FFT-ordered, of a function on a grid.
class Spectrum {
  public:
    Spectrum(Grid grid, std::vector<cplx> coefficients);

    const Grid& grid() const { return grid_; }
    std::span<const cplx> coefficients() const { return coeffs_; }
    cplx operator[](std::size_t i) const { return coeffs_[i]; }
    std::size_t size() const { return coeffs_.size(); }

  private:
    Grid grid_;
    std::vector<cplx> coeffs_;
};

void require_same_grid(const Grid& a, const Grid& b, const char* where);

}  // namespace lpcalc
