#pragma once

#include <array>
#include <span>

namespace lpcalc::fd {

/// Fourth-order accurate central stencil weights for the k-th derivative
/// (k = 0..4), on offsets -3..3, to be divided by h^k.
const std::array<double, 7>& stencil(int order);

/// k-th derivative of a scalar function by the fourth-order central stencil.
template <class F>
auto derivative(const F& f, double x, int order, double h) {
    const auto& w = stencil(order);
    decltype(f(x)) acc{};
    for (int m = -3; m <= 3; ++m) {
        const double c = w[static_cast<std::size_t>(m + 3)];
        if (c != 0.0) acc += c * f(x + m * h);
    }
    double scale = 1.0;
    for (int i = 0; i < order; ++i) scale *= h;
    return acc / scale;
}

}  // namespace lpcalc::fd
