#include "lpcalc/finite_difference.hpp"

#include "lpcalc/errors.hpp"

namespace lpcalc::fd {

const std::array<double, 7>& stencil(int order) {
    static const std::array<std::array<double, 7>, 5> table = {{
        {0, 0, 0, 1, 0, 0, 0},
        {0, 1.0 / 12, -8.0 / 12, 0, 8.0 / 12, -1.0 / 12, 0},
        {0, -1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12, 0},
        {1.0 / 8, -1.0, 13.0 / 8, 0, -13.0 / 8, 1.0, -1.0 / 8},
        {-1.0 / 6, 2.0, -13.0 / 2, 28.0 / 3, -13.0 / 2, 2.0, -1.0 / 6},
    }};
    if (order < 0 || order > 4) throw InvalidArgument("finite-difference order must be in [0, 4]");
    return table[static_cast<std::size_t>(order)];
}

}  // namespace lpcalc::fd
