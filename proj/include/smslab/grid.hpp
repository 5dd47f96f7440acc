#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>

namespace smslab {

/// Uniform periodic grid on the box [-L, L)^d with n nodes per axis.
///
/// Nodes along each axis sit at x_j = -L + j*h, j = 0..n-1, with h = 2L/n,
/// and x_n is identified with x_0. Fields are stored flat, row-major
/// (axis 0 outermost), so in 2-d the flat index of node (i, j) is i*n + j.
struct Grid {
    int d = 1;              ///< dimension, 1 or 2
    double half_width = 1;  ///< L; the domain is [-L, L) per axis
    int n = 8;              ///< nodes per axis
    double h = 0.25;        ///< spacing 2L/n (derived)

    std::size_t size() const
    {
        std::size_t s = static_cast<std::size_t>(n);
        return d == 1 ? s : s * s;
    }

    double coord(int index_on_axis) const
    {
        return -half_width + h * static_cast<double>(index_on_axis);
    }

    /// Coordinates of the node with flat index `flat`.
    std::array<double, 2> node(std::size_t flat) const
    {
        if (d == 1) return {coord(static_cast<int>(flat)), 0.0};
        const int i = static_cast<int>(flat) / n;
        const int j = static_cast<int>(flat) % n;
        return {coord(i), coord(j)};
    }

    std::size_t flat(int i, int j = 0) const
    {
        return d == 1 ? static_cast<std::size_t>(i)
                      : static_cast<std::size_t>(i) * n + j;
    }

    /// Periodic wrap of an axis index into [0, n).
    int wrap(int i) const
    {
        i %= n;
        return i < 0 ? i + n : i;
    }

    /// Signed displacement x - y reduced to the fundamental window [-L, L).
    double wrap_displacement(double delta) const
    {
        const double period = 2.0 * half_width;
        double r = delta - period * static_cast<long long>(delta / period);
        if (r < -half_width) r += period;
        if (r >= half_width) r -= period;
        return r;
    }

    bool operator==(const Grid&) const = default;
};

/// Validating factory for Grid; rejects unsupported dimension, non-positive
/// half width and undersized grids.
Grid build_grid(int d, double half_width, int n);

}  // namespace smslab
