#include "smslab/grid.hpp"

#include <string>

namespace smslab {

Grid build_grid(int d, double half_width, int n)
{
    if (d != 1 && d != 2)
        throw std::invalid_argument("build_grid: dimension must be 1 or 2, got " + std::to_string(d));
    if (!(half_width > 0.0))
        throw std::invalid_argument("build_grid: half_width must be positive");
    if (n < 8)
        throw std::invalid_argument("build_grid: need at least 8 nodes per axis, got " + std::to_string(n));

    Grid g;
    g.d = d;
    g.half_width = half_width;
    g.n = n;
    g.h = 2.0 * half_width / static_cast<double>(n);
    return g;
}

}  // namespace smslab
