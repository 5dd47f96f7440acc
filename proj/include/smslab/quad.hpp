#pragma once

#include <cstddef>
#include <stdexcept>

namespace smslab {

/// Composite Simpson rule with `count` nodes (odd, >= 3) on [a, b].
template <class Fn>
double simpson(Fn&& f, double a, double b, std::size_t count)
{
    if (count < 3 || count % 2 == 0)
        throw std::invalid_argument("simpson: node count must be odd and >= 3");
    const double h = (b - a) / static_cast<double>(count - 1);
    double s = f(a) + f(b);
    for (std::size_t k = 1; k + 1 < count; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(k));
    return s * h / 3.0;
}

}  // namespace smslab
