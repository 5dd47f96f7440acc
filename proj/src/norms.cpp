#include "smslab/norms.hpp"

#include <cmath>

namespace smslab {

namespace {

double cell_volume(const Grid& g) { return g.d == 1 ? g.h : g.h * g.h; }

// Flat-index offset of the periodic neighbour one node over along `axis`.
template <class F, class Fn>
void for_each_neighbour_pair(const F& u, int axis, Fn&& fn)
{
    const int n = u.grid.n;
    if (u.grid.d == 1) {
        for (int i = 0; i < n; ++i)
            fn(static_cast<std::size_t>(i),
               static_cast<std::size_t>(u.grid.wrap(i + 1)),
               static_cast<std::size_t>(u.grid.wrap(i - 1)));
        return;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const std::size_t c = u.grid.flat(i, j);
            std::size_t p, m;
            if (axis == 0) {
                p = u.grid.flat(u.grid.wrap(i + 1), j);
                m = u.grid.flat(u.grid.wrap(i - 1), j);
            } else {
                p = u.grid.flat(i, u.grid.wrap(j + 1));
                m = u.grid.flat(i, u.grid.wrap(j - 1));
            }
            fn(c, p, m);
        }
}

}  // namespace

double l2_norm(const ComplexField& u)
{
    double s = 0.0;
    for (const Complex& z : u.values) s += std::norm(z);
    return std::sqrt(cell_volume(u.grid) * s);
}

double l2_norm(const RealField& f)
{
    double s = 0.0;
    for (double v : f.values) s += v * v;
    return std::sqrt(cell_volume(f.grid) * s);
}

Complex inner_product(const ComplexField& u, const ComplexField& v)
{
    require_same_grid(u.grid, v.grid, "inner_product");
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * std::conj(v[i]);
    return cell_volume(u.grid) * s;
}

std::vector<ComplexField> gradient(const ComplexField& u)
{
    std::vector<ComplexField> out;
    const double inv2h = 1.0 / (2.0 * u.grid.h);
    for (int axis = 0; axis < u.grid.d; ++axis) {
        ComplexField g(u.grid);
        for_each_neighbour_pair(u, axis, [&](std::size_t c, std::size_t p, std::size_t m) {
            g[c] = (u[p] - u[m]) * inv2h;
        });
        out.push_back(std::move(g));
    }
    return out;
}

std::vector<RealField> gradient(const RealField& f)
{
    std::vector<RealField> out;
    const double inv2h = 1.0 / (2.0 * f.grid.h);
    for (int axis = 0; axis < f.grid.d; ++axis) {
        RealField g(f.grid);
        for_each_neighbour_pair(f, axis, [&](std::size_t c, std::size_t p, std::size_t m) {
            g[c] = (f[p] - f[m]) * inv2h;
        });
        out.push_back(std::move(g));
    }
    return out;
}

ComplexField laplacian(const ComplexField& u)
{
    ComplexField r(u.grid);
    const double invh2 = 1.0 / (u.grid.h * u.grid.h);
    for (int axis = 0; axis < u.grid.d; ++axis)
        for_each_neighbour_pair(u, axis, [&](std::size_t c, std::size_t p, std::size_t m) {
            r[c] += (u[p] - 2.0 * u[c] + u[m]) * invh2;
        });
    return r;
}

ComplexField forward_diff(const ComplexField& u, int axis)
{
    ComplexField r(u.grid);
    const double invh = 1.0 / u.grid.h;
    for_each_neighbour_pair(u, axis, [&](std::size_t c, std::size_t p, std::size_t) {
        r[c] = (u[p] - u[c]) * invh;
    });
    return r;
}

ComplexField backward_diff(const ComplexField& u, int axis)
{
    ComplexField r(u.grid);
    const double invh = 1.0 / u.grid.h;
    for_each_neighbour_pair(u, axis, [&](std::size_t c, std::size_t, std::size_t m) {
        r[c] = (u[c] - u[m]) * invh;
    });
    return r;
}

double h2_norm(const ComplexField& u)
{
    auto grads = gradient(u);
    ComplexField grad_sum = grads[0];
    for (int axis = 1; axis < u.grid.d; ++axis) grad_sum = grad_sum + grads[axis];
    return l2_norm(u) + l2_norm(grad_sum) + l2_norm(laplacian(u));
}

double w1inf_norm(const RealField& f)
{
    double sup = 0.0;
    for (double v : f.values) sup = std::max(sup, std::abs(v));
    double dsup = 0.0;
    const double inv2h = 1.0 / (2.0 * f.grid.h);
    for (int axis = 0; axis < f.grid.d; ++axis)
        for_each_neighbour_pair(f, axis, [&](std::size_t, std::size_t p, std::size_t m) {
            dsup = std::max(dsup, std::abs((f[p] - f[m]) * inv2h));
        });
    return sup + dsup;
}

}  // namespace smslab
