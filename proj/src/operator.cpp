#include "smslab/operator.hpp"

#include <cmath>
#include <stdexcept>

namespace smslab {

std::vector<std::vector<double>> staggered_weights(const RealField& g, StaggerMean mean)
{
    const Grid& grid = g.grid;
    std::vector<std::vector<double>> w(grid.d);
    auto combine = [mean](double a, double b) {
        if (mean == StaggerMean::Arithmetic) return 0.5 * (a + b);
        return (a > 0.0 && b > 0.0) ? 2.0 * a * b / (a + b) : 0.0;
    };

    if (grid.d == 1) {
        w[0].resize(grid.size());
        for (int i = 0; i < grid.n; ++i) w[0][i] = combine(g[i], g[grid.wrap(i + 1)]);
        return w;
    }
    for (int axis = 0; axis < 2; ++axis) {
        w[axis].resize(grid.size());
        for (int i = 0; i < grid.n; ++i)
            for (int j = 0; j < grid.n; ++j) {
                const std::size_t c = grid.flat(i, j);
                const std::size_t p =
                    axis == 0 ? grid.flat(grid.wrap(i + 1), j) : grid.flat(i, grid.wrap(j + 1));
                w[axis][c] = combine(g[c], g[p]);
            }
    }
    return w;
}

ComplexField flux_apply(const Grid& grid, const std::vector<std::vector<double>>& weights,
                        const ComplexField& u)
{
    require_same_grid(grid, u.grid, "flux_apply");
    ComplexField r(grid);
    const double invh2 = 1.0 / (grid.h * grid.h);

    if (grid.d == 1) {
        const auto& w = weights[0];
        for (int i = 0; i < grid.n; ++i) {
            const int ip = grid.wrap(i + 1), im = grid.wrap(i - 1);
            r[i] = (w[i] * (u[ip] - u[i]) - w[im] * (u[i] - u[im])) * invh2;
        }
        return r;
    }
    for (int axis = 0; axis < 2; ++axis) {
        const auto& w = weights[axis];
        for (int i = 0; i < grid.n; ++i)
            for (int j = 0; j < grid.n; ++j) {
                const std::size_t c = grid.flat(i, j);
                std::size_t p, m;
                if (axis == 0) {
                    p = grid.flat(grid.wrap(i + 1), j);
                    m = grid.flat(grid.wrap(i - 1), j);
                } else {
                    p = grid.flat(i, grid.wrap(j + 1));
                    m = grid.flat(i, grid.wrap(j - 1));
                }
                r[c] += (w[c] * (u[p] - u[c]) - w[m] * (u[c] - u[m])) * invh2;
            }
    }
    return r;
}

SpatialOperator::SpatialOperator(Grid grid, RegularizedCoefficient coeff, StaggerMean mean)
    : grid_(grid), coeff_(std::move(coeff)), mean_(mean)
{
    require_same_grid(grid_, coeff_.field.grid, "SpatialOperator");
    if (coeff_.field.min() <= 0.0)
        throw std::invalid_argument("SpatialOperator: coefficient must be positive everywhere");
    weights_ = staggered_weights(coeff_.field, mean_);
    gmax_ = coeff_.field.max();
}

ComplexField SpatialOperator::apply(const ComplexField& u) const { return flux_apply(grid_, weights_, u); }

double SpatialOperator::energy_form(const ComplexField& u) const
{
    require_same_grid(grid_, u.grid, "energy_form");
    const double vol = grid_.d == 1 ? grid_.h : grid_.h * grid_.h;
    const double invh2 = 1.0 / (grid_.h * grid_.h);
    double acc = 0.0;

    if (grid_.d == 1) {
        for (int i = 0; i < grid_.n; ++i)
            acc += weights_[0][i] * std::norm(u[grid_.wrap(i + 1)] - u[i]) * invh2;
        return vol * acc;
    }
    for (int axis = 0; axis < 2; ++axis)
        for (int i = 0; i < grid_.n; ++i)
            for (int j = 0; j < grid_.n; ++j) {
                const std::size_t c = grid_.flat(i, j);
                const std::size_t p =
                    axis == 0 ? grid_.flat(grid_.wrap(i + 1), j) : grid_.flat(i, grid_.wrap(j + 1));
                acc += weights_[axis][c] * std::norm(u[p] - u[c]) * invh2;
            }
    return vol * acc;
}

SpatialOperator assemble_operator(const RegularizedCoefficient& g, StaggerMean mean)
{
    return SpatialOperator(g.field.grid, g, mean);
}

}  // namespace smslab
