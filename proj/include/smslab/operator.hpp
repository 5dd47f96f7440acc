#pragma once

#include <vector>

#include "smslab/coefficient.hpp"
#include "smslab/field.hpp"

namespace smslab {

enum class StaggerMean { Arithmetic, Harmonic };

/// Midpoint coefficient samples g_{j+1/2} per axis. weights[axis][flat(j)]
/// multiplies the flux on the edge between node j and its +1 neighbour
/// along `axis`.
std::vector<std::vector<double>> staggered_weights(const RealField& g,
                                                   StaggerMean mean = StaggerMean::Arithmetic);

/// Flux-form action sum_axes D-( w D+ u ) with arbitrary real edge weights.
/// Hermitian and negative semidefinite whenever all weights are >= 0;
/// used with signed weights to build coefficient-difference forcings.
ComplexField flux_apply(const Grid& grid, const std::vector<std::vector<double>>& weights,
                        const ComplexField& u);

/// Discrete Hermitian realization of sum_j d_j(g_eps d_j u):
///   (Lu)_j = (g_{j+1/2}(u_{j+1}-u_j) - g_{j-1/2}(u_j-u_{j-1})) / h^2
/// per axis with periodic wrap.
class SpatialOperator {
public:
    SpatialOperator(Grid grid, RegularizedCoefficient coeff, StaggerMean mean = StaggerMean::Arithmetic);

    const Grid& grid() const { return grid_; }
    const RegularizedCoefficient& coefficient() const { return coeff_; }
    const std::vector<std::vector<double>>& weights() const { return weights_; }
    StaggerMean mean() const { return mean_; }
    double max_coefficient() const { return gmax_; }

    ComplexField apply(const ComplexField& u) const;

    /// sum_axes h^d sum_edges w_edge |u_{+1} - u_j|^2 / h^2
    /// = -<Lu, u>; the second conserved quantity of the evolution.
    double energy_form(const ComplexField& u) const;

private:
    Grid grid_;
    RegularizedCoefficient coeff_;
    StaggerMean mean_;
    std::vector<std::vector<double>> weights_;
    double gmax_ = 0.0;
};

SpatialOperator assemble_operator(const RegularizedCoefficient& g,
                                  StaggerMean mean = StaggerMean::Arithmetic);

}  // namespace smslab
