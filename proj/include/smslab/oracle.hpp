#pragma once

#include <optional>
#include <string>

#include "smslab/stepper.hpp"

namespace smslab {

enum class OracleMethod { Fourier, Dense, FineGrid };

struct OracleResult {
    ComplexField field;
    OracleMethod method = OracleMethod::Fourier;
    std::optional<double> error_estimate;
};

/// Exact periodic solution for constant coefficient c: every discrete
/// Fourier mode k picks up the continuum multiplier e^{-i c |k|^2 t}.
/// Comparing a scheme against this measures true discretization error.
OracleResult fourier_constant_solution(double c, const ComplexField& u0, double t);

/// One CN step computed by dense LU factorization of the materialized
/// matrix; an independent cross-check of the sparse solves (n^d <= 256).
OracleResult dense_reference_step(const SpatialOperator& L, const ComplexField& u, double dt);

/// Classical-solution stand-in: re-solve the same problem at `refinement`x
/// resolution in space (and the correspondingly refined auto step), then
/// inject to the coarse grid at coincident nodes. Regular specs are sampled
/// directly; singular specs are mollified at `eps_floor`.
struct FineGridSpec {
    CoefficientSpec g;
    DataSpec u0;
    Grid coarse;
    StepperConfig cfg;
    int refinement = 2;
    std::string mollifier_variant = "bump";  ///< used only when eps_floor is set
    std::optional<double> eps_floor;         ///< required for singular specs
    StaggerMean mean = StaggerMean::Arithmetic;
};

OracleResult fine_grid_reference(const FineGridSpec& spec);

}  // namespace smslab
