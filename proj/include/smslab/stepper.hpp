#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "smslab/operator.hpp"

namespace smslab {

struct StepperConfig {
    std::optional<double> dt;     ///< empty = auto: h^2 pi / (2 max g_eps)
    double T = 1.0;               ///< final time
    double tolerance = 1e-10;     ///< residual tolerance of the d=2 iterative solve
    int snapshot_stride = 0;      ///< record a snapshot every k-th step; 0 = endpoints only

    double resolve_dt(const SpatialOperator& L) const;
};

/// Default step: h^2 pi / (2 gmax), at least four samples per period of the
/// fastest resolved oscillation for moderate coefficients.
double auto_dt(const Grid& grid, double gmax);

struct SolverStats {
    long steps = 0;
    long iterations = 0;      ///< Lanczos iterations (d=2 only)
    int max_iterations = 0;   ///< worst single solve
    double max_residual = 0.0;
};

/// Time series of a single evolution: per-step norms and strided snapshots.
struct SolutionTrace {
    std::vector<double> times;
    std::vector<double> l2;           ///< ||u(t)||_{L2}
    std::vector<double> h2;           ///< ||u(t)||_{H2}
    std::vector<double> energy_form;  ///< sum_j ||g^{1/2} D+_j u||^2 (staggered)
    std::vector<double> drift;        ///< | ||u(t)|| - ||u(0)|| | / ||u(0)||

    std::vector<double> snapshot_times;
    std::vector<ComplexField> snapshots;
    ComplexField final_field;
    SolverStats stats;

    double max_drift() const;
    double max_energy_drift() const;  ///< relative to energy_form at t=0

    /// Snapshot linearly interpolated in time (used to replay a forcing).
    ComplexField sample(double t) const;
};

/// One Crank-Nicolson step: solve (I - i dt/2 L) u+ = (I + i dt/2 L) u.
/// d=1 uses a cyclic tridiagonal direct solve, d=2 a shifted-Lanczos
/// iteration on the Hermitian operator (residual <= tol).
ComplexField step_cn(const SpatialOperator& L, const ComplexField& u, double dt, double tol = 1e-10,
                     SolverStats* stats = nullptr);

/// Repeated CN to time T; the final step is shortened to land on T exactly.
SolutionTrace solve_homogeneous(const SpatialOperator& L, const ComplexField& u0, const StepperConfig& cfg);

/// Time-dependent source f(t) on the operator's grid.
using SourceTerm = std::function<ComplexField(double)>;

/// Piecewise-linear interpolation of a recorded trace as a SourceTerm.
SourceTerm trace_source(std::shared_ptr<SolutionTrace> trace);

/// CN with trapezoidal source for i du/dt + L u = f, i.e.
/// (I - i dt/2 L) u+ = (I + i dt/2 L) u - i dt/2 (f(t) + f(t+dt)).
SolutionTrace solve_forced(const SpatialOperator& L, const ComplexField& u0, const SourceTerm& f,
                           const StepperConfig& cfg);

/// Duhamel composition for the same equation: the homogeneous evolution of
/// v0 plus the trapezoid-in-s quadrature of homogeneous evolutions of
/// -i f(s) over duration t-s, evaluated on the step grid.
SolutionTrace duhamel_compose(const SpatialOperator& L, const ComplexField& v0, const SourceTerm& f,
                              const StepperConfig& cfg);

/// Initial data i L u0 of the problem solved by du/dt; evolving it under the
/// same operator tracks the discrete time derivative of the primary solve.
ComplexField time_derivative_data(const RegularizedCoefficient& g, const ComplexField& u0,
                                  StaggerMean mean = StaggerMean::Arithmetic);

}  // namespace smslab
