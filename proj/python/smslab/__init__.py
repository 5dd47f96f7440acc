"""Numerical laboratory for the Schrodinger equation with singular
position-dependent mass: mollifier regularization, norm-preserving
Crank-Nicolson evolution, and rate experiments over epsilon-ladders."""

from smslab._core import (  # noqa: F401
    Grid,
    ComplexField,
    RealField,
    Mollifier,
    CoefficientSpec,
    GaussianData,
    DeltaData,
    SampledData,
    RegularizedCoefficient,
    EpsilonLadder,
    StaggerMean,
    SpatialOperator,
    StepperConfig,
    SolutionTrace,
    OracleResult,
    Problem,
    EnergyLedger,
    RateReport,
    UniquenessReport,
    ConsistencyReport,
    DuhamelReport,
    build_grid,
    l2_norm,
    h2_norm,
    w1inf_norm,
    inner_product,
    gradient,
    laplacian,
    parse_coefficient,
    evaluate_coefficient,
    parse_data,
    evaluate_data,
    format_data,
    regularize,
    regularize_data,
    make_ladder,
    moderateness_ladder,
    assemble_operator,
    auto_dt,
    step_cn,
    solve_homogeneous,
    solve_forced,
    duhamel_compose,
    time_derivative_data,
    fourier_constant_solution,
    dense_reference_step,
    fit_rate,
    run_energy,
    run_moderateness,
    run_uniqueness,
    run_consistency,
    run_duhamel_check,
    run_config,
)

__version__ = "0.1.0"
