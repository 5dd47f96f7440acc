#pragma once

#include <string>
#include <utility>
#include <vector>

#include "smslab/oracle.hpp"

namespace smslab {

/// Least-squares line through (log(1/eps), log value). Positive exponents
/// mean growth like eps^{-p}, negative ones decay like eps^{|p|}.
struct FitResult {
    double exponent = 0.0;
    double residual = 0.0;  ///< RMS of the fit errors in log space
};

FitResult fit_rate(const std::vector<std::pair<double, double>>& pairs);

/// Fixed-grid error floor: a rung is live while halving eps still moves the
/// value by more than 3x the estimated scheme error. Returns the number of
/// leading live rungs (values ordered by decreasing eps).
std::size_t live_prefix(const std::vector<double>& values, double scheme_error_estimate);

/// Everything needed to reproduce one campaign run. Serialized verbatim
/// into every report so any row can be re-run from the report alone.
struct Problem {
    std::string coefficient_text;
    std::string data_text;
    std::string mollifier;         ///< primary variant tag
    std::string mollifier_alt;     ///< second family (uniqueness / duhamel)
    Grid grid;
    StepperConfig stepper;
    EpsilonLadder ladder;
    StaggerMean mean = StaggerMean::Arithmetic;
    bool mollify_data = true;
    int jobs = 1;  ///< worker pool size for independent ladder points

    CoefficientSpec coefficient() const { return parse_coefficient(coefficient_text); }
    DataSpec data() const { return parse_data(data_text); }
};

struct EnergyLedger {
    Problem problem;
    double epsilon = 0.0;
    std::vector<double> times;
    std::vector<double> l2;
    std::vector<double> h2;
    std::vector<double> drift;        ///< relative L2 drift per recorded time
    std::vector<double> energy_form;  ///< conserved g-weighted gradient form
    double max_drift = 0.0;
    double max_energy_drift = 0.0;
    bool hermitian_ok = false;        ///< structural check of the assembled operator
    std::vector<double> snapshot_times;
    std::vector<ComplexField> snapshots;
    SolverStats stats;
};

EnergyLedger run_energy(const Problem& problem, double eps);

struct RateReport {
    Problem problem;
    std::vector<std::pair<double, double>> pairs;  ///< (eps, w1inf)
    FitResult fit;
    std::string direction;  ///< "growth" or "decay"
    std::vector<std::pair<double, double>> h2_pairs;  ///< optional solution-side ladder
    FitResult h2_fit;
};

RateReport run_moderateness(const Problem& problem, bool fit_solution_h2 = false);

struct UniquenessReport {
    Problem problem;
    std::vector<double> epsilons;
    std::vector<double> solution_diff;  ///< ||u_eps - u~_eps||_{L2}(T)
    std::vector<double> coeff_diff;     ///< ||g_eps - g~_eps||_{W1inf}
    FitResult solution_fit;             ///< on the live prefix
    FitResult coeff_fit;
    double decay_exponent = 0.0;        ///< -solution_fit.exponent
    std::size_t live = 0;
    double scheme_error_estimate = 0.0;
};

UniquenessReport run_uniqueness(const Problem& problem);

struct ConsistencyReport {
    Problem problem;
    int refinement = 2;
    std::string reference_tag;          ///< provenance of the classical stand-in
    std::vector<double> epsilons;
    std::vector<double> solution_err;   ///< ||u_eps(T) - u_ref(T)||_{L2}
    std::vector<double> coeff_err;      ///< ||g_eps - g||_{W1inf}
    std::vector<double> data_err;       ///< ||u_{0,eps} - u_0||_{L2}
    std::vector<bool> floored;
    FitResult solution_fit;             ///< on the live prefix
    FitResult coeff_fit;
    std::size_t live = 0;
    double scheme_error_estimate = 0.0;
};

ConsistencyReport run_consistency(const Problem& problem, int refinement = 2);

struct DuhamelReport {
    Problem problem;
    double epsilon = 0.0;
    std::vector<double> dts;
    std::vector<double> discrepancy;   ///< relative L2 mismatch at T per dt
    double refinement_slope = 0.0;     ///< fitted order in dt
    double discrepancy_at_default = 0.0;
};

/// Duhamel representation check: rebuild u_eps - u~_eps from the forcing
/// sum_j d_j[(g_eps - g~_eps) d_j u_eps] composed against the auxiliary
/// homogeneous problems, and compare with the directly solved difference
/// under dt refinement (halvings of the base step).
DuhamelReport run_duhamel_check(const Problem& problem, double eps, int halvings = 3);

/// Structural probe used by the runner's hard invariants: Hermitian
/// symmetry and negative semidefiniteness of L on deterministic fields.
bool operator_structure_ok(const SpatialOperator& L, int probes = 8, double tol = 1e-12);

}  // namespace smslab
