#include "smslab/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "smslab/norms.hpp"
#include "smslab/util.hpp"
#include <memory>
#include <random>
#include <stdexcept>

namespace smslab {

FitResult fit_rate(const std::vector<std::pair<double, double>>& pairs)
{
    if (pairs.size() < 4) throw std::invalid_argument("fit_rate: need at least 4 ladder points");
    const std::size_t n = pairs.size();
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(pairs[i].first > 0.0)) throw std::invalid_argument("fit_rate: eps values must be positive");
        if (!(pairs[i].second > 0.0)) throw std::invalid_argument("fit_rate: values must be positive");
        xs[i] = std::log(1.0 / pairs[i].first);
        ys[i] = std::log(pairs[i].second);
    }
    double xm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        xm += xs[i];
        ym += ys[i];
    }
    xm /= static_cast<double>(n);
    ym /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - xm) * (xs[i] - xm);
        sxy += (xs[i] - xm) * (ys[i] - ym);
    }
    FitResult f;
    f.exponent = sxy / sxx;
    const double icpt = ym - f.exponent * xm;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = ys[i] - (icpt + f.exponent * xs[i]);
        rss += e * e;
    }
    f.residual = std::sqrt(rss / static_cast<double>(n));
    return f;
}

std::size_t live_prefix(const std::vector<double>& values, double scheme_error_estimate)
{
    if (values.empty()) return 0;
    std::size_t live = 1;
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
        if (std::abs(values[k] - values[k + 1]) > 3.0 * scheme_error_estimate)
            ++live;
        else
            break;
    }
    return live;
}

namespace {

FitResult fit_prefix(const std::vector<double>& eps, const std::vector<double>& vals, std::size_t live)
{
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t k = 0; k < live; ++k) pairs.emplace_back(eps[k], vals[k]);
    return fit_rate(pairs);
}

// dt used for every rung of a ladder campaign: resolved once against the
// stiffest coefficient (smallest eps) so all solves share one step size.
double ladder_dt(const Problem& p, const Mollifier& psi)
{
    if (p.stepper.dt) return *p.stepper.dt;
    const RegularizedCoefficient g = regularize(p.coefficient(), psi, p.ladder.min(), p.grid);
    return auto_dt(p.grid, g.field.max());
}

ComplexField initial_data(const Problem& p, const Mollifier& psi, double eps)
{
    if (p.mollify_data || std::holds_alternative<DeltaData>(p.data()))
        return regularize_data(p.data(), psi, eps, p.grid);
    return evaluate_data(p.data(), p.grid);
}

}  // namespace

bool operator_structure_ok(const SpatialOperator& L, int probes, double tol)
{
    std::mt19937 rng(20240811u);
    std::normal_distribution<double> dist(0.0, 1.0);
    const Grid& g = L.grid();
    auto random_field = [&]() {
        ComplexField f(g);
        for (auto& z : f.values) z = Complex{dist(rng), dist(rng)};
        return f;
    };

    for (int p = 0; p < probes; ++p) {
        ComplexField u = random_field();
        ComplexField v = random_field();
        const Complex a = inner_product(L.apply(u), v);
        const Complex b = inner_product(u, L.apply(v));
        const double scale = std::max({std::abs(a), std::abs(b), 1e-30});
        if (std::abs(a - b) / scale > tol) return false;

        const Complex quad = inner_product(L.apply(u), u);
        const double n2 = std::pow(l2_norm(u), 2);
        if (quad.real() > tol * n2) return false;
        if (std::abs(quad.imag()) > tol * std::max(std::abs(quad.real()), n2)) return false;
    }
    // constants are annihilated exactly
    ComplexField ones(g);
    for (auto& z : ones.values) z = Complex{1.0, 0.0};
    ComplexField lu = L.apply(ones);
    for (const Complex& z : lu.values)
        if (std::abs(z) > tol) return false;
    return true;
}

EnergyLedger run_energy(const Problem& problem, double eps)
{
    const Mollifier psi = Mollifier::make(problem.mollifier, problem.grid.d);
    const RegularizedCoefficient g = regularize(problem.coefficient(), psi, eps, problem.grid);
    const SpatialOperator L(problem.grid, g, problem.mean);
    const ComplexField u0 = initial_data(problem, psi, eps);
    const SolutionTrace trace = solve_homogeneous(L, u0, problem.stepper);

    EnergyLedger ledger;
    ledger.problem = problem;
    ledger.epsilon = eps;
    ledger.times = trace.times;
    ledger.l2 = trace.l2;
    ledger.h2 = trace.h2;
    ledger.drift = trace.drift;
    ledger.energy_form = trace.energy_form;
    ledger.max_drift = trace.max_drift();
    ledger.max_energy_drift = trace.max_energy_drift();
    ledger.hermitian_ok = operator_structure_ok(L);
    ledger.snapshot_times = trace.snapshot_times;
    ledger.snapshots = trace.snapshots;
    ledger.stats = trace.stats;
    return ledger;
}

RateReport run_moderateness(const Problem& problem, bool fit_solution_h2)
{
    const Mollifier psi = Mollifier::make(problem.mollifier, problem.grid.d);
    RateReport report;
    report.problem = problem;
    if (problem.ladder.min() < 2.0 * problem.grid.h)
        throw std::invalid_argument("run_moderateness: smallest eps under-resolved on this grid");

    const std::size_t m = problem.ladder.size();
    report.pairs.resize(m);
    parallel_for(m, problem.jobs, [&](std::size_t k) {
        const double eps = problem.ladder.values[k];
        report.pairs[k] = {eps, regularize(problem.coefficient(), psi, eps, problem.grid).w1inf};
    });
    report.fit = fit_rate(report.pairs);
    report.direction = report.fit.exponent >= 0.0 ? "growth" : "decay";

    if (fit_solution_h2) {
        const double dt = ladder_dt(problem, psi);
        report.h2_pairs.resize(m);
        parallel_for(m, problem.jobs, [&](std::size_t k) {
            const double eps = problem.ladder.values[k];
            const RegularizedCoefficient g = regularize(problem.coefficient(), psi, eps, problem.grid);
            const SpatialOperator L(problem.grid, g, problem.mean);
            StepperConfig cfg = problem.stepper;
            cfg.dt = dt;
            const SolutionTrace trace = solve_homogeneous(L, initial_data(problem, psi, eps), cfg);
            double sup = 0.0;
            for (double v : trace.h2) sup = std::max(sup, v);
            report.h2_pairs[k] = {eps, sup};
        });
        report.h2_fit = fit_rate(report.h2_pairs);
    }
    return report;
}

UniquenessReport run_uniqueness(const Problem& problem)
{
    if (problem.mollifier_alt.empty())
        throw std::invalid_argument("run_uniqueness: needs a second mollifier variant");
    const Mollifier psi = Mollifier::make(problem.mollifier, problem.grid.d);
    const Mollifier psi_alt = Mollifier::make(problem.mollifier_alt, problem.grid.d);
    const CoefficientSpec spec = problem.coefficient();

    UniquenessReport report;
    report.problem = problem;

    StepperConfig cfg = problem.stepper;
    cfg.dt = std::min(ladder_dt(problem, psi), [&] {
        Problem alt = problem;
        alt.mollifier = problem.mollifier_alt;
        return ladder_dt(alt, psi_alt);
    }());

    const std::size_t m = problem.ladder.size();
    report.epsilons = problem.ladder.values;
    report.solution_diff.resize(m);
    report.coeff_diff.resize(m);
    std::vector<double> unorm(m, 0.0);
    parallel_for(m, problem.jobs, [&](std::size_t k) {
        const double eps = problem.ladder.values[k];
        const RegularizedCoefficient ga = regularize(spec, psi, eps, problem.grid);
        const RegularizedCoefficient gb = regularize(spec, psi_alt, eps, problem.grid);
        const SpatialOperator La(problem.grid, ga, problem.mean);
        const SpatialOperator Lb(problem.grid, gb, problem.mean);

        const ComplexField ua = solve_homogeneous(La, initial_data(problem, psi, eps), cfg).final_field;
        Problem alt = problem;
        alt.mollifier = problem.mollifier_alt;
        const ComplexField ub = solve_homogeneous(Lb, initial_data(alt, psi_alt, eps), cfg).final_field;

        report.solution_diff[k] = l2_norm(ua - ub);
        report.coeff_diff[k] = w1inf_norm(ga.field - gb.field);
        unorm[k] = l2_norm(ua);
    });
    double umax = 0.0;
    for (double v : unorm) umax = std::max(umax, v);

    // identical families cancel exactly, so the only floor is roundoff
    report.scheme_error_estimate = 1e-12 * umax;
    const bool all_zero =
        std::all_of(report.solution_diff.begin(), report.solution_diff.end(), [](double v) { return v == 0.0; });
    if (all_zero) {
        report.live = 0;
        return report;
    }
    report.live = live_prefix(report.solution_diff, report.scheme_error_estimate);
    if (report.live >= 4) {
        report.solution_fit = fit_prefix(report.epsilons, report.solution_diff, report.live);
        report.decay_exponent = -report.solution_fit.exponent;
    }
    bool coeff_positive =
        std::all_of(report.coeff_diff.begin(), report.coeff_diff.end(), [](double v) { return v > 0.0; });
    if (coeff_positive) {
        std::vector<std::pair<double, double>> cpairs;
        for (std::size_t i = 0; i < report.epsilons.size(); ++i)
            cpairs.emplace_back(report.epsilons[i], report.coeff_diff[i]);
        report.coeff_fit = fit_rate(cpairs);
    }
    return report;
}

ConsistencyReport run_consistency(const Problem& problem, int refinement)
{
    const CoefficientSpec spec = problem.coefficient();
    if (!spec.is_regular())
        throw std::invalid_argument(
            "run_consistency: the coefficient must be regular (no delta/jump atoms); the consistency "
            "statement assumes g in W^{1,inf} so that a classical solution exists");

    const Mollifier psi = Mollifier::make(problem.mollifier, problem.grid.d);

    ConsistencyReport report;
    report.problem = problem;
    report.refinement = refinement;

    StepperConfig cfg = problem.stepper;
    cfg.dt = ladder_dt(problem, psi);

    // classical stand-in, computed once and reused for every rung
    FineGridSpec fs;
    fs.g = spec;
    fs.u0 = problem.data();
    fs.coarse = problem.grid;
    fs.cfg = cfg;
    fs.refinement = refinement;
    fs.mean = problem.mean;
    const OracleResult ref = fine_grid_reference(fs);
    report.reference_tag = "fine_grid_x" + std::to_string(refinement);

    // coarse solve of the unmollified problem: the scheme-error estimate
    {
        RegularizedCoefficient graw;
        graw.field = evaluate_coefficient(spec, problem.grid);
        graw.epsilon = 0.0;
        graw.c0 = spec.background;
        graw.w1inf = w1inf_norm(graw.field);
        const SpatialOperator L(problem.grid, graw, problem.mean);
        const ComplexField u_plain = solve_homogeneous(L, evaluate_data(problem.data(), problem.grid), cfg).final_field;
        report.scheme_error_estimate = l2_norm(u_plain - ref.field);
    }

    const RealField graw_field = evaluate_coefficient(spec, problem.grid);
    const ComplexField u0_raw = evaluate_data(problem.data(), problem.grid);
    const std::size_t m = problem.ladder.size();
    report.epsilons = problem.ladder.values;
    report.solution_err.resize(m);
    report.coeff_err.resize(m);
    report.data_err.resize(m);
    parallel_for(m, problem.jobs, [&](std::size_t k) {
        const double eps = problem.ladder.values[k];
        const RegularizedCoefficient geps = regularize(spec, psi, eps, problem.grid);
        const SpatialOperator L(problem.grid, geps, problem.mean);
        const ComplexField u0eps = regularize_data(problem.data(), psi, eps, problem.grid);
        const ComplexField ue = solve_homogeneous(L, u0eps, cfg).final_field;

        report.solution_err[k] = l2_norm(ue - ref.field);
        report.coeff_err[k] = w1inf_norm(geps.field - graw_field);
        report.data_err[k] = l2_norm(u0eps - u0_raw);
    });

    report.live = live_prefix(report.solution_err, report.scheme_error_estimate);
    report.floored.resize(report.epsilons.size());
    for (std::size_t k = 0; k < report.floored.size(); ++k) report.floored[k] = k >= report.live;
    if (report.live >= 4) report.solution_fit = fit_prefix(report.epsilons, report.solution_err, report.live);
    const bool coeff_positive =
        std::all_of(report.coeff_err.begin(), report.coeff_err.end(), [](double v) { return v > 0.0; });
    if (coeff_positive) {
        std::vector<std::pair<double, double>> cpairs;
        for (std::size_t i = 0; i < report.epsilons.size(); ++i)
            cpairs.emplace_back(report.epsilons[i], report.coeff_err[i]);
        report.coeff_fit = fit_rate(cpairs);
    }
    return report;
}

DuhamelReport run_duhamel_check(const Problem& problem, double eps, int halvings)
{
    if (problem.mollifier_alt.empty())
        throw std::invalid_argument("run_duhamel_check: needs a second mollifier variant");
    const Mollifier psi = Mollifier::make(problem.mollifier, problem.grid.d);
    const Mollifier psi_alt = Mollifier::make(problem.mollifier_alt, problem.grid.d);
    const CoefficientSpec spec = problem.coefficient();

    const RegularizedCoefficient ga = regularize(spec, psi, eps, problem.grid);
    const RegularizedCoefficient gb = regularize(spec, psi_alt, eps, problem.grid);
    const SpatialOperator La(problem.grid, ga, problem.mean);
    const SpatialOperator Lb(problem.grid, gb, problem.mean);

    // signed edge weights of the coefficient difference g_eps - g~_eps
    const std::vector<std::vector<double>> wdiff = staggered_weights(ga.field - gb.field, problem.mean);

    const ComplexField ua0 = initial_data(problem, psi, eps);
    Problem alt = problem;
    alt.mollifier = problem.mollifier_alt;
    const ComplexField ub0 = initial_data(alt, psi_alt, eps);

    DuhamelReport report;
    report.problem = problem;
    report.epsilon = eps;

    const double dt0 = problem.stepper.dt ? *problem.stepper.dt : auto_dt(problem.grid, ga.field.max());
    for (int lvl = 0; lvl <= halvings; ++lvl) {
        StepperConfig cfg = problem.stepper;
        cfg.dt = dt0 / static_cast<double>(1 << lvl);
        cfg.snapshot_stride = 1;  // the forcing replays the full trace

        const SolutionTrace ta = solve_homogeneous(La, ua0, cfg);
        const SolutionTrace tb = solve_homogeneous(Lb, ub0, cfg);
        const ComplexField direct = ta.final_field - tb.final_field;

        // f(s) = sum_j d_j[(g_eps - g~_eps) d_j u_eps(s)]; U solves
        // i dU + L~ U = -f with data u_{0,eps} - u~_{0,eps}.
        auto ta_shared = std::make_shared<SolutionTrace>(ta);
        SourceTerm forcing = [&, ta_shared](double s) {
            ComplexField us = ta_shared->sample(s);
            ComplexField f = flux_apply(problem.grid, wdiff, us);
            return Complex{-1.0, 0.0} * f;
        };
        StepperConfig dcfg = cfg;
        dcfg.snapshot_stride = 0;
        const SolutionTrace composed = duhamel_compose(Lb, ua0 - ub0, forcing, dcfg);

        const double denom = l2_norm(direct);
        const double rel = denom > 0.0 ? l2_norm(composed.final_field - direct) / denom : 0.0;
        report.dts.push_back(*cfg.dt);
        report.discrepancy.push_back(rel);
        if (lvl == 0) report.discrepancy_at_default = rel;
    }

    if (report.discrepancy.size() >= 2 && report.discrepancy.back() > 0.0) {
        std::vector<std::pair<double, double>> pairs;
        for (std::size_t i = 0; i < report.dts.size(); ++i)
            pairs.emplace_back(report.dts[i], report.discrepancy[i]);
        // reuse the eps-rate fit with dt in place of eps: order = growth in 1/dt
        FitResult f = pairs.size() >= 4 ? fit_rate(pairs) : FitResult{};
        if (pairs.size() >= 4) {
            report.refinement_slope = -f.exponent;
        } else {
            report.refinement_slope =
                std::log(report.discrepancy[report.discrepancy.size() - 2] / report.discrepancy.back()) /
                std::log(2.0);
        }
    }
    return report;
}

}  // namespace smslab
