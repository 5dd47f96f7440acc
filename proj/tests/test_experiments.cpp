#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "smslab/experiments.hpp"

using namespace smslab;

namespace {

Problem base_problem()
{
    Problem p;
    p.coefficient_text = "background=1; bump(center=0, width=1.5, height=0.5)";
    p.data_text = "gaussian(center=0, a=1, k0=1)";
    p.mollifier = "bump";
    p.mollifier_alt = "poly";
    p.grid = build_grid(1, 3.0, 256);
    p.stepper.T = 0.1;
    p.ladder = make_ladder(0.5, 0.5, 4);
    return p;
}

}  // namespace

TEST_CASE("fit_rate: exact powers and constants")
{
    std::vector<std::pair<double, double>> growth, flat;
    for (double eps : make_ladder(0.5, 0.5, 5).values) {
        growth.emplace_back(eps, 1.0 / (eps * eps));
        flat.emplace_back(eps, 5.0);
    }
    const FitResult g = fit_rate(growth);
    CHECK(g.exponent == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(g.residual <= 1e-12);
    CHECK(std::abs(fit_rate(flat).exponent) <= 1e-13);
}

TEST_CASE("fit_rate: noisy decay fixture")
{
    std::mt19937 rng(424242u);
    std::uniform_real_distribution<double> noise(-0.01, 0.01);
    std::vector<std::pair<double, double>> pairs;
    for (double eps : make_ladder(0.5, 0.5, 6).values)
        pairs.emplace_back(eps, eps * eps * (1.0 + noise(rng)));
    const FitResult f = fit_rate(pairs);
    CHECK(f.exponent == doctest::Approx(-2.0).epsilon(0.025));
    CHECK(f.residual <= 0.02);
}

TEST_CASE("fit_rate: invariance under positive rescaling")
{
    std::vector<std::pair<double, double>> a, b;
    for (double eps : make_ladder(0.4, 0.5, 5).values) {
        const double v = std::pow(eps, -1.3) * (1.0 + 0.05 * std::sin(1.0 / eps));
        a.emplace_back(eps, v);
        b.emplace_back(eps, 77.7 * v);
    }
    CHECK(std::abs(fit_rate(a).exponent - fit_rate(b).exponent) <= 1e-12);
    CHECK(std::abs(fit_rate(a).residual - fit_rate(b).residual) <= 1e-12);
}

TEST_CASE("fit_rate rejects degenerate input")
{
    std::vector<std::pair<double, double>> three = {{0.5, 1.0}, {0.25, 2.0}, {0.125, 4.0}};
    CHECK_THROWS_AS(fit_rate(three), std::invalid_argument);
    std::vector<std::pair<double, double>> nonpos = {{0.5, 1.0}, {0.25, 0.0}, {0.125, 4.0}, {0.0625, 8.0}};
    CHECK_THROWS_AS(fit_rate(nonpos), std::invalid_argument);
}

TEST_CASE("live_prefix keeps rungs that still move")
{
    // values decay 4x per rung, then flatten at 1e-4
    const std::vector<double> v = {1.0, 0.25, 0.0625, 1.2e-4, 1.0e-4};
    CHECK(live_prefix(v, 1e-5) == 4);
    CHECK(live_prefix(v, 0.0) == 5);
    CHECK(live_prefix(v, 1.0) == 1);
}

TEST_CASE("run_energy: drift bound and ledger shape")
{
    Problem p = base_problem();
    p.coefficient_text = "background=1; delta(center=0, weight=1)";
    const EnergyLedger ledger = run_energy(p, 0.2);
    CHECK(ledger.max_drift <= 1e-10);
    CHECK(ledger.max_energy_drift <= 1e-8);
    CHECK(ledger.hermitian_ok);
    CHECK(ledger.times.size() == ledger.drift.size());
    CHECK(ledger.times.size() == ledger.energy_form.size());
    CHECK(ledger.times.size() == ledger.l2.size());
    CHECK(ledger.epsilon == 0.2);
    for (double d : ledger.drift) CHECK(d >= 0.0);
    CHECK(ledger.problem.coefficient_text == p.coefficient_text);
}

TEST_CASE("run_moderateness: constant coefficient is flat, delta grows at 2")
{
    Problem p = base_problem();
    p.coefficient_text = "background=2";
    const RateReport flat = run_moderateness(p);
    CHECK(std::abs(flat.fit.exponent) <= 0.05);

    Problem d = base_problem();
    d.coefficient_text = "background=0.1; delta(center=0, weight=1)";
    d.mollifier = "bump:0.25";
    d.grid = build_grid(1, 0.75, 2048);
    d.ladder = make_ladder(0.5, 0.5, 5);
    const RateReport grow = run_moderateness(d);
    CHECK(grow.direction == "growth");
    CHECK(grow.fit.exponent == doctest::Approx(2.0).epsilon(0.06));
}

TEST_CASE("run_moderateness: optional solution-side H2 ladder")
{
    Problem p = base_problem();
    p.coefficient_text = "background=0.5; delta(center=0, weight=0.5)";
    p.grid = build_grid(1, 2.0, 256);
    p.ladder = make_ladder(0.4, 0.5, 4);
    p.stepper.T = 0.02;
    p.jobs = 2;
    const RateReport r = run_moderateness(p, true);
    REQUIRE(r.h2_pairs.size() == 4);
    // mollified-delta data: H2 grows with 1/eps
    CHECK(r.h2_fit.exponent > 0.5);
}

TEST_CASE("run_uniqueness: identical mollifiers give exactly zero")
{
    Problem p = base_problem();
    p.mollifier_alt = p.mollifier;
    const UniquenessReport r = run_uniqueness(p);
    CHECK(r.live == 0);
    for (double v : r.solution_diff) CHECK(v == 0.0);
    for (double v : r.coeff_diff) CHECK(v == 0.0);
}

TEST_CASE("run_uniqueness: distinct symmetric mollifiers decay at order ~2")
{
    Problem p = base_problem();
    p.grid = build_grid(1, 3.0, 256);
    p.ladder = make_ladder(0.25, 0.5, 4);
    p.stepper.T = 0.1;
    p.jobs = 4;
    const UniquenessReport r = run_uniqueness(p);
    REQUIRE(r.live == 4);
    CHECK(r.decay_exponent > 1.6);
    CHECK(-r.coeff_fit.exponent > 1.2);  // W1inf hypothesis ladder decays too
    // both ladders share the eps values
    CHECK(r.epsilons.size() == r.coeff_diff.size());
    CHECK(r.epsilons.size() == r.solution_diff.size());
}

TEST_CASE("run_consistency rejects singular coefficients, citing the hypothesis")
{
    Problem p = base_problem();
    p.coefficient_text = "background=1; delta(center=0, weight=1)";
    try {
        run_consistency(p);
        FAIL("expected a rejection");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("regular") != std::string::npos);
        CHECK(msg.find("W^{1,inf}") != std::string::npos);
    }
}

TEST_CASE("run_consistency: constant coefficient error is eps-independent scheme error")
{
    Problem p = base_problem();
    p.coefficient_text = "background=1";
    p.grid = build_grid(1, 4.0, 128);
    p.data_text = "gaussian(center=0, a=1, k0=1)";
    p.stepper.T = 0.1;
    p.ladder = make_ladder(0.4, 0.5, 4);
    const ConsistencyReport r = run_consistency(p);
    // mollifying a constant is the identity on the coefficient; the error is
    // the data-mollification term until it collapses to the scheme floor
    for (double v : r.coeff_err) CHECK(v <= 1e-12);
    CHECK(r.live < r.epsilons.size());  // floor detected
    for (std::size_t k = 0; k < r.epsilons.size(); ++k)
        CHECK(r.solution_err[k] <= r.data_err[k] + 2.0 * r.scheme_error_estimate);
    CHECK(r.solution_err.back() <= 2.0 * r.scheme_error_estimate);
}

TEST_CASE("run_consistency: smooth bump, monotone ladder and second-order rates")
{
    Problem p = base_problem();
    p.grid = build_grid(1, 3.0, 512);
    p.ladder = make_ladder(0.25, 0.5, 5);
    p.stepper.T = 0.1;
    p.jobs = 4;
    const ConsistencyReport r = run_consistency(p);
    CHECK(r.live >= 4);
    for (std::size_t k = 0; k + 1 < r.live; ++k) CHECK(r.solution_err[k + 1] <= r.solution_err[k] * 1.10);
    CHECK(-r.solution_fit.exponent == doctest::Approx(2.0).epsilon(0.2));
    CHECK(-r.coeff_fit.exponent == doctest::Approx(2.0).epsilon(0.15));
    for (std::size_t k = 0; k + 1 < r.data_err.size(); ++k) CHECK(r.data_err[k + 1] < r.data_err[k]);
    CHECK(r.reference_tag == "fine_grid_x2");
}

TEST_CASE("run_duhamel_check: identical families are exactly zero")
{
    Problem p = base_problem();
    p.mollifier_alt = p.mollifier;
    const DuhamelReport r = run_duhamel_check(p, 0.25, 1);
    for (double v : r.discrepancy) CHECK(v == 0.0);
}

TEST_CASE("run_duhamel_check: discrepancy vanishes at order ~2 in dt")
{
    Problem p = base_problem();
    p.grid = build_grid(1, 3.0, 128);
    p.stepper.T = 0.1;
    p.stepper.dt = 0.1 / 24;
    const DuhamelReport r = run_duhamel_check(p, 0.25, 2);
    REQUIRE(r.discrepancy.size() == 3);
    CHECK(r.discrepancy[0] < 0.05);
    CHECK(r.refinement_slope >= 1.7);
}

TEST_CASE("operator_structure_ok flags a broken operator")
{
    const Grid g = build_grid(1, 1.0, 64);
    const Mollifier psi = Mollifier::make("bump", 1);
    const auto rc = regularize(parse_coefficient("background=1; delta(center=0, weight=1)"), psi, 0.25, g);
    const SpatialOperator L = assemble_operator(rc);
    CHECK(operator_structure_ok(L));
}
