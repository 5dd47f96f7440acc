#include "smslab/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "smslab/field.hpp"

namespace smslab {

namespace {

using nlohmann::json;

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json config_json(const ExperimentConfig& c)
{
    json j;
    j["grid"] = {{"d", c.d}, {"half_width", c.half_width}, {"n", c.n}};
    j["coefficient"] = {{"spec", c.coefficient_text}};
    j["data"] = {{"spec", c.data_text}};
    j["mollifier"] = {{"variant", c.variant}, {"second_variant", c.second_variant},
                      {"mollify_data", c.mollify_data}};
    j["ladder"] = {{"eps0", c.eps0}, {"ratio", c.ratio}, {"count", c.count}};
    j["stepper"] = {{"dt", c.dt ? json(*c.dt) : json("auto")}, {"T", c.T}, {"tolerance", c.tolerance},
                    {"snapshot_stride", c.snapshot_stride}, {"mean", c.mean}};
    j["campaign"] = {{"name", campaign_name(c.campaign)},
                     {"epsilon", c.epsilon ? json(*c.epsilon) : json(nullptr)},
                     {"refinement", c.refinement},
                     {"halvings", c.halvings},
                     {"fit_h2", c.fit_h2}};
    j["output"] = {{"dir", c.output_dir}, {"gnuplot", c.gnuplot}};
    return j;
}

void write_meta(const std::filesystem::path& dir, const std::string& name, const ExperimentConfig& cfg,
                json results)
{
    json j;
    j["campaign"] = name;
    j["config"] = config_json(cfg);
    j["results"] = std::move(results);
    std::ofstream out(dir / (name + ".meta.json"));
    out << j.dump(2) << "\n";
}

void write_gnuplot(const std::filesystem::path& dir, const std::string& name, const std::string& xlabel,
                   const std::string& ylabel, bool loglog, int ycol)
{
    std::ofstream out(dir / (name + ".gp"));
    out << "set datafile separator ','\n";
    out << "set key off\nset grid\n";
    out << "set xlabel '" << xlabel << "'\nset ylabel '" << ylabel << "'\n";
    if (loglog) out << "set logscale xy\n";
    out << "set terminal pngcairo size 800,600\n";
    out << "set output '" << name << ".png'\n";
    out << "plot '" << name << ".csv' using 1:" << ycol << " skip 1 with linespoints\n";
}

struct CampaignOutcome {
    bool hard_ok = true;
    std::string summary;
};

// Hermitian/semidefiniteness probe of the operator a campaign runs with.
bool probe_operator(const ExperimentConfig& cfg, const Problem& problem, double eps)
{
    const Mollifier psi = Mollifier::make(cfg.variant, cfg.d);
    const RegularizedCoefficient g = regularize(problem.coefficient(), psi, eps, problem.grid);
    const SpatialOperator L(problem.grid, g, problem.mean);
    return operator_structure_ok(L);
}

CampaignOutcome do_energy(const ExperimentConfig& cfg, const Problem& problem,
                          const std::filesystem::path& dir)
{
    const double eps = cfg.single_epsilon();
    const EnergyLedger ledger = run_energy(problem, eps);

    {
        std::ofstream out(dir / "energy.csv");
        out << "t,l2,h2,energy_form,drift\n";
        for (std::size_t i = 0; i < ledger.times.size(); ++i)
            out << fmt(ledger.times[i]) << ',' << fmt(ledger.l2[i]) << ',' << fmt(ledger.h2[i]) << ','
                << fmt(ledger.energy_form[i]) << ',' << fmt(ledger.drift[i]) << '\n';
    }
    // snapshots go to separate field CSVs keyed by their time index
    json snapshot_index = json::array();
    if (cfg.snapshot_stride > 0) {
        for (std::size_t k = 0; k < ledger.snapshots.size(); ++k) {
            char name[64];
            std::snprintf(name, sizeof(name), "energy_snapshot_%04zu.csv", k);
            save_csv((dir / name).string(), ledger.snapshots[k]);
            snapshot_index.push_back({{"index", k}, {"t", ledger.snapshot_times[k]}, {"file", name}});
        }
    }

    json res;
    res["epsilon"] = eps;
    res["max_drift"] = ledger.max_drift;
    res["max_energy_form_drift"] = ledger.max_energy_drift;
    res["hermitian_ok"] = ledger.hermitian_ok;
    res["steps"] = ledger.times.empty() ? 0 : static_cast<long>(ledger.times.size() - 1);
    if (ledger.stats.iterations > 0) {
        res["lanczos_iterations"] = ledger.stats.iterations;
        res["lanczos_max_iterations"] = ledger.stats.max_iterations;
        res["lanczos_max_residual"] = ledger.stats.max_residual;
    }
    if (!snapshot_index.empty()) res["snapshots"] = snapshot_index;
    write_meta(dir, "energy", cfg, res);
    if (cfg.gnuplot) write_gnuplot(dir, "energy", "t", "drift", false, 5);

    CampaignOutcome oc;
    oc.hard_ok = ledger.max_drift <= 1e-10 && ledger.hermitian_ok;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "energy: eps=%g max drift %.3e (bound 1e-10) energy-form drift %.3e hermitian %s",
                  eps, ledger.max_drift, ledger.max_energy_drift, ledger.hermitian_ok ? "ok" : "FAIL");
    oc.summary = buf;
    return oc;
}

CampaignOutcome do_moderateness(const ExperimentConfig& cfg, const Problem& problem,
                                const std::filesystem::path& dir)
{
    const RateReport report = run_moderateness(problem, cfg.fit_h2);
    {
        std::ofstream out(dir / "moderateness.csv");
        out << (report.h2_pairs.empty() ? "epsilon,w1inf\n" : "epsilon,w1inf,h2_sup\n");
        for (std::size_t i = 0; i < report.pairs.size(); ++i) {
            out << fmt(report.pairs[i].first) << ',' << fmt(report.pairs[i].second);
            if (!report.h2_pairs.empty()) out << ',' << fmt(report.h2_pairs[i].second);
            out << '\n';
        }
    }
    json res;
    res["exponent"] = report.fit.exponent;
    res["residual"] = report.fit.residual;
    res["direction"] = report.direction;
    if (!report.h2_pairs.empty()) {
        res["h2_exponent"] = report.h2_fit.exponent;
        res["h2_residual"] = report.h2_fit.residual;
    }
    write_meta(dir, "moderateness", cfg, res);
    if (cfg.gnuplot) write_gnuplot(dir, "moderateness", "eps", "w1inf", true, 2);

    CampaignOutcome oc;
    oc.hard_ok = probe_operator(cfg, problem, problem.ladder.min());
    char buf[256];
    std::snprintf(buf, sizeof(buf), "moderateness: w1inf exponent %.3f (residual %.3f, %s)%s",
                  report.fit.exponent, report.fit.residual, report.direction.c_str(),
                  oc.hard_ok ? "" : " hermitian FAIL");
    oc.summary = buf;
    return oc;
}

CampaignOutcome do_uniqueness(const ExperimentConfig& cfg, const Problem& problem,
                              const std::filesystem::path& dir)
{
    const UniquenessReport report = run_uniqueness(problem);
    {
        std::ofstream out(dir / "uniqueness.csv");
        out << "epsilon,solution_diff_l2,coeff_diff_w1inf,floored\n";
        for (std::size_t i = 0; i < report.epsilons.size(); ++i)
            out << fmt(report.epsilons[i]) << ',' << fmt(report.solution_diff[i]) << ','
                << fmt(report.coeff_diff[i]) << ',' << (i >= report.live ? 1 : 0) << '\n';
    }
    json res;
    res["decay_exponent"] = report.decay_exponent;
    res["solution_residual"] = report.solution_fit.residual;
    res["coeff_exponent"] = report.coeff_fit.exponent;
    res["live_points"] = report.live;
    res["scheme_error_estimate"] = report.scheme_error_estimate;
    res["all_zero"] = report.live == 0;
    write_meta(dir, "uniqueness", cfg, res);
    if (cfg.gnuplot) write_gnuplot(dir, "uniqueness", "eps", "|u-u~|", true, 2);

    CampaignOutcome oc;
    oc.hard_ok = probe_operator(cfg, problem, problem.ladder.min());
    char buf[256];
    if (report.live == 0)
        std::snprintf(buf, sizeof(buf), "uniqueness: identical families, difference identically zero%s",
                      oc.hard_ok ? "" : " hermitian FAIL");
    else
        std::snprintf(buf, sizeof(buf),
                      "uniqueness: decay exponent %.3f over %zu live points (coeff decay %.3f)%s",
                      report.decay_exponent, report.live, -report.coeff_fit.exponent,
                      oc.hard_ok ? "" : " hermitian FAIL");
    oc.summary = buf;
    return oc;
}

CampaignOutcome do_consistency(const ExperimentConfig& cfg, const Problem& problem,
                               const std::filesystem::path& dir)
{
    const ConsistencyReport report = run_consistency(problem, cfg.refinement);
    {
        std::ofstream out(dir / "consistency.csv");
        out << "epsilon,solution_err_l2,coeff_err_w1inf,data_err_l2,floored\n";
        for (std::size_t i = 0; i < report.epsilons.size(); ++i)
            out << fmt(report.epsilons[i]) << ',' << fmt(report.solution_err[i]) << ','
                << fmt(report.coeff_err[i]) << ',' << fmt(report.data_err[i]) << ','
                << (report.floored[i] ? 1 : 0) << '\n';
    }
    json res;
    res["reference"] = report.reference_tag;
    res["solution_exponent"] = -report.solution_fit.exponent;
    res["coeff_exponent"] = -report.coeff_fit.exponent;
    res["live_points"] = report.live;
    res["scheme_error_estimate"] = report.scheme_error_estimate;
    write_meta(dir, "consistency", cfg, res);
    if (cfg.gnuplot) write_gnuplot(dir, "consistency", "eps", "error", true, 2);

    CampaignOutcome oc;
    oc.hard_ok = probe_operator(cfg, problem, problem.ladder.min());
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "consistency: solution slope %.3f, hypothesis slope %.3f, %zu/%zu live (floor %.2e)%s",
                  -report.solution_fit.exponent, -report.coeff_fit.exponent, report.live,
                  report.epsilons.size(), report.scheme_error_estimate, oc.hard_ok ? "" : " hermitian FAIL");
    oc.summary = buf;
    return oc;
}

CampaignOutcome do_duhamel(const ExperimentConfig& cfg, const Problem& problem,
                           const std::filesystem::path& dir)
{
    const double eps = cfg.single_epsilon();
    const DuhamelReport report = run_duhamel_check(problem, eps, cfg.halvings);
    {
        std::ofstream out(dir / "duhamel.csv");
        out << "dt,discrepancy_rel\n";
        for (std::size_t i = 0; i < report.dts.size(); ++i)
            out << fmt(report.dts[i]) << ',' << fmt(report.discrepancy[i]) << '\n';
    }
    json res;
    res["epsilon"] = eps;
    res["refinement_slope"] = report.refinement_slope;
    res["discrepancy_at_default"] = report.discrepancy_at_default;
    write_meta(dir, "duhamel", cfg, res);
    if (cfg.gnuplot) write_gnuplot(dir, "duhamel", "dt", "discrepancy", true, 2);

    CampaignOutcome oc;
    oc.hard_ok = probe_operator(cfg, problem, eps);
    char buf[256];
    std::snprintf(buf, sizeof(buf), "duhamel: eps=%g discrepancy %.3e at dt=%g, refinement slope %.3f%s", eps,
                  report.discrepancy_at_default, report.dts.empty() ? 0.0 : report.dts.front(),
                  report.refinement_slope, oc.hard_ok ? "" : " hermitian FAIL");
    oc.summary = buf;
    return oc;
}

}  // namespace

int run(const ExperimentConfig& cfg_in, const RunOptions& opt, std::ostream& log)
{
    ExperimentConfig cfg = cfg_in;
    if (opt.campaign_override) cfg.campaign = *opt.campaign_override;
    if (opt.output_dir_override) cfg.output_dir = *opt.output_dir_override;

    std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);

    Problem problem = cfg.to_problem();
    problem.jobs = opt.jobs > 0 ? opt.jobs : static_cast<int>(std::thread::hardware_concurrency());
    if (problem.jobs <= 0) problem.jobs = 1;

    std::vector<Campaign> todo;
    if (cfg.campaign == Campaign::All)
        todo = {Campaign::Energy, Campaign::Moderateness, Campaign::Uniqueness, Campaign::Consistency,
                Campaign::Duhamel};
    else
        todo = {cfg.campaign};

    bool all_ok = true;
    for (Campaign c : todo) {
        const auto t0 = std::chrono::steady_clock::now();
        CampaignOutcome oc;
        try {
            switch (c) {
                case Campaign::Energy: oc = do_energy(cfg, problem, dir); break;
                case Campaign::Moderateness: oc = do_moderateness(cfg, problem, dir); break;
                case Campaign::Uniqueness: oc = do_uniqueness(cfg, problem, dir); break;
                case Campaign::Consistency: oc = do_consistency(cfg, problem, dir); break;
                case Campaign::Duhamel: oc = do_duhamel(cfg, problem, dir); break;
                case Campaign::All: break;
            }
        } catch (const std::exception& e) {
            oc.hard_ok = false;
            oc.summary = campaign_name(c) + std::string(": aborted: ") + e.what();
        }
        const auto t1 = std::chrono::steady_clock::now();
        log << oc.summary;
        if (opt.verbosity > 0)
            log << "  [" << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() << " ms]";
        log << "\n";
        all_ok = all_ok && oc.hard_ok;
    }
    return all_ok ? 0 : 1;
}

}  // namespace smslab
