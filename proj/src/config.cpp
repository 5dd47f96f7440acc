#include "smslab/config.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "smslab/toml.hpp"

namespace smslab {

namespace {

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void bad(const std::string& key, const std::string& msg)
{
    throw std::runtime_error("config: key '" + key + "': " + msg);
}

double get_number(const toml::Table& t, const std::string& key, double fallback)
{
    const toml::Value* v = t.find(key);
    if (!v) return fallback;
    if (!v->is_number()) bad(key, "expected a number");
    return v->number();
}

int get_int(const toml::Table& t, const std::string& key, int fallback)
{
    const double d = get_number(t, key, fallback);
    const int i = static_cast<int>(std::llround(d));
    if (std::abs(d - i) > 1e-9) bad(key, "expected an integer");
    return i;
}

std::string get_text(const toml::Table& t, const std::string& key, const std::string& fallback)
{
    const toml::Value* v = t.find(key);
    if (!v) return fallback;
    if (!v->is_string()) bad(key, "expected a quoted string");
    return v->text();
}

bool get_bool(const toml::Table& t, const std::string& key, bool fallback)
{
    const toml::Value* v = t.find(key);
    if (!v) return fallback;
    if (!v->is_bool()) bad(key, "expected true or false");
    return v->boolean();
}

}  // namespace

Campaign campaign_from_name(const std::string& name)
{
    if (name == "energy") return Campaign::Energy;
    if (name == "moderateness") return Campaign::Moderateness;
    if (name == "uniqueness") return Campaign::Uniqueness;
    if (name == "consistency") return Campaign::Consistency;
    if (name == "duhamel") return Campaign::Duhamel;
    if (name == "all") return Campaign::All;
    throw std::runtime_error("config: unknown campaign '" + name +
                             "' (expected energy|moderateness|uniqueness|consistency|duhamel|all)");
}

std::string campaign_name(Campaign c)
{
    switch (c) {
        case Campaign::Energy: return "energy";
        case Campaign::Moderateness: return "moderateness";
        case Campaign::Uniqueness: return "uniqueness";
        case Campaign::Consistency: return "consistency";
        case Campaign::Duhamel: return "duhamel";
        case Campaign::All: return "all";
    }
    return "energy";
}

namespace {

const char* kKnownKeys[] = {
    "grid.d", "grid.half_width", "grid.n",
    "coefficient.spec", "data.spec",
    "mollifier.variant", "mollifier.second_variant", "mollifier.mollify_data",
    "ladder.eps0", "ladder.ratio", "ladder.count",
    "stepper.dt", "stepper.T", "stepper.tolerance", "stepper.snapshot_stride", "stepper.mean",
    "campaign.name", "campaign.epsilon", "campaign.refinement", "campaign.halvings", "campaign.fit_h2",
    "output.dir", "output.gnuplot",
};

ExperimentConfig from_table(const toml::Table& t)
{
    for (const auto& [key, value] : t.entries) {
        bool known = false;
        for (const char* k : kKnownKeys)
            if (key == k) {
                known = true;
                break;
            }
        if (!known)
            throw std::runtime_error("config: unknown key '" + key + "' (line " +
                                     std::to_string(value.line) + ")");
    }

    ExperimentConfig c;

    c.d = get_int(t, "grid.d", 1);
    const toml::Value* hw = t.find("grid.half_width");
    if (!hw) bad("grid.half_width", "required");
    if (!hw->is_number()) bad("grid.half_width", "expected a number");
    c.half_width = hw->number();
    const toml::Value* n = t.find("grid.n");
    if (!n) bad("grid.n", "required");
    c.n = get_int(t, "grid.n", 0);

    const toml::Value* spec = t.find("coefficient.spec");
    if (!spec) bad("coefficient.spec", "required");
    if (!spec->is_string()) bad("coefficient.spec", "expected a quoted string");
    c.coefficient_text = spec->text();

    c.data_text = get_text(t, "data.spec", c.data_text);

    c.variant = get_text(t, "mollifier.variant", c.variant);
    c.second_variant = get_text(t, "mollifier.second_variant", "");
    c.mollify_data = get_bool(t, "mollifier.mollify_data", true);

    c.eps0 = get_number(t, "ladder.eps0", c.eps0);
    c.ratio = get_number(t, "ladder.ratio", c.ratio);
    c.count = get_int(t, "ladder.count", c.count);

    const toml::Value* dt = t.find("stepper.dt");
    if (dt) {
        if (dt->is_string()) {
            if (dt->text() != "auto") bad("stepper.dt", "expected a number or \"auto\"");
        } else if (dt->is_number()) {
            c.dt = dt->number();
        } else {
            bad("stepper.dt", "expected a number or \"auto\"");
        }
    }
    c.T = get_number(t, "stepper.T", c.T);
    c.tolerance = get_number(t, "stepper.tolerance", c.tolerance);
    c.snapshot_stride = get_int(t, "stepper.snapshot_stride", c.snapshot_stride);
    c.mean = get_text(t, "stepper.mean", c.mean);

    c.campaign = campaign_from_name(get_text(t, "campaign.name", "energy"));
    const toml::Value* eps = t.find("campaign.epsilon");
    if (eps) {
        if (!eps->is_number()) bad("campaign.epsilon", "expected a number");
        c.epsilon = eps->number();
    }
    c.refinement = get_int(t, "campaign.refinement", c.refinement);
    c.halvings = get_int(t, "campaign.halvings", c.halvings);
    c.fit_h2 = get_bool(t, "campaign.fit_h2", c.fit_h2);

    c.output_dir = get_text(t, "output.dir", c.output_dir);
    c.gnuplot = get_bool(t, "output.gnuplot", c.gnuplot);
    return c;
}

void validate(const ExperimentConfig& c)
{
    // structural checks first: grids, specs, mollifiers must parse
    const Grid grid = build_grid(c.d, c.half_width, c.n);
    const CoefficientSpec spec = parse_coefficient(c.coefficient_text);
    parse_data(c.data_text);
    Mollifier::make(c.variant, c.d);
    if (!c.second_variant.empty()) Mollifier::make(c.second_variant, c.d);
    const EpsilonLadder ladder = make_ladder(c.eps0, c.ratio, static_cast<std::size_t>(c.count));

    if (c.mean != "arithmetic" && c.mean != "harmonic")
        bad("stepper.mean", "expected \"arithmetic\" or \"harmonic\"");
    if (!(c.tolerance > 0.0 && c.tolerance <= 1e-6))
        bad("stepper.tolerance", "must lie in (0, 1e-6]");
    if (!(c.T > 0.0)) bad("stepper.T", "must be positive");
    if (c.dt && !(*c.dt > 0.0 && *c.dt <= c.T)) bad("stepper.dt", "need 0 < dt <= T");
    if (c.snapshot_stride < 0) bad("stepper.snapshot_stride", "must be nonnegative");
    if (c.refinement != 2 && c.refinement != 4) bad("campaign.refinement", "must be 2 or 4");
    if (c.halvings < 1 || c.halvings > 8) bad("campaign.halvings", "must lie in 1..8");

    if ((c.campaign == Campaign::Uniqueness || c.campaign == Campaign::Duhamel || c.campaign == Campaign::All) &&
        c.second_variant.empty())
        bad("mollifier.second_variant", "required for uniqueness/duhamel campaigns");

    if ((c.campaign == Campaign::Consistency || c.campaign == Campaign::All) && !spec.is_regular())
        bad("coefficient.spec",
            "the consistency campaign requires a regular coefficient (no delta/jump atoms): the theorem's "
            "hypothesis g in W^{1,inf} fails for singular atoms");

    // moderateness rate fits are meaningless on under-resolved rungs; the
    // other campaigns only warn (their smallest rungs may dip below 2h)
    if ((c.campaign == Campaign::Moderateness || c.campaign == Campaign::All) && ladder.min() < 2.0 * grid.h)
        bad("ladder.count", "smallest eps " + fmt(ladder.min()) + " is under-resolved (< 2h = " +
                                fmt(2.0 * grid.h) + ") on this grid");

    const double eps_single = c.epsilon ? *c.epsilon : ladder.min();
    if (!(eps_single > 0.0 && eps_single <= 1.0)) bad("campaign.epsilon", "must lie in (0, 1]");
}

}  // namespace

Problem ExperimentConfig::to_problem() const
{
    Problem p;
    p.coefficient_text = coefficient_text;
    p.data_text = data_text;
    p.mollifier = variant;
    p.mollifier_alt = second_variant;
    p.grid = build_grid(d, half_width, n);
    p.stepper.dt = dt;
    p.stepper.T = T;
    p.stepper.tolerance = tolerance;
    p.stepper.snapshot_stride = snapshot_stride;
    p.ladder = make_ladder(eps0, ratio, static_cast<std::size_t>(count));
    p.mean = mean == "harmonic" ? StaggerMean::Harmonic : StaggerMean::Arithmetic;
    p.mollify_data = mollify_data;
    return p;
}

double ExperimentConfig::single_epsilon() const
{
    if (epsilon) return *epsilon;
    return make_ladder(eps0, ratio, static_cast<std::size_t>(count)).min();
}

ExperimentConfig parse_config(const std::string& path)
{
    ExperimentConfig c = from_table(toml::parse_file(path));
    validate(c);
    return c;
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin)
{
    ExperimentConfig c = from_table(toml::parse_string(text, origin));
    validate(c);
    return c;
}

std::string emit_config(const ExperimentConfig& c)
{
    std::ostringstream os;
    os << "[grid]\n";
    os << "d = " << c.d << "\n";
    os << "half_width = " << fmt(c.half_width) << "\n";
    os << "n = " << c.n << "\n\n";
    os << "[coefficient]\n";
    os << "spec = \"" << c.coefficient_text << "\"\n\n";
    os << "[data]\n";
    os << "spec = \"" << c.data_text << "\"\n\n";
    os << "[mollifier]\n";
    os << "variant = \"" << c.variant << "\"\n";
    if (!c.second_variant.empty()) os << "second_variant = \"" << c.second_variant << "\"\n";
    os << "mollify_data = " << (c.mollify_data ? "true" : "false") << "\n\n";
    os << "[ladder]\n";
    os << "eps0 = " << fmt(c.eps0) << "\n";
    os << "ratio = " << fmt(c.ratio) << "\n";
    os << "count = " << c.count << "\n\n";
    os << "[stepper]\n";
    if (c.dt)
        os << "dt = " << fmt(*c.dt) << "\n";
    else
        os << "dt = \"auto\"\n";
    os << "T = " << fmt(c.T) << "\n";
    os << "tolerance = " << fmt(c.tolerance) << "\n";
    os << "snapshot_stride = " << c.snapshot_stride << "\n";
    os << "mean = \"" << c.mean << "\"\n\n";
    os << "[campaign]\n";
    os << "name = \"" << campaign_name(c.campaign) << "\"\n";
    if (c.epsilon) os << "epsilon = " << fmt(*c.epsilon) << "\n";
    os << "refinement = " << c.refinement << "\n";
    os << "halvings = " << c.halvings << "\n";
    os << "fit_h2 = " << (c.fit_h2 ? "true" : "false") << "\n\n";
    os << "[output]\n";
    os << "dir = \"" << c.output_dir << "\"\n";
    os << "gnuplot = " << (c.gnuplot ? "true" : "false") << "\n";
    return os.str();
}

}  // namespace smslab
