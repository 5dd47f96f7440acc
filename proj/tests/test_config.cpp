#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "smslab/config.hpp"
#include "smslab/toml.hpp"

using namespace smslab;

TEST_CASE("toml subset: sections, strings, numbers, bools, comments")
{
    const std::string text =
        "# experiment\n"
        "[grid]\n"
        "d = 1  # dimension\n"
        "half_width = 4.0\n"
        "n = 512\n"
        "[campaign]\n"
        "name = \"energy\"\n"
        "flag = true\n";
    const toml::Table t = toml::parse_string(text);
    CHECK(t.find("grid.d")->number() == 1.0);
    CHECK(t.find("grid.half_width")->number() == 4.0);
    CHECK(t.find("campaign.name")->text() == "energy");
    CHECK(t.find("campaign.flag")->boolean());
    CHECK(t.find("grid.missing") == nullptr);
}

TEST_CASE("toml parse errors carry line numbers")
{
    try {
        toml::parse_string("[grid]\nd = 1\nn 512\n", "bad.toml");
        FAIL("expected parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("bad.toml:3") != std::string::npos);
    }
    CHECK_THROWS(toml::parse_string("[grid\n"));
    CHECK_THROWS(toml::parse_string("x = \"unterminated\n"));
    CHECK_THROWS(toml::parse_string("x = 1\nx = 2\n"));
    CHECK_THROWS(toml::parse_string("x = nope\n"));
}

TEST_CASE("minimal config materializes the documented defaults")
{
    const std::string text =
        "[grid]\n"
        "half_width = 4.0\n"
        "n = 512\n"
        "[coefficient]\n"
        "spec = \"background=1; delta(center=0, weight=1)\"\n"
        "[campaign]\n"
        "name = \"energy\"\n";
    const ExperimentConfig c = parse_config_text(text);
    CHECK(c.d == 1);
    CHECK(c.eps0 == 0.5);
    CHECK(c.ratio == 0.5);
    CHECK(c.count == 5);
    CHECK_FALSE(c.dt.has_value());  // dt = auto
    CHECK(c.T == 1.0);
    CHECK(c.variant == "bump");
    CHECK(c.mollify_data);
    CHECK(c.campaign == Campaign::Energy);
    CHECK(c.single_epsilon() == doctest::Approx(0.03125));
    CHECK(c.output_dir == "out");
}

TEST_CASE("consistency campaign rejects singular atoms at validation time")
{
    const std::string text =
        "[grid]\n"
        "half_width = 4.0\n"
        "n = 512\n"
        "[coefficient]\n"
        "spec = \"background=1; delta(center=0, weight=1)\"\n"
        "[campaign]\n"
        "name = \"consistency\"\n";
    try {
        parse_config_text(text);
        FAIL("expected validation error");
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("coefficient.spec") != std::string::npos);
        CHECK(msg.find("regular") != std::string::npos);
    }
}

TEST_CASE("config round-trips through the canonical echo")
{
    const std::string text =
        "[grid]\n"
        "d = 1\n"
        "half_width = 6.0\n"
        "n = 512\n"
        "[coefficient]\n"
        "spec = \"background=1; bump(center=0, width=2, height=0.5)\"\n"
        "[data]\n"
        "spec = \"gaussian(center=0, a=0.5, k0=1)\"\n"
        "[mollifier]\n"
        "variant = \"poly\"\n"
        "second_variant = \"bump:0.845\"\n"
        "[stepper]\n"
        "T = 0.5\n"
        "dt = 0.001\n"
        "[campaign]\n"
        "name = \"uniqueness\"\n"
        "[output]\n"
        "dir = \"results\"\n"
        "gnuplot = true\n";
    const ExperimentConfig a = parse_config_text(text);
    const std::string echo1 = emit_config(a);
    const ExperimentConfig b = parse_config_text(echo1);
    const std::string echo2 = emit_config(b);
    CHECK(echo1 == echo2);
    CHECK(b.variant == "poly");
    CHECK(b.second_variant == "bump:0.845");
    CHECK(b.dt.has_value());
    CHECK(*b.dt == 0.001);
    CHECK(b.gnuplot);
}

TEST_CASE("unknown campaign and semantic validation errors name the key")
{
    CHECK_THROWS(campaign_from_name("sideways"));

    const std::string base =
        "[grid]\nhalf_width = 1.0\nn = 64\n"
        "[coefficient]\nspec = \"background=1\"\n";

    // ladder under-resolved: eps_min = 0.5 * 0.5^7 < 2h = 1/16
    try {
        parse_config_text(base + "[campaign]\nname = \"moderateness\"\n[ladder]\ncount = 8\n");
        FAIL("expected validation error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("ladder") != std::string::npos);
    }

    // uniqueness needs a second mollifier
    try {
        parse_config_text(base + "[campaign]\nname = \"uniqueness\"\n");
        FAIL("expected validation error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("second_variant") != std::string::npos);
    }

    CHECK_THROWS(parse_config_text(base + "[campaign]\nname = \"energy\"\n[stepper]\ntolerance = 1.0\n"));
    CHECK_THROWS(parse_config_text(base + "[campaign]\nname = \"energy\"\n[stepper]\nmean = \"geometric\"\n"));
    CHECK_THROWS(parse_config_text(base + "[campaign]\nname = \"energy\"\n[campaign2]\nx = 1\n"));
    CHECK_THROWS(parse_config_text(base + "[campaign]\nname = \"energy\"\nepsilonn = 0.5\n"));
}

TEST_CASE("config to problem carries every block")
{
    const std::string text =
        "[grid]\n"
        "d = 1\n"
        "half_width = 2.0\n"
        "n = 256\n"
        "[coefficient]\n"
        "spec = \"background=1; jump(center=0, height=1)\"\n"
        "[mollifier]\n"
        "variant = \"bump:0.5\"\n"
        "[stepper]\n"
        "T = 0.25\n"
        "mean = \"harmonic\"\n"
        "[ladder]\n"
        "eps0 = 0.4\n"
        "count = 4\n"
        "[campaign]\n"
        "name = \"moderateness\"\n";
    const Problem p = parse_config_text(text).to_problem();
    CHECK(p.grid.n == 256);
    CHECK(p.mollifier == "bump:0.5");
    CHECK(p.mean == StaggerMean::Harmonic);
    CHECK(p.ladder.values.front() == 0.4);
    CHECK(p.ladder.size() == 4);
    CHECK(p.stepper.T == 0.25);
}
