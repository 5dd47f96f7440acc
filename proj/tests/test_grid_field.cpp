#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <numbers>

#include "smslab/field.hpp"

using namespace smslab;

TEST_CASE("grid construction and node layout")
{
    const Grid g = build_grid(1, 1.0, 8);
    CHECK(g.h == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.size() == 8);
    for (int j = 0; j < 8; ++j) CHECK(g.coord(j) == doctest::Approx(-1.0 + 0.25 * j).epsilon(1e-15));

    const Grid gp = build_grid(1, std::numbers::pi, 16);
    CHECK(gp.h == doctest::Approx(std::numbers::pi / 8.0).epsilon(1e-15));

    const Grid g2 = build_grid(2, 1.0, 8);
    CHECK(g2.size() == 64);
    CHECK(g2.node(g2.flat(3, 5))[0] == doctest::Approx(g2.coord(3)));
    CHECK(g2.node(g2.flat(3, 5))[1] == doctest::Approx(g2.coord(5)));
}

TEST_CASE("grid invariant h*n = 2L within one rounding")
{
    for (int n : {8, 12, 100, 512, 2048}) {
        const Grid g = build_grid(1, 0.75, n);
        CHECK(std::abs(g.h * n - 1.5) <= 2.0 * std::numeric_limits<double>::epsilon() * 1.5);
    }
}

TEST_CASE("grid rejects bad parameters")
{
    CHECK_THROWS_AS(build_grid(3, 1.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(0, 1.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(1, 0.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(1, -2.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(1, 1.0, 7), std::invalid_argument);
}

TEST_CASE("periodic wrap")
{
    const Grid g = build_grid(1, 2.0, 16);
    CHECK(g.wrap(-1) == 15);
    CHECK(g.wrap(16) == 0);
    CHECK(g.wrap_displacement(3.9) == doctest::Approx(-0.1));
    CHECK(g.wrap_displacement(-2.1) == doctest::Approx(1.9));
}

TEST_CASE("field size checks and finiteness")
{
    const Grid g = build_grid(1, 1.0, 8);
    CHECK_THROWS_AS(ComplexField(g, std::vector<Complex>(7)), std::invalid_argument);
    ComplexField f(g);
    f[3] = Complex{1.0, std::numeric_limits<double>::infinity()};
    CHECK_THROWS_AS(f.check_finite(), std::runtime_error);
}

TEST_CASE("csv round trip, 1d complex")
{
    const Grid g = build_grid(1, 4.0, 16);
    ComplexField f(g);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = Complex{0.25 * k, -1.0 / (1.0 + k)};

    const auto path = std::filesystem::temp_directory_path() / "smslab_field_1d.csv";
    save_csv(path.string(), f);
    const ComplexField back = load_complex_csv(path.string());
    REQUIRE(back.grid == g);
    for (std::size_t k = 0; k < f.size(); ++k) {
        CHECK(back[k].real() == f[k].real());
        CHECK(back[k].imag() == f[k].imag());
    }
    std::filesystem::remove(path);
}

TEST_CASE("csv round trip, 2d real")
{
    const Grid g = build_grid(2, 1.5, 8);
    RealField f(g);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = std::sin(0.1 * k) + 2.0;

    const auto path = std::filesystem::temp_directory_path() / "smslab_field_2d.csv";
    save_csv(path.string(), f);
    const RealField back = load_real_csv(path.string());
    REQUIRE(back.grid == g);
    for (std::size_t k = 0; k < f.size(); ++k) CHECK(back[k] == f[k]);
    std::filesystem::remove(path);
}
