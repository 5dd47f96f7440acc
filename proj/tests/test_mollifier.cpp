#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "smslab/mollifier.hpp"

using namespace smslab;

namespace {

// independent check of unit mass: dense trapezoid over the support
double mass_1d(const Mollifier& psi, double eps = 1.0)
{
    const int n = 1 << 16;
    const double a = psi.support_radius() * eps;
    const double h = 2.0 * a / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = -a + h * i;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        acc += w * psi.scaled(x, eps);
    }
    return acc * h;
}

double mass_2d(const Mollifier& psi, double eps = 1.0)
{
    const int n = 2048;
    const double a = psi.support_radius() * eps;
    const double h = 2.0 * a / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            const double wx = (i == 0 || i == n) ? 0.5 : 1.0;
            const double wy = (j == 0 || j == n) ? 0.5 : 1.0;
            acc += wx * wy * psi.scaled({-a + h * i, -a + h * j}, eps);
        }
    return acc * h * h;
}

}  // namespace

TEST_CASE("standard bump: unit mass, compact support")
{
    const Mollifier psi = Mollifier::make("bump", 1);
    CHECK(mass_1d(psi) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(psi.value(1.0) == 0.0);
    CHECK(psi.value(-1.0) == 0.0);
    CHECK(psi.value(1.7) == 0.0);
    CHECK(psi.value(0.0) > 0.0);
    CHECK(psi.value(0.3) == psi.value(-0.3));
}

TEST_CASE("polynomial bump: closed-form normalization 35/32")
{
    const Mollifier psi = Mollifier::make("poly", 1);
    // int_{-1}^{1} (1-x^2)^3 dx = 32/35, so the normalized peak is 35/32
    CHECK(psi.value(0.0) == doctest::Approx(35.0 / 32.0).epsilon(1e-12));
    CHECK(mass_1d(psi) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("scaling rule eps^{-1} psi(x/eps) in d=1")
{
    const Mollifier psi = Mollifier::make("bump", 1);
    CHECK(psi.scaled(0.37, 1.0) == doctest::Approx(psi.value(0.37)).epsilon(1e-15));
    CHECK(psi.scaled(0.0, 0.5) == doctest::Approx(2.0 * psi.value(0.0)).epsilon(1e-14));
    for (double eps : {0.25, 0.1}) CHECK(mass_1d(psi, eps) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("squeezed variants keep unit mass on a smaller support")
{
    const Mollifier psi = Mollifier::make("bump:0.25", 1);
    CHECK(psi.support_radius() == doctest::Approx(0.25));
    CHECK(psi.value(0.26) == 0.0);
    CHECK(psi.value(0.0) == doctest::Approx(4.0 * Mollifier::make("bump", 1).value(0.0)).epsilon(1e-12));
    CHECK(mass_1d(psi) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("2d normalization uses eps^{-d}")
{
    const Mollifier psi = Mollifier::make("bump", 2);
    CHECK(mass_2d(psi) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(mass_2d(psi, 0.5) == doctest::Approx(1.0).epsilon(1e-7));
    // peak scales like eps^{-2}
    CHECK(psi.scaled({0.0, 0.0}, 0.5) == doctest::Approx(4.0 * psi.value({0.0, 0.0})).epsilon(1e-13));
}

TEST_CASE("primitive of the marginal rises 0 to 1, half at the center")
{
    for (const char* tag : {"bump", "poly", "bump:0.5"}) {
        for (int d : {1, 2}) {
            const Mollifier psi = Mollifier::make(tag, d);
            const double a = psi.support_radius();
            CHECK(psi.primitive(-a - 0.1) == 0.0);
            CHECK(psi.primitive(a + 0.1) == 1.0);
            CHECK(psi.primitive(0.0) == doctest::Approx(0.5).epsilon(1e-10));
            CHECK(psi.primitive(0.3 * a) + psi.primitive(-0.3 * a) == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("second moments distinguish the catalogue")
{
    const double m_poly = Mollifier::make("poly", 1).second_moment();
    CHECK(m_poly == doctest::Approx(1.0 / 9.0).epsilon(1e-8));
    const double m_bump = Mollifier::make("bump", 1).second_moment();
    CHECK(m_bump > m_poly);  // distinct symmetric profiles
    const double m_sq = Mollifier::make("bump:0.5", 1).second_moment();
    CHECK(m_sq == doctest::Approx(0.25 * m_bump).epsilon(1e-8));
}

TEST_CASE("rejects unknown variants and bad arguments")
{
    CHECK_THROWS_AS(Mollifier::make("triangle", 1), std::invalid_argument);
    CHECK_THROWS_AS(Mollifier::make("bump:0", 1), std::invalid_argument);
    CHECK_THROWS_AS(Mollifier::make("bump:1.5", 1), std::invalid_argument);
    CHECK_THROWS_AS(Mollifier::make("bump:x", 1), std::invalid_argument);
    CHECK_THROWS_AS(Mollifier::make("bump", 3), std::invalid_argument);
    const Mollifier psi = Mollifier::make("bump", 1);
    CHECK_THROWS_AS(psi.scaled(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(psi.scaled(0.0, 1.5), std::invalid_argument);
}
