#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "smslab/norms.hpp"
#include "smslab/oracle.hpp"

using namespace smslab;

namespace {

ComplexField random_field(const Grid& g, unsigned seed)
{
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    ComplexField f(g);
    for (auto& z : f.values) z = Complex{dist(rng), dist(rng)};
    return f;
}

ComplexField gaussian_field(const Grid& g, double a, double k0)
{
    ComplexField f(g);
    for (std::size_t j = 0; j < f.size(); ++j) {
        const auto x = g.node(j);
        f[j] = std::exp(Complex{-a * x[0] * x[0] - (g.d == 2 ? a * x[1] * x[1] : 0.0), k0 * x[0]});
    }
    return f;
}

RegularizedCoefficient delta_coefficient(const Grid& g, double eps)
{
    const Mollifier psi = Mollifier::make("bump", g.d);
    return regularize(parse_coefficient("background=1; delta(center=0, weight=1)"), psi, eps, g);
}

}  // namespace

TEST_CASE("fourier oracle: identity at t=0 and exact eigenmode phase")
{
    const Grid g = build_grid(1, 4.0, 128);
    const ComplexField u0 = gaussian_field(g, 1.0, 1.0);
    const OracleResult r0 = fourier_constant_solution(1.0, u0, 0.0);
    for (std::size_t j = 0; j < u0.size(); ++j) CHECK(std::abs(r0.field[j] - u0[j]) <= 1e-13);

    const int m = 5;
    const double k = std::numbers::pi * m / g.half_width;
    ComplexField em(g);
    for (int j = 0; j < g.n; ++j) em[j] = std::exp(Complex{0.0, k * g.node(j)[0]});
    const double t = 0.37, c = 0.8;
    const OracleResult r = fourier_constant_solution(c, em, t);
    const Complex phase = std::exp(Complex{0.0, -c * k * k * t});
    for (int j = 0; j < g.n; ++j) CHECK(std::abs(r.field[j] - phase * em[j]) <= 1e-12);
}

TEST_CASE("fourier oracle preserves the L2 norm exactly")
{
    const Grid g = build_grid(1, 4.0, 256);
    const ComplexField u0 = random_field(g, 3);
    const OracleResult r = fourier_constant_solution(2.0, u0, 1.3);
    CHECK(l2_norm(r.field) == doctest::Approx(l2_norm(u0)).epsilon(1e-12));
}

TEST_CASE("fourier oracle in 2d: tensor mode")
{
    const Grid g = build_grid(2, 1.0, 16);
    const double kx = std::numbers::pi * 3 / g.half_width;
    const double ky = std::numbers::pi * 2 / g.half_width;
    ComplexField em(g);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            em[g.flat(i, j)] = std::exp(Complex{0.0, kx * g.coord(i) + ky * g.coord(j)});
    const double t = 0.05;
    const OracleResult r = fourier_constant_solution(1.0, em, t);
    const Complex phase = std::exp(Complex{0.0, -(kx * kx + ky * ky) * t});
    for (std::size_t j = 0; j < em.size(); ++j) CHECK(std::abs(r.field[j] - phase * em[j]) <= 1e-11);
}

TEST_CASE("dense reference step: identity, unitarity, guard")
{
    const Grid g = build_grid(1, 2.0, 64);
    const SpatialOperator L = assemble_operator(delta_coefficient(g, 0.3));
    const ComplexField u = random_field(g, 11);

    const OracleResult id = dense_reference_step(L, u, 0.0);
    for (std::size_t j = 0; j < u.size(); ++j) CHECK(id.field[j] == u[j]);

    const OracleResult one = dense_reference_step(L, u, 1e-3);
    CHECK(l2_norm(one.field) == doctest::Approx(l2_norm(u)).epsilon(1e-13));

    const Grid big = build_grid(1, 2.0, 512);
    const SpatialOperator Lbig = assemble_operator(delta_coefficient(big, 0.3));
    CHECK_THROWS_AS(dense_reference_step(Lbig, ComplexField(big), 1e-3), std::invalid_argument);
}

TEST_CASE("dense and sparse CN steps agree to 1e-13 on a singular coefficient")
{
    const Grid g = build_grid(1, 2.0, 64);
    const SpatialOperator L = assemble_operator(delta_coefficient(g, 0.25));
    const double dt = 1e-3;
    ComplexField u = random_field(g, 17);
    for (int s = 0; s < 10; ++s) {
        const ComplexField sparse = step_cn(L, u, dt);
        const OracleResult dense = dense_reference_step(L, u, dt);
        CHECK(l2_norm(sparse - dense.field) <= 1e-13 * l2_norm(dense.field));
        u = sparse;
    }
}

TEST_CASE("dense/sparse agreement in 2d (lanczos path)")
{
    const Grid g = build_grid(2, 1.0, 12);  // 144 unknowns, within the dense guard
    const Mollifier psi = Mollifier::make("bump", 2);
    const auto rc = regularize(parse_coefficient("background=1; delta(center=(0,0), weight=1)"), psi, 0.4, g);
    const SpatialOperator L = assemble_operator(rc);
    ComplexField u = random_field(g, 19);
    const double dt = 5e-4;
    const ComplexField sparse = step_cn(L, u, dt, 1e-12);
    const OracleResult dense = dense_reference_step(L, u, dt);
    CHECK(l2_norm(sparse - dense.field) <= 1e-10 * l2_norm(dense.field));
}

TEST_CASE("fine-grid reference: self convergence at second order")
{
    // coarse solves against the 2x reference; halving h quarters the error
    auto coarse_error = [](int n) {
        FineGridSpec fs;
        fs.g = parse_coefficient("background=1; bump(center=0, width=1, height=0.5)");
        fs.u0 = parse_data("gaussian(center=0, a=1, k0=1)");
        fs.coarse = build_grid(1, 4.0, n);
        fs.cfg.T = 0.1;
        fs.refinement = 2;
        const OracleResult ref = fine_grid_reference(fs);

        RegularizedCoefficient rc;
        rc.field = evaluate_coefficient(fs.g, fs.coarse);
        rc.epsilon = 0.0;
        rc.c0 = 1.0;
        rc.w1inf = w1inf_norm(rc.field);
        const SpatialOperator L = assemble_operator(rc);
        const SolutionTrace t = solve_homogeneous(L, evaluate_data(fs.u0, fs.coarse), fs.cfg);
        return l2_norm(t.final_field - ref.field);
    };
    const double e1 = coarse_error(64), e2 = coarse_error(128);
    CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("fine-grid reference is converged: 2x vs 4x differ below the scheme error")
{
    FineGridSpec fs;
    fs.g = parse_coefficient("background=1; bump(center=0, width=1, height=0.5)");
    fs.u0 = parse_data("gaussian(center=0, a=1, k0=1)");
    fs.coarse = build_grid(1, 4.0, 128);
    fs.cfg.T = 0.1;
    fs.refinement = 2;
    const OracleResult r2 = fine_grid_reference(fs);
    fs.refinement = 4;
    const OracleResult r4 = fine_grid_reference(fs);

    RegularizedCoefficient rc;
    rc.field = evaluate_coefficient(fs.g, fs.coarse);
    rc.epsilon = 0.0;
    rc.c0 = 1.0;
    rc.w1inf = w1inf_norm(rc.field);
    const SpatialOperator L = assemble_operator(rc);
    const SolutionTrace t = solve_homogeneous(L, evaluate_data(fs.u0, fs.coarse), fs.cfg);
    const double scheme = l2_norm(t.final_field - r2.field);
    CHECK(l2_norm(r2.field - r4.field) < scheme);
}

TEST_CASE("oracle cross-check: fine grid against fourier for constant g")
{
    FineGridSpec fs;
    fs.g = parse_coefficient("background=1");
    fs.u0 = parse_data("gaussian(center=0, a=0.5, k0=1)");
    fs.coarse = build_grid(1, 8.0, 128);
    fs.cfg.T = 0.2;
    fs.refinement = 2;
    const OracleResult fine = fine_grid_reference(fs);
    const OracleResult four = fourier_constant_solution(1.0, evaluate_data(fs.u0, fs.coarse), 0.2);

    // fine scheme error ~ (coarse scheme error)/4; bound by the coarse one
    RegularizedCoefficient rc;
    rc.field = evaluate_coefficient(fs.g, fs.coarse);
    rc.epsilon = 0.0;
    rc.c0 = 1.0;
    rc.w1inf = 1.0;
    const SpatialOperator L = assemble_operator(rc);
    const SolutionTrace t = solve_homogeneous(L, evaluate_data(fs.u0, fs.coarse), fs.cfg);
    const double coarse_scheme = l2_norm(t.final_field - four.field);
    CHECK(l2_norm(fine.field - four.field) <= coarse_scheme);
}

TEST_CASE("fine-grid reference rejects bad refinements and oversized grids")
{
    FineGridSpec fs;
    fs.g = parse_coefficient("background=1");
    fs.u0 = parse_data("gaussian(center=0, a=1)");
    fs.coarse = build_grid(1, 1.0, 64);
    fs.refinement = 3;
    CHECK_THROWS_AS(fine_grid_reference(fs), std::invalid_argument);

    fs.refinement = 2;
    fs.coarse = build_grid(2, 1.0, 512);
    CHECK_THROWS_AS(fine_grid_reference(fs), std::invalid_argument);

    // singular specs need an explicit mollification floor
    fs.coarse = build_grid(1, 1.0, 64);
    fs.g = parse_coefficient("background=1; delta(center=0, weight=1)");
    CHECK_THROWS_AS(fine_grid_reference(fs), std::invalid_argument);
    fs.eps_floor = 0.25;
    CHECK_NOTHROW(fine_grid_reference(fs));
}
