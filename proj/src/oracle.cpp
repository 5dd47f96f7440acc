#include "smslab/oracle.hpp"

#include "smslab/norms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace smslab {

namespace {

// direct DFT along one axis (the oracle is deliberately brute force)
std::vector<Complex> dft_axis(const std::vector<Complex>& in, int n, int stride, int count, bool inverse)
{
    std::vector<Complex> out(in.size());
    const double sgn = inverse ? 1.0 : -1.0;
    const double twopi_n = 2.0 * std::numbers::pi / static_cast<double>(n);
    for (int block = 0; block < count; ++block) {
        const int base = (stride == 1) ? block * n : block;
        for (int m = 0; m < n; ++m) {
            Complex s{0.0, 0.0};
            for (int j = 0; j < n; ++j) {
                const double ang = sgn * twopi_n * static_cast<double>(m) * static_cast<double>(j);
                s += in[base + j * stride] * Complex{std::cos(ang), std::sin(ang)};
            }
            out[base + m * stride] = inverse ? s / static_cast<double>(n) : s;
        }
    }
    return out;
}

double mode_wavenumber(int m, int n, double half_width)
{
    const int mm = m <= n / 2 ? m : m - n;
    return std::numbers::pi * static_cast<double>(mm) / half_width;
}

}  // namespace

OracleResult fourier_constant_solution(double c, const ComplexField& u0, double t)
{
    if (!(c > 0.0)) throw std::invalid_argument("fourier_constant_solution: c must be positive");
    const Grid& g = u0.grid;
    const int n = g.n;

    std::vector<Complex> hat = dft_axis(u0.values, n, 1, g.d == 1 ? 1 : n, false);
    if (g.d == 2) hat = dft_axis(hat, n, n, n, false);

    if (g.d == 1) {
        for (int m = 0; m < n; ++m) {
            const double k = mode_wavenumber(m, n, g.half_width);
            hat[m] *= std::exp(Complex{0.0, -c * k * k * t});
        }
    } else {
        for (int mi = 0; mi < n; ++mi)
            for (int mj = 0; mj < n; ++mj) {
                const double ki = mode_wavenumber(mi, n, g.half_width);
                const double kj = mode_wavenumber(mj, n, g.half_width);
                hat[g.flat(mi, mj)] *= std::exp(Complex{0.0, -c * (ki * ki + kj * kj) * t});
            }
    }

    std::vector<Complex> back = dft_axis(hat, n, 1, g.d == 1 ? 1 : n, true);
    if (g.d == 2) back = dft_axis(back, n, n, n, true);

    OracleResult r;
    r.method = OracleMethod::Fourier;
    r.field = ComplexField(g, std::move(back));
    return r;
}

namespace {

// dense complex LU with partial pivoting; solves in place
void lu_solve(std::vector<Complex>& A, std::vector<Complex>& x, std::size_t n)
{
    std::vector<std::size_t> piv(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t p = col;
        double best = std::abs(A[col * n + col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(A[r * n + col]);
            if (v > best) {
                best = v;
                p = r;
            }
        }
        if (best == 0.0) throw std::runtime_error("dense_reference_step: singular matrix");
        piv[col] = p;
        if (p != col)
            for (std::size_t c = 0; c < n; ++c) std::swap(A[col * n + c], A[p * n + c]);
        const Complex d = A[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const Complex m = A[r * n + col] / d;
            A[r * n + col] = m;
            for (std::size_t c = col + 1; c < n; ++c) A[r * n + c] -= m * A[col * n + c];
        }
    }
    for (std::size_t col = 0; col < n; ++col) {
        if (piv[col] != col) std::swap(x[col], x[piv[col]]);
        for (std::size_t r = col + 1; r < n; ++r) x[r] -= A[r * n + col] * x[col];
    }
    for (std::size_t col = n; col-- > 0;) {
        for (std::size_t c = col + 1; c < n; ++c) x[col] -= A[col * n + c] * x[c];
        x[col] /= A[col * n + col];
    }
}

}  // namespace

OracleResult dense_reference_step(const SpatialOperator& L, const ComplexField& u, double dt)
{
    const Grid& g = L.grid();
    const std::size_t n = g.size();
    if (n > 256) throw std::invalid_argument("dense_reference_step: grid too large for the dense path");
    require_same_grid(g, u.grid, "dense_reference_step");

    OracleResult r;
    r.method = OracleMethod::Dense;
    if (dt == 0.0) {
        r.field = u;
        return r;
    }

    // materialize L from the stencil definition
    const double invh2 = 1.0 / (g.h * g.h);
    std::vector<double> Lmat(n * n, 0.0);
    auto add = [&](std::size_t row, std::size_t col, double v) { Lmat[row * n + col] += v; };
    if (g.d == 1) {
        const auto& w = L.weights()[0];
        for (int i = 0; i < g.n; ++i) {
            const int ip = g.wrap(i + 1), im = g.wrap(i - 1);
            add(i, ip, w[i] * invh2);
            add(i, im, w[im] * invh2);
            add(i, i, -(w[i] + w[im]) * invh2);
        }
    } else {
        for (int axis = 0; axis < 2; ++axis) {
            const auto& w = L.weights()[axis];
            for (int i = 0; i < g.n; ++i)
                for (int j = 0; j < g.n; ++j) {
                    const std::size_t c = g.flat(i, j);
                    std::size_t p, m, me;
                    if (axis == 0) {
                        p = g.flat(g.wrap(i + 1), j);
                        m = g.flat(g.wrap(i - 1), j);
                        me = m;
                    } else {
                        p = g.flat(i, g.wrap(j + 1));
                        m = g.flat(i, g.wrap(j - 1));
                        me = m;
                    }
                    add(c, p, w[c] * invh2);
                    add(c, m, w[me] * invh2);
                    add(c, c, -(w[c] + w[me]) * invh2);
                }
        }
    }

    const Complex isig{0.0, 0.5 * dt};
    std::vector<Complex> A(n * n);
    std::vector<Complex> rhs(n, Complex{0.0, 0.0});
    for (std::size_t row = 0; row < n; ++row) {
        Complex acc{0.0, 0.0};
        for (std::size_t col = 0; col < n; ++col) {
            const double l = Lmat[row * n + col];
            A[row * n + col] = (row == col ? Complex{1.0, 0.0} : Complex{0.0, 0.0}) - isig * l;
            acc += ((row == col ? Complex{1.0, 0.0} : Complex{0.0, 0.0}) + isig * l) * u[col];
        }
        rhs[row] = acc;
    }
    lu_solve(A, rhs, n);
    r.field = ComplexField(g, std::move(rhs));
    return r;
}

OracleResult fine_grid_reference(const FineGridSpec& spec)
{
    if (spec.refinement != 2 && spec.refinement != 4)
        throw std::invalid_argument("fine_grid_reference: refinement must be 2 or 4");
    const Grid& coarse = spec.coarse;
    const long fine_n = static_cast<long>(coarse.n) * spec.refinement;
    const long budget = coarse.d == 1 ? (1L << 22) : (1L << 9);  // 4M points in 1-d, 512 per axis in 2-d
    if (fine_n > budget) throw std::invalid_argument("fine_grid_reference: refined grid exceeds the memory budget");
    const Grid fine = build_grid(coarse.d, coarse.half_width, static_cast<int>(fine_n));

    RegularizedCoefficient gf;
    if (spec.g.is_regular() && !spec.eps_floor) {
        gf.field = evaluate_coefficient(spec.g, fine);
        gf.epsilon = 0.0;
        gf.c0 = spec.g.background;
        gf.w1inf = w1inf_norm(gf.field);
    } else {
        if (!spec.eps_floor)
            throw std::invalid_argument("fine_grid_reference: singular spec needs an eps_floor");
        const Mollifier psi = Mollifier::make(spec.mollifier_variant, fine.d);
        gf = regularize(spec.g, psi, *spec.eps_floor, fine);
    }

    ComplexField u0f;
    if (std::holds_alternative<DeltaData>(spec.u0)) {
        if (!spec.eps_floor) throw std::invalid_argument("fine_grid_reference: delta data needs an eps_floor");
        const Mollifier psi = Mollifier::make(spec.mollifier_variant, fine.d);
        u0f = regularize_data(spec.u0, psi, *spec.eps_floor, fine);
    } else if (std::holds_alternative<SampledData>(spec.u0)) {
        // inject coarse samples, interpolating midpoints linearly
        const ComplexField& src = std::get<SampledData>(spec.u0).field;
        require_same_grid(src.grid, coarse, "fine_grid_reference(sampled data)");
        u0f = ComplexField(fine);
        const int r = spec.refinement;
        if (coarse.d == 1) {
            for (int i = 0; i < fine.n; ++i) {
                const int lo = i / r, off = i % r;
                const double w = static_cast<double>(off) / r;
                u0f[i] = (1.0 - w) * src[coarse.wrap(lo)] + w * src[coarse.wrap(lo + 1)];
            }
        } else {
            for (int i = 0; i < fine.n; ++i)
                for (int j = 0; j < fine.n; ++j) {
                    const int li = i / r, lj = j / r;
                    const double wi = static_cast<double>(i % r) / r, wj = static_cast<double>(j % r) / r;
                    const Complex v00 = src[coarse.flat(coarse.wrap(li), coarse.wrap(lj))];
                    const Complex v10 = src[coarse.flat(coarse.wrap(li + 1), coarse.wrap(lj))];
                    const Complex v01 = src[coarse.flat(coarse.wrap(li), coarse.wrap(lj + 1))];
                    const Complex v11 = src[coarse.flat(coarse.wrap(li + 1), coarse.wrap(lj + 1))];
                    u0f[fine.flat(i, j)] =
                        (1 - wi) * (1 - wj) * v00 + wi * (1 - wj) * v10 + (1 - wi) * wj * v01 + wi * wj * v11;
                }
        }
    } else {
        u0f = evaluate_data(spec.u0, fine);
    }

    SpatialOperator Lf(fine, gf, spec.mean);
    StepperConfig fine_cfg = spec.cfg;
    if (spec.cfg.dt)
        fine_cfg.dt = *spec.cfg.dt / static_cast<double>(spec.refinement * spec.refinement);
    // dt = auto re-derives from the fine grid (h^2 scaling)
    SolutionTrace trace = solve_homogeneous(Lf, u0f, fine_cfg);

    OracleResult out;
    out.method = OracleMethod::FineGrid;
    out.field = ComplexField(coarse);
    const int r = spec.refinement;
    if (coarse.d == 1) {
        for (int i = 0; i < coarse.n; ++i) out.field[i] = trace.final_field[i * r];
    } else {
        for (int i = 0; i < coarse.n; ++i)
            for (int j = 0; j < coarse.n; ++j)
                out.field[coarse.flat(i, j)] = trace.final_field[fine.flat(i * r, j * r)];
    }
    return out;
}

}  // namespace smslab
