#include "smslab/stepper.hpp"

#include "smslab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

namespace smslab {

namespace {

using CVec = std::vector<Complex>;

// Thomas algorithm for a (non-cyclic) tridiagonal system; the CN matrices
// here are strictly diagonally dominant, so no pivoting is needed.
CVec solve_tridiag(CVec a, CVec b, CVec c, CVec r)
{
    const std::size_t n = b.size();
    for (std::size_t i = 1; i < n; ++i) {
        const Complex m = a[i] / b[i - 1];
        b[i] -= m * c[i - 1];
        r[i] -= m * r[i - 1];
    }
    CVec x(n);
    x[n - 1] = r[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (r[i] - c[i] * x[i + 1]) / b[i];
    return x;
}

// Cyclic tridiagonal solve via the Sherman-Morrison rank-one update.
// `alpha` couples row n-1 to column 0, `beta` row 0 to column n-1.
CVec solve_cyclic(const CVec& a, const CVec& b, const CVec& c, Complex alpha, Complex beta, const CVec& r)
{
    const std::size_t n = b.size();
    const Complex gamma = -b[0];

    CVec bb = b;
    bb[0] = b[0] - gamma;
    bb[n - 1] = b[n - 1] - alpha * beta / gamma;

    CVec u(n, Complex{0.0, 0.0});
    u[0] = gamma;
    u[n - 1] = alpha;

    CVec y = solve_tridiag(a, bb, c, r);
    CVec z = solve_tridiag(a, bb, c, u);

    const Complex vy = y[0] + beta / gamma * y[n - 1];
    const Complex vz = z[0] + beta / gamma * z[n - 1];
    const Complex f = vy / (1.0 + vz);

    CVec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] - f * z[i];
    return x;
}

// One CN solve in d=1: assemble the cyclic tridiagonal A = I - i sigma L
// and solve A u+ = rhs directly.
ComplexField cn_solve_1d(const SpatialOperator& L, const ComplexField& rhs, double sigma)
{
    const Grid& g = L.grid();
    const std::size_t n = g.size();
    const auto& w = L.weights()[0];
    const double invh2 = 1.0 / (g.h * g.h);
    const Complex isig{0.0, sigma};

    CVec a(n), b(n), c(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double wl = w[g.wrap(static_cast<int>(j) - 1)];
        const double wr = w[j];
        b[j] = Complex{1.0, 0.0} + isig * ((wl + wr) * invh2);
        c[j] = -isig * (wr * invh2);
        a[j] = -isig * (wl * invh2);
    }
    const Complex corner = -isig * (w[n - 1] * invh2);
    // rows 0 and n-1 couple through the seam edge with weight w[n-1]
    CVec x = solve_cyclic(a, b, c, corner, corner, rhs.values);
    ComplexField out(g);
    out.values = std::move(x);
    return out;
}

double dot_norm(const CVec& v)
{
    double s = 0.0;
    for (const Complex& z : v) s += std::norm(z);
    return std::sqrt(s);
}

Complex dot(const CVec& a, const CVec& b)
{
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
    return s;
}

// Shifted-Lanczos solve of (I - i sigma L) x = b for Hermitian L (d=2).
// The Krylov basis of L is built once; the small complex tridiagonal
// projected system is re-solved each iteration and the residual norm is
// available as sigma * beta_k * |y_k|.
ComplexField cn_solve_lanczos(const SpatialOperator& L, const ComplexField& rhs, double sigma, double tol,
                              SolverStats* stats)
{
    const Grid& g = L.grid();
    const std::size_t n = g.size();
    const double beta0 = dot_norm(rhs.values);
    ComplexField out(g);
    if (beta0 == 0.0) return out;

    const std::size_t maxit = std::min<std::size_t>(n, 600);
    std::vector<CVec> V;
    std::vector<double> alpha, beta;  // T_k diagonal / subdiagonal
    V.reserve(64);

    CVec v = rhs.values;
    for (Complex& z : v) z /= beta0;
    V.push_back(v);

    double resid = std::numeric_limits<double>::max();
    std::vector<Complex> y;

    std::size_t k = 0;
    while (k < maxit) {
        ComplexField Vf(g);
        Vf.values = V[k];
        CVec w = L.apply(Vf).values;

        const double ak = dot(w, V[k]).real();
        alpha.push_back(ak);
        for (std::size_t i = 0; i < n; ++i) w[i] -= ak * V[k][i];
        if (k > 0)
            for (std::size_t i = 0; i < n; ++i) w[i] -= beta[k - 1] * V[k - 1][i];
        // full reorthogonalization keeps the basis clean on small grids
        for (const CVec& vb : V) {
            const Complex proj = dot(w, vb);
            for (std::size_t i = 0; i < n; ++i) w[i] -= proj * vb[i];
        }
        const double bk = dot_norm(w);
        ++k;

        // solve (I - i sigma T_k) y = beta0 e1
        CVec ta(k), tb(k), tc(k), tr(k, Complex{0.0, 0.0});
        for (std::size_t j = 0; j < k; ++j) {
            tb[j] = Complex{1.0, 0.0} - Complex{0.0, sigma} * alpha[j];
            if (j > 0) {
                ta[j] = -Complex{0.0, sigma} * beta[j - 1];
                tc[j - 1] = -Complex{0.0, sigma} * beta[j - 1];
            }
        }
        tr[0] = beta0;
        y = solve_tridiag(ta, tb, tc, tr);
        resid = sigma * bk * std::abs(y[k - 1]);
        if (resid <= tol * beta0 || bk == 0.0) {
            beta.push_back(bk);
            break;
        }

        beta.push_back(bk);
        for (Complex& z : w) z /= bk;
        V.push_back(std::move(w));
    }

    if (resid > tol * beta0)
        throw std::runtime_error("step_cn: Lanczos did not reach tolerance, residual=" + std::to_string(resid / beta0));

    for (std::size_t j = 0; j < y.size() && j < V.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) out.values[i] += y[j] * V[j][i];

    if (stats) {
        stats->iterations += static_cast<long>(y.size());
        stats->max_iterations = std::max(stats->max_iterations, static_cast<int>(y.size()));
        stats->max_residual = std::max(stats->max_residual, resid / beta0);
    }
    return out;
}

ComplexField cn_rhs(const SpatialOperator& L, const ComplexField& u, double sigma)
{
    ComplexField lu = L.apply(u);
    ComplexField rhs(u.grid);
    const Complex isig{0.0, sigma};
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = u[i] + isig * lu[i];
    return rhs;
}

struct StepPlan {
    std::vector<double> dts;  ///< step sizes; all equal except a short last one
    std::vector<double> times;  ///< cumulative, times[0] = 0
};

StepPlan plan_steps(double T, double dt)
{
    if (!(dt > 0.0)) throw std::invalid_argument("stepper: dt must be positive");
    if (!(T >= 0.0)) throw std::invalid_argument("stepper: T must be nonnegative");
    StepPlan p;
    p.times.push_back(0.0);
    const long nfull = static_cast<long>(std::floor(T / dt * (1.0 + 1e-14)));
    for (long k = 0; k < nfull; ++k) {
        p.dts.push_back(dt);
        p.times.push_back(dt * static_cast<double>(k + 1));
    }
    const double rem = T - dt * static_cast<double>(nfull);
    if (rem > 1e-12 * std::max(T, dt)) {
        p.dts.push_back(rem);
        p.times.push_back(T);
    } else if (!p.times.empty()) {
        p.times.back() = T;  // absorb rounding
    }
    return p;
}

}  // namespace

double auto_dt(const Grid& grid, double gmax)
{
    return grid.h * grid.h * std::numbers::pi / (2.0 * gmax);
}

double StepperConfig::resolve_dt(const SpatialOperator& L) const
{
    if (dt) {
        if (!(*dt > 0.0 && *dt <= T)) throw std::invalid_argument("StepperConfig: need 0 < dt <= T");
        return *dt;
    }
    return auto_dt(L.grid(), L.max_coefficient());
}

double SolutionTrace::max_drift() const
{
    double m = 0.0;
    for (double d : drift) m = std::max(m, d);
    return m;
}

double SolutionTrace::max_energy_drift() const
{
    if (energy_form.empty()) return 0.0;
    const double e0 = energy_form.front();
    if (e0 == 0.0) return 0.0;
    double m = 0.0;
    for (double e : energy_form) m = std::max(m, std::abs(e - e0) / e0);
    return m;
}

ComplexField SolutionTrace::sample(double t) const
{
    if (snapshots.empty()) throw std::runtime_error("SolutionTrace::sample: no snapshots recorded");
    if (t <= snapshot_times.front()) return snapshots.front();
    if (t >= snapshot_times.back()) return snapshots.back();
    auto it = std::upper_bound(snapshot_times.begin(), snapshot_times.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - snapshot_times.begin());
    const std::size_t lo = hi - 1;
    const double t0 = snapshot_times[lo], t1 = snapshot_times[hi];
    const double w = (t - t0) / (t1 - t0);
    ComplexField out(snapshots[lo].grid);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (1.0 - w) * snapshots[lo][i] + w * snapshots[hi][i];
    return out;
}

ComplexField step_cn(const SpatialOperator& L, const ComplexField& u, double dt, double tol,
                     SolverStats* stats)
{
    require_same_grid(L.grid(), u.grid, "step_cn");
    if (dt == 0.0) return u;
    if (dt < 0.0) throw std::invalid_argument("step_cn: dt must be nonnegative");

    const double sigma = 0.5 * dt;
    const ComplexField rhs = cn_rhs(L, u, sigma);
    if (stats) ++stats->steps;
    if (L.grid().d == 1) return cn_solve_1d(L, rhs, sigma);
    return cn_solve_lanczos(L, rhs, sigma, tol, stats);
}

namespace {

struct Recorder {
    SolutionTrace trace;
    double l2_0 = 0.0;
    const SpatialOperator* L = nullptr;
    int stride = 0;

    void start(const ComplexField& u0)
    {
        l2_0 = l2_norm(u0);
        record(0.0, u0);
        trace.snapshot_times.push_back(0.0);
        trace.snapshots.push_back(u0);
    }

    void record(double t, const ComplexField& u)
    {
        trace.times.push_back(t);
        const double l2t = l2_norm(u);
        trace.l2.push_back(l2t);
        trace.h2.push_back(h2_norm(u));
        trace.energy_form.push_back(L->energy_form(u));
        trace.drift.push_back(l2_0 > 0.0 ? std::abs(l2t - l2_0) / l2_0 : 0.0);
    }

    void step_done(long k, long total, double t, const ComplexField& u)
    {
        record(t, u);
        const bool last = k + 1 == total;
        if ((stride > 0 && (k + 1) % stride == 0) || last) {
            trace.snapshot_times.push_back(t);
            trace.snapshots.push_back(u);
        }
    }
};

}  // namespace

SolutionTrace solve_homogeneous(const SpatialOperator& L, const ComplexField& u0, const StepperConfig& cfg)
{
    require_same_grid(L.grid(), u0.grid, "solve_homogeneous");
    const double dt = cfg.resolve_dt(L);
    const StepPlan plan = plan_steps(cfg.T, dt);

    Recorder rec;
    rec.L = &L;
    rec.stride = cfg.snapshot_stride;
    rec.start(u0);

    ComplexField u = u0;
    for (std::size_t k = 0; k < plan.dts.size(); ++k) {
        u = step_cn(L, u, plan.dts[k], cfg.tolerance, &rec.trace.stats);
        rec.step_done(static_cast<long>(k), static_cast<long>(plan.dts.size()), plan.times[k + 1], u);
    }
    rec.trace.final_field = std::move(u);
    if (plan.dts.empty()) rec.trace.final_field = u0;
    return rec.trace;
}

SourceTerm trace_source(std::shared_ptr<SolutionTrace> trace)
{
    return [trace](double t) { return trace->sample(t); };
}

SolutionTrace solve_forced(const SpatialOperator& L, const ComplexField& u0, const SourceTerm& f,
                           const StepperConfig& cfg)
{
    require_same_grid(L.grid(), u0.grid, "solve_forced");
    const double dt = cfg.resolve_dt(L);
    const StepPlan plan = plan_steps(cfg.T, dt);

    Recorder rec;
    rec.L = &L;
    rec.stride = cfg.snapshot_stride;
    rec.start(u0);

    ComplexField u = u0;
    ComplexField f_now = f(0.0);
    require_same_grid(L.grid(), f_now.grid, "solve_forced: source");
    for (std::size_t k = 0; k < plan.dts.size(); ++k) {
        const double dtk = plan.dts[k];
        const double sigma = 0.5 * dtk;
        ComplexField f_next = f(plan.times[k + 1]);

        ComplexField rhs = cn_rhs(L, u, sigma);
        const Complex m{0.0, -sigma};  // -i dt/2
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += m * (f_now[i] + f_next[i]);

        if (L.grid().d == 1)
            u = cn_solve_1d(L, rhs, sigma);
        else
            u = cn_solve_lanczos(L, rhs, sigma, cfg.tolerance, &rec.trace.stats);
        ++rec.trace.stats.steps;

        rec.step_done(static_cast<long>(k), static_cast<long>(plan.dts.size()), plan.times[k + 1], u);
        f_now = std::move(f_next);
    }
    rec.trace.final_field = std::move(u);
    if (plan.dts.empty()) rec.trace.final_field = u0;
    return rec.trace;
}

SolutionTrace duhamel_compose(const SpatialOperator& L, const ComplexField& v0, const SourceTerm& f,
                              const StepperConfig& cfg)
{
    require_same_grid(L.grid(), v0.grid, "duhamel_compose");
    const double dt = cfg.resolve_dt(L);
    const StepPlan plan = plan_steps(cfg.T, dt);
    const std::size_t M = plan.dts.size();

    // homogeneous part
    SolutionTrace vtrace = solve_homogeneous(L, v0, cfg);

    // output times: the snapshot times of the homogeneous trace
    const std::vector<double>& out_times = vtrace.snapshot_times;
    std::vector<ComplexField> acc(out_times.size(), ComplexField(L.grid()));

    // map from step index to output slot (step times match snapshot times)
    std::vector<long> out_slot(M + 1, -1);
    for (std::size_t k = 0; k <= M; ++k)
        for (std::size_t q = 0; q < out_times.size(); ++q)
            if (std::abs(plan.times[k] - out_times[q]) <= 1e-12 * std::max(1.0, cfg.T)) out_slot[k] = static_cast<long>(q);

    // trapezoid weight of quadrature node m for the integral over [0, t_k]
    auto weight = [&](std::size_t m, std::size_t k) {
        const double lo = m == 0 ? plan.times[0] : plan.times[m - 1];
        const double hi = m == k ? plan.times[k] : plan.times[m + 1];
        return 0.5 * (hi - lo);
    };

    SolverStats stats;
    for (std::size_t m = 0; m <= M; ++m) {
        ComplexField w = f(plan.times[m]);
        require_same_grid(L.grid(), w.grid, "duhamel_compose: source");
        if (out_slot[m] >= 0 && m > 0) {  // s = t contribution (zero-duration evolution)
            const double wt = weight(m, m);
            auto& slot = acc[out_slot[m]];
            for (std::size_t i = 0; i < slot.size(); ++i) slot[i] += wt * w[i];
        }
        for (std::size_t k = m + 1; k <= M; ++k) {
            w = step_cn(L, w, plan.dts[k - 1], cfg.tolerance, &stats);
            if (out_slot[k] >= 0) {
                const double wt = weight(m, k);
                auto& slot = acc[out_slot[k]];
                for (std::size_t i = 0; i < slot.size(); ++i) slot[i] += wt * w[i];
            }
        }
    }

    // assemble the composed trace at the output times
    SolutionTrace out;
    out.stats = stats;
    out.stats.steps += vtrace.stats.steps;
    const Complex mi{0.0, -1.0};
    const double l2_0 = l2_norm(vtrace.snapshots.front());
    for (std::size_t q = 0; q < out_times.size(); ++q) {
        ComplexField uq = vtrace.snapshots[q];
        for (std::size_t i = 0; i < uq.size(); ++i) uq[i] += mi * acc[q][i];
        out.times.push_back(out_times[q]);
        const double l2q = l2_norm(uq);
        out.l2.push_back(l2q);
        out.h2.push_back(h2_norm(uq));
        out.energy_form.push_back(L.energy_form(uq));
        out.drift.push_back(l2_0 > 0.0 ? std::abs(l2q - l2_0) / l2_0 : 0.0);
        out.snapshot_times.push_back(out_times[q]);
        out.snapshots.push_back(uq);
        if (q + 1 == out_times.size()) out.final_field = std::move(uq);
    }
    return out;
}

ComplexField time_derivative_data(const RegularizedCoefficient& g, const ComplexField& u0, StaggerMean mean)
{
    SpatialOperator L = assemble_operator(g, mean);
    ComplexField lu = L.apply(u0);
    return Complex{0.0, 1.0} * lu;
}

}  // namespace smslab
