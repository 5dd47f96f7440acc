#include "smslab/coefficient.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "smslab/norms.hpp"
#include "smslab/quad.hpp"

namespace smslab {

namespace {

constexpr std::size_t kConvNodes1d = 513;  // composite Simpson per axis
constexpr std::size_t kConvNodes2d = 129;

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trim(const std::string& s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Split on `sep` at paren/quote depth zero.
std::vector<std::string> split_top(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    bool quoted = false;
    for (char c : s) {
        if (c == '"') quoted = !quoted;
        if (!quoted) {
            if (c == '(') ++depth;
            if (c == ')') --depth;
            if (c == sep && depth == 0) {
                out.push_back(trim(cur));
                cur.clear();
                continue;
            }
        }
        cur.push_back(c);
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

struct Value {
    enum Kind { Number, Tuple, Text } kind;
    double num = 0.0;
    std::array<double, 2> tuple{0.0, 0.0};
    std::string text;
};

Value parse_value(const std::string& raw)
{
    Value v;
    const std::string s = trim(raw);
    if (s.empty()) throw std::invalid_argument("empty value");
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"') throw std::invalid_argument("unterminated string: " + s);
        v.kind = Value::Text;
        v.text = s.substr(1, s.size() - 2);
        return v;
    }
    if (s.front() == '(') {
        if (s.back() != ')') throw std::invalid_argument("unterminated tuple: " + s);
        auto parts = split_top(s.substr(1, s.size() - 2), ',');
        if (parts.size() != 2) throw std::invalid_argument("tuple must have two components: " + s);
        v.kind = Value::Tuple;
        v.tuple = {std::stod(parts[0]), std::stod(parts[1])};
        return v;
    }
    v.kind = Value::Number;
    std::size_t used = 0;
    v.num = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("malformed number: " + s);
    return v;
}

using KvMap = std::map<std::string, Value>;

KvMap parse_kv(const std::string& inner, const std::string& ctx)
{
    KvMap kv;
    for (const std::string& item : split_top(inner, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument(ctx + ": expected key=value, got '" + item + "'");
        const std::string key = trim(item.substr(0, eq));
        kv[key] = parse_value(item.substr(eq + 1));
    }
    return kv;
}

double need_number(const KvMap& kv, const std::string& key, const std::string& ctx)
{
    auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument(ctx + ": missing key '" + key + "'");
    if (it->second.kind != Value::Number) throw std::invalid_argument(ctx + ": key '" + key + "' must be a number");
    return it->second.num;
}

std::array<double, 2> need_point(const KvMap& kv, const std::string& key, const std::string& ctx)
{
    auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument(ctx + ": missing key '" + key + "'");
    if (it->second.kind == Value::Number) return {it->second.num, 0.0};
    if (it->second.kind == Value::Tuple) return it->second.tuple;
    throw std::invalid_argument(ctx + ": key '" + key + "' must be a number or tuple");
}

std::string point_text(const std::array<double, 2>& p)
{
    if (p[1] == 0.0) return fmt(p[0]);
    return "(" + fmt(p[0]) + ", " + fmt(p[1]) + ")";
}

// C^inf transition 0 -> 1 on [0, 1].
double smoothstep(double s)
{
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double e0 = std::exp(-1.0 / s);
    const double e1 = std::exp(-1.0 / (1.0 - s));
    return e0 / (e0 + e1);
}

double bump_profile(double r2)
{
    if (r2 >= 1.0) return 0.0;
    const double t = 1.0 - r2;
    return t * t * t * t * t;
}

double bump_value(const BumpAtom& b, const Grid& g, const std::array<double, 2>& x)
{
    const double dx = g.wrap_displacement(x[0] - b.center[0]);
    double r2 = dx * dx;
    if (g.d == 2) {
        const double dy = g.wrap_displacement(x[1] - b.center[1]);
        r2 += dy * dy;
    }
    return b.height * bump_profile(r2 / (b.width * b.width));
}

// --- jump geometry ---------------------------------------------------------
// theta = displacement past the step, wrapped into [0, W). The raw atom is
//   1 - S(theta), S = smoothstep over [W/4, 3W/4],
// a single unit jump at theta = 0 with a C^inf return ramp.

double jump_descent(double theta, double W) { return smoothstep((theta - 0.25 * W) / (0.5 * W)); }

double jump_atom_raw(double theta, double W) { return 1.0 - jump_descent(theta, W); }

// smooth remainder after subtracting the sawtooth J(theta) = 1 - theta/W
double jump_remainder(double theta, double W)
{
    theta -= W * std::floor(theta / W);
    return theta / W - jump_descent(theta, W);
}

double jump_mollified(double theta, double W, const Mollifier& psi, double eps)
{
    const double r = psi.support_radius() * eps;
    // signed distance to the jump in [-W/2, W/2)
    double ts = theta - W * std::floor(theta / W);
    if (ts >= 0.5 * W) ts -= W;

    double saw;
    if (std::abs(ts) <= r)
        saw = psi.primitive(ts / eps) - ts / W;
    else
        saw = 1.0 - (ts < 0.0 ? ts + W : ts) / W;

    double rem = 0.0;
    if (r > 0.0) {
        rem = simpson([&](double t) { return psi.marginal(t / eps) / eps * jump_remainder(theta - t, W); }, -r, r,
                      kConvNodes1d);
    }
    return std::max(0.0, saw + rem);
}

void check_support(const Mollifier& psi, double eps, const Grid& grid)
{
    if (psi.support_radius() * eps > grid.half_width)
        throw std::invalid_argument("regularize: mollifier support exceeds the half-period");
}

// eps >= 2h is recommended, not required: below it the mollifier is
// under-resolved on the grid and we say so once per call.
void check_resolution(double eps, const Grid& grid, bool quiet)
{
    if (eps < 2.0 * grid.h && !quiet) {
        const std::string msg = "regularize: warning: eps=" + fmt(eps) + " < 2h=" + fmt(2.0 * grid.h) +
                                ", mollifier under-resolved on this grid\n";
        std::fputs(msg.c_str(), stderr);
    }
}

}  // namespace

bool CoefficientSpec::is_regular() const
{
    for (const Atom& a : atoms)
        if (std::holds_alternative<DeltaAtom>(a) || std::holds_alternative<JumpAtom>(a)) return false;
    return true;
}

bool CoefficientSpec::has_sampled() const
{
    for (const Atom& a : atoms)
        if (std::holds_alternative<SampledAtom>(a)) return true;
    return false;
}

CoefficientSpec parse_coefficient(const std::string& text)
{
    CoefficientSpec spec;
    spec.background = 0.0;
    bool have_bg = false;

    for (const std::string& clause : split_top(text, ';')) {
        if (clause.empty()) continue;
        auto open = clause.find('(');
        if (open == std::string::npos) {
            auto eq = clause.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("coefficient spec: malformed clause '" + clause + "'");
            const std::string key = trim(clause.substr(0, eq));
            if (key != "background")
                throw std::invalid_argument("coefficient spec: unknown key '" + key + "'");
            spec.background = parse_value(clause.substr(eq + 1)).num;
            have_bg = true;
            continue;
        }
        if (clause.back() != ')')
            throw std::invalid_argument("coefficient spec: missing ')' in '" + clause + "'");
        const std::string name = trim(clause.substr(0, open));
        const KvMap kv = parse_kv(clause.substr(open + 1, clause.size() - open - 2), name);

        if (name == "delta") {
            DeltaAtom a;
            a.center = need_point(kv, "center", name);
            a.weight = need_number(kv, "weight", name);
            if (a.weight < 0.0) throw std::invalid_argument("delta: weight must be nonnegative");
            spec.atoms.push_back(a);
        } else if (name == "jump") {
            JumpAtom a;
            a.center = need_point(kv, "center", name);
            a.height = need_number(kv, "height", name);
            if (a.height < 0.0) throw std::invalid_argument("jump: height must be nonnegative");
            spec.atoms.push_back(a);
        } else if (name == "bump") {
            BumpAtom a;
            a.center = need_point(kv, "center", name);
            a.width = need_number(kv, "width", name);
            a.height = need_number(kv, "height", name);
            if (a.width <= 0.0) throw std::invalid_argument("bump: width must be positive");
            if (a.height < 0.0) throw std::invalid_argument("bump: height must be nonnegative");
            spec.atoms.push_back(a);
        } else if (name == "sampled") {
            auto it = kv.find("path");
            if (it == kv.end() || it->second.kind != Value::Text)
                throw std::invalid_argument("sampled: needs path=\"...\"");
            SampledAtom a;
            a.source = it->second.text;
            a.field = load_real_csv(a.source);
            for (double v : a.field.values)
                if (v < 0.0) throw std::invalid_argument("sampled: negative entries are not allowed");
            spec.atoms.push_back(std::move(a));
        } else {
            throw std::invalid_argument("coefficient spec: unknown atom '" + name + "'");
        }
    }

    if (!have_bg) throw std::invalid_argument("coefficient spec: missing background");
    if (!(spec.background > 0.0)) throw std::invalid_argument("coefficient spec: background must be positive");
    return spec;
}

std::string format_coefficient(const CoefficientSpec& spec)
{
    std::ostringstream os;
    os << "background=" << fmt(spec.background);
    for (const Atom& a : spec.atoms) {
        os << "; ";
        if (const auto* d = std::get_if<DeltaAtom>(&a))
            os << "delta(center=" << point_text(d->center) << ", weight=" << fmt(d->weight) << ")";
        else if (const auto* j = std::get_if<JumpAtom>(&a))
            os << "jump(center=" << point_text(j->center) << ", height=" << fmt(j->height) << ")";
        else if (const auto* b = std::get_if<BumpAtom>(&a))
            os << "bump(center=" << point_text(b->center) << ", width=" << fmt(b->width)
               << ", height=" << fmt(b->height) << ")";
        else if (const auto* s = std::get_if<SampledAtom>(&a))
            os << "sampled(path=\"" << s->source << "\")";
    }
    return os.str();
}

RealField evaluate_coefficient(const CoefficientSpec& spec, const Grid& grid)
{
    RealField out(grid);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = spec.background;

    for (const Atom& atom : spec.atoms) {
        if (std::holds_alternative<DeltaAtom>(atom))
            throw std::invalid_argument("evaluate_coefficient: delta atoms have no pointwise values");
        if (const auto* j = std::get_if<JumpAtom>(&atom)) {
            const double W = 2.0 * grid.half_width;
            for (std::size_t k = 0; k < out.size(); ++k) {
                double theta = grid.node(k)[0] - j->center[0];
                theta -= W * std::floor(theta / W);
                out[k] += j->height * jump_atom_raw(theta, W);
            }
        } else if (const auto* b = std::get_if<BumpAtom>(&atom)) {
            for (std::size_t k = 0; k < out.size(); ++k) out[k] += bump_value(*b, grid, grid.node(k));
        } else if (const auto* s = std::get_if<SampledAtom>(&atom)) {
            require_same_grid(s->field.grid, grid, "evaluate_coefficient(sampled)");
            for (std::size_t k = 0; k < out.size(); ++k) out[k] += s->field[k];
        }
    }
    return out;
}

namespace {

// quadrature convolution of a pointwise-evaluable function with psi_eps
template <class Fn>
double convolve_at(const Fn& f, const Grid& g, const Mollifier& psi, double eps,
                   const std::array<double, 2>& x)
{
    const double r = psi.support_radius() * eps;
    if (g.d == 1) {
        return simpson([&](double t) { return psi.scaled(t, eps) * f(std::array<double, 2>{x[0] - t, 0.0}); }, -r,
                       r, kConvNodes1d);
    }
    // tensor Simpson over the support square; psi vanishes outside the disc
    return simpson(
        [&](double ty) {
            return simpson([&](double tx) { return psi.scaled({tx, ty}, eps) * f({x[0] - tx, x[1] - ty}); }, -r, r,
                           kConvNodes2d);
        },
        -r, r, kConvNodes2d);
}

// discrete (nodal) periodic convolution for grid-sampled sources
template <class T>
std::vector<T> convolve_sampled(const std::vector<T>& src, const Grid& g, const Mollifier& psi, double eps)
{
    const double r = psi.support_radius() * eps;
    const int window = static_cast<int>(std::ceil(r / g.h));
    std::vector<double> kernel(2 * window + 1);
    for (int k = -window; k <= window; ++k)
        kernel[k + window] = psi.scaled(std::array<double, 2>{k * g.h, 0.0}, eps);

    std::vector<T> out(src.size(), T{});
    if (g.d == 1) {
        const double w = g.h;
        for (int i = 0; i < g.n; ++i) {
            T acc{};
            for (int k = -window; k <= window; ++k) acc += kernel[k + window] * w * src[g.wrap(i - k)];
            out[i] = acc;
        }
        return out;
    }
    const double w = g.h * g.h;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            T acc{};
            for (int ki = -window; ki <= window; ++ki)
                for (int kj = -window; kj <= window; ++kj) {
                    const double p = psi.scaled({ki * g.h, kj * g.h}, eps);
                    if (p == 0.0) continue;
                    acc += p * w * src[g.flat(g.wrap(i - ki), g.wrap(j - kj))];
                }
            out[g.flat(i, j)] = acc;
        }
    return out;
}

}  // namespace

RegularizedCoefficient regularize(const CoefficientSpec& spec, const Mollifier& psi, double eps,
                                  const Grid& grid, bool quiet)
{
    if (psi.dim() != grid.d) throw std::invalid_argument("regularize: mollifier dimension mismatch");
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("regularize: eps must lie in (0, 1]");
    check_resolution(eps, grid, quiet);
    check_support(psi, eps, grid);

    RealField out(grid);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = spec.background;

    for (const Atom& atom : spec.atoms) {
        if (const auto* d = std::get_if<DeltaAtom>(&atom)) {
            for (std::size_t k = 0; k < out.size(); ++k) {
                const auto x = grid.node(k);
                const std::array<double, 2> dx{grid.wrap_displacement(x[0] - d->center[0]),
                                               grid.d == 2 ? grid.wrap_displacement(x[1] - d->center[1]) : 0.0};
                out[k] += d->weight * psi.scaled(dx, eps);
            }
        } else if (const auto* j = std::get_if<JumpAtom>(&atom)) {
            const double W = 2.0 * grid.half_width;
            // the profile depends on axis 0 only; mollify once per column
            for (int i = 0; i < grid.n; ++i) {
                const double theta = grid.coord(i) - j->center[0];
                const double v = j->height * jump_mollified(theta, W, psi, eps);
                if (grid.d == 1)
                    out[i] += v;
                else
                    for (int jj = 0; jj < grid.n; ++jj) out[grid.flat(i, jj)] += v;
            }
        } else if (const auto* b = std::get_if<BumpAtom>(&atom)) {
            auto f = [&](const std::array<double, 2>& y) { return bump_value(*b, grid, y); };
            for (std::size_t k = 0; k < out.size(); ++k) out[k] += convolve_at(f, grid, psi, eps, grid.node(k));
        } else if (const auto* s = std::get_if<SampledAtom>(&atom)) {
            require_same_grid(s->field.grid, grid, "regularize(sampled)");
            auto conv = convolve_sampled(s->field.values, grid, psi, eps);
            for (std::size_t k = 0; k < out.size(); ++k) out[k] += conv[k];
        }
    }

    out.check_finite("regularized coefficient");

    RegularizedCoefficient rc;
    rc.epsilon = eps;
    rc.c0 = spec.background;
    rc.w1inf = w1inf_norm(out);
    rc.field = std::move(out);
    return rc;
}

DataSpec parse_data(const std::string& text)
{
    const std::string s = trim(text);
    auto open = s.find('(');
    if (open == std::string::npos || s.back() != ')')
        throw std::invalid_argument("data spec: malformed '" + s + "'");
    const std::string name = trim(s.substr(0, open));
    const KvMap kv = parse_kv(s.substr(open + 1, s.size() - open - 2), name);

    if (name == "gaussian") {
        GaussianData g;
        g.center = need_point(kv, "center", name);
        g.a = need_number(kv, "a", name);
        if (!(g.a > 0.0)) throw std::invalid_argument("gaussian: a must be positive");
        if (kv.count("k0")) {
            auto it = kv.find("k0");
            g.k0 = it->second.kind == Value::Tuple ? it->second.tuple
                                                   : std::array<double, 2>{it->second.num, 0.0};
        }
        return g;
    }
    if (name == "delta") {
        DeltaData d;
        d.center = need_point(kv, "center", name);
        d.weight = need_number(kv, "weight", name);
        return d;
    }
    if (name == "sampled") {
        auto it = kv.find("path");
        if (it == kv.end() || it->second.kind != Value::Text)
            throw std::invalid_argument("sampled: needs path=\"...\"");
        SampledData sd;
        sd.source = it->second.text;
        sd.field = load_complex_csv(sd.source);
        return sd;
    }
    throw std::invalid_argument("data spec: unknown kind '" + name + "'");
}

std::string format_data(const DataSpec& spec)
{
    std::ostringstream os;
    if (const auto* g = std::get_if<GaussianData>(&spec)) {
        os << "gaussian(center=" << point_text(g->center) << ", a=" << fmt(g->a);
        if (g->k0[0] != 0.0 || g->k0[1] != 0.0) {
            os << ", k0=";
            os << (g->k0[1] == 0.0 ? fmt(g->k0[0]) : "(" + fmt(g->k0[0]) + ", " + fmt(g->k0[1]) + ")");
        }
        os << ")";
    } else if (const auto* d = std::get_if<DeltaData>(&spec)) {
        os << "delta(center=" << point_text(d->center) << ", weight=" << fmt(d->weight) << ")";
    } else if (const auto* s = std::get_if<SampledData>(&spec)) {
        os << "sampled(path=\"" << s->source << "\")";
    }
    return os.str();
}

namespace {

Complex gaussian_value(const GaussianData& g, const std::array<double, 2>& x, int d)
{
    double q = (x[0] - g.center[0]) * (x[0] - g.center[0]);
    double phase = g.k0[0] * x[0];
    if (d == 2) {
        q += (x[1] - g.center[1]) * (x[1] - g.center[1]);
        phase += g.k0[1] * x[1];
    }
    return std::exp(Complex{-g.a * q, phase});
}

}  // namespace

ComplexField evaluate_data(const DataSpec& spec, const Grid& grid)
{
    ComplexField out(grid);
    if (const auto* g = std::get_if<GaussianData>(&spec)) {
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = gaussian_value(*g, grid.node(k), grid.d);
        return out;
    }
    if (const auto* s = std::get_if<SampledData>(&spec)) {
        require_same_grid(s->field.grid, grid, "evaluate_data(sampled)");
        return s->field;
    }
    throw std::invalid_argument("evaluate_data: delta data has no pointwise values");
}

ComplexField regularize_data(const DataSpec& spec, const Mollifier& psi, double eps, const Grid& grid,
                             bool quiet)
{
    if (psi.dim() != grid.d) throw std::invalid_argument("regularize_data: mollifier dimension mismatch");
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("regularize_data: eps must lie in (0, 1]");
    check_resolution(eps, grid, quiet);
    check_support(psi, eps, grid);

    ComplexField out(grid);
    if (const auto* g = std::get_if<GaussianData>(&spec)) {
        const double r = psi.support_radius() * eps;
        for (std::size_t k = 0; k < out.size(); ++k) {
            const auto x = grid.node(k);
            if (grid.d == 1) {
                const double re = simpson(
                    [&](double t) { return psi.scaled(t, eps) * gaussian_value(*g, {x[0] - t, 0.0}, 1).real(); },
                    -r, r, kConvNodes1d);
                const double im = simpson(
                    [&](double t) { return psi.scaled(t, eps) * gaussian_value(*g, {x[0] - t, 0.0}, 1).imag(); },
                    -r, r, kConvNodes1d);
                out[k] = Complex{re, im};
            } else {
                auto part = [&](bool real_part) {
                    return simpson(
                        [&](double ty) {
                            return simpson(
                                [&](double tx) {
                                    const Complex v = gaussian_value(*g, {x[0] - tx, x[1] - ty}, 2);
                                    return psi.scaled({tx, ty}, eps) * (real_part ? v.real() : v.imag());
                                },
                                -r, r, kConvNodes2d);
                        },
                        -r, r, kConvNodes2d);
                };
                out[k] = Complex{part(true), part(false)};
            }
        }
        return out;
    }
    if (const auto* d = std::get_if<DeltaData>(&spec)) {
        for (std::size_t k = 0; k < out.size(); ++k) {
            const auto x = grid.node(k);
            const std::array<double, 2> dx{grid.wrap_displacement(x[0] - d->center[0]),
                                           grid.d == 2 ? grid.wrap_displacement(x[1] - d->center[1]) : 0.0};
            out[k] = d->weight * psi.scaled(dx, eps);
        }
        return out;
    }
    const auto& s = std::get<SampledData>(spec);
    require_same_grid(s.field.grid, grid, "regularize_data(sampled)");
    auto conv = convolve_sampled(s.field.values, grid, psi, eps);
    out.values = std::move(conv);
    return out;
}

EpsilonLadder make_ladder(double eps0, double ratio, std::size_t count)
{
    if (!(eps0 > 0.0 && eps0 <= 1.0)) throw std::invalid_argument("ladder: eps0 must lie in (0, 1]");
    if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("ladder: ratio must lie in (0, 1)");
    if (count < 4) throw std::invalid_argument("ladder: need at least 4 rungs");
    EpsilonLadder l;
    double e = eps0;
    for (std::size_t k = 0; k < count; ++k, e *= ratio) l.values.push_back(e);
    return l;
}

std::vector<std::pair<double, double>> moderateness_ladder(const CoefficientSpec& spec, const Mollifier& psi,
                                                           const EpsilonLadder& ladder, const Grid& grid)
{
    if (ladder.min() < 2.0 * grid.h)
        throw std::invalid_argument("moderateness_ladder: smallest eps under-resolved on this grid");
    std::vector<std::pair<double, double>> out;
    out.reserve(ladder.size());
    for (double eps : ladder.values) out.emplace_back(eps, regularize(spec, psi, eps, grid).w1inf);
    return out;
}

}  // namespace smslab
