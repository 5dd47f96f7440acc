#include "smslab/mollifier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "smslab/quad.hpp"

namespace smslab {

namespace {

constexpr std::size_t kNormQuadNodes = 1 << 14 | 1;
constexpr std::size_t kTableSize = 1 << 13;  // cells; table has kTableSize+1 nodes

double raw_bump(double r)
{
    if (r >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r * r));
}

double raw_poly(double r)
{
    if (r >= 1.0) return 0.0;
    const double t = 1.0 - r * r;
    return t * t * t;
}

}  // namespace

double Mollifier::profile(double r) const
{
    const double s = std::abs(r) / scale_;
    return kind_ == 0 ? raw_bump(s) : raw_poly(s);
}

Mollifier Mollifier::make(const std::string& variant, int dim)
{
    if (dim != 1 && dim != 2) throw std::invalid_argument("Mollifier: dimension must be 1 or 2");

    Mollifier m;
    m.tag_ = variant;
    m.dim_ = dim;

    std::string name = variant;
    if (auto pos = variant.find(':'); pos != std::string::npos) {
        name = variant.substr(0, pos);
        try {
            m.scale_ = std::stod(variant.substr(pos + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("Mollifier: bad scale in variant '" + variant + "'");
        }
        if (!(m.scale_ > 0.0 && m.scale_ <= 1.0))
            throw std::invalid_argument("Mollifier: scale must lie in (0, 1]");
    }

    if (name == "bump")
        m.kind_ = 0;
    else if (name == "poly")
        m.kind_ = 1;
    else
        throw std::invalid_argument("Mollifier: unknown variant '" + variant + "'");

    // Normalize so the d-dimensional integral is 1. The squeeze factor
    // cancels after substitution, so integrate the unit-support profile.
    auto base = [&](double s) { return m.kind_ == 0 ? raw_bump(s) : raw_poly(s); };
    double mass;
    if (dim == 1)
        mass = 2.0 * simpson([&](double s) { return base(s); }, 0.0, 1.0, kNormQuadNodes);
    else
        mass = 2.0 * std::numbers::pi * simpson([&](double s) { return s * base(s); }, 0.0, 1.0, kNormQuadNodes);
    m.norm_ = 1.0 / mass;

    m.build_tables();
    return m;
}

double Mollifier::value(const std::array<double, 2>& x) const
{
    const double r = dim_ == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
    const double p = profile(r);
    const double sd = dim_ == 1 ? scale_ : scale_ * scale_;
    return norm_ * p / sd;
}

double Mollifier::scaled(const std::array<double, 2>& x, double eps) const
{
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("Mollifier: eps must lie in (0, 1]");
    const double ed = dim_ == 1 ? eps : eps * eps;
    return value({x[0] / eps, x[1] / eps}) / ed;
}

void Mollifier::build_tables()
{
    const std::size_t nodes = kTableSize + 1;
    tab_x_.resize(nodes);
    tab_m_.resize(nodes);
    tab_p_.resize(nodes);
    const double a = scale_;
    const double dt = 2.0 * a / static_cast<double>(kTableSize);

    for (std::size_t k = 0; k < nodes; ++k) {
        const double t = -a + dt * static_cast<double>(k);
        tab_x_[k] = t;
        if (dim_ == 1) {
            tab_m_[k] = value(t);
        } else {
            const double half = a * a - t * t;
            if (half <= 0.0) {
                tab_m_[k] = 0.0;
            } else {
                const double y1 = std::sqrt(half);
                tab_m_[k] = 2.0 * simpson([&](double y) { return value({t, y}); }, 0.0, y1, 513);
            }
        }
    }

    // cumulative Simpson on consecutive node pairs (midpoint refinement)
    tab_p_[0] = 0.0;
    for (std::size_t k = 1; k < nodes; ++k) {
        const double lo = tab_x_[k - 1], hi = tab_x_[k];
        const double mid = 0.5 * (lo + hi);
        double mmid;
        if (dim_ == 1) {
            mmid = value(mid);
        } else {
            const double half = a * a - mid * mid;
            mmid = half <= 0.0 ? 0.0
                               : 2.0 * simpson([&](double y) { return value({mid, y}); }, 0.0, std::sqrt(half), 513);
        }
        tab_p_[k] = tab_p_[k - 1] + (hi - lo) / 6.0 * (tab_m_[k - 1] + 4.0 * mmid + tab_m_[k]);
    }
    // The marginal has unit mass; rescale away the residual quadrature error
    // so primitive(+support) is exactly 1.
    const double total = tab_p_.back();
    for (double& p : tab_p_) p /= total;
}

double Mollifier::marginal(double t) const
{
    const double a = scale_;
    if (std::abs(t) >= a) return 0.0;
    if (dim_ == 1) return value(t);
    const double pos = (t + a) / (2.0 * a) * static_cast<double>(kTableSize);
    const std::size_t k = std::min(static_cast<std::size_t>(pos), kTableSize - 1);
    const double w = pos - static_cast<double>(k);
    return (1.0 - w) * tab_m_[k] + w * tab_m_[k + 1];
}

double Mollifier::primitive(double t) const
{
    const double a = scale_;
    if (t <= -a) return 0.0;
    if (t >= a) return 1.0;
    const double pos = (t + a) / (2.0 * a) * static_cast<double>(kTableSize);
    const std::size_t k = std::min(static_cast<std::size_t>(pos), kTableSize - 1);
    const double w = pos - static_cast<double>(k);
    const double dx = tab_x_[k + 1] - tab_x_[k];
    // cubic Hermite with the marginal as the exact derivative
    const double h00 = (1 + 2 * w) * (1 - w) * (1 - w);
    const double h10 = w * (1 - w) * (1 - w);
    const double h01 = w * w * (3 - 2 * w);
    const double h11 = w * w * (w - 1);
    return h00 * tab_p_[k] + h10 * dx * tab_m_[k] + h01 * tab_p_[k + 1] + h11 * dx * tab_m_[k + 1];
}

double Mollifier::second_moment() const
{
    return simpson([&](double t) { return t * t * marginal(t); }, -scale_, scale_, kNormQuadNodes);
}

}  // namespace smslab
