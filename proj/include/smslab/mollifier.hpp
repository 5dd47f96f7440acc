#pragma once

#include <array>
#include <string>
#include <vector>

namespace smslab {

/// Compactly supported, nonnegative, unit-mass radial bump used to
/// regularize coefficients and data by convolution.
///
/// Variant tags select the profile:
///   "bump"      c * exp(-1/(1-|x|^2)) on |x| < 1
///   "poly"      c * (1-|x|^2)^3       on |x| < 1
/// An optional ":s" suffix (0 < s <= 1) squeezes the profile to support
/// radius s while keeping unit mass, e.g. "bump:0.25". The normalization
/// constant is computed once per (profile, dimension) by high-order
/// quadrature; the scaling rule is psi_eps(x) = eps^{-d} psi(x/eps).
class Mollifier {
public:
    static Mollifier make(const std::string& variant, int dim);

    const std::string& tag() const { return tag_; }
    int dim() const { return dim_; }

    /// Support radius of the unscaled profile (= the squeeze factor).
    double support_radius() const { return scale_; }

    /// psi at a point (d components used).
    double value(const std::array<double, 2>& x) const;
    double value(double x) const { return value({x, 0.0}); }

    /// psi_eps(x) = eps^{-d} psi(x/eps); requires eps in (0, 1].
    double scaled(const std::array<double, 2>& x, double eps) const;
    double scaled(double x, double eps) const { return scaled({x, 0.0}, eps); }

    /// Density of the axis marginal: psi itself in d=1, integral over the
    /// transverse coordinate in d=2. Unscaled argument.
    double marginal(double t) const;

    /// Primitive of the marginal, int_{-inf}^{t}; rises 0 -> 1 across the
    /// support. Used for the analytic mollification of step coefficients.
    double primitive(double t) const;

    /// int x^2 psi(x) dx of the 1-d marginal (used by rate predictions).
    double second_moment() const;

private:
    Mollifier() = default;

    double profile(double r) const;  // unnormalized, unit support

    std::string tag_;
    int dim_ = 1;
    int kind_ = 0;  // 0 = bump, 1 = poly
    double scale_ = 1.0;
    double norm_ = 1.0;  // c such that integral over R^d is exactly 1

    // uniform tables on [-scale, scale] for the marginal and its primitive
    std::vector<double> tab_x_, tab_m_, tab_p_;
    void build_tables();
};

}  // namespace smslab
