#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "smslab/field.hpp"
#include "smslab/mollifier.hpp"

namespace smslab {

// Atom catalogue for singular coefficients. All masses/heights are
// nonnegative so every regularization stays >= background pointwise.

struct DeltaAtom {
    std::array<double, 2> center{0.0, 0.0};
    double weight = 1.0;
};

/// One-sided unit step at `center` along axis 0, smoothly wrapped back to
/// zero on the far side of the torus so the only singularity is the jump.
struct JumpAtom {
    std::array<double, 2> center{0.0, 0.0};
    double height = 1.0;
};

/// Smooth compactly supported hill: height * (1 - |x-c|^2/w^2)^5.
struct BumpAtom {
    std::array<double, 2> center{0.0, 0.0};
    double width = 1.0;
    double height = 1.0;
};

/// Nonnegative grid-sampled profile; convolved by nodal quadrature.
struct SampledAtom {
    RealField field;
    std::string source;  // path recorded for serialization
};

using Atom = std::variant<DeltaAtom, JumpAtom, BumpAtom, SampledAtom>;

struct CoefficientSpec {
    double background = 1.0;
    std::vector<Atom> atoms;

    /// True when no Delta/Jump atom is present (pointwise evaluation is
    /// then meaningful and a classical reference exists).
    bool is_regular() const;
    bool has_sampled() const;
};

/// Parse the text form, e.g.
///   background=1.0; delta(center=0.0, weight=1.0); jump(center=0.5, height=2.0)
/// 2-d centers are written as tuples: delta(center=(0.0, 0.5), weight=1.0).
CoefficientSpec parse_coefficient(const std::string& text);
std::string format_coefficient(const CoefficientSpec& spec);

/// Pointwise evaluation for regular specs (background + jump/bump/sampled,
/// sampled atoms by multilinear interpolation). Throws on Delta atoms.
RealField evaluate_coefficient(const CoefficientSpec& spec, const Grid& grid);

struct RegularizedCoefficient {
    RealField field;
    double epsilon = 1.0;
    double c0 = 0.0;      ///< certified lower bound (= background)
    double w1inf = 0.0;   ///< cached W^{1,inf} norm of the field
};

/// g_eps = g * psi_eps sampled on the grid. Analytic rules for Delta and the
/// Jump step; quadrature over the mollifier support for Bump; nodal sums for
/// Sampled. eps must lie in (0,1]; below 2h the mollifier is under-resolved
/// on the grid and a warning is emitted (suppressed by `quiet`). The
/// rate-study entry points reject under-resolved ladders outright.
RegularizedCoefficient regularize(const CoefficientSpec& spec, const Mollifier& psi, double eps,
                                  const Grid& grid, bool quiet = false);

// ---------------------------------------------------------------------------
// Initial data

struct GaussianData {
    std::array<double, 2> center{0.0, 0.0};
    double a = 1.0;   ///< exp(-a |x-c|^2 + i k.x)
    std::array<double, 2> k0{0.0, 0.0};
};

struct DeltaData {
    std::array<double, 2> center{0.0, 0.0};
    double weight = 1.0;
};

struct SampledData {
    ComplexField field;
    std::string source;
};

using DataSpec = std::variant<GaussianData, DeltaData, SampledData>;

DataSpec parse_data(const std::string& text);
std::string format_data(const DataSpec& spec);

/// Pointwise samples of the raw data (Delta data is rejected).
ComplexField evaluate_data(const DataSpec& spec, const Grid& grid);

/// u_{0,eps} = u_0 * psi_eps, same convolution rules as `regularize`
/// applied to real and imaginary parts.
ComplexField regularize_data(const DataSpec& spec, const Mollifier& psi, double eps, const Grid& grid,
                             bool quiet = false);

// ---------------------------------------------------------------------------

/// Geometric net eps_k = eps0 * ratio^k, strictly decreasing within (0, 1].
struct EpsilonLadder {
    std::vector<double> values;

    double min() const { return values.back(); }
    std::size_t size() const { return values.size(); }
};

EpsilonLadder make_ladder(double eps0 = 0.5, double ratio = 0.5, std::size_t count = 5);

/// (eps, ||g_eps||_{W^{1,inf}}) along the ladder.
std::vector<std::pair<double, double>> moderateness_ladder(const CoefficientSpec& spec, const Mollifier& psi,
                                                           const EpsilonLadder& ladder, const Grid& grid);

}  // namespace smslab
