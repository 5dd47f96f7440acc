#pragma once

#include <vector>

#include "smslab/field.hpp"

namespace smslab {

/// Discrete L2 norm: ( h^d sum |u_j|^2 )^{1/2}.
double l2_norm(const ComplexField& u);
double l2_norm(const RealField& f);

/// h^d sum u_j conj(v_j); fields must share a grid.
Complex inner_product(const ComplexField& u, const ComplexField& v);

/// Centered periodic difference (u_{j+1} - u_{j-1}) / (2h), one field per axis.
std::vector<ComplexField> gradient(const ComplexField& u);
std::vector<RealField> gradient(const RealField& f);

/// Periodic second-difference stencil summed over axes.
ComplexField laplacian(const ComplexField& u);

/// One-sided periodic differences (u_{j+1} - u_j)/h and (u_j - u_{j-1})/h
/// along `axis`; the staggered-energy form and the summation-by-parts
/// identity <D+ u, v> = -<u, D- v> are built from these.
ComplexField forward_diff(const ComplexField& u, int axis);
ComplexField backward_diff(const ComplexField& u, int axis);

/// ||u||_{L2} + ||sum_j d_j u||_{L2} + ||Delta u||_{L2}. The gradient is
/// summed over axes before the norm is taken; in d=1 this is the usual
/// ||u|| + ||u'|| + ||u''||.
double h2_norm(const ComplexField& u);

/// ||f||_{Linf} + max over axes/nodes of the centered-difference magnitude.
double w1inf_norm(const RealField& f);

}  // namespace smslab
