#pragma once

#include <functional>

#include "cvchar/grid.hpp"
#include "cvchar/states.hpp"

// Fourier machinery connecting characteristic functions to outcome densities.
// All transforms use centered grids; an axis with step D and N points maps to
// the conjugate axis with step 2 pi / (N D) and the same point count.
namespace cvchar {

AxisSpec conjugate_axis(const AxisSpec& axis);

// h(x_k) = step * sum_j g(u_j) e^{i sign u_j x_k} on the conjugate axis,
// i.e. a Riemann approximation of the continuous Fourier integral.
Eigen::VectorXcd fourier_line(const Eigen::VectorXcd& g, const AxisSpec& axis, int sign);

// separable 2D version; rows transform along grid.x, columns along grid.p
Field2D fourier_plane(const Field2D& f, int sign);

// C(alpha) tabulated over u = (u_x, u_p), alpha = (u_x + i u_p)/sqrt(2)
Field2D characteristic_table(const StateModel& state, const GridSpec& ugrid);

// Wigner function on the grid conjugate to `ugrid`
Field2D wigner(const StateModel& state, const GridSpec& ugrid);

// Homodyne outcome density at phase theta, computed purely from the
// characteristic function along the ray zeta e^{i theta}/sqrt(2):
//   p_theta(q) = (1/2pi) Int dzeta e^{i zeta q} C(zeta e^{i theta}/sqrt(2)).
// Values are clipped at zero and renormalized; clipping beyond `neg_tol`
// (per point, after scaling by the density maximum) is an error.
DensityTable1D homodyne_from_characteristic(const std::function<Complex(double)>& chi_ray,
                                            const AxisSpec& zeta_axis, double neg_tol = 1e-6);
DensityTable1D homodyne_from_characteristic(const StateModel& state, double theta,
                                            const AxisSpec& zeta_axis, double neg_tol = 1e-6);

// Joint outcome density f(x, p) of the two-copy interference measurement:
//   f(x,p) = (1/4pi^2) Int ds dt e^{i(sx+tp)} C(beta) C(conj(beta) U),
// with beta = (s + i t)/2 and scalar U = e^{i phase}. Its Fourier statistic
// E[e^{-2i(u x + v p)}] equals C(alpha) C(conj(alpha) U) at alpha = u + i v.
Field2D pair_outcome_density(const StateModel& state, double symmetry_phase,
                             const GridSpec& sgrid, double neg_tol = 1e-6);

// total mass * step^d helpers
double field_integral(const Field2D& f);

} // namespace cvchar
