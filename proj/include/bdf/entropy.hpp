#pragma once
#include <Eigen/Dense>
#include <utility>

namespace bdf {

using MatX = Eigen::MatrixXcd;

// Eigenvalue map of the Fermi-Dirac state: g(h) = -tanh(beta h / 2)/2.
double fermi_scalar(double h, double beta);

// gamma = ((1+e^{beta H})^-1 - (1+e^{-beta H})^-1)/2 for Hermitian H.
MatX fermi_map(const MatX& H, double beta);

// S(gamma) = -tr[(1/2+gamma)ln(1/2+gamma) + (1/2-gamma)ln(1/2-gamma)].
// Eigenvalues within `tol` of +-1/2 are clamped (x ln x -> 0 convention);
// eigenvalues outside [-1/2-tol, 1/2+tol] are rejected.
double entropy(const MatX& gamma, double tol = 1e-12);

// Relative entropy, logarithmic form.  Requires the reference spectrum
// strictly inside (-1/2, 1/2) (throws std::domain_error within boundary_tol);
// gamma itself may touch +-1/2.
double rel_entropy_log(const MatX& gamma, const MatX& gamma0,
                       double boundary_tol = 1e-12);

// Relative entropy, resolvent-integral form: the u-integral over [-1,1] of
//   tr[ 2(1+2u g0)^-1 Q (1-|u|)(1+2u g)^-1 Q (1+2u g0)^-1 ],  Q = g - g0,
// with geometric panel refinement toward u = +-1 (u_levels panels per half,
// Gauss-Legendre of the given order on each).
double rel_entropy_int(const MatX& gamma, const MatX& gamma0,
                       int u_levels = 40, int order = 12,
                       double boundary_tol = 1e-12);

// C(y) = ln((1/2+y)/(1/2-y))/(2y), C(0) = 2; rejects |y| >= 1/2.
double scalar_c(double y);

// Coercivity pair for gamma against the thermal state of H0:
//   first  = T H(gamma, g_beta(H0))
//   second = max{ tr[(gamma-g0)^2 |H0|], 2T tr[(gamma-g0)^2] }
// first >= second always (trace form of the Klein bound).
std::pair<double, double> klein_margin(const MatX& gamma, const MatX& H0, double beta);

// ln((1/2+gamma)/(1/2-gamma)) for Hermitian gamma strictly inside (-1/2,1/2).
MatX log_ratio(const MatX& gamma, double boundary_tol = 1e-12);

// | H(g',g0) - H(g,g0) - H(g',g) - tr[(g'-g)(log_ratio(g)-log_ratio(g0))] |
double entropy_expansion_residual(const MatX& gamma_prime, const MatX& gamma,
                                  const MatX& gamma0);

} // namespace bdf
