#pragma once
#include "bdf/dirac.hpp"
#include "bdf/radial.hpp"

#include <vector>

namespace bdf {

// Z_L(r) = (E(Lambda) - E(Lambda - r))/r on [0, 2 Lambda]; decreasing,
// Z_L(0) = Lambda/E(Lambda), Z_L(2 Lambda) = 0.
double zeta_lambda(double r, double lambda);

// w(k,z) = sqrt((1 + k^2 (1-z^2)/4)/(1-z^2)), 0 <= z < 1.
double w_kernel(double k, double z);

// Thermal polarization kernel C(k) by direct quadrature over the momentum
// lens {|p +- k/2| <= Lambda} of the two Fermi-factor terms.
double response_direct(double k, const ModelParams& params, int order = 96);

// The same kernel split as (C1, C2) through the two-variable iterated
// integrals (boundary-layer + bulk pieces).
std::pair<double, double> response_reduced(double k, const ModelParams& params, int order = 64);

// Zero-momentum limit of C1 (= C(0)):
//   C1(0) = (8 beta / pi) int_0^Lambda r^2 / ((1+e^{beta E})(1+e^{-beta E})) dr.
double c1_at_zero(const ModelParams& params);

// C(k) tabulated on [0, 2 Lambda].
struct ResponseKernel {
    ModelParams params;
    std::vector<double> k;        // uniform nodes, k[0] = 0, k.back() = 2 Lambda
    std::vector<double> c1, c2, c;

    RadialProfile profile() const { return RadialProfile(k, c); }
    double at(double kk) const { return profile()(kk); }
};
ResponseKernel build_response_kernel(const ModelParams& params, int nk = 161, int order = 64);

// b1hat = k^2/(k^2 + alpha C), b2hat = 1/(k^2 + alpha C) on [0, 2 Lambda].
// Kernels are defined on [0, 2 Lambda] only and applied only against densities
// with Fourier support there (truncation convention).
struct ScreeningKernels {
    ModelParams params;
    RadialProfile b1hat, b2hat;
    double c_zero = 0.0;          // C(0), so b2hat(0) = 1/(alpha C(0))
};
ScreeningKernels build_screening_kernels(const ModelParams& params, const ResponseKernel& response);

// Linearized screening of an external density:
//   rho_hat(k)     = -b1hat(k) nuhat(k)          (induced minus-part)
//   rho_tot_hat(k) =  nuhat(k) alpha C/(k^2+alpha C) (total vacuum response)
//   V_hat(k)       = -4pi b2hat(k) nuhat(k)
// all truncated to k <= 2 Lambda.
struct ScreeningResult {
    ModelParams params;
    ChargeDensitySpec nu;
    RadialProfile rho_tot_hat;
    RadialProfile v_hat;
    double total_response_charge = 0.0;  // (2pi)^{3/2} rho_tot_hat(0)
    double external_charge = 0.0;        // (2pi)^{3/2} nuhat(0)

    double rho_tot(double x) const;      // position space via radial inversion
    double potential(double x) const;
};
ScreeningResult linear_screen(const ChargeDensitySpec& nu, const ModelParams& params,
                              const ScreeningKernels& kernels);

struct DebyeReport {
    std::vector<double> x, rho_tot, v, xv;
    double xv_ratio_50_1 = 0.0;       // x|V|(50) / x|V|(1)
    double decay_exponent = 0.0;      // log-log fit of |V| on x in [10,40]
    double response_charge_quadrature = 0.0;  // int rho_tot 4pi x^2 dx
    double external_charge = 0.0;
};
DebyeReport debye_report(const ScreeningResult& result, int nx = 64, double x_hi = 50.0);

} // namespace bdf
