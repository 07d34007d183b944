#pragma once
#include <Eigen/Dense>
#include <array>
#include <utility>

namespace bdf {

using Mat4 = Eigen::Matrix4cd;
using Vec3 = Eigen::Vector3d;

// Physical parameters, units hbar = c = m = 1.
struct ModelParams {
    double alpha  = 0.0;  // coupling, 0 <= alpha < 4/pi for interacting solvers
    double beta   = 1.0;  // inverse temperature, finite and > 0
    double lambda = 1.0;  // UV cutoff

    // throws std::invalid_argument on violation; interacting adds alpha < 4/pi
    void validate(bool interacting = false) const;
};

inline double temperature(const ModelParams& p) { return 1.0 / p.beta; }

// alpha_1, alpha_2, alpha_3 in the standard (Dirac/Pauli) representation.
const std::array<Mat4, 3>& dirac_alphas();
const Mat4& dirac_beta();

// E(p) = sqrt(1 + |p|^2)
inline double dirac_energy(double p) { return std::sqrt(1.0 + p * p); }

// D0(p) = alpha.p + beta
Mat4 dirac_symbol(const Vec3& p);

// P0^+-(p) = (1 -++ D0(p)/E(p))/2, returned as (plus, minus)
std::pair<Mat4, Mat4> spectral_projectors(const Vec3& p);

// tr[P^s(p) P^s'(q)] = 1 +- (p.q + 1)/(E(p)E(q)) for equal/opposite signs
double projector_overlap_trace(const Vec3& p, const Vec3& q, bool same_sign);

} // namespace bdf
