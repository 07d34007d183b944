#pragma once
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace bdf {

// Project-wide unitary Fourier convention:
//   fhat(k) = (2pi)^{-3/2} int f(x) e^{-ik.x} dx.
// Every transform pair in the code refers to this constant.
inline constexpr double kFourierPrefactor = 0.06349363593424097;  // (2pi)^{-3/2}

// Tabulated real function of a radial variable on ascending nodes in [0, R],
// evaluated by local (4-point Lagrange) cubic interpolation; 0 outside [0, R].
class RadialProfile {
public:
    RadialProfile() = default;
    RadialProfile(std::vector<double> nodes, std::vector<double> values);

    double operator()(double r) const;
    double rmax() const { return nodes_.empty() ? 0.0 : nodes_.back(); }
    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> values() const { return values_; }

    // interpolation weight row: values at `r` = sum_j w_j * values_[idx+j], j=0..3
    void weight_row(double r, std::size_t& idx, double w[4]) const;

private:
    std::vector<double> nodes_, values_;
};

// External charge density nu with radial Fourier transform nuhat;
// nuhat(0) = Z (2pi)^{-3/2}.
struct ChargeDensitySpec {
    enum class Kind { gaussian, point_regularized, tabulated };
    Kind kind = Kind::gaussian;
    double Z = 1.0;
    double sigma = 1.0;      // width; > 0
    RadialProfile table;     // used when kind == tabulated (profile of nuhat)

    double hat(double k) const;        // nuhat(k)
    double position(double x) const;   // nu(x) where a closed form exists
};

// D(f,g) = 4pi int |k|^-2 conj(fhat) ghat dk = 16 pi^2 int_0^inf fhat ghat dr
// for radial real transforms.  Integrates on [0, r0], then appends geometric
// tail blocks; throws std::runtime_error if the tail fails to settle.
double coulomb_pairing(const std::function<double(double)>& fhat,
                       const std::function<double(double)>& ghat,
                       double r0, double rel_tol = 1e-10);
double coulomb_pairing(const ChargeDensitySpec& f, const ChargeDensitySpec& g);

// b(x) = (1/(sqrt(2 pi) x)) int_0^R r bhat(r) sin(r x) dr, panels <= pi/(4x).
// x <= 0 rejected except the x->0 limit value via radial_inverse_fourier_zero.
double radial_inverse_fourier(const RadialProfile& bhat, double x);
double radial_inverse_fourier_zero(const RadialProfile& bhat);

// Ingredients of the |x|^-4 representation of the truncated inverse transform
// obtained by three integrations by parts (u = r bhat):
//   sqrt(2pi) x^4 b(x) = -x^2 u(R)cos(Rx) + x u'(R)sin(Rx)
//                        + u''(R)cos(Rx) - u''(0) - int_0^R u'''(r)cos(rx)dr.
struct DecayCoefficients {
    double second_deriv_term = 0.0;   // R bhat''(R),  R = 2*Lambda
    double zero_deriv_term = 0.0;     // 2 bhat'(0)
    RadialProfile third_derivative;   // (r bhat)''' on a uniform grid
    double third_l1 = 0.0;            // int |(r bhat)'''| dr

    double endpoint_value = 0.0;      // bhat(R)
    double endpoint_deriv = 0.0;      // bhat'(R)
    double R = 0.0;

    // upper bound for |x^4 b(x)|; includes the x^2 and x terms whenever the
    // endpoint values do not vanish
    double envelope(double x) const;
};

// Finite-difference (4th order, one-sided at the ends) derivative extraction.
// Throws std::runtime_error when the h vs 2h derivative estimates disagree
// grossly (noise-dominated tabulation).
DecayCoefficients decay_coefficient(const RadialProfile& bhat, int resample = 401);

} // namespace bdf
