#pragma once
#include "bdf/dirac.hpp"
#include "bdf/vacuum.hpp"

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

namespace bdf {

// Momentum lattice p = (2pi/L) m, |p| <= Lambda, closed under m -> -m.
// Pair structure: diffs[t] lists every ordered mode pair (i,j) with
// m_i - m_j = dvec[t]; diff 0 is always the zero vector.
struct BoxConfig {
    double L = 12.0;
    double lambda = 1.0;
    std::vector<Eigen::Vector3i> modes;
    int M = 0;                    // mode count
    int n = 0;                    // 4M
    double kfac = 0.0;            // 2 pi / L

    std::vector<Eigen::Vector3i> dvec;                    // realized differences
    std::vector<std::vector<std::pair<int, int>>> pairs;  // per diff: (i, j)
    Eigen::MatrixXi diff_of_pair;                         // (i,j) -> diff index

    static BoxConfig make(double L, double lambda, int max_dim = 4096);

    Eigen::Vector3d momentum(int i) const { return kfac * modes[i].cast<double>(); }
    double k_norm2(int t) const { return kfac * kfac * dvec[t].cast<double>().squaredNorm(); }
    int mode_index(const Eigen::Vector3i& m) const;  // -1 when absent
};

struct BoxState {
    Eigen::MatrixXcd gamma;
};

// Density coefficients c_t aligned with config.dvec; c_0 = tr(Q)/L^3.
struct BoxDensity {
    std::vector<std::complex<double>> c;
};

enum class ScfMode { reduced, full };

// Reference vacuum on the lattice.
struct BoxReference {
    ScfMode mode = ScfMode::reduced;
    BoxState state;                   // gamma_ref: g_beta of the reference operator
    Eigen::MatrixXcd dirac;           // D0 (reduced) or interpolated D_ref (full)
    std::vector<double> block_norm;   // ||D_ref(p_i)||
    double interp_residual = 0.0;     // sup | g_beta(D_ref(p)) - interpolated f profile |
};

// reduced: blocks g_beta(D0(p)); interacting: radial solution interpolated at
// lattice momenta (d-profiles define D_ref; gamma_ref = g_beta(D_ref) exactly).
BoxReference build_reference(const BoxConfig& config, const ModelParams& params, ScfMode mode,
                             const VacuumSolution* vacuum = nullptr);

BoxDensity density_of(const Eigen::MatrixXcd& Q, const BoxConfig& config);

// Discrete Coulomb pairing 4 pi L^3 sum_{k != 0} conj(f_k) g_k / |k|^2.
double coulomb_energy(const BoxDensity& f, const BoxDensity& g, const BoxConfig& config);

// Lattice coefficients of an external Gaussian density (Z, sigma).
BoxDensity gaussian_box_density(const BoxConfig& config, double Z, double sigma);
BoxDensity zero_box_density(const BoxConfig& config);

// D_gamma = D_ref + alpha Hartree(rho_Q - nu) [+ alpha Exchange(Q) in full mode]
Eigen::MatrixXcd mean_field_operator(const BoxState& gamma, const BoxDensity& nu,
                                     const BoxReference& reference, ScfMode mode,
                                     const BoxConfig& config, const ModelParams& params);

// F = T H(gamma, ref) - alpha D(nu, rho_Q) + (alpha/2) D(rho_Q, rho_Q)
//     - (alpha/2) ExchangeEnergy(Q)            (full mode only)
double free_energy(const BoxState& gamma, const BoxDensity& nu, const BoxReference& reference,
                   ScfMode mode, const BoxConfig& config, const ModelParams& params);

// quadratic form whose gradient is -2 Exchange(Q)/alpha; >= 0
double exchange_energy(const Eigen::MatrixXcd& Q, const BoxConfig& config);

struct ScfIterRecord {
    int iteration;
    double energy;
    double residual;
    double mixing;
};

struct BoxScfResult {
    BoxState state;
    BoxDensity density;               // of gamma - reference
    int iterations = 0;
    double residual = 0.0;            // ||gamma - g_beta(D_gamma)||_F at exit
    double energy = 0.0;
    double coercivity_margin = 0.0;   // T H(gamma, ref) - tr[|D_ref| Q^2]
    bool descent_ok = true;           // reduced mode: energy non-increasing
    bool converged = false;
    std::vector<ScfIterRecord> history;
    // full-mode operator bound |D_gamma| >= d^{-1} |D0| (min eigenvalue of the
    // difference), populated when the uniqueness condition holds
    double spectral_margin = 0.0;
    double uniqueness_d = 0.0;
    bool uniqueness_ok = false;
};

BoxScfResult scf_solve(const BoxConfig& config, const ModelParams& params, const BoxDensity& nu,
                       ScfMode mode, double mixing = 0.0 /* 0 -> mode default */,
                       double tol = 1e-10, int max_iter = 400,
                       const BoxState* start = nullptr,
                       const VacuumSolution* vacuum = nullptr);

// d = [1 - alpha (pi/2 sqrt((alpha/2)/(1-alpha pi/4)) + pi^{1/6} 2^{11/6}) sqrt(D(nu,nu))]^{-1};
// satisfied iff the bracket is positive and 0 <= alpha pi d / 4 <= 1.
struct UniquenessCondition {
    double d = 0.0;
    bool satisfied = false;
    double bracket = 0.0;
};
UniquenessCondition uniqueness_condition(const ModelParams& params, double coulomb_nu_nu);

// Charge bookkeeping of a converged reduced-mode solution: lattice vacuum
// charge tr(Q) against the external charge, plus the response ratio
// c_k/nu_k on the smallest shells (the observable screening diagnostic).
struct ChargeCheck {
    double box_charge = 0.0;       // L^3 c_0(Q) = tr(Q)
    double external_charge = 0.0;  // L^3 nu_0
    double mismatch = 0.0;         // |box - external| / |external|
    std::vector<double> shell_k;
    std::vector<double> shell_ratio;  // Re(c_k / nu_k), shell-averaged
};
ChargeCheck charge_screening_check(const BoxScfResult& result, const BoxDensity& nu,
                                   const BoxConfig& config, int shells = 3);

// Matrix |A| via eigendecomposition (helper for spectral bounds).
Eigen::MatrixXcd matrix_abs(const Eigen::MatrixXcd& A);

} // namespace bdf
