#pragma once
#include "bdf/dirac.hpp"
#include "bdf/grid.hpp"
#include "bdf/radial.hpp"

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace bdf {

// Translation-invariant state gamma(p) = f1(|p|) alpha.p + f0(|p|) beta,
// tabulated on a radial grid over [0, Lambda].
struct VacuumCoefficients {
    RadialGrid grid;
    std::vector<double> f0, f1;

    double norm_at(std::size_t i) const {  // ||gamma(p_i)||
        const double r = grid.nodes[i];
        return std::sqrt(f1[i] * f1[i] * r * r + f0[i] * f0[i]);
    }
    RadialProfile profile_f0() const { return RadialProfile(grid.nodes, f0); }
    RadialProfile profile_f1() const { return RadialProfile(grid.nodes, f1); }
};

// Radial coefficients of the dressed operator D_gamma(p) = d1 alpha.p + d0 beta.
struct EffectiveDirac {
    std::vector<double> d0, d1;
    double norm_at(const RadialGrid& g, std::size_t i) const {
        const double r = g.nodes[i];
        return std::sqrt(d1[i] * d1[i] * r * r + d0[i] * d0[i]);
    }
};

// Dense exchange kernel on the grid: x0 = K0 f0, x1 = K1 f1 with
//   x0(p) = (alpha/pi)(1/p)   int_0^L q   f0(q) ln((p+q)/|p-q|) dq
//   x1(p) = (alpha/pi)(1/p^2) int_0^L q^2 f1(q) [((p^2+q^2)/(2pq)) ln(..) - 1] dq,
// assembled once per (grid, alpha) with log-graded panels around q = p.
struct ExchangeKernel {
    Eigen::MatrixXd K0, K1;
    double alpha = 0.0;

    static ExchangeKernel build(const RadialGrid& grid, double alpha);
    EffectiveDirac apply(const VacuumCoefficients& gamma) const;  // d = 1 - K f
};

// default production grid on [0, Lambda], refined near both ends
RadialGrid vacuum_grid(double lambda, int order = 32);

// f0 = f1 = -tanh(beta E / 2)/(2E): thermal state of the bare Dirac operator.
VacuumCoefficients reduced_vacuum(const ModelParams& params, const RadialGrid& grid);

// Dressed Dirac coefficients for a given state (builds the kernel internally;
// pass an ExchangeKernel to the overload in hot loops).
EffectiveDirac exchange_shift(const VacuumCoefficients& gamma, const ModelParams& params);

// Free energy per unit volume of an admissible ansatz state.
double energy_per_volume(const VacuumCoefficients& gamma, const ModelParams& params,
                         const ExchangeKernel& kernel);
double energy_per_volume(const VacuumCoefficients& gamma, const ModelParams& params);

// gradient coefficients (G0, G1): directional derivative along (g0, g1) equals
// (2/pi^2) int r^2 (G1 g1 r^2 + G0 g0) dr
std::pair<std::vector<double>, std::vector<double>> energy_gradient(
    const VacuumCoefficients& gamma, const ModelParams& params, const ExchangeKernel& kernel);

struct VacuumSolution {
    VacuumCoefficients gamma;
    EffectiveDirac dirac;
    ModelParams params;
    int iterations = 0;
    double residual = 0.0;
    double energy = 0.0;
    // measured constraint margins of the converged state
    double eps_f = 0.0;          // min(-f0, -f1) over the grid
    double min_d = 0.0;          // min(d0, d1)
    double min_gamma_norm = 0.0; // min_p ||gamma(p)||
    double max_gamma_norm = 0.0; // max_p ||gamma(p)||
    double min_dirac_gap = 0.0;  // min_p (||D(p)|| - E(p))
    bool converged = false;
};

// Damped pointwise fixed-point iteration gamma <- (1-m) gamma + m g_beta(D_gamma)
// starting from reduced_vacuum (or `start`).  Postconditions are measured and
// reported in the solution record; throws std::runtime_error on non-convergence.
VacuumSolution solve_interacting_vacuum(const ModelParams& params, double mixing = 0.5,
                                        double tol = 1e-10, int max_iter = 500,
                                        const RadialGrid* grid = nullptr,
                                        const VacuumCoefficients* start = nullptr);

// (T_T(gamma) - T_T(vacuum),  (1 - pi alpha/4) (2pi)^-3 int tr[||D|| (gamma - vac)^2])
// plus the per-unit-volume Klein margin through the third return value:
//   T Hbar(gamma, vac) - (2pi)^-3 int tr[||D|| (gamma - vac)^2]
struct EnergyGap {
    double energy_excess = 0.0;
    double coercivity_bound = 0.0;
    double klein_margin = 0.0;
};
EnergyGap vacuum_energy_gap(const VacuumCoefficients& gamma, const VacuumSolution& vacuum,
                            const ExchangeKernel& kernel);

} // namespace bdf
