#include "bdf/vacuum.hpp"

#include "bdf/entropy.hpp"

#include <cmath>
#include <stdexcept>

namespace bdf {

namespace {

double xlogx(double t) { return t > 0.0 ? t * std::log(t) : 0.0; }

// s(x) = (1/2+x)ln(1/2+x) + (1/2-x)ln(1/2-x), even in x
double scalar_s(double x) { return xlogx(0.5 + x) + xlogx(0.5 - x); }

// F(x) = ln((1/2+x)/(1/2-x))/x = 2 C(x);  F(0) = 4
double scalar_f(double x) {
    if (std::abs(x) < 1e-10) return 4.0 + (32.0 / 3.0) * x * x;
    return std::log((0.5 + x) / (0.5 - x)) / x;
}

} // namespace

RadialGrid vacuum_grid(double lambda, int order) {
    const double bps[] = {0.0, 0.08 * lambda, 0.5 * lambda, 0.92 * lambda, lambda};
    return make_radial_grid(bps, order);
}

VacuumCoefficients reduced_vacuum(const ModelParams& params, const RadialGrid& grid) {
    params.validate(false);
    VacuumCoefficients v;
    v.grid = grid;
    const std::size_t n = grid.size();
    v.f0.resize(n);
    v.f1.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double e = dirac_energy(grid.nodes[i]);
        v.f0[i] = -std::tanh(0.5 * params.beta * e) / (2.0 * e);
        v.f1[i] = v.f0[i];
    }
    return v;
}

ExchangeKernel ExchangeKernel::build(const RadialGrid& grid, double alpha) {
    const std::size_t n = grid.size();
    ExchangeKernel k;
    k.alpha = alpha;
    k.K0 = Eigen::MatrixXd::Zero(n, n);
    k.K1 = Eigen::MatrixXd::Zero(n, n);
    if (alpha == 0.0) return k;

    const double L = grid.length;
    // interpolation of grid values at quadrature points, as a weight row
    RadialProfile shape(grid.nodes, std::vector<double>(grid.nodes.begin(), grid.nodes.end()));

    std::vector<double> xg, wg;
    gauss_legendre(12, xg, wg);

    for (std::size_t i = 0; i < n; ++i) {
        const double p = grid.nodes[i];
        for (const auto& [a, b] : graded_panels(0.0, L, p)) {
            const double c = 0.5 * (a + b), h = 0.5 * (b - a);
            for (std::size_t m = 0; m < xg.size(); ++m) {
                const double q = c + h * xg[m];
                const double wq = h * wg[m];
                const double lg = std::log((p + q) / std::abs(p - q));
                const double c0 = (alpha / M_PI) / p * wq * q * lg;
                const double c1 = (alpha / M_PI) / (p * p) * wq * q * q *
                                  (((p * p + q * q) / (2.0 * p * q)) * lg - 1.0);
                std::size_t idx;
                double w4[4];
                shape.weight_row(q, idx, w4);
                for (int t = 0; t < 4; ++t) {
                    k.K0(i, idx + t) += c0 * w4[t];
                    k.K1(i, idx + t) += c1 * w4[t];
                }
            }
        }
    }
    return k;
}

EffectiveDirac ExchangeKernel::apply(const VacuumCoefficients& gamma) const {
    const std::size_t n = gamma.grid.size();
    Eigen::Map<const Eigen::VectorXd> f0(gamma.f0.data(), n), f1(gamma.f1.data(), n);
    const Eigen::VectorXd x0 = K0 * f0, x1 = K1 * f1;
    EffectiveDirac d;
    d.d0.resize(n);
    d.d1.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        d.d0[i] = 1.0 - x0[i];
        d.d1[i] = 1.0 - x1[i];
    }
    return d;
}

EffectiveDirac exchange_shift(const VacuumCoefficients& gamma, const ModelParams& params) {
    params.validate(false);
    return ExchangeKernel::build(gamma.grid, params.alpha).apply(gamma);
}

double energy_per_volume(const VacuumCoefficients& gamma, const ModelParams& params,
                         const ExchangeKernel& kernel) {
    const std::size_t n = gamma.grid.size();
    const auto& r = gamma.grid.nodes;
    const auto& w = gamma.grid.weights;
    Eigen::Map<const Eigen::VectorXd> f0(gamma.f0.data(), n), f1(gamma.f1.data(), n);
    const Eigen::VectorXd x0 = kernel.K0 * f0, x1 = kernel.K1 * f1;

    const double T = temperature(params);
    double kin = 0.0, ex = 0.0, ent = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r2 = r[i] * r[i];
        kin += w[i] * r2 * (gamma.f1[i] * r2 + gamma.f0[i]);
        ex += w[i] * r2 * (gamma.f1[i] * x1[i] * r2 + gamma.f0[i] * x0[i]);
        const double nrm = gamma.norm_at(i);
        if (nrm > 0.5 + 1e-12)
            throw std::domain_error("energy_per_volume: ||gamma(p)|| > 1/2");
        ent += w[i] * r2 * scalar_s(std::min(nrm, 0.5));
    }
    // tr(D0 gamma): (2pi)^-3 4pi int 4(...) = (2/pi^2) int; exchange carries
    // an extra 1/2 (it is -(1/2)(2pi)^-3 int tr[gamma X]); entropy term +T(2/pi^2) int s
    return (2.0 / (M_PI * M_PI)) * (kin - 0.5 * ex + T * ent);
}

double energy_per_volume(const VacuumCoefficients& gamma, const ModelParams& params) {
    return energy_per_volume(gamma, params, ExchangeKernel::build(gamma.grid, params.alpha));
}

std::pair<std::vector<double>, std::vector<double>> energy_gradient(
    const VacuumCoefficients& gamma, const ModelParams& params, const ExchangeKernel& kernel) {
    const EffectiveDirac d = kernel.apply(gamma);
    const std::size_t n = gamma.grid.size();
    const double T = temperature(params);
    std::vector<double> G0(n), G1(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double F = scalar_f(gamma.norm_at(i));
        G0[i] = d.d0[i] + T * gamma.f0[i] * F;
        G1[i] = d.d1[i] + T * gamma.f1[i] * F;
    }
    return {G0, G1};
}

VacuumSolution solve_interacting_vacuum(const ModelParams& params, double mixing, double tol,
                                        int max_iter, const RadialGrid* grid_in,
                                        const VacuumCoefficients* start) {
    params.validate(true);
    if (!(mixing > 0.0 && mixing <= 1.0))
        throw std::invalid_argument("solve_interacting_vacuum: mixing in (0,1]");

    const RadialGrid grid = grid_in ? *grid_in : vacuum_grid(params.lambda);
    const ExchangeKernel kernel = ExchangeKernel::build(grid, params.alpha);

    VacuumCoefficients g = start ? *start : reduced_vacuum(params, grid);
    const std::size_t n = grid.size();

    VacuumSolution sol;
    sol.params = params;
    double residual = 0.0;
    int it = 0;
    for (; it < max_iter; ++it) {
        const EffectiveDirac d = kernel.apply(g);
        residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = grid.nodes[i];
            const double nd = std::sqrt(d.d1[i] * d.d1[i] * r * r + d.d0[i] * d.d0[i]);
            // g_beta acts on the eigenvalues +-||D||, eigenvectors of D_gamma:
            // new gamma = (-tanh(beta ||D||/2)/(2||D||)) * (d1 alpha.p + d0 beta)
            const double scale = -std::tanh(0.5 * params.beta * nd) / (2.0 * nd);
            const double nf0 = scale * d.d0[i];
            const double nf1 = scale * d.d1[i];
            residual = std::max({residual, std::abs(nf0 - g.f0[i]), std::abs(nf1 - g.f1[i])});
            g.f0[i] = (1.0 - mixing) * g.f0[i] + mixing * nf0;
            g.f1[i] = (1.0 - mixing) * g.f1[i] + mixing * nf1;
        }
        if (residual < tol) {
            ++it;
            break;
        }
    }

    sol.gamma = g;
    sol.dirac = kernel.apply(g);
    sol.iterations = it;
    sol.residual = residual;
    sol.converged = residual < tol;
    sol.energy = energy_per_volume(g, params, kernel);

    sol.eps_f = 1e300;
    sol.min_d = 1e300;
    sol.min_gamma_norm = 1e300;
    sol.max_gamma_norm = 0.0;
    sol.min_dirac_gap = 1e300;
    for (std::size_t i = 0; i < n; ++i) {
        sol.eps_f = std::min({sol.eps_f, -g.f0[i], -g.f1[i]});
        sol.min_d = std::min({sol.min_d, sol.dirac.d0[i], sol.dirac.d1[i]});
        const double nrm = g.norm_at(i);
        sol.min_gamma_norm = std::min(sol.min_gamma_norm, nrm);
        sol.max_gamma_norm = std::max(sol.max_gamma_norm, nrm);
        sol.min_dirac_gap = std::min(
            sol.min_dirac_gap, sol.dirac.norm_at(grid, i) - dirac_energy(grid.nodes[i]));
    }
    if (!sol.converged)
        throw std::runtime_error("solve_interacting_vacuum: no convergence after max_iter");
    return sol;
}

EnergyGap vacuum_energy_gap(const VacuumCoefficients& gamma, const VacuumSolution& vacuum,
                            const ExchangeKernel& kernel) {
    const auto& grid = vacuum.gamma.grid;
    const std::size_t n = grid.size();
    if (gamma.grid.size() != n)
        throw std::invalid_argument("vacuum_energy_gap: grid mismatch");

    EnergyGap out;
    out.energy_excess = energy_per_volume(gamma, vacuum.params, kernel) - vacuum.energy;

    const double alpha = vacuum.params.alpha;
    const double T = temperature(vacuum.params);
    double quad = 0.0;   // (2pi)^-3 int tr[||D|| (dGamma)^2] = (2/pi^2) int r^2 ||D|| (d1^2 r^2 + d0^2)
    double hbar = 0.0;   // relative entropy per unit volume
    for (std::size_t i = 0; i < n; ++i) {
        const double r = grid.nodes[i];
        const double w = grid.weights[i];
        const double df0 = gamma.f0[i] - vacuum.gamma.f0[i];
        const double df1 = gamma.f1[i] - vacuum.gamma.f1[i];
        const double nd = vacuum.dirac.norm_at(grid, i);
        quad += w * r * r * nd * (df1 * df1 * r * r + df0 * df0);

        // pointwise 4x4 relative entropy (the two symbols need not commute)
        const Vec3 p(0.0, 0.0, r);
        const auto& a3 = dirac_alphas()[2];
        const MatX x = gamma.f1[i] * r * a3 + gamma.f0[i] * dirac_beta();
        const MatX y = vacuum.gamma.f1[i] * r * a3 + vacuum.gamma.f0[i] * dirac_beta();
        hbar += w * r * r * rel_entropy_log(x, y);
    }
    quad *= 2.0 / (M_PI * M_PI);
    hbar *= 1.0 / (2.0 * M_PI * M_PI);  // (2pi)^-3 * 4pi
    out.coercivity_bound = (1.0 - M_PI * alpha / 4.0) * quad;
    out.klein_margin = T * hbar - quad;
    return out;
}

} // namespace bdf
