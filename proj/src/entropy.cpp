#include "bdf/entropy.hpp"

#include "bdf/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace bdf {

namespace {

using VecX = Eigen::VectorXd;

struct Eig {
    VecX w;
    MatX U;
};

Eig eigh(const MatX& A) {
    Eigen::SelfAdjointEigenSolver<MatX> es(A);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigh failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

double xlogx(double t) { return t > 0.0 ? t * std::log(t) : 0.0; }

// clamp an eigenvalue of a renormalized density into [-1/2, 1/2]
double clamp_half(double x, double tol) {
    if (x > 0.5) {
        if (x > 0.5 + tol) throw std::domain_error("eigenvalue above 1/2");
        return 0.5;
    }
    if (x < -0.5) {
        if (x < -0.5 - tol) throw std::domain_error("eigenvalue below -1/2");
        return -0.5;
    }
    return x;
}

void require_interior(const VecX& w, double tol, const char* who) {
    for (int i = 0; i < w.size(); ++i)
        if (0.5 - std::abs(w[i]) < tol)
            throw std::domain_error(std::string(who) + ": reference eigenvalue within tol of +-1/2");
}

} // namespace

double fermi_scalar(double h, double beta) { return -0.5 * std::tanh(0.5 * beta * h); }

MatX fermi_map(const MatX& H, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("fermi_map: beta must be positive");
    const Eig e = eigh(H);
    VecX g(e.w.size());
    for (int i = 0; i < e.w.size(); ++i) g[i] = fermi_scalar(e.w[i], beta);
    return e.U * g.asDiagonal() * e.U.adjoint();
}

double entropy(const MatX& gamma, double tol) {
    const Eig e = eigh(gamma);
    double s = 0.0;
    for (int i = 0; i < e.w.size(); ++i) {
        const double x = clamp_half(e.w[i], tol);
        s -= xlogx(0.5 + x) + xlogx(0.5 - x);
    }
    return s;
}

double rel_entropy_log(const MatX& gamma, const MatX& gamma0, double boundary_tol) {
    const Eig eg = eigh(gamma);
    const Eig e0 = eigh(gamma0);
    require_interior(e0.w, boundary_tol, "rel_entropy_log");

    const int n = static_cast<int>(eg.w.size());
    double own = 0.0;
    VecX x(n);
    for (int i = 0; i < n; ++i) {
        x[i] = clamp_half(eg.w[i], boundary_tol);
        own += xlogx(0.5 + x[i]) + xlogx(0.5 - x[i]);
    }
    // cross terms through the overlap weights |<u_i|v_j>|^2
    const MatX M = eg.U.adjoint() * e0.U;
    double cross = 0.0;
    for (int j = 0; j < n; ++j) {
        const double lp = std::log(0.5 + e0.w[j]);
        const double lm = std::log(0.5 - e0.w[j]);
        for (int i = 0; i < n; ++i) {
            const double wij = std::norm(M(i, j));
            cross += wij * ((0.5 + x[i]) * lp + (0.5 - x[i]) * lm);
        }
    }
    return own - cross;
}

double rel_entropy_int(const MatX& gamma, const MatX& gamma0, int u_levels, int order,
                       double boundary_tol) {
    const Eig eg = eigh(gamma);
    const Eig e0 = eigh(gamma0);
    require_interior(e0.w, boundary_tol, "rel_entropy_int");
    const int n = static_cast<int>(eg.w.size());
    for (int i = 0; i < n; ++i) clamp_half(eg.w[i], boundary_tol);

    const MatX Q = gamma - gamma0;
    // express Q in both eigenbases once
    const MatX Q0 = e0.U.adjoint() * Q * eg.U;  // <v_j| Q |u_i>

    std::vector<double> xg, wg;
    gauss_legendre(order, xg, wg);

    // panels on [0,1] refined toward 1, mirrored onto [-1,0]
    std::vector<double> pts;
    pts.push_back(0.0);
    for (int j = 1; j <= u_levels; ++j) pts.push_back(1.0 - std::ldexp(1.0, -j));
    pts.push_back(1.0);

    double total = 0.0;
    for (int sgn = -1; sgn <= 1; sgn += 2) {
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
            const double a = pts[k], b = pts[k + 1];
            const double c = 0.5 * (a + b), h = 0.5 * (b - a);
            for (int q = 0; q < order; ++q) {
                const double u = sgn * (c + h * xg[q]);
                const double wu = h * wg[q];
                // tr[2 A Q B Q A], A = (1+2u g0)^-1 (g0-basis), B = (1-|u|)(1+2u g)^-1
                double tr = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double aj = 1.0 / (1.0 + 2.0 * u * e0.w[j]);
                    for (int i = 0; i < n; ++i) {
                        const double den = 1.0 + 2.0 * u * eg.w[i];
                        const double bi = den > 0.0 ? (1.0 - std::abs(u)) / den : 1.0;
                        tr += aj * aj * bi * std::norm(Q0(j, i));
                    }
                }
                total += wu * 2.0 * tr;
            }
        }
    }
    return total;
}

double scalar_c(double y) {
    if (std::abs(y) >= 0.5) throw std::domain_error("scalar_c: |y| >= 1/2");
    if (std::abs(y) < 1e-8) {
        // ln((1/2+y)/(1/2-y)) = 2 atanh(2y);  C(y) = atanh(2y)/y -> 2 + (8/3)y^2
        return 2.0 + (8.0 / 3.0) * y * y;
    }
    return std::log((0.5 + y) / (0.5 - y)) / (2.0 * y);
}

std::pair<double, double> klein_margin(const MatX& gamma, const MatX& H0, double beta) {
    const MatX g0 = fermi_map(H0, beta);
    const double T = 1.0 / beta;
    const double first = T * rel_entropy_log(gamma, g0);

    const Eig eh = eigh(H0);
    VecX absw = eh.w.cwiseAbs();
    const MatX absH = eh.U * absw.asDiagonal() * eh.U.adjoint();
    const MatX Q = gamma - g0;
    const double t1 = (Q * absH * Q).trace().real();
    const double t2 = 2.0 * T * (Q * Q).trace().real();
    return {first, std::max(t1, t2)};
}

MatX log_ratio(const MatX& gamma, double boundary_tol) {
    const Eig e = eigh(gamma);
    require_interior(e.w, boundary_tol, "log_ratio");
    VecX v(e.w.size());
    for (int i = 0; i < e.w.size(); ++i) v[i] = std::log((0.5 + e.w[i]) / (0.5 - e.w[i]));
    return e.U * v.asDiagonal() * e.U.adjoint();
}

double entropy_expansion_residual(const MatX& gamma_prime, const MatX& gamma,
                                  const MatX& gamma0) {
    const double lhs = rel_entropy_log(gamma_prime, gamma0);
    const double rhs = rel_entropy_log(gamma, gamma0) + rel_entropy_log(gamma_prime, gamma) +
                       ((gamma_prime - gamma) * (log_ratio(gamma) - log_ratio(gamma0)))
                           .trace()
                           .real();
    return std::abs(lhs - rhs);
}

} // namespace bdf
