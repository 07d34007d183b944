#include "bdf/box.hpp"

#include "bdf/entropy.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace bdf {

namespace {

using MatC = Eigen::MatrixXcd;

std::int64_t pack(const Eigen::Vector3i& m) {
    // components fit comfortably in 16 bits
    return (static_cast<std::int64_t>(m[0] + 512) << 20) |
           (static_cast<std::int64_t>(m[1] + 512) << 10) |
           static_cast<std::int64_t>(m[2] + 512);
}

} // namespace

BoxConfig BoxConfig::make(double L, double lambda, int max_dim) {
    if (!(L > 0.0) || !(lambda > 0.0)) throw std::invalid_argument("BoxConfig: L, lambda > 0");
    BoxConfig c;
    c.L = L;
    c.lambda = lambda;
    c.kfac = 2.0 * M_PI / L;
    const int mmax = static_cast<int>(std::floor(lambda / c.kfac)) + 1;
    for (int a = -mmax; a <= mmax; ++a)
        for (int b = -mmax; b <= mmax; ++b)
            for (int d = -mmax; d <= mmax; ++d) {
                Eigen::Vector3i m(a, b, d);
                if (c.kfac * c.kfac * m.cast<double>().squaredNorm() <= lambda * lambda * (1.0 + 1e-12))
                    c.modes.push_back(m);
            }
    std::sort(c.modes.begin(), c.modes.end(), [](const auto& x, const auto& y) {
        const int nx = x.squaredNorm(), ny = y.squaredNorm();
        if (nx != ny) return nx < ny;
        return std::lexicographical_compare(x.data(), x.data() + 3, y.data(), y.data() + 3);
    });
    c.M = static_cast<int>(c.modes.size());
    c.n = 4 * c.M;
    if (c.n > max_dim) throw std::invalid_argument("BoxConfig: dimension exceeds max_dim");

    std::map<std::int64_t, int> dindex;
    // diff 0 first
    c.dvec.push_back(Eigen::Vector3i::Zero());
    c.pairs.emplace_back();
    dindex[pack(Eigen::Vector3i::Zero())] = 0;
    c.diff_of_pair.resize(c.M, c.M);
    for (int i = 0; i < c.M; ++i)
        for (int j = 0; j < c.M; ++j) {
            const Eigen::Vector3i d = c.modes[i] - c.modes[j];
            auto [it, inserted] = dindex.try_emplace(pack(d), static_cast<int>(c.dvec.size()));
            if (inserted) {
                c.dvec.push_back(d);
                c.pairs.emplace_back();
            }
            c.pairs[it->second].emplace_back(i, j);
            c.diff_of_pair(i, j) = it->second;
        }
    return c;
}

int BoxConfig::mode_index(const Eigen::Vector3i& m) const {
    for (int i = 0; i < M; ++i)
        if (modes[i] == m) return i;
    return -1;
}

BoxReference build_reference(const BoxConfig& config, const ModelParams& params, ScfMode mode,
                             const VacuumSolution* vacuum) {
    params.validate(mode == ScfMode::full);
    BoxReference ref;
    ref.mode = mode;
    ref.state.gamma = MatC::Zero(config.n, config.n);
    ref.dirac = MatC::Zero(config.n, config.n);
    ref.block_norm.resize(config.M);
    ref.interp_residual = 0.0;

    std::optional<RadialProfile> d0p, d1p, f0p, f1p;
    if (mode == ScfMode::full) {
        if (!vacuum || !vacuum->converged)
            throw std::invalid_argument("build_reference: full mode needs a converged vacuum");
        if (vacuum->params.alpha != params.alpha || vacuum->params.beta != params.beta ||
            vacuum->params.lambda != params.lambda)
            throw std::invalid_argument("build_reference: vacuum solved at different parameters");
        d0p = RadialProfile(vacuum->gamma.grid.nodes, vacuum->dirac.d0);
        d1p = RadialProfile(vacuum->gamma.grid.nodes, vacuum->dirac.d1);
        f0p = vacuum->gamma.profile_f0();
        f1p = vacuum->gamma.profile_f1();
    }

    for (int i = 0; i < config.M; ++i) {
        const Vec3 p = config.momentum(i);
        const double r = p.norm();
        Mat4 D;
        if (mode == ScfMode::reduced) {
            D = dirac_symbol(p);
            ref.block_norm[i] = dirac_energy(r);
        } else {
            const double d0 = (*d0p)(r), d1 = (*d1p)(r);
            const auto& a = dirac_alphas();
            D = d1 * (p[0] * a[0] + p[1] * a[1] + p[2] * a[2]) + d0 * dirac_beta();
            ref.block_norm[i] = std::sqrt(d1 * d1 * r * r + d0 * d0);
        }
        const double nd = ref.block_norm[i];
        const double scale = -std::tanh(0.5 * params.beta * nd) / (2.0 * nd);
        ref.dirac.block<4, 4>(4 * i, 4 * i) = D;
        ref.state.gamma.block<4, 4>(4 * i, 4 * i) = scale * D;

        if (mode == ScfMode::full) {
            // inconsistency between the interpolated f profiles and the thermal
            // state of the interpolated D: pure interpolation error
            const double nf0 = scale * ((*d0p)(r));
            const double nf1 = scale * ((*d1p)(r));
            ref.interp_residual = std::max({ref.interp_residual,
                                            std::abs(nf0 - (*f0p)(r)),
                                            std::abs(nf1 - (*f1p)(r))});
        }
    }
    return ref;
}

BoxDensity density_of(const MatC& Q, const BoxConfig& config) {
    BoxDensity rho;
    rho.c.assign(config.dvec.size(), {0.0, 0.0});
    const double invV = 1.0 / (config.L * config.L * config.L);
    for (int i = 0; i < config.M; ++i)
        for (int j = 0; j < config.M; ++j) {
            const int t = config.diff_of_pair(i, j);
            std::complex<double> tr = 0.0;
            for (int a = 0; a < 4; ++a) tr += Q(4 * i + a, 4 * j + a);
            rho.c[t] += invV * tr;
        }
    return rho;
}

double coulomb_energy(const BoxDensity& f, const BoxDensity& g, const BoxConfig& config) {
    if (f.c.size() != config.dvec.size() || g.c.size() != config.dvec.size())
        throw std::invalid_argument("coulomb_energy: density/config mismatch");
    double s = 0.0;
    for (std::size_t t = 1; t < config.dvec.size(); ++t)
        s += (std::conj(f.c[t]) * g.c[t]).real() / config.k_norm2(static_cast<int>(t));
    const double V = config.L * config.L * config.L;
    return 4.0 * M_PI * V * s;
}

BoxDensity gaussian_box_density(const BoxConfig& config, double Z, double sigma) {
    BoxDensity nu;
    const double invV = 1.0 / (config.L * config.L * config.L);
    nu.c.resize(config.dvec.size());
    for (std::size_t t = 0; t < config.dvec.size(); ++t) {
        const double k2 = config.k_norm2(static_cast<int>(t));
        nu.c[t] = Z * invV * std::exp(-0.5 * sigma * sigma * k2);
    }
    return nu;
}

BoxDensity zero_box_density(const BoxConfig& config) {
    BoxDensity nu;
    nu.c.assign(config.dvec.size(), {0.0, 0.0});
    return nu;
}

namespace {

MatC hartree_operator(const BoxDensity& rho, const BoxConfig& config, double alpha) {
    MatC H = MatC::Zero(config.n, config.n);
    for (std::size_t t = 1; t < config.dvec.size(); ++t) {
        const std::complex<double> coef =
            alpha * 4.0 * M_PI / config.k_norm2(static_cast<int>(t)) * rho.c[t];
        if (coef == std::complex<double>(0.0, 0.0)) continue;
        for (const auto& [i, j] : config.pairs[t])
            for (int a = 0; a < 4; ++a) H(4 * i + a, 4 * j + a) += coef;
    }
    return H;
}

MatC exchange_operator(const MatC& Q, const BoxConfig& config, double alpha) {
    MatC X = MatC::Zero(config.n, config.n);
    const double V = config.L * config.L * config.L;
    for (std::size_t t = 1; t < config.dvec.size(); ++t) {
        const double w = alpha * 4.0 * M_PI / (config.k_norm2(static_cast<int>(t)) * V);
        // block (i,j) -= w Q(i - k_t, j - k_t): pairs[t] lists (i, i') with
        // m_i - m_i' = k_t
        for (const auto& [i, is] : config.pairs[t])
            for (const auto& [j, js] : config.pairs[t])
                X.block<4, 4>(4 * i, 4 * j) -= w * Q.block<4, 4>(4 * is, 4 * js);
    }
    return X;
}

} // namespace

double exchange_energy(const MatC& Q, const BoxConfig& config) {
    const MatC X = exchange_operator(Q, config, 1.0);
    return -(X * Q).trace().real();
}

MatC mean_field_operator(const BoxState& gamma, const BoxDensity& nu,
                         const BoxReference& reference, ScfMode mode, const BoxConfig& config,
                         const ModelParams& params) {
    const MatC Q = gamma.gamma - reference.state.gamma;
    BoxDensity rho = density_of(Q, config);
    for (std::size_t t = 0; t < rho.c.size(); ++t) rho.c[t] -= nu.c[t];
    MatC D = reference.dirac + hartree_operator(rho, config, params.alpha);
    if (mode == ScfMode::full) D += exchange_operator(Q, config, params.alpha);
    return D;
}

double free_energy(const BoxState& gamma, const BoxDensity& nu, const BoxReference& reference,
                   ScfMode mode, const BoxConfig& config, const ModelParams& params) {
    const MatC Q = gamma.gamma - reference.state.gamma;
    const BoxDensity rho = density_of(Q, config);
    const double T = temperature(params);
    double F = T * rel_entropy_log(gamma.gamma, reference.state.gamma) -
               params.alpha * coulomb_energy(nu, rho, config) +
               0.5 * params.alpha * coulomb_energy(rho, rho, config);
    if (mode == ScfMode::full) F -= 0.5 * params.alpha * exchange_energy(Q, config);
    return F;
}

UniquenessCondition uniqueness_condition(const ModelParams& params, double coulomb_nu_nu) {
    params.validate(true);
    UniquenessCondition u;
    const double a = params.alpha;
    if (a == 0.0) {
        u.d = 1.0;
        u.bracket = 1.0;
        u.satisfied = true;
        return u;
    }
    const double coef = 0.5 * M_PI * std::sqrt((0.5 * a) / (1.0 - a * M_PI / 4.0)) +
                        std::pow(M_PI, 1.0 / 6.0) * std::pow(2.0, 11.0 / 6.0);
    u.bracket = 1.0 - a * coef * std::sqrt(std::max(coulomb_nu_nu, 0.0));
    if (u.bracket > 0.0) {
        u.d = 1.0 / u.bracket;
        const double q = a * M_PI * u.d / 4.0;
        u.satisfied = q >= 0.0 && q <= 1.0;
    }
    return u;
}

MatC matrix_abs(const MatC& A) {
    Eigen::SelfAdjointEigenSolver<MatC> es(A);
    if (es.info() != Eigen::Success) throw std::runtime_error("matrix_abs: eigensolver failed");
    return es.eigenvectors() * es.eigenvalues().cwiseAbs().asDiagonal() *
           es.eigenvectors().adjoint();
}

BoxScfResult scf_solve(const BoxConfig& config, const ModelParams& params, const BoxDensity& nu,
                       ScfMode mode, double mixing, double tol, int max_iter,
                       const BoxState* start, const VacuumSolution* vacuum) {
    params.validate(true);
    if (mixing == 0.0) mixing = (mode == ScfMode::reduced) ? 0.6 : 0.3;
    if (!(mixing > 0.0 && mixing <= 1.0)) throw std::invalid_argument("scf_solve: mixing in (0,1]");

    const BoxReference ref = build_reference(config, params, mode, vacuum);
    BoxScfResult out;

    BoxState cur;
    cur.gamma = start ? start->gamma : ref.state.gamma;
    double F = free_energy(cur, nu, ref, mode, config, params);
    double step = mixing;

    int it = 0;
    double residual = 0.0;
    for (; it < max_iter; ++it) {
        const MatC D = mean_field_operator(cur, nu, ref, mode, config, params);
        const MatC target = fermi_map(D, params.beta);
        residual = (cur.gamma - target).norm();
        out.history.push_back({it, F, residual, step});
        if (residual < tol) break;

        if (mode == ScfMode::reduced) {
            // backtracking keeps the convex functional non-increasing
            bool accepted = false;
            for (int bt = 0; bt < 25; ++bt) {
                BoxState trial;
                trial.gamma = (1.0 - step) * cur.gamma + step * target;
                const double Ft = free_energy(trial, nu, ref, mode, config, params);
                if (Ft <= F + 1e-10) {
                    cur = std::move(trial);
                    F = Ft;
                    accepted = true;
                    step = std::min(step * 1.3, mixing);
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) {
                out.descent_ok = false;
                break;
            }
        } else {
            cur.gamma = (1.0 - step) * cur.gamma + step * target;
            F = free_energy(cur, nu, ref, mode, config, params);
        }
    }

    out.state = cur;
    out.iterations = it;
    out.residual = residual;
    out.converged = residual < tol;
    out.energy = free_energy(cur, nu, ref, mode, config, params);
    out.density = density_of(cur.gamma - ref.state.gamma, config);

    // coercivity: T H(gamma, ref) >= tr[|D_ref| Q^2]; |D_ref| is block diagonal
    // with blocks ||D_ref(p)|| I_4
    const MatC Q = cur.gamma - ref.state.gamma;
    double quad = 0.0;
    for (int i = 0; i < config.M; ++i) {
        double row = 0.0;
        for (int a = 0; a < 4; ++a)
            row += Q.row(4 * i + a).squaredNorm();
        quad += ref.block_norm[i] * row;
    }
    out.coercivity_margin =
        temperature(params) * rel_entropy_log(cur.gamma, ref.state.gamma) - quad;

    if (mode == ScfMode::full) {
        const UniquenessCondition uc = uniqueness_condition(params, coulomb_energy(nu, nu, config));
        out.uniqueness_d = uc.d;
        out.uniqueness_ok = uc.satisfied;
        if (uc.satisfied) {
            const MatC D = mean_field_operator(cur, nu, ref, mode, config, params);
            MatC D0 = MatC::Zero(config.n, config.n);
            for (int i = 0; i < config.M; ++i)
                D0.block<4, 4>(4 * i, 4 * i) = dirac_symbol(config.momentum(i));
            const MatC gap = matrix_abs(D) - matrix_abs(D0) / uc.d;
            Eigen::SelfAdjointEigenSolver<MatC> es(gap);
            out.spectral_margin = es.eigenvalues().minCoeff();
        }
    }

    if (!out.converged && out.descent_ok)
        throw std::runtime_error("scf_solve: no convergence after max_iter");
    return out;
}

ChargeCheck charge_screening_check(const BoxScfResult& result, const BoxDensity& nu,
                                   const BoxConfig& config, int shells) {
    ChargeCheck cc;
    const double V = config.L * config.L * config.L;
    cc.box_charge = V * result.density.c[0].real();
    cc.external_charge = V * nu.c[0].real();
    cc.mismatch = std::abs(cc.box_charge - cc.external_charge) /
                  std::max(std::abs(cc.external_charge), 1e-300);

    // shell-averaged response ratios on the smallest |k| shells
    std::map<int, std::pair<double, int>> acc;  // |m|^2 -> (sum ratio, count)
    for (std::size_t t = 1; t < config.dvec.size(); ++t) {
        if (std::abs(nu.c[t]) < 1e-300) continue;
        const int m2 = config.dvec[t].squaredNorm();
        const double ratio = (result.density.c[t] / nu.c[t]).real();
        auto& a = acc[m2];
        a.first += ratio;
        a.second += 1;
    }
    int count = 0;
    for (const auto& [m2, a] : acc) {
        if (count++ >= shells) break;
        cc.shell_k.push_back(config.kfac * std::sqrt(static_cast<double>(m2)));
        cc.shell_ratio.push_back(a.first / a.second);
    }
    return cc;
}

} // namespace bdf
