// Command-line driver: free-vacuum, response, screen, box, check.
// Exit codes: 0 ok, 2 validation, 3 non-convergence, 4 invariant failure.
#include "bdf/box.hpp"
#include "bdf/entropy.hpp"
#include "bdf/io.hpp"
#include "bdf/response.hpp"
#include "bdf/rng.hpp"
#include "bdf/vacuum.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    int threads = 1;
};

bdf::RunConfig load_config(const CliOptions& opt, const std::string& command) {
    bdf::RunConfig cfg = opt.config_path.empty() ? bdf::RunConfig()
                                                 : bdf::RunConfig::from_file(opt.config_path);
    cfg.set("command", command);
    cfg.set("seed", std::to_string(opt.seed));
    cfg.set("threads", std::to_string(opt.threads));
    return cfg;
}

bdf::ModelParams params_from(const bdf::RunConfig& cfg) {
    bdf::ModelParams p;
    p.alpha = cfg.get_double("alpha", 0.5);
    p.beta = cfg.get_double("beta", 1.0);
    p.lambda = cfg.get_double("lambda", 1.0);
    return p;
}

int cmd_free_vacuum(const CliOptions& opt) {
    bdf::RunConfig cfg = load_config(opt, "free-vacuum");
    const bdf::ModelParams params = params_from(cfg);
    params.validate(true);
    const double mixing = cfg.get_double("mixing", 0.5);
    const double tol = cfg.get_double("tol", 1e-10);
    const int max_iter = cfg.get_int("max_iter", 500);
    const int order = cfg.get_int("grid_order", 32);

    const bdf::RadialGrid grid = bdf::vacuum_grid(params.lambda, order);
    bdf::VacuumSolution sol;
    bool converged = true;
    try {
        sol = bdf::solve_interacting_vacuum(params, mixing, tol, max_iter, &grid);
    } catch (const std::runtime_error& e) {
        converged = false;
        std::cerr << "free-vacuum: " << e.what() << "\n";
    }

    const fs::path dir(opt.out_dir);
    if (converged) {
        bdf::CsvWriter csv(dir / "vacuum_profiles.csv", cfg, {"r", "f0", "f1", "d0", "d1"});
        for (std::size_t i = 0; i < sol.gamma.grid.size(); ++i)
            csv.row({sol.gamma.grid.nodes[i], sol.gamma.f0[i], sol.gamma.f1[i],
                     sol.dirac.d0[i], sol.dirac.d1[i]});
    }
    ordered_json diag;
    diag["converged"] = converged;
    if (converged) {
        diag["energy"] = sol.energy;
        diag["iterations"] = sol.iterations;
        diag["residual"] = sol.residual;
        diag["eps_f"] = sol.eps_f;
        diag["min_d"] = sol.min_d;
        diag["min_gamma_norm"] = sol.min_gamma_norm;
        diag["max_gamma_norm"] = sol.max_gamma_norm;
        diag["min_dirac_gap"] = sol.min_dirac_gap;
        const double lower =
            0.5 * std::tanh(0.5 * params.beta);  // (e^{beta}-1)/(2(1+e^{beta}))
        diag["gamma_norm_lower_bound"] = lower;
        const bool post = sol.eps_f > 0.0 && sol.min_d >= 1.0 - 1e-12 &&
                          sol.min_dirac_gap >= -1e-12 && sol.min_gamma_norm >= lower - 1e-12;
        diag["postconditions_ok"] = post;
        bdf::write_json(dir / "vacuum_diagnostics.json", cfg, diag);
        if (!post) return 4;
        return 0;
    }
    bdf::write_json(dir / "vacuum_diagnostics.json", cfg, diag);
    return 3;
}

int cmd_response(const CliOptions& opt) {
    bdf::RunConfig cfg = load_config(opt, "response");
    const bdf::ModelParams params = params_from(cfg);
    params.validate(false);
    const int nk = cfg.get_int("nk", 161);
    const int order = cfg.get_int("order", 64);
    const int ncross = cfg.get_int("cross_points", 20);

    const bdf::ResponseKernel table = bdf::build_response_kernel(params, nk, order);
    bdf::ModelParams alpha_params = params;
    if (alpha_params.alpha <= 0.0) alpha_params.alpha = 0.3;
    const bdf::ScreeningKernels kern = bdf::build_screening_kernels(alpha_params, table);

    const fs::path dir(opt.out_dir);
    {
        bdf::CsvWriter csv(dir / "response_kernel.csv", cfg,
                           {"k", "C1", "C2", "C", "b1hat", "b2hat"});
        for (std::size_t i = 0; i < table.k.size(); ++i)
            csv.row({table.k[i], table.c1[i], table.c2[i], table.c[i],
                     kern.b1hat.values()[i], kern.b2hat.values()[i]});
    }

    // cross-formula agreement on interior points, direct route vs reduced
    std::vector<double> ks(ncross), rel(ncross);
    for (int i = 0; i < ncross; ++i)
        ks[i] = 2.0 * params.lambda * (0.05 + 0.90 * i / std::max(ncross - 1, 1));
    std::vector<double> direct(ncross);
    bdf::parallel_for(ncross, opt.threads, [&](std::size_t i) {
        direct[i] = bdf::response_direct(ks[i], params);
    });
    double worst = 0.0;
    {
        bdf::CsvWriter csv(dir / "response_cross_check.csv", cfg,
                           {"k", "direct", "reduced", "rel_err"});
        for (int i = 0; i < ncross; ++i) {
            const auto [c1, c2] = bdf::response_reduced(ks[i], params, order);
            rel[i] = std::abs(direct[i] - (c1 + c2)) / std::abs(c1 + c2);
            worst = std::max(worst, rel[i]);
            csv.row({ks[i], direct[i], c1 + c2, rel[i]});
        }
    }
    ordered_json diag;
    diag["worst_cross_rel_err"] = worst;
    diag["c1_at_zero"] = bdf::c1_at_zero(params);
    diag["c_2lambda"] = table.c.back();
    bdf::write_json(dir / "response_diagnostics.json", cfg, diag);
    return worst < cfg.get_double("cross_tol", 1e-6) ? 0 : 4;
}

int cmd_screen(const CliOptions& opt) {
    bdf::RunConfig cfg = load_config(opt, "screen");
    const bdf::ModelParams params = params_from(cfg);
    params.validate(true);
    if (!(params.alpha > 0.0)) throw std::invalid_argument("screen: alpha must be > 0");

    bdf::ChargeDensitySpec nu;
    const std::string kind = cfg.get_string("nu_kind", "gaussian");
    nu.kind = kind == "gaussian" ? bdf::ChargeDensitySpec::Kind::gaussian
                                 : bdf::ChargeDensitySpec::Kind::point_regularized;
    nu.Z = cfg.get_double("nu_Z", 1.0);
    nu.sigma = cfg.get_double("nu_sigma", 1.0);

    const bdf::ResponseKernel table =
        bdf::build_response_kernel(params, cfg.get_int("nk", 161), cfg.get_int("order", 64));
    const bdf::ScreeningKernels kern = bdf::build_screening_kernels(params, table);
    const bdf::ScreeningResult res = bdf::linear_screen(nu, params, kern);
    const bdf::DebyeReport rep = bdf::debye_report(res, cfg.get_int("nx", 64));

    const fs::path dir(opt.out_dir);
    {
        bdf::CsvWriter csv(dir / "screening.csv", cfg, {"x", "rho_tot", "V", "xV"});
        for (std::size_t i = 0; i < rep.x.size(); ++i)
            csv.row({rep.x[i], rep.rho_tot[i], rep.v[i], rep.x[i] * rep.v[i]});
    }
    ordered_json diag;
    diag["sum_rule_ratio"] = res.total_response_charge / res.external_charge;
    diag["response_charge_quadrature"] = rep.response_charge_quadrature;
    diag["external_charge"] = rep.external_charge;
    diag["xv_ratio_50_1"] = rep.xv_ratio_50_1;
    diag["decay_exponent"] = rep.decay_exponent;
    bdf::write_json(dir / "screening_diagnostics.json", cfg, diag);
    std::cout << "charge sum rule: response/external = "
              << bdf::format_full(res.total_response_charge / res.external_charge) << "\n";
    return 0;
}

int cmd_box(const CliOptions& opt) {
    bdf::RunConfig cfg = load_config(opt, "box");
    const bdf::ModelParams params = params_from(cfg);
    params.validate(true);
    const double L = cfg.get_double("L", 12.0);
    const std::string mode_s = cfg.get_string("mode", "reduced");
    const bdf::ScfMode mode = mode_s == "full" ? bdf::ScfMode::full : bdf::ScfMode::reduced;
    const double tol = cfg.get_double("tol", 1e-10);
    const double mixing = cfg.get_double("mixing", 0.0);
    const int max_iter = cfg.get_int("max_iter", 400);

    const bdf::BoxConfig box = bdf::BoxConfig::make(L, params.lambda, cfg.get_int("max_dim", 4096));
    const bdf::BoxDensity nu = cfg.get_double("nu_Z", 1.0) == 0.0
                                   ? bdf::zero_box_density(box)
                                   : bdf::gaussian_box_density(box, cfg.get_double("nu_Z", 1.0),
                                                               cfg.get_double("nu_sigma", 1.0));

    std::optional<bdf::VacuumSolution> vac;
    if (mode == bdf::ScfMode::full)
        vac = bdf::solve_interacting_vacuum(params, 0.5, cfg.get_double("vacuum_tol", 1e-11));

    bdf::BoxScfResult res;
    try {
        res = bdf::scf_solve(box, params, nu, mode, mixing, tol, max_iter, nullptr,
                             vac ? &*vac : nullptr);
    } catch (const std::runtime_error& e) {
        std::cerr << "box: " << e.what() << "\n";
        return 3;
    }

    const fs::path dir(opt.out_dir);
    {
        bdf::CsvWriter csv(dir / "box_iterations.csv", cfg,
                           {"iter", "free_energy", "residual", "mixing"});
        for (const auto& h : res.history)
            csv.row({static_cast<double>(h.iteration), h.energy, h.residual, h.mixing});
    }
    {
        const bdf::ChargeCheck cc = bdf::charge_screening_check(res, nu, box, 6);
        bdf::CsvWriter csv(dir / "box_shells.csv", cfg, {"k", "density_ratio"});
        for (std::size_t i = 0; i < cc.shell_k.size(); ++i)
            csv.row({cc.shell_k[i], cc.shell_ratio[i]});
    }
    ordered_json diag;
    diag["modes"] = box.M;
    diag["dimension"] = box.n;
    diag["iterations"] = res.iterations;
    diag["residual"] = res.residual;
    diag["free_energy"] = res.energy;
    diag["coercivity_margin"] = res.coercivity_margin;
    diag["descent_ok"] = res.descent_ok;
    diag["energy_lower_bound"] =
        -0.5 * params.alpha * bdf::coulomb_energy(nu, nu, box);
    bdf::write_json(dir / "box_diagnostics.json", cfg, diag);

    ordered_json uniq;
    const bdf::UniquenessCondition uc =
        bdf::uniqueness_condition(params, bdf::coulomb_energy(nu, nu, box));
    uniq["d"] = uc.d;
    uniq["satisfied"] = uc.satisfied;
    uniq["bracket"] = uc.bracket;
    if (mode == bdf::ScfMode::full) uniq["spectral_margin"] = res.spectral_margin;
    bdf::write_json(dir / "box_uniqueness.json", cfg, uniq);
    return res.converged ? 0 : 3;
}

// randomized invariant suites (seeded); exit 4 on any failure
int cmd_check(const CliOptions& opt, bool inject_klein_break) {
    bdf::RunConfig cfg = load_config(opt, "check");
    cfg.set("inject_klein_break", inject_klein_break ? "true" : "false");
    const int trials = cfg.get_int("trials", 100);
    bdf::Rng rng(opt.seed);

    ordered_json suites = ordered_json::array();
    bool all_ok = true;

    auto rand_herm = [&rng](int n, double scale) {
        bdf::MatX A(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                A(i, j) = std::complex<double>(rng.normal(), rng.normal());
        bdf::MatX H = 0.5 * (A + A.adjoint()) * scale;
        return H;
    };

    auto add_suite = [&](const std::string& name, double worst, double tol, bool pass) {
        ordered_json s;
        s["name"] = name;
        s["worst"] = worst;
        s["tolerance"] = tol;
        s["pass"] = pass;
        suites.push_back(s);
        all_ok = all_ok && pass;
    };

    {  // relative entropy representation equivalence
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            const int n = 2 + static_cast<int>(rng.below(11));
            const bdf::MatX g0 = bdf::fermi_map(rand_herm(n, rng.uniform(0.2, 1.5)), 1.0);
            const bdf::MatX g = bdf::fermi_map(rand_herm(n, rng.uniform(0.2, 2.0)),
                                               rng.uniform(0.5, 2.0));
            const double hl = bdf::rel_entropy_log(g, g0);
            const double hi = bdf::rel_entropy_int(g, g0);
            worst = std::max(worst, std::abs(hl - hi) / (1.0 + std::abs(hl)));
        }
        add_suite("entropy_representation_equivalence", worst, 1e-8, worst <= 1e-8);
    }
    {  // klein coercivity
        double worst_margin = 1e300;
        for (int t = 0; t < trials; ++t) {
            const int n = 1 + static_cast<int>(rng.below(10));
            const bdf::MatX H0 = rand_herm(n, rng.uniform(0.2, 2.0));
            const double beta = rng.uniform(0.25, 1.0);
            const bdf::MatX g = bdf::fermi_map(rand_herm(n, rng.uniform(0.2, 2.0)),
                                               rng.uniform(0.5, 2.0));
            auto [lhs, rhs] = bdf::klein_margin(g, H0, beta);
            if (inject_klein_break) rhs += 0.5;  // harness self-test
            worst_margin = std::min(worst_margin, lhs - rhs);
        }
        add_suite("klein_coercivity", worst_margin, -1e-12, worst_margin >= -1e-12);
    }
    {  // entropy expansion identity
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            const int n = 2 + static_cast<int>(rng.below(5));
            const bdf::MatX g0 = bdf::fermi_map(rand_herm(n, 1.0), 1.0);
            const bdf::MatX g = bdf::fermi_map(rand_herm(n, 1.0), 1.3);
            const bdf::MatX gp = bdf::fermi_map(rand_herm(n, 1.0), 0.7);
            worst = std::max(worst, bdf::entropy_expansion_residual(gp, g, g0));
        }
        add_suite("entropy_expansion_identity", worst, 1e-9, worst <= 1e-9);
    }
    {  // convexity of H(., g0)
        double worst = 0.0;
        for (int t = 0; t < trials / 2; ++t) {
            const int n = 2 + static_cast<int>(rng.below(5));
            const bdf::MatX g0 = bdf::fermi_map(rand_herm(n, 1.0), 1.0);
            const bdf::MatX g1 = bdf::fermi_map(rand_herm(n, 1.0), 0.8);
            const bdf::MatX g2 = bdf::fermi_map(rand_herm(n, 1.0), 1.4);
            const double h1 = bdf::rel_entropy_log(g1, g0), h2 = bdf::rel_entropy_log(g2, g0);
            for (double s : {0.25, 0.5, 0.75}) {
                const bdf::MatX gm = s * g1 + (1.0 - s) * g2;
                const double hm = bdf::rel_entropy_log(gm, g0);
                worst = std::max(worst, hm - (s * h1 + (1.0 - s) * h2));
            }
        }
        add_suite("entropy_convexity", worst, 1e-10, worst <= 1e-10);
    }
    {  // fermi map range and monotonicity
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            const double beta = rng.uniform(0.2, 5.0);
            const double h1 = rng.uniform(-8.0, 8.0), h2 = rng.uniform(-8.0, 8.0);
            const double g1 = bdf::fermi_scalar(h1, beta), g2 = bdf::fermi_scalar(h2, beta);
            if (std::abs(g1) >= 0.5) worst = std::max(worst, std::abs(g1) - 0.5 + 1e-15);
            if ((h1 - h2) * (g1 - g2) > 0.0) worst = std::max(worst, (h1 - h2) * (g1 - g2));
            worst = std::max(worst, std::abs(g1 + bdf::fermi_scalar(-h1, beta)));
        }
        add_suite("fermi_map_shape", worst, 1e-14, worst <= 1e-14);
    }
    {  // box gradient consistency, small box, both modes
        const bdf::BoxConfig box = bdf::BoxConfig::make(8.0, 1.0);
        bdf::ModelParams p;
        p.alpha = 0.3;
        p.beta = 1.0;
        p.lambda = 1.0;
        const bdf::BoxDensity nu = bdf::gaussian_box_density(box, 0.6, 1.0);
        const bdf::VacuumSolution vac = bdf::solve_interacting_vacuum(p);
        double worst = 0.0;
        for (const auto mode : {bdf::ScfMode::reduced, bdf::ScfMode::full}) {
            const bdf::BoxReference ref = bdf::build_reference(box, p, mode, &vac);
            bdf::BoxState st;
            st.gamma = bdf::fermi_map(rand_herm(box.n, 0.4) + ref.dirac, p.beta);
            bdf::MatX dg = rand_herm(box.n, 1.0);
            dg /= dg.norm();
            const bdf::MatX D = bdf::mean_field_operator(st, nu, ref, mode, box, p);
            const bdf::MatX G = D + (1.0 / p.beta) * bdf::log_ratio(st.gamma);
            const double analytic = (G * dg).trace().real();
            const double h = 1e-5;
            bdf::BoxState plus{st.gamma + h * dg}, minus{st.gamma - h * dg};
            const double fd = (bdf::free_energy(plus, nu, ref, mode, box, p) -
                               bdf::free_energy(minus, nu, ref, mode, box, p)) /
                              (2.0 * h);
            worst = std::max(worst, std::abs(fd - analytic) / std::abs(analytic));
        }
        add_suite("box_gradient_consistency", worst, 1e-5, worst <= 1e-5);
    }

    ordered_json report;
    report["seed"] = opt.seed;
    report["suites"] = suites;
    report["all_pass"] = all_ok;
    bdf::write_json(fs::path(opt.out_dir) / "check_report.json", cfg, report);
    std::cout << (all_ok ? "all property suites pass" : "PROPERTY SUITE FAILURE") << "\n";
    return all_ok ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"positive-temperature Dirac vacuum solvers"};
    app.require_subcommand(1);

    CliOptions opt;
    app.add_option("--config", opt.config_path, "run configuration file (key = value)");
    app.add_option("--out", opt.out_dir, "output directory");
    app.add_option("--seed", opt.seed, "random seed for property suites");
    app.add_option("--threads", opt.threads, "worker threads for independent samples");

    auto* fv = app.add_subcommand("free-vacuum", "solve the translation-invariant vacuum");
    auto* resp = app.add_subcommand("response", "tabulate the polarization kernel");
    auto* scr = app.add_subcommand("screen", "linearized Debye screening of an external charge");
    auto* box = app.add_subcommand("box", "finite-box nonlinear free-energy minimization");
    auto* chk = app.add_subcommand("check", "seeded randomized invariant suites");
    bool inject = false;
    chk->add_flag("--inject-klein-break", inject, "deliberately break a margin (harness self-test)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    try {
        if (fv->parsed()) return cmd_free_vacuum(opt);
        if (resp->parsed()) return cmd_response(opt);
        if (scr->parsed()) return cmd_screen(opt);
        if (box->parsed()) return cmd_box(opt);
        if (chk->parsed()) return cmd_check(opt, inject);
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        const std::string msg = e.what();
        return msg.find("convergence") != std::string::npos ? 3 : 4;
    }
    return 2;
}
