#include "bdf/entropy.hpp"

#include "bdf/dirac.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace bdf;
using oracles::hermitian_with_spectrum;
using oracles::random_hermitian;

TEST_CASE("fermi map basics") {
    CHECK(fermi_map(MatX::Zero(3, 3), 1.0).norm() == 0.0);

    // single eigenvalue: both resolvent-exponential terms, summed directly
    MatX h(1, 1);
    h(0, 0) = 2.0;
    const double direct = 0.5 * (1.0 / (1.0 + std::exp(2.0)) - 1.0 / (1.0 + std::exp(-2.0)));
    CHECK(fermi_map(h, 1.0)(0, 0).real() == doctest::Approx(direct).epsilon(1e-15));
    CHECK(direct == doctest::Approx(-0.5 * std::tanh(1.0)).epsilon(1e-15));
    CHECK(fermi_scalar(2.0, 1.0) == doctest::Approx(-0.3807970779778824).epsilon(1e-12));
}

TEST_CASE("fermi map of the free Dirac symbol hits the spectrum endpoints") {
    const Vec3 p(0, 0, 1.0);  // |p| = Lambda = 1
    const double e = dirac_energy(1.0);
    const MatX g = fermi_map(dirac_symbol(p), 1.0);
    Eigen::SelfAdjointEigenSolver<MatX> es(g);
    const double endpoint = 0.5 - std::exp(-e) / (1.0 + std::exp(-e));
    CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(endpoint).epsilon(1e-14));
    CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(0.5 * std::tanh(0.5 * e)).epsilon(1e-14));
    // commutes with its generator
    const MatX d = dirac_symbol(p);
    CHECK((g * d - d * g).norm() <= 1e-14);
}

TEST_CASE("fermi map is odd and decreasing with range inside (-1/2,1/2)") {
    Rng rng(21);
    for (int t = 0; t < 200; ++t) {
        const double beta = rng.uniform(0.2, 5.0);
        const double h1 = rng.uniform(-10, 10), h2 = rng.uniform(-10, 10);
        CHECK(std::abs(fermi_scalar(h1, beta)) < 0.5);
        CHECK(fermi_scalar(h1, beta) == doctest::Approx(-fermi_scalar(-h1, beta)).epsilon(1e-15));
        if (h1 != h2)
            CHECK((fermi_scalar(h1, beta) - fermi_scalar(h2, beta)) * (h1 - h2) <= 0.0);
    }
}

TEST_CASE("entropy closed forms") {
    CHECK(entropy(MatX::Zero(4, 4)) == doctest::Approx(4.0 * std::log(2.0)).epsilon(1e-14));

    Rng rng(22);
    const MatX pure = hermitian_with_spectrum(rng, {0.5, -0.5});
    CHECK(entropy(pure) == doctest::Approx(0.0).epsilon(1e-12));

    const MatX quarter = hermitian_with_spectrum(rng, {0.25, -0.25});
    const double expected = -2.0 * (0.75 * std::log(0.75) + 0.25 * std::log(0.25));
    CHECK(entropy(quarter) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(expected == doctest::Approx(1.1246).epsilon(1e-4));

    CHECK_THROWS_AS(entropy(hermitian_with_spectrum(rng, {0.6, 0.0})), std::domain_error);
    // within-tolerance clamping
    CHECK(entropy(hermitian_with_spectrum(rng, {0.5 + 1e-13, -0.5})) ==
          doctest::Approx(0.0).epsilon(1e-11));
}

TEST_CASE("entropy bounds 0 <= S <= n ln 2") {
    Rng rng(23);
    for (int t = 0; t < 40; ++t) {
        const int n = 2 + static_cast<int>(rng.below(6));
        const MatX g = fermi_map(random_hermitian(rng, n, rng.uniform(0.1, 3.0)), 1.0);
        const double s = entropy(g);
        CHECK(s >= -1e-12);
        CHECK(s <= n * std::log(2.0) + 1e-12);
    }
}

TEST_CASE("relative entropy log form on commuting pairs") {
    Rng rng(24);
    const MatX a = hermitian_with_spectrum(rng, {0.1});
    const MatX b = hermitian_with_spectrum(rng, {-0.1});
    const double expect = 0.6 * std::log(0.6 / 0.4) + 0.4 * std::log(0.4 / 0.6);
    CHECK(rel_entropy_log(a, b) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(expect == doctest::Approx(0.081093).epsilon(1e-4));
    CHECK(rel_entropy_log(a, a) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("relative entropy rejects a boundary reference") {
    Rng rng(25);
    const MatX g = hermitian_with_spectrum(rng, {0.1, -0.2});
    const MatX bad = hermitian_with_spectrum(rng, {0.5, 0.0});
    CHECK_THROWS_AS(rel_entropy_log(g, bad), std::domain_error);
    CHECK_THROWS_AS(rel_entropy_int(g, bad), std::domain_error);
}

TEST_CASE("log and integral representations coincide") {
    Rng rng(26);
    double worst = 0.0;
    for (int t = 0; t < 40; ++t) {
        const int n = 2 + static_cast<int>(rng.below(7));
        const MatX g0 = fermi_map(random_hermitian(rng, n, rng.uniform(0.3, 1.5)), 1.0);
        const MatX g = fermi_map(random_hermitian(rng, n, rng.uniform(0.3, 2.0)),
                                 rng.uniform(0.5, 2.0));
        const double hl = rel_entropy_log(g, g0);
        const double hi = rel_entropy_int(g, g0);
        worst = std::max(worst, std::abs(hl - hi) / (1.0 + std::abs(hl)));
        CHECK(hl >= -1e-12);
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("integral form handles a state saturating the constraint") {
    Rng rng(27);
    std::vector<double> eigs = {0.5, 0.2, -0.3};
    const MatX g = hermitian_with_spectrum(rng, eigs);
    const MatX g0 = hermitian_with_spectrum(rng, {0.1, -0.1, 0.25});
    const double hl = rel_entropy_log(g, g0);   // x ln x -> 0 at the boundary
    const double hi = rel_entropy_int(g, g0);
    CHECK(std::isfinite(hi));
    CHECK(hi == doctest::Approx(hl).epsilon(1e-8));
    CHECK(rel_entropy_int(g0, g0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("scalar C values") {
    CHECK(scalar_c(1e-12) == doctest::Approx(2.0).epsilon(1e-12));
    const double y = fermi_scalar(2.0, 1.0);  // h = 2
    CHECK(scalar_c(y) == doctest::Approx(2.0 / std::tanh(1.0)).epsilon(1e-13));
    CHECK(2.0 / std::tanh(1.0) == doctest::Approx(2.626).epsilon(1e-3));
    CHECK(scalar_c(0.49) == doctest::Approx(std::log(99.0) / 0.98).epsilon(1e-13));
    CHECK_THROWS_AS(scalar_c(0.5), std::domain_error);
    CHECK_THROWS_AS(scalar_c(-0.7), std::domain_error);
}

TEST_CASE("klein margin pair") {
    Rng rng(28);
    SUBCASE("at the reference the pair vanishes") {
        const MatX H0 = random_hermitian(rng, 4);
        const MatX g0 = fermi_map(H0, 1.0);
        const auto [lhs, rhs] = klein_margin(g0, H0, 1.0);
        CHECK(lhs == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(rhs == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("scalar case h = 2, beta = 1, gamma = 0") {
        MatX H0(1, 1), g(1, 1);
        H0(0, 0) = 2.0;
        g(0, 0) = 0.0;
        const auto [lhs, rhs] = klein_margin(g, H0, 1.0);
        const double y = fermi_scalar(2.0, 1.0);
        CHECK(lhs == doctest::Approx(oracles::scalar_pair_entropy(0.0, y)).epsilon(1e-13));
        CHECK(rhs == doctest::Approx(2.0 * y * y).epsilon(1e-13));
        CHECK(lhs > rhs);  // strict
    }
    SUBCASE("randomized instances keep the margin nonnegative") {
        double worst = 1e300;
        for (int t = 0; t < 200; ++t) {
            const int n = 1 + static_cast<int>(rng.below(10));
            const MatX H0 = random_hermitian(rng, n, rng.uniform(0.2, 2.5));
            const double beta = rng.uniform(0.1, 4.0);
            const MatX g = fermi_map(random_hermitian(rng, n, rng.uniform(0.2, 2.0)),
                                     rng.uniform(0.3, 3.0));
            const auto [lhs, rhs] = klein_margin(g, H0, beta);
            worst = std::min(worst, lhs - rhs);
        }
        CHECK(worst >= -1e-12);
    }
}

TEST_CASE("entropy expansion identity") {
    Rng rng(29);
    SUBCASE("degenerate cases") {
        const MatX g0 = fermi_map(random_hermitian(rng, 5), 1.0);
        const MatX g = fermi_map(random_hermitian(rng, 5), 1.2);
        CHECK(entropy_expansion_residual(g, g, g0) <= 1e-12);
        CHECK(entropy_expansion_residual(g0, g, g0) <= 1e-10);
    }
    SUBCASE("random triples") {
        for (int t = 0; t < 30; ++t) {
            const int n = 6;
            const MatX g0 = fermi_map(random_hermitian(rng, n), 1.0);
            const MatX g = fermi_map(random_hermitian(rng, n), 1.3);
            const MatX gp = fermi_map(random_hermitian(rng, n), 0.7);
            CHECK(entropy_expansion_residual(gp, g, g0) <= 1e-9);
        }
    }
}

TEST_CASE("relative entropy is convex in its first argument") {
    Rng rng(30);
    for (int t = 0; t < 30; ++t) {
        const int n = 2 + static_cast<int>(rng.below(6));
        const MatX g0 = fermi_map(random_hermitian(rng, n), 1.0);
        const MatX g1 = fermi_map(random_hermitian(rng, n), 0.8);
        const MatX g2 = fermi_map(random_hermitian(rng, n), 1.5);
        const double h1 = rel_entropy_log(g1, g0), h2 = rel_entropy_log(g2, g0);
        for (double s : {0.25, 0.5, 0.75}) {
            const MatX gm = s * g1 + (1.0 - s) * g2;
            CHECK(rel_entropy_log(gm, g0) <= s * h1 + (1.0 - s) * h2 + 1e-10);
        }
    }
}

TEST_CASE("relative entropy is continuous along a Frobenius-convergent sequence") {
    Rng rng(31);
    const MatX g0 = fermi_map(random_hermitian(rng, 6), 1.0);
    const MatX g = fermi_map(random_hermitian(rng, 6), 1.4);
    const MatX dir = random_hermitian(rng, 6, 0.05);
    const double h = rel_entropy_log(g, g0);
    double prev_gap = 1e300;
    for (double eps : {1.0, 0.25, 0.05, 0.01}) {
        const MatX gk = fermi_map(random_hermitian(rng, 6, 0.0) + g * 0.0, 1.0) * 0.0 +
                        (g + eps * dir);
        const double gap = std::abs(rel_entropy_log(gk, g0) - h);
        CHECK(gap <= prev_gap + 1e-9);
        prev_gap = gap;
    }
    CHECK(prev_gap <= 0.05);
}
