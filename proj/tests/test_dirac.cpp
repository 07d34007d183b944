#include "bdf/dirac.hpp"

#include "oracles.hpp"

#include <doctest.h>
#include <Eigen/Dense>

using namespace bdf;

namespace {

Eigen::Vector4d sorted_eigs(const Mat4& m) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(m);
    return es.eigenvalues();
}

} // namespace

TEST_CASE("dirac generators anticommute exactly") {
    const auto& a = dirac_alphas();
    const Mat4& b = dirac_beta();
    const Mat4 id = Mat4::Identity();
    for (int i = 0; i < 3; ++i) {
        CHECK((a[i] * b + b * a[i]).norm() == 0.0);
        for (int j = 0; j < 3; ++j) {
            const Mat4 anti = a[i] * a[j] + a[j] * a[i];
            if (i == j)
                CHECK((anti - 2.0 * id).norm() == 0.0);
            else
                CHECK(anti.norm() == 0.0);
        }
    }
    CHECK((b * b - id).norm() == 0.0);
}

TEST_CASE("dirac symbol at rest is the mass matrix") {
    const Mat4 d = dirac_symbol(Vec3::Zero());
    CHECK((d - dirac_beta()).norm() == 0.0);
    const Eigen::Vector4d ev = sorted_eigs(d);
    CHECK(ev[0] == doctest::Approx(-1.0));
    CHECK(ev[1] == doctest::Approx(-1.0));
    CHECK(ev[2] == doctest::Approx(1.0));
    CHECK(ev[3] == doctest::Approx(1.0));
}

TEST_CASE("dirac symbol eigenvalues are +-E(p) twice") {
    for (const Vec3& p : {Vec3(1, 0, 0), Vec3(0.3, -0.4, 1.2)}) {
        const double e = dirac_energy(p.norm());
        const Eigen::Vector4d ev = sorted_eigs(dirac_symbol(p));
        CHECK(ev[0] == doctest::Approx(-e).epsilon(1e-14));
        CHECK(ev[1] == doctest::Approx(-e).epsilon(1e-14));
        CHECK(ev[2] == doctest::Approx(e).epsilon(1e-14));
        CHECK(ev[3] == doctest::Approx(e).epsilon(1e-14));
    }
    CHECK(dirac_energy(1.0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(dirac_energy(std::sqrt(1.69)) == doctest::Approx(std::sqrt(2.69)));
}

TEST_CASE("dirac symbol squares to E^2") {
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        const Vec3 p(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
        const Mat4 d = dirac_symbol(p);
        const double e2 = 1.0 + p.squaredNorm();
        CHECK((d * d - e2 * Mat4::Identity()).norm() <= 1e-13 * e2);
    }
}

TEST_CASE("spectral projectors are orthogonal idempotents summing to one") {
    Rng rng(12);
    for (int t = 0; t < 25; ++t) {
        const Vec3 p(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
        const auto [pp, pm] = spectral_projectors(p);
        CHECK((pp * pp - pp).norm() <= 1e-13);
        CHECK((pm * pm - pm).norm() <= 1e-13);
        CHECK((pp + pm - Mat4::Identity()).norm() <= 1e-13);
        CHECK((pp * pm).norm() <= 1e-13);
        CHECK((pp - pp.adjoint()).norm() <= 1e-13);
        // spectral property D P+- = +-E P+-
        const Mat4 d = dirac_symbol(p);
        const double e = dirac_energy(p.norm());
        CHECK((d * pp - e * pp).norm() <= 1e-12 * e);
        CHECK((d * pm + e * pm).norm() <= 1e-12 * e);
    }
}

TEST_CASE("projector at rest has rank two") {
    const auto [pp, pm] = spectral_projectors(Vec3::Zero());
    CHECK((pp - 0.5 * (Mat4::Identity() + dirac_beta())).norm() <= 1e-15);
    CHECK(pp.trace().real() == doctest::Approx(2.0));
    CHECK(pm.trace().real() == doctest::Approx(2.0));
}

TEST_CASE("projector traces against the free Dirac operator") {
    const Vec3 p(1, 0, 0);
    const auto [pp, pm] = spectral_projectors(p);
    CHECK((pp * dirac_symbol(p)).trace().real() ==
          doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("projector overlap traces match the explicit matrix product") {
    SUBCASE("coincident momenta") {
        const Vec3 p(0.4, 0.1, -0.7);
        CHECK(projector_overlap_trace(p, p, true) == doctest::Approx(2.0));
        CHECK(projector_overlap_trace(p, p, false) == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("antipodal unit momenta") {
        CHECK(projector_overlap_trace(Vec3(1, 0, 0), Vec3(-1, 0, 0), true) ==
              doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("random pairs vs 4x4 products") {
        Rng rng(13);
        for (int t = 0; t < 50; ++t) {
            const Vec3 p(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
            const Vec3 q(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
            const auto [pp, pm] = spectral_projectors(p);
            const auto [qp, qm] = spectral_projectors(q);
            const double same = (pp * qp).trace().real();
            const double opp = (pp * qm).trace().real();
            CHECK(projector_overlap_trace(p, q, true) == doctest::Approx(same).epsilon(1e-12));
            CHECK(projector_overlap_trace(p, q, false) == doctest::Approx(opp).epsilon(1e-12));
            // symmetry and completeness
            CHECK(projector_overlap_trace(q, p, true) ==
                  doctest::Approx(projector_overlap_trace(p, q, true)).epsilon(1e-14));
            CHECK(projector_overlap_trace(p, q, true) + projector_overlap_trace(p, q, false) ==
                  doctest::Approx(2.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("computed scalars are representation independent") {
    // conjugate the generators by a fixed unitary and rebuild the projector
    // overlap trace from scratch
    Rng rng(14);
    const bdf::MatX G = oracles::random_hermitian(rng, 4);
    Eigen::SelfAdjointEigenSolver<bdf::MatX> es(G);
    const Mat4 U = es.eigenvectors();

    auto primed_symbol = [&](const Vec3& p) -> Mat4 {
        return U * dirac_symbol(p) * U.adjoint();
    };
    for (int t = 0; t < 10; ++t) {
        const Vec3 p(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
        const Vec3 q(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
        const double ep = dirac_energy(p.norm()), eq = dirac_energy(q.norm());
        const Mat4 pp = 0.5 * (Mat4::Identity() + primed_symbol(p) / ep);
        const Mat4 qp = 0.5 * (Mat4::Identity() + primed_symbol(q) / eq);
        CHECK((pp * qp).trace().real() ==
              doctest::Approx(projector_overlap_trace(p, q, true)).epsilon(1e-12));
        CHECK(sorted_eigs(primed_symbol(p))[3] == doctest::Approx(ep).epsilon(1e-13));
    }
}

TEST_CASE("model parameter validation") {
    ModelParams p;
    p.alpha = 0.5;
    p.beta = 1.0;
    p.lambda = 1.0;
    CHECK_NOTHROW(p.validate(true));
    p.beta = 0.0;
    CHECK_THROWS_AS(p.validate(false), std::invalid_argument);
    p.beta = 1.0;
    p.lambda = -1.0;
    CHECK_THROWS_AS(p.validate(false), std::invalid_argument);
    p.lambda = 1.0;
    p.alpha = 1.3;  // > 4/pi
    CHECK_NOTHROW(p.validate(false));
    CHECK_THROWS_AS(p.validate(true), std::invalid_argument);
}
