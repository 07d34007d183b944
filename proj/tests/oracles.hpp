// Test-only oracles, independent of the library implementation paths they check.
#pragma once
#include "bdf/dirac.hpp"
#include "bdf/entropy.hpp"
#include "bdf/rng.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

inline bdf::MatX random_hermitian(bdf::Rng& rng, int n, double scale = 1.0) {
    bdf::MatX A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = std::complex<double>(rng.normal(), rng.normal());
    return bdf::MatX(0.5 * scale * (A + A.adjoint()));
}

// Hermitian matrix with prescribed eigenvalues and a random eigenbasis.
inline bdf::MatX hermitian_with_spectrum(bdf::Rng& rng, const std::vector<double>& eigs) {
    const int n = static_cast<int>(eigs.size());
    const bdf::MatX A = random_hermitian(rng, n);
    Eigen::SelfAdjointEigenSolver<bdf::MatX> es(A);
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d[i] = eigs[i];
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

// trapezoid rule on a dense uniform grid (deliberately crude and independent)
inline double dense_trapezoid(const std::function<double(double)>& f, double a, double b, int n) {
    double s = 0.5 * (f(a) + f(b));
    const double h = (b - a) / n;
    for (int i = 1; i < n; ++i) s += f(a + i * h);
    return s * h;
}

// Richardson-extrapolated central difference
inline double central_diff(const std::function<double(double)>& f, double t0, double h) {
    const double d1 = (f(t0 + h) - f(t0 - h)) / (2.0 * h);
    const double d2 = (f(t0 + 0.5 * h) - f(t0 - 0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

// scalar relative entropy f(x,y)
inline double scalar_pair_entropy(double x, double y) {
    auto xlx = [](double t) { return t > 0.0 ? t * std::log(t) : 0.0; };
    return xlx(0.5 + x) + xlx(0.5 - x) - (0.5 + x) * std::log(0.5 + y) -
           (0.5 - x) * std::log(0.5 - y);
}

} // namespace oracles
