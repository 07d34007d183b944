#include "bdf/dirac.hpp"

#include <cmath>
#include <stdexcept>

namespace bdf {

void ModelParams::validate(bool interacting) const {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("ModelParams: beta must be finite and positive (T > 0)");
    if (!(lambda > 0.0)) throw std::invalid_argument("ModelParams: lambda must be positive");
    if (alpha < 0.0) throw std::invalid_argument("ModelParams: alpha must be nonnegative");
    if (interacting && !(alpha < 4.0 / M_PI))
        throw std::invalid_argument("ModelParams: alpha must be < 4/pi for interacting solvers");
}

const std::array<Mat4, 3>& dirac_alphas() {
    using namespace std::complex_literals;
    static const std::array<Mat4, 3> a = [] {
        std::array<Mat4, 3> m;
        Eigen::Matrix2cd s1, s2, s3, z = Eigen::Matrix2cd::Zero();
        s1 << 0, 1, 1, 0;
        s2 << 0, -1i, 1i, 0;
        s3 << 1, 0, 0, -1;
        const Eigen::Matrix2cd sig[3] = {s1, s2, s3};
        for (int i = 0; i < 3; ++i) {
            m[i].setZero();
            m[i].block<2, 2>(0, 2) = sig[i];
            m[i].block<2, 2>(2, 0) = sig[i];
        }
        return m;
    }();
    return a;
}

const Mat4& dirac_beta() {
    static const Mat4 b = [] {
        Mat4 m = Mat4::Zero();
        m(0, 0) = m(1, 1) = 1.0;
        m(2, 2) = m(3, 3) = -1.0;
        return m;
    }();
    return b;
}

Mat4 dirac_symbol(const Vec3& p) {
    const auto& a = dirac_alphas();
    return p[0] * a[0] + p[1] * a[1] + p[2] * a[2] + dirac_beta();
}

std::pair<Mat4, Mat4> spectral_projectors(const Vec3& p) {
    const double e = dirac_energy(p.norm());
    const Mat4 d = dirac_symbol(p) / e;
    const Mat4 id = Mat4::Identity();
    return {0.5 * (id + d), 0.5 * (id - d)};
}

double projector_overlap_trace(const Vec3& p, const Vec3& q, bool same_sign) {
    const double v = (p.dot(q) + 1.0) / (dirac_energy(p.norm()) * dirac_energy(q.norm()));
    return same_sign ? 1.0 + v : 1.0 - v;
}

} // namespace bdf
