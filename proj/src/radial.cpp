#include "bdf/radial.hpp"

#include "bdf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bdf {

RadialProfile::RadialProfile(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
    if (nodes_.size() != values_.size() || nodes_.size() < 4)
        throw std::invalid_argument("RadialProfile: need >= 4 matching nodes/values");
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
        if (!(nodes_[i] < nodes_[i + 1]))
            throw std::invalid_argument("RadialProfile: nodes must be ascending");
    for (double v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("RadialProfile: non-finite value");
}

void RadialProfile::weight_row(double r, std::size_t& idx, double w[4]) const {
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
    std::ptrdiff_t i = it - nodes_.begin();
    i = std::clamp<std::ptrdiff_t>(i - 2, 0, static_cast<std::ptrdiff_t>(nodes_.size()) - 4);
    idx = static_cast<std::size_t>(i);
    for (int a = 0; a < 4; ++a) {
        w[a] = 1.0;
        for (int b = 0; b < 4; ++b)
            if (a != b) w[a] *= (r - nodes_[idx + b]) / (nodes_[idx + a] - nodes_[idx + b]);
    }
}

double RadialProfile::operator()(double r) const {
    if (r < 0.0 || r > nodes_.back() * (1.0 + 1e-14)) return 0.0;
    // extrapolate from the first panel below the first node (profiles start
    // strictly inside (0,R) on Gauss grids)
    std::size_t idx;
    double w[4];
    weight_row(r, idx, w);
    return w[0] * values_[idx] + w[1] * values_[idx + 1] + w[2] * values_[idx + 2] +
           w[3] * values_[idx + 3];
}

double ChargeDensitySpec::hat(double k) const {
    switch (kind) {
        case Kind::gaussian:
            return Z * kFourierPrefactor * std::exp(-0.5 * sigma * sigma * k * k);
        case Kind::point_regularized: {
            const double s = 1.0 + sigma * sigma * k * k;
            return Z * kFourierPrefactor / (s * s);
        }
        case Kind::tabulated:
            return table(k);
    }
    return 0.0;
}

double ChargeDensitySpec::position(double x) const {
    switch (kind) {
        case Kind::gaussian: {
            const double c = Z / std::pow(2.0 * M_PI * sigma * sigma, 1.5);
            return c * std::exp(-0.5 * x * x / (sigma * sigma));
        }
        case Kind::point_regularized:
            return Z / (8.0 * M_PI * sigma * sigma * sigma) * std::exp(-x / sigma);
        case Kind::tabulated:
            throw std::invalid_argument("ChargeDensitySpec: no closed position form for tables");
    }
    return 0.0;
}

double coulomb_pairing(const std::function<double(double)>& fhat,
                       const std::function<double(double)>& ghat,
                       double r0, double rel_tol) {
    auto prod = [&](double r) { return fhat(r) * ghat(r); };
    double total = 16.0 * M_PI * M_PI * integrate_adaptive(prod, 0.0, r0, 1e-12, 1e-15);
    // geometric tail blocks [r0 2^j, r0 2^{j+1}] until negligible
    double lo = r0;
    for (int j = 0; j < 60; ++j) {
        const double hi = 2.0 * lo;
        const double block = 16.0 * M_PI * M_PI * integrate_adaptive(prod, lo, hi, 1e-10, 1e-16);
        total += block;
        if (std::abs(block) < rel_tol * (std::abs(total) + 1e-300) || std::abs(block) < 1e-250) {
            return total;
        }
        lo = hi;
    }
    throw std::runtime_error("coulomb_pairing: tail did not converge (transform decays too slowly)");
}

double coulomb_pairing(const ChargeDensitySpec& f, const ChargeDensitySpec& g) {
    const double scale = std::max({1.0, 4.0 / f.sigma, 4.0 / g.sigma});
    return coulomb_pairing([&](double r) { return f.hat(r); },
                           [&](double r) { return g.hat(r); }, scale);
}

double radial_inverse_fourier(const RadialProfile& bhat, double x) {
    if (!(x > 0.0)) throw std::domain_error("radial_inverse_fourier: x must be > 0");
    const double R = bhat.rmax();
    const double panel = std::min(R / 4.0, M_PI / (4.0 * x));
    const double integral = integrate_oscillatory(
        [&](double r) { return r * bhat(r) * std::sin(r * x); }, 0.0, R, panel, 10);
    return integral / (std::sqrt(2.0 * M_PI) * x);
}

double radial_inverse_fourier_zero(const RadialProfile& bhat) {
    // limit x->0 of the inversion formula: (2pi)^{-1/2} int r^2 bhat(r) dr
    const double R = bhat.rmax();
    return integrate_adaptive([&](double r) { return r * r * bhat(r); }, 0.0, R) /
           std::sqrt(2.0 * M_PI);
}

double DecayCoefficients::envelope(double x) const {
    // sqrt(2pi) x^4 b(x) = -x^2 u(R)cos(Rx) + x u'(R)sin(Rx)
    //                      + u''(R)cos(Rx) - u''(0) - int u''' cos(rx) dr,
    // u = r bhat:  u(R) = R bhat(R),  u'(R) = bhat(R) + R bhat'(R),
    //              u''(R) = 2 bhat'(R) + R bhat''(R),  u''(0) = 2 bhat'(0).
    const double ax = std::abs(x);
    double e = std::abs(second_deriv_term) + 2.0 * std::abs(endpoint_deriv) +
               std::abs(zero_deriv_term) + third_l1;
    e += ax * ax * R * std::abs(endpoint_value);
    e += ax * (std::abs(endpoint_value) + R * std::abs(endpoint_deriv));
    return e / std::sqrt(2.0 * M_PI);
}

namespace {

// 4th-order first derivative on a uniform table, one-sided at the ends
std::vector<double> fd_derivative(const std::vector<double>& v, double h) {
    const std::size_t n = v.size();
    std::vector<double> d(n);
    auto at = [&](std::size_t i) { return v[i]; };
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= 2 && i + 2 < n) {
            d[i] = (-at(i + 2) + 8 * at(i + 1) - 8 * at(i - 1) + at(i - 2)) / (12 * h);
        } else if (i < 2) {
            d[i] = (-25 * at(i) + 48 * at(i + 1) - 36 * at(i + 2) + 16 * at(i + 3) -
                    3 * at(i + 4)) /
                   (12 * h);
        } else {
            d[i] = (25 * at(i) - 48 * at(i - 1) + 36 * at(i - 2) - 16 * at(i - 3) +
                    3 * at(i - 4)) /
                   (12 * h);
        }
    }
    return d;
}

} // namespace

DecayCoefficients decay_coefficient(const RadialProfile& bhat, int resample) {
    if (resample < 9) throw std::invalid_argument("decay_coefficient: resample too small");
    const double R = bhat.rmax();
    const double h = R / (resample - 1);

    auto tabulate = [&](int m) {
        const double hh = R / (m - 1);
        std::vector<double> t(m);
        for (int i = 0; i < m; ++i) t[i] = bhat(std::min(i * hh, R));
        return t;
    };

    const std::vector<double> b = tabulate(resample);
    const std::vector<double> db = fd_derivative(b, h);
    const std::vector<double> d2b = fd_derivative(db, h);

    // noise check: compare first derivative at half resolution
    {
        const int m2 = (resample - 1) / 2 + 1;
        const std::vector<double> bc = tabulate(m2);
        const std::vector<double> dc = fd_derivative(bc, R / (m2 - 1));
        const double scale = std::max(std::abs(db[0]), std::abs(db.back())) + 1e-12;
        if (std::abs(dc[0] - db[0]) > 0.5 * scale + 1e-8)
            throw std::runtime_error("decay_coefficient: derivative estimate noise-dominated");
    }

    // u = r*bhat; u''' tabulated by three first-derivative passes
    std::vector<double> u(resample);
    for (int i = 0; i < resample; ++i) u[i] = (i * h) * b[i];
    const std::vector<double> u1 = fd_derivative(u, h);
    const std::vector<double> u2 = fd_derivative(u1, h);
    const std::vector<double> u3 = fd_derivative(u2, h);

    DecayCoefficients out;
    out.R = R;
    out.endpoint_value = b.back();
    out.endpoint_deriv = db.back();
    out.second_deriv_term = R * d2b.back();  // R = 2*Lambda for kernel tables
    out.zero_deriv_term = 2.0 * db.front();
    std::vector<double> nodes(resample);
    for (int i = 0; i < resample; ++i) nodes[i] = i * h;
    out.third_derivative = RadialProfile(nodes, u3);
    double l1 = 0.0;
    for (int i = 0; i + 1 < resample; ++i) l1 += 0.5 * h * (std::abs(u3[i]) + std::abs(u3[i + 1]));
    out.third_l1 = l1;
    return out;
}

} // namespace bdf
