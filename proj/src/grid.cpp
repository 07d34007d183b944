#include "bdf/grid.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace bdf {

double RadialGrid::integrate(std::span<const double> values) const {
    if (values.size() != weights.size())
        throw std::invalid_argument("RadialGrid::integrate: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * values[i];
    return s;
}

void gauss_legendre(int order, std::vector<double>& x, std::vector<double>& w) {
    if (order < 1) throw std::invalid_argument("gauss_legendre: order < 1");

    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    static std::mutex mtx;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(order);
        if (it != cache.end()) {
            x = it->second.first;
            w = it->second.second;
            return;
        }
    }

    // Newton iteration on Legendre polynomials (standard gauleg).
    const int n = order;
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-16) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }

    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(order, std::make_pair(x, w));
}

RadialGrid make_radial_grid(double R, int panels, int order) {
    if (!(R > 0.0)) throw std::invalid_argument("make_radial_grid: R must be positive");
    if (panels < 1 || order < 2) throw std::invalid_argument("make_radial_grid: panels >= 1, order >= 2");
    std::vector<double> bps(panels + 1);
    for (int i = 0; i <= panels; ++i) bps[i] = R * i / panels;
    return make_radial_grid(bps, order);
}

RadialGrid make_radial_grid(std::span<const double> breakpoints, int order) {
    if (breakpoints.size() < 2) throw std::invalid_argument("make_radial_grid: need >= 2 breakpoints");
    std::vector<double> xg, wg;
    gauss_legendre(order, xg, wg);
    RadialGrid g;
    g.length = breakpoints.back();
    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
        const double a = breakpoints[k], b = breakpoints[k + 1];
        if (!(b > a)) throw std::invalid_argument("make_radial_grid: breakpoints not ascending");
        for (std::size_t i = 0; i < xg.size(); ++i) {
            g.nodes.push_back(0.5 * (b - a) * (xg[i] + 1.0) + a);
            g.weights.push_back(0.5 * (b - a) * wg[i]);
        }
    }
    return g;
}

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1,1] (positive half; symmetric).
constexpr double kKronrodX[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kKronrodW[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kGaussW[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct GkResult {
    double integral;
    double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fk[15];
    for (int i = 0; i < 7; ++i) {
        fk[i] = f(c - h * kKronrodX[i]);
        fk[14 - i] = f(c + h * kKronrodX[i]);
    }
    fk[7] = f(c);
    double resk = 0.0;
    for (int i = 0; i < 7; ++i) resk += kKronrodW[i] * (fk[i] + fk[14 - i]);
    resk += kKronrodW[7] * fk[7];
    // embedded G7 uses the odd Kronrod nodes
    double resg = kGaussW[3] * fk[7];
    for (int i = 0; i < 3; ++i) resg += kGaussW[i] * (fk[2 * i + 1] + fk[13 - 2 * i]);
    return {resk * h, std::abs(resk - resg) * h};
}

double adaptive_impl(const std::function<double(double)>& f, double a, double b,
                     double rel_tol, double abs_tol, int depth) {
    const GkResult r = gk15(f, a, b);
    if (depth <= 0 || r.error <= abs_tol + rel_tol * std::abs(r.integral)) return r.integral;
    const double c = 0.5 * (a + b);
    return adaptive_impl(f, a, c, rel_tol, 0.5 * abs_tol, depth - 1) +
           adaptive_impl(f, c, b, rel_tol, 0.5 * abs_tol, depth - 1);
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    return adaptive_impl(f, a, b, rel_tol, abs_tol, max_depth);
}

std::vector<std::pair<double, double>> graded_panels(double a, double b, double s, int levels) {
    std::vector<std::pair<double, double>> segs;
    auto one_side = [&](double lo, double hi, bool sing_hi) {
        const double len = hi - lo;
        if (!(len > 0.0)) return;
        std::vector<double> pts;
        pts.reserve(levels + 1);
        if (sing_hi) {
            pts.push_back(lo);
            for (int j = 1; j <= levels; ++j) pts.push_back(hi - len * std::ldexp(1.0, -j));
        } else {
            for (int j = levels; j >= 1; --j) pts.push_back(lo + len * std::ldexp(1.0, -j));
            pts.push_back(hi);
        }
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            if (pts[i + 1] > pts[i]) segs.emplace_back(pts[i], pts[i + 1]);
    };
    if (s <= a) {
        one_side(a, b, false);
    } else if (s >= b) {
        one_side(a, b, true);
    } else {
        one_side(a, s, true);
        one_side(s, b, false);
    }
    return segs;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int order) {
    std::vector<double> xg, wg;
    gauss_legendre(order, xg, wg);
    double s = 0.0;
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (std::size_t i = 0; i < xg.size(); ++i) s += wg[i] * f(c + h * xg[i]);
    return s * h;
}

double integrate_oscillatory(const std::function<double(double)>& f, double a, double b,
                             double max_panel, int order) {
    if (!(b > a)) return 0.0;
    int npanels = static_cast<int>(std::ceil((b - a) / std::max(max_panel, 1e-12)));
    npanels = std::max(npanels, 1);
    std::vector<double> xg, wg;
    gauss_legendre(order, xg, wg);
    double s = 0.0;
    const double h = (b - a) / npanels;
    for (int p = 0; p < npanels; ++p) {
        const double lo = a + p * h, c = lo + 0.5 * h;
        for (std::size_t i = 0; i < xg.size(); ++i) s += wg[i] * f(c + 0.5 * h * xg[i]);
    }
    return s * 0.5 * h;
}

} // namespace bdf
