#pragma once
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace bdf {

// Quadrature grid on [0, R]: composite Gauss-Legendre panels.
struct RadialGrid {
    std::vector<double> nodes;    // ascending, strictly inside (0, R)
    std::vector<double> weights;  // positive, sum to R
    double length = 0.0;          // R

    std::size_t size() const { return nodes.size(); }
    double integrate(std::span<const double> values) const;
};

// Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int order, std::vector<double>& x, std::vector<double>& w);

// Composite rule with `panels` equal panels of the given order on [0, R].
// Rejects R <= 0, panels < 1, order < 2.
RadialGrid make_radial_grid(double R, int panels, int order);

// Composite rule with explicit breakpoints (ascending, starting at 0).
RadialGrid make_radial_grid(std::span<const double> breakpoints, int order);

// Adaptive Gauss-Kronrod (G7,K15).  Returns the integral of f over [a,b];
// subdivides until the local error estimate is below
// abs_tol + rel_tol*|integral so far|.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-12, double abs_tol = 1e-14,
                          int max_depth = 48);

// Panels geometrically graded toward an endpoint singularity at `s`
// (one of the interval ends or interior).  Each panel is [lo,hi]; the sliver
// of relative width 2^-levels around an interior s is skipped (integrable
// singularities contribute O(eps log eps) there).
std::vector<std::pair<double, double>> graded_panels(double a, double b, double s,
                                                     int levels = 42);

// Integrate f over [a,b] with panels no wider than max_panel (oscillatory
// integrands: max_panel ~ pi/(4 freq)).
double integrate_oscillatory(const std::function<double(double)>& f, double a, double b,
                             double max_panel, int order = 8);

// Fixed-order Gauss-Legendre on [a,b].
double integrate_gl(const std::function<double(double)>& f, double a, double b, int order);

} // namespace bdf
