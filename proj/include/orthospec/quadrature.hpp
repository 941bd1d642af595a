#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "orthospec/vec.hpp"

namespace orthospec {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (cached; thread-safe to call before parallel regions).
const GaussLegendre& gauss_legendre(int n);

/// Integrates f over [a, b] with an n-point Gauss-Legendre rule.
template <typename F>
auto gl_integrate(F&& f, double a, double b, int n) {
    const GaussLegendre& gl = gauss_legendre(n);
    using R = decltype(f(a));
    R sum{};
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) sum += gl.weights[i] * f(mid + half * gl.nodes[i]);
    return half * sum;
}

/// Integrates f over [a, b] split into panels at the given interior breakpoints,
/// n-point Gauss-Legendre per panel.
template <typename F>
auto gl_integrate_panels(F&& f, const std::vector<double>& breaks, int n) {
    using R = decltype(f(breaks.front()));
    R sum{};
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        sum += gl_integrate(f, breaks[i], breaks[i + 1], n);
    return sum;
}

/// Quadrature on the unit sphere S^{d-1}, d = 2 or 3.
/// d=2: M equispaced angles, weight 2*pi/M each.
/// d=3: Gauss-Legendre in cos(colatitude) x equispaced longitude.
struct SphereQuadrature {
    int dim = 0;
    std::vector<Vec> nodes;
    std::vector<double> weights;
    // Grid structure (used for spectral analysis of sampled functions):
    // d=2: n_lon equispaced angles; d=3: n_colat Gauss-Legendre rings x n_lon.
    int n_colat = 0;
    int n_lon = 0;

    /// d=2 circle rule.
    static SphereQuadrature circle(int m);
    /// d=3 product rule with n_colat Gauss-Legendre rings and n_lon longitudes.
    static SphereQuadrature sphere(int n_colat, int n_lon);
    /// Default rule per dimension: 512 angles (d=2), 64 x 128 (d=3).
    static SphereQuadrature standard(int dim);

    std::size_t size() const { return nodes.size(); }

    /// Total weight = Vol(S^{d-1}).
    double total_weight() const {
        double s = 0;
        for (double w : weights) s += w;
        return s;
    }
};

/// Vol(S^{d-1}) = 2 pi^{d/2} / Gamma(d/2).
double sphere_volume(int d);

/// Vol of the unit ball in R^d = pi^{d/2} / Gamma(d/2 + 1).
double ball_volume(int d);

/// Orthonormal basis of the tangent plane at unit vector u (d-1 vectors).
std::vector<Vec> tangent_basis(const Vec& u);

/// Legendre polynomial values P_0..P_n at x (three-term recurrence).
void legendre_values(int n, double x, std::vector<double>& out);

}  // namespace orthospec
