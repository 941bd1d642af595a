#pragma once

// Independent oracles used by the test suites.  Everything here is a separate
// implementation path from the library: direct summation, dense sampling,
// finite differences, classical series.

#include <complex>
#include <vector>

#include "orthospec/body.hpp"
#include "orthospec/special.hpp"
#include "orthospec/vec.hpp"

namespace oracle {

using orthospec::Complex;
using orthospec::ConvexBody;
using orthospec::Vec;

/// Riemann zeta for complex w != 1 via the alternating (eta) series with
/// Cohen-Rodriguez Villegas-Zagier acceleration.
Complex riemann_zeta(Complex w);

/// Dirichlet beta L(w, chi_4) by the same acceleration.
Complex dirichlet_beta(Complex w);

/// Bessel J_n by power series (small x) or the Hankel asymptotic series.
double bessel_jn_series(int n, double x);

/// Bessel J_n from the integral representation (1/pi) int_0^pi cos(n t - x sin t) dt.
double bessel_jn_integral(int n, double x);

/// max_u <x - pt, u> - h(u): distance from a point to a convex body by dense
/// angular sampling plus golden-section refinement (d = 2).
double distance_point_to_body_2d(const Vec& x, const ConvexBody& body, int samples = 200000);

/// Dense sphere-sampled maximum of F(u) = <target, u> - h1(u) - h2(-u) (d = 2, 3).
double grid_search_max_objective(const ConvexBody& k1, const ConvexBody& k2, const Vec& target,
                                 long long samples);

/// Central finite-difference gradient of the homogeneous support extension.
Vec support_gradient_fd(const ConvexBody& body, const Vec& u, double h = 1e-6);

/// Polyline perimeter of a d=2 body from dense boundary samples.
double perimeter_polyline_2d(const ConvexBody& body, int samples = 200000);

/// Surface area of an axis-aligned ellipsoid with semi-axes a, b, c by dense
/// parametric quadrature of |r_theta x r_phi|.
double ellipsoid_area_parametric(double a, double b, double c, int n_theta = 800,
                                 int n_phi = 1600);

/// Residue of sum_{xi in Z^2, xi != 0} |xi|^{-s} at s = 2, estimated from a
/// truncated shell sum plus the area-counting tail at sigma slightly above 2.
double epstein_residue_shell_estimate(double sigma = 2.01, double radius = 4000.0);

}  // namespace oracle
