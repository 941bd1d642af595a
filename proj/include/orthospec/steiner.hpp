#pragma once

#include <vector>

#include "orthospec/body.hpp"

namespace orthospec {

/// Volume of the outer parallel body K + t B_d, from the mixed-volume boundary
/// integral (1/d) int_S (h+t) det(W + t I) dsigma with W the tangential Hessian
/// of the support function.  Closed form for points/balls (any d); quadrature
/// for generic bodies (d = 2, 3).  Throws NumericError when the quadrature is
/// too coarse for the requested accuracy.
double steiner_volume(const ConvexBody& k, double t);

/// Same value computed without the parallel kernel; kept as a reference for
/// tests and benchmarks.
double steiner_volume_serial(const ConvexBody& k, double t);

/// Intrinsic volumes (V_0, ..., V_d): coefficients of the Steiner polynomial
/// fitted at d+1 nodes t in {0, 0.5, 1, ...}, normalized by pi^{l/2}/Gamma(l/2+1).
std::vector<double> intrinsic_volumes(const ConvexBody& k);

/// Coefficients p_0..p_d of the Steiner polynomial itself:
/// Vol(K + tB) = sum_l p_l t^l.
std::vector<double> steiner_polynomial(const ConvexBody& k);

}  // namespace orthospec
