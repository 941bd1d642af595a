#include "orthospec/steiner.hpp"

#include <cmath>

#include "orthospec/errors.hpp"
#include "orthospec/quadrature.hpp"

namespace orthospec {

namespace {

/// Boundary integral at a given quadrature resolution.
double steiner_quadrature(const ConvexBody& k, double t, const SphereQuadrature& q, bool parallel) {
    const int d = k.dim();
    const std::size_t n = q.size();
    std::vector<double> terms(n);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
            std::size_t i = static_cast<std::size_t>(ii);
            const Vec& u = q.nodes[i];
            SmallMat w = k.curvature(u, tangent_basis(u));
            terms[i] = q.weights[i] * (k.support(u) + t) * w.det_shifted(t);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const Vec& u = q.nodes[i];
            SmallMat w = k.curvature(u, tangent_basis(u));
            terms[i] = q.weights[i] * (k.support(u) + t) * w.det_shifted(t);
        }
    }
    // Fixed-order reduction keeps the value independent of the thread count.
    double sum = 0;
    for (double v : terms) sum += v;
    return sum / d;
}

double steiner_closed_form(const ConvexBody& k, double t) {
    // K is a point or ball (possibly a Minkowski sum of those): K + tB is a
    // ball of radius r_total + t.
    double r = 0.5 * k.diameter();
    return ball_volume(k.dim()) * std::pow(r + t, k.dim());
}

double steiner_impl(const ConvexBody& k, double t, bool parallel) {
    if (t < 0) throw PreconditionError("steiner_volume: t >= 0 required");
    if (k.is_point_or_ball()) return steiner_closed_form(k, t);
    const int d = k.dim();
    if (d > 3) throw PreconditionError("steiner_volume: generic bodies supported for d = 2, 3 only");
    SphereQuadrature coarse = d == 2 ? SphereQuadrature::circle(512) : SphereQuadrature::sphere(64, 128);
    SphereQuadrature fine = d == 2 ? SphereQuadrature::circle(768) : SphereQuadrature::sphere(96, 192);
    double v0 = steiner_quadrature(k, t, coarse, parallel);
    double v1 = steiner_quadrature(k, t, fine, parallel);
    if (std::abs(v1 - v0) > 1e-9 * std::max(1.0, std::abs(v1)))
        throw NumericError("steiner_volume: quadrature degree insufficient");
    return v1;
}

}  // namespace

double steiner_volume(const ConvexBody& k, double t) { return steiner_impl(k, t, true); }

double steiner_volume_serial(const ConvexBody& k, double t) { return steiner_impl(k, t, false); }

std::vector<double> steiner_polynomial(const ConvexBody& k) {
    const int d = k.dim();
    const int n = d + 1;
    // Sample the Steiner volume at t = 0, 0.5, 1, ... and solve the Vandermonde
    // system for the monomial coefficients.
    std::vector<double> ts(n), vs(n);
    for (int i = 0; i < n; ++i) {
        ts[i] = 0.5 * i;
        vs[i] = steiner_volume(k, ts[i]);
    }
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (int i = 0; i < n; ++i) {
        double p = 1;
        for (int j = 0; j < n; ++j) {
            a[i][j] = p;
            p *= ts[i];
        }
        a[i][n] = vs[i];
    }
    // Gaussian elimination with partial pivoting.
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        if (std::abs(a[col][col]) < 1e-14) throw NumericError("steiner_polynomial: singular fit");
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            for (int c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<double> coeffs(n);
    for (int i = 0; i < n; ++i) coeffs[i] = a[i][n] / a[i][i];
    return coeffs;
}

std::vector<double> intrinsic_volumes(const ConvexBody& k) {
    const int d = k.dim();
    std::vector<double> p = steiner_polynomial(k);
    // Vol(K+tB) = sum_l V_{d-l} pi^{l/2}/Gamma(l/2+1) t^l.
    std::vector<double> v(d + 1, 0.0);
    for (int l = 0; l <= d; ++l) {
        double scale = std::pow(M_PI, 0.5 * l) / std::tgamma(0.5 * l + 1.0);
        v[d - l] = p[l] / scale;
    }
    return v;
}

}  // namespace orthospec
