#include "orthospec/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "orthospec/errors.hpp"

namespace orthospec {

namespace {

GaussLegendre compute_gauss_legendre(int n) {
    if (n < 1) throw PreconditionError("gauss_legendre: n >= 1 required");
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    // Newton iteration from the Chebyshev-like initial guess; symmetric rule.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        gl.nodes[i] = -x;
        gl.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        gl.weights[i] = w;
        gl.weights[n - 1 - i] = w;
    }
    return gl;
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
    static std::map<int, GaussLegendre> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

SphereQuadrature SphereQuadrature::circle(int m) {
    if (m < 4) throw PreconditionError("SphereQuadrature::circle: m >= 4 required");
    SphereQuadrature q;
    q.dim = 2;
    q.n_lon = m;
    q.nodes.reserve(m);
    q.weights.assign(m, 2.0 * M_PI / m);
    for (int i = 0; i < m; ++i) {
        double phi = 2.0 * M_PI * i / m;
        q.nodes.push_back(Vec{std::cos(phi), std::sin(phi)});
    }
    return q;
}

SphereQuadrature SphereQuadrature::sphere(int n_colat, int n_lon) {
    if (n_colat < 2 || n_lon < 4)
        throw PreconditionError("SphereQuadrature::sphere: grid too small");
    SphereQuadrature q;
    q.dim = 3;
    q.n_colat = n_colat;
    q.n_lon = n_lon;
    const GaussLegendre& gl = gauss_legendre(n_colat);
    q.nodes.reserve(static_cast<std::size_t>(n_colat) * n_lon);
    q.weights.reserve(static_cast<std::size_t>(n_colat) * n_lon);
    for (int i = 0; i < n_colat; ++i) {
        double c = gl.nodes[i];          // cos(colatitude)
        double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        for (int j = 0; j < n_lon; ++j) {
            double phi = 2.0 * M_PI * j / n_lon;
            q.nodes.push_back(Vec{s * std::cos(phi), s * std::sin(phi), c});
            q.weights.push_back(gl.weights[i] * 2.0 * M_PI / n_lon);
        }
    }
    return q;
}

SphereQuadrature SphereQuadrature::standard(int dim) {
    if (dim == 2) return circle(512);
    if (dim == 3) return sphere(64, 128);
    throw PreconditionError("SphereQuadrature::standard: only d = 2, 3 supported");
}

double sphere_volume(int d) { return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d); }

double ball_volume(int d) { return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0); }

std::vector<Vec> tangent_basis(const Vec& u) {
    const int d = u.d;
    std::vector<Vec> basis;
    if (d == 2) {
        basis.push_back(Vec{-u[1], u[0]});
        return basis;
    }
    // Gram-Schmidt against the least-aligned coordinate axes.
    int skip = 0;
    for (int i = 1; i < d; ++i)
        if (std::abs(u[i]) > std::abs(u[skip])) skip = i;
    for (int i = 0; i < d && static_cast<int>(basis.size()) < d - 1; ++i) {
        if (i == skip) continue;
        Vec e(d);
        e[i] = 1.0;
        Vec v = e - dot(e, u) * u;
        for (const Vec& b : basis) v -= dot(v, b) * b;
        double n = norm(v);
        if (n < 1e-12) continue;
        basis.push_back((1.0 / n) * v);
    }
    if (static_cast<int>(basis.size()) != d - 1)
        throw NumericError("tangent_basis: degenerate direction");
    return basis;
}

void legendre_values(int n, double x, std::vector<double>& out) {
    out.resize(n + 1);
    out[0] = 1.0;
    if (n == 0) return;
    out[1] = x;
    for (int k = 1; k < n; ++k)
        out[k + 1] = ((2.0 * k + 1.0) * x * out[k] - k * out[k - 1]) / (k + 1.0);
}

}  // namespace orthospec
