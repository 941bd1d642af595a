#include "orthospec/correlation.hpp"

#include <algorithm>
#include <cmath>

#include "orthospec/errors.hpp"

namespace orthospec {

namespace {

constexpr double kScaleCap = 1e5;

/// Rotation taking e_last to the unit vector v (d = 2: angle; d = 3: matrix).
struct Rotation3 {
    std::array<Vec, 3> cols;  // columns: images of e_1, e_2, e_3

    static Rotation3 align_to(const Vec& v) {
        Rotation3 r;
        Vec e3 = v;
        std::vector<Vec> basis = tangent_basis(v);
        r.cols = {basis[0], basis[1], e3};
        return r;
    }
    Vec apply(double x, double y, double z) const {
        Vec out(3);
        for (int i = 0; i < 3; ++i) out[i] = cols[0][i] * x + cols[1][i] * y + cols[2][i] * z;
        return out;
    }
};

}  // namespace

OscillatoryMode::OscillatoryMode(const SphereFunction& f, const LatticeVec& xi) {
    dim_ = f.dim();
    Vec xv = xi.to_vec();
    xi_norm_ = norm(xv);
    if (xi_norm_ == 0.0) {
        // Plain sphere average; store it as the single coefficient.
        const SphereQuadrature q = SphereQuadrature::standard(dim_);
        Complex sum = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) sum += q.weights[i] * f(q.nodes[i]);
        coeffs_ = {sum};
        pole_plus_ = pole_minus_ = 0.0;
        return;
    }
    Vec dir = (1.0 / xi_norm_) * xv;
    pole_plus_ = f(dir);
    pole_minus_ = f(-dir);

    // Grow the spectral basis until the trailing coefficients are negligible;
    // narrow bumps need many more modes than trigonometric data.
    auto tail_converged = [](const std::vector<Complex>& c, double tol) {
        double top = 0;
        for (const Complex& x : c) top = std::max(top, std::abs(x));
        if (top == 0) return true;
        std::size_t tail = std::min<std::size_t>(6, c.size());
        for (std::size_t i = c.size() - tail; i < c.size(); ++i)
            if (std::abs(c[i]) > tol * top) return false;
        return true;
    };

    if (dim_ == 2) {
        double alpha = std::atan2(dir[1], dir[0]);
        for (int kmax : {160, 320, 640}) {
            // Coefficients of g(psi) = F(psi + alpha); folded s_k = d_k + d_{-k}.
            const int m = 4 * kmax;
            std::vector<Complex> samples(m);
            for (int j = 0; j < m; ++j) {
                double psi = 2.0 * M_PI * j / m;
                samples[j] = f(Vec{std::cos(psi + alpha), std::sin(psi + alpha)});
            }
            std::vector<Complex> d(2 * kmax + 1);
            for (int k = -kmax; k <= kmax; ++k) {
                Complex c = 0.0;
                for (int j = 0; j < m; ++j)
                    c += samples[j] * std::polar(1.0, -k * (2.0 * M_PI * j / m));
                d[kmax + k] = c / static_cast<double>(m);
            }
            coeffs_.assign(kmax + 1, Complex(0.0));
            coeffs_[0] = d[kmax];
            for (int k = 1; k <= kmax; ++k) coeffs_[k] = d[kmax + k] + d[kmax - k];
            if (tail_converged(coeffs_, 1e-11) || kmax == 640) break;
        }
    } else {
        // Ring averages G(c) = int F over the circle at height c around dir,
        // then Legendre coefficients a_l with G = sum a_l P_l.
        Rotation3 rot = Rotation3::align_to(dir);
        for (int lmax : {80, 160}) {
            const int nc = lmax + 28, nl = 128;
            const GaussLegendre& gl = gauss_legendre(nc);
            std::vector<Complex> g(nc);
            for (int i = 0; i < nc; ++i) {
                double c = gl.nodes[i];
                double s = std::sqrt(std::max(0.0, 1.0 - c * c));
                Complex ring = 0.0;
                for (int j = 0; j < nl; ++j) {
                    double phi = 2.0 * M_PI * j / nl;
                    ring += f(rot.apply(s * std::cos(phi), s * std::sin(phi), c));
                }
                g[i] = ring * (2.0 * M_PI / nl);
            }
            coeffs_.assign(lmax + 1, Complex(0.0));
            std::vector<double> pl;
            for (int i = 0; i < nc; ++i) {
                legendre_values(lmax, gl.nodes[i], pl);
                for (int l = 0; l <= lmax; ++l)
                    coeffs_[l] += 0.5 * (2.0 * l + 1.0) * gl.weights[i] * g[i] * pl[l];
            }
            if (tail_converged(coeffs_, 1e-11) || lmax == 160) break;
        }
    }
    // Record the achieved truncation quality, then trim negligible entries.
    double top = 0;
    for (const Complex& c : coeffs_) top = std::max(top, std::abs(c));
    std::size_t keep = 1;
    truncation_error_ = 0;
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
        if (std::abs(coeffs_[k]) > 1e-14 * std::max(top, 1e-30)) keep = k + 1;
    if (keep + 3 >= coeffs_.size() && !coeffs_.empty()) {
        std::size_t tail = std::min<std::size_t>(6, coeffs_.size());
        for (std::size_t i = coeffs_.size() - tail; i < coeffs_.size(); ++i)
            truncation_error_ = std::max(truncation_error_, std::abs(coeffs_[i]));
    }
    coeffs_.resize(keep);
}

Complex OscillatoryMode::eval(double t) const {
    if (xi_norm_ == 0.0) return coeffs_[0];
    double lambda = std::abs(t) * xi_norm_;
    bool reflect = t < 0;  // I(-t) pairs with the conjugate phase direction
    const int n = static_cast<int>(coeffs_.size()) - 1;
    Complex sum = 0.0;
    if (dim_ == 2) {
        std::vector<double> j = bessel_j_array(n, lambda);
        Complex ik(1.0, 0.0);
        const Complex i_unit = reflect ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
        for (int k = 0; k <= n; ++k) {
            sum += coeffs_[k] * ik * j[k];
            ik *= i_unit;
        }
        return 2.0 * M_PI * sum;
    }
    std::vector<double> j = sph_bessel_array(n, lambda);
    Complex il(1.0, 0.0);
    const Complex i_unit = reflect ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
    for (int l = 0; l <= n; ++l) {
        sum += coeffs_[l] * il * j[l];
        il *= i_unit;
    }
    return 2.0 * sum;
}

Complex oscillatory_integral(const SphereFunction& f, const LatticeVec& xi, double t) {
    double lambda = std::abs(t) * norm(xi.to_vec());
    if (lambda > kScaleCap)
        throw DomainError("oscillatory_integral: t|xi| exceeds the resolution cap");
    OscillatoryMode mode(f, xi);
    if (mode.truncation_error() > 1e-8)
        throw NumericError("oscillatory_integral: spectral resolution insufficient for 1e-8");
    return mode.eval(t);
}

Complex oscillatory_integral_dense(const SphereFunction& f, const LatticeVec& xi, double t) {
    const int d = f.dim();
    Vec xv = xi.to_vec();
    double xn = norm(xv);
    double lambda = std::abs(t) * xn;
    if (lambda > kScaleCap)
        throw DomainError("oscillatory_integral_dense: t|xi| exceeds the resolution cap");
    if (d == 2) {
        // >= 8 nodes per oscillation of e^{i t xi . theta}, min 64.
        int m = std::max(64, static_cast<int>(std::ceil(1.5 * lambda)) + 64);
        Complex sum = 0.0;
        for (int j = 0; j < m; ++j) {
            double phi = 2.0 * M_PI * j / m;
            Vec u{std::cos(phi), std::sin(phi)};
            sum += f(u) * std::polar(1.0, t * dot(xv, u));
        }
        return sum * (2.0 * M_PI / m);
    }
    if (xn == 0.0) {
        SphereQuadrature q = SphereQuadrature::standard(3);
        Complex sum = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) sum += q.weights[i] * f(q.nodes[i]);
        return sum;
    }
    Rotation3 rot = Rotation3::align_to((1.0 / xn) * xv);
    int nc = std::max(48, static_cast<int>(std::ceil(0.62 * lambda)) + 48);
    int nl = 128;
    const GaussLegendre& gl = gauss_legendre(nc);
    Complex sum = 0.0;
    for (int i = 0; i < nc; ++i) {
        double c = gl.nodes[i];
        double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        Complex ring = 0.0;
        for (int j = 0; j < nl; ++j) {
            double phi = 2.0 * M_PI * j / nl;
            ring += f(rot.apply(s * std::cos(phi), s * std::sin(phi), c));
        }
        sum += gl.weights[i] * (2.0 * M_PI / nl) * ring * std::polar(1.0, t * xn * c);
    }
    return sum;
}

CorrelationModes CorrelationModes::build(const Observable& phi, const Observable& psi) {
    if (phi.dim != psi.dim) throw PreconditionError("correlation: dimension mismatch");
    CorrelationModes cm;
    cm.dim = phi.dim;
    cm.invariant = 0.0;
    for (const Observable::Mode& m : phi.modes) {
        const SphereFunction* other = psi.find_mode(m.xi);
        if (!other) continue;
        SphereFunction fphi = m.coeff;
        SphereFunction fpsi = *other;
        SphereFunction product = SphereFunction::from_callable(
            cm.dim, [fphi, fpsi](const Vec& u) { return fphi(u) * std::conj(fpsi(u)); });
        if (m.xi.is_zero()) {
            const SphereQuadrature q = SphereQuadrature::standard(cm.dim);
            for (std::size_t i = 0; i < q.size(); ++i)
                cm.invariant += q.weights[i] * product(q.nodes[i]);
            continue;
        }
        cm.entries.push_back({m.xi, OscillatoryMode(product, m.xi)});
    }
    return cm;
}

Complex CorrelationModes::eval(double t) const {
    Complex sum = invariant;
    for (const Entry& e : entries) sum += e.mode.eval(t);
    return sum;
}

Complex correlation(const Observable& phi, const Observable& psi, double t) {
    CorrelationModes cm = CorrelationModes::build(phi, psi);
    return cm.eval(t);
}

std::vector<Complex> correlation_grid(const Observable& phi, const Observable& psi,
                                      const std::vector<double>& ts) {
    CorrelationModes cm = CorrelationModes::build(phi, psi);
    std::vector<Complex> out(ts.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(ts.size()); ++i)
        out[static_cast<std::size_t>(i)] = cm.eval(ts[static_cast<std::size_t>(i)]);
    return out;
}

std::vector<Complex> correlation_grid_serial(const Observable& phi, const Observable& psi,
                                             const std::vector<double>& ts) {
    if (phi.dim != psi.dim) throw PreconditionError("correlation: dimension mismatch");
    std::vector<Complex> out(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        Complex sum = 0.0;
        for (const Observable::Mode& m : phi.modes) {
            const SphereFunction* other = psi.find_mode(m.xi);
            if (!other) continue;
            SphereFunction fphi = m.coeff;
            SphereFunction fpsi = *other;
            SphereFunction product = SphereFunction::from_callable(
                phi.dim, [fphi, fpsi](const Vec& u) { return fphi(u) * std::conj(fpsi(u)); });
            sum += oscillatory_integral_dense(product, m.xi, ts[i]);
        }
        out[i] = sum;
    }
    return out;
}

Complex stationary_phase_leading(const Observable& phi, const Observable& psi, double t) {
    if (phi.dim != psi.dim) throw PreconditionError("stationary_phase_leading: dimension mismatch");
    if (t < 1.0) throw PreconditionError("stationary_phase_leading: t >= 1 required");
    const int d = phi.dim;
    CorrelationModes cm = CorrelationModes::build(phi, psi);
    Complex sum = cm.invariant;
    double p = 0.5 * (d - 1);
    double amp = std::pow(2.0 * M_PI / t, p);
    for (const CorrelationModes::Entry& e : cm.entries) {
        double xn = e.mode.xi_norm();
        Complex plus = std::polar(1.0, t * xn - 0.25 * M_PI * (d - 1)) * e.mode.pole_plus();
        Complex minus = std::polar(1.0, -t * xn + 0.25 * M_PI * (d - 1)) * e.mode.pole_minus();
        sum += amp * std::pow(xn, -p) * (plus + minus);
    }
    return sum;
}

}  // namespace orthospec
