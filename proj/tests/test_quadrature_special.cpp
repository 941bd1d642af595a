#include <cmath>
#include <complex>

#include "doctest.h"
#include "oracle/oracles.hpp"
#include "orthospec/quadrature.hpp"
#include "orthospec/special.hpp"

using namespace orthospec;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    const GaussLegendre& gl = gauss_legendre(12);
    // int_{-1}^1 x^k dx.
    for (int k = 0; k <= 23; ++k) {
        double sum = 0;
        for (int i = 0; i < 12; ++i) sum += gl.weights[i] * std::pow(gl.nodes[i], k);
        double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
        CHECK(std::abs(sum - exact) < 1e-13);
    }
}

TEST_CASE("circle quadrature integrates trigonometric polynomials") {
    SphereQuadrature q = SphereQuadrature::circle(64);
    CHECK(q.total_weight() == doctest::Approx(2.0 * M_PI).epsilon(1e-14));
    for (int k = 1; k <= 30; ++k) {
        std::complex<double> sum = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            double phi = std::atan2(q.nodes[i][1], q.nodes[i][0]);
            sum += q.weights[i] * std::polar(1.0, k * phi);
        }
        CHECK(std::abs(sum) < 1e-12);
    }
}

TEST_CASE("sphere quadrature integrates monomials exactly") {
    SphereQuadrature q = SphereQuadrature::sphere(16, 32);
    CHECK(q.total_weight() == doctest::Approx(4.0 * M_PI).epsilon(1e-14));
    // int_{S^2} x^a y^b z^c known in closed form (zero for odd exponents).
    auto exact = [](int a, int b, int c) {
        if (a % 2 || b % 2 || c % 2) return 0.0;
        auto g = [](int k) { return std::tgamma(0.5 * (k + 1)); };
        return 2.0 * g(a) * g(b) * g(c) / std::tgamma(0.5 * (a + b + c + 3));
    };
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4; ++b)
            for (int c = 0; c <= 4; ++c) {
                double sum = 0;
                for (std::size_t i = 0; i < q.size(); ++i) {
                    const Vec& u = q.nodes[i];
                    sum += q.weights[i] * std::pow(u[0], a) * std::pow(u[1], b) *
                           std::pow(u[2], c);
                }
                CHECK(std::abs(sum - exact(a, b, c)) < 1e-12);
            }
}

TEST_CASE("complex gamma matches real gamma and the reflection value") {
    CHECK(std::abs(cgamma({5.0, 0.0}) - Complex(24.0, 0.0)) < 1e-10);
    CHECK(std::abs(cgamma({0.5, 0.0}) - Complex(std::sqrt(M_PI), 0.0)) < 1e-12);
    // |Gamma(i)|^2 = pi / sinh(pi).
    Complex gi = cgamma({0.0, 1.0});
    CHECK(std::norm(gi) == doctest::Approx(M_PI / std::sinh(M_PI)).epsilon(1e-10));
}

TEST_CASE("bessel arrays match the series and integral oracles") {
    for (double x : {0.3, 2.0, 7.5, 11.0, 20.0, 75.0, 300.0}) {
        auto j = bessel_j_array(12, x);
        for (int n = 0; n <= 12; ++n) {
            double ref = oracle::bessel_jn_integral(n, x);
            CHECK(std::abs(j[n] - ref) < 2e-12);
            double ser = oracle::bessel_jn_series(n, x);
            CHECK(std::abs(j[n] - ser) < 5e-9);
        }
    }
}

TEST_CASE("spherical bessel array matches closed forms") {
    for (double x : {0.5, 3.0, 40.0}) {
        auto j = sph_bessel_array(5, x);
        CHECK(j[0] == doctest::Approx(std::sin(x) / x).epsilon(1e-12));
        double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
        CHECK(j[1] == doctest::Approx(j1).epsilon(1e-10));
        double j2 = (3.0 / (x * x) - 1.0) * std::sin(x) / x - 3.0 * std::cos(x) / (x * x);
        CHECK(std::abs(j[2] - j2) < 1e-12);
    }
}

TEST_CASE("exponential integral family against quadrature identities") {
    // E_1(1) known value.
    Complex e1 = expint_ep(1.0, {1.0, 0.0});
    CHECK(e1.real() == doctest::Approx(0.21938393439552028).epsilon(1e-10));
    CHECK(std::abs(e1.imag()) < 1e-14);
    // E_p(w) = e^{-w} - ... recurrence check: E_{p+1} = (e^{-w} - w E_p)/p.
    for (Complex w : {Complex(0.7, 0.0), Complex(2.0, 3.0), Complex(0.05, 6.0)}) {
        Complex a = expint_ep(0.5, w);
        Complex b = expint_ep(1.5, w);
        Complex rec = (std::exp(-w) - w * a) / 0.5;
        CHECK(std::abs(b - rec) < 1e-10 * (1.0 + std::abs(rec)));
    }
    // Small-|w| singular behavior: E_{1/2}(w) ~ Gamma(1/2) w^{-1/2}.
    Complex w{1e-8, 1e-8};
    Complex lead = cgamma({0.5, 0.0}) * std::pow(w, -0.5);
    CHECK(std::abs(expint_ep(0.5, w) - lead) / std::abs(lead) < 1e-3);
}

TEST_CASE("oscillatory tail integral agrees with damped limits") {
    // int_a^inf t^{-q} e^{i w t} dt at w = 1, compared against the Laplace
    // form evaluated at s = -i w + eps for small eps (Abel limit).
    Complex q{2.5, 0.0};
    double a = 3.0;
    Complex direct = tail_oscillatory_integral(q, 1.0, a);
    // Reference: integrate numerically with strong damping subtracted by
    // Richardson extrapolation of eps -> 0.
    auto damped = [&](double eps) {
        Complex sum = 0.0;
        int n = 400000;
        double upper = 60.0 / eps > 4000.0 ? 4000.0 : 60.0 / eps;
        double h = (upper - a) / n;
        for (int i = 0; i < n; ++i) {
            double t0 = a + h * (i + 0.5);
            sum += std::pow(t0, -q) * std::exp(Complex(-eps * t0, t0)) * h;
        }
        return sum;
    };
    Complex d1 = damped(1e-3);
    CHECK(std::abs(direct - d1) < 5e-3);
}

TEST_CASE("normalized associated legendre is orthonormal") {
    const GaussLegendre& gl = gauss_legendre(64);
    std::vector<double> pl, pl2;
    for (int m : {0, 1, 3}) {
        for (int l = m; l <= m + 4; ++l) {
            double nrm = 0, cross = 0;
            for (int i = 0; i < 64; ++i) {
                normalized_assoc_legendre(m + 6, m, gl.nodes[i], pl);
                nrm += gl.weights[i] * pl[l - m] * pl[l - m];
                if (l + 1 <= m + 6) cross += gl.weights[i] * pl[l - m] * pl[l - m + 1];
            }
            // ||Y_lm||^2 = 1 means int Pbar^2 dx = 1/(2 pi).
            CHECK(nrm == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-10));
            CHECK(std::abs(cross) < 1e-12);
        }
    }
}
