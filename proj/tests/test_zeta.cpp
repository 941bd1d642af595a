#include <cmath>

#include "doctest.h"
#include "oracle/oracles.hpp"
#include "orthospec/errors.hpp"
#include "orthospec/zeta.hpp"

using namespace orthospec;

namespace {

/// Z^2 lattice sum with the shifted point: classical identity
/// sum_{xi != 0} |xi|^{-s} = 4 zeta(s/2) beta(s/2).
Complex z2_oracle(Complex s) {
    return 4.0 * oracle::riemann_zeta(0.5 * s) * oracle::dirichlet_beta(0.5 * s);
}

}  // namespace

TEST_CASE("epstein zeta matches the 4 zeta beta oracle on Z^2") {
    Vec q{0.0, 0.0};
    for (Complex s : {Complex(4.0, 0.0), Complex(1.0, 0.0), Complex(0.5, 2.0), Complex(6.0, 0.0),
                      Complex(3.0, -1.0)}) {
        Complex got = epstein_zeta(q, s);
        Complex want = z2_oracle(s);
        CHECK(std::abs(got - want) < 1e-10 * std::max(1.0, std::abs(want)));
    }
    // Direct partial sums confirm the convergent range.
    Complex direct = 0.0;
    for (int i = -60; i <= 60; ++i)
        for (int j = -60; j <= 60; ++j) {
            if (i == 0 && j == 0) continue;
            direct += std::pow(Complex(i * i + j * j, 0.0), -2.0);
        }
    CHECK(std::abs(epstein_zeta(q, {4.0, 0.0}) - direct) < 1e-4);
}

TEST_CASE("epstein zeta with a generic shift against direct summation") {
    Vec q{0.3, -0.2};
    Complex s{5.0, 0.0};
    Complex direct = 0.0;
    for (int i = -120; i <= 120; ++i)
        for (int j = -120; j <= 120; ++j) {
            double r2 = (i + 0.3) * (i + 0.3) + (j - 0.2) * (j - 0.2);
            direct += std::pow(r2, -2.5);
        }
    CHECK(std::abs(epstein_zeta(q, s) - direct) < 1e-6);

    // A shift close to the lattice exercises the split-off near term.
    Vec qn{0.01, 0.02};
    Complex dn = 0.0;
    for (int i = -120; i <= 120; ++i)
        for (int j = -120; j <= 120; ++j) {
            double r2 = (i + 0.01) * (i + 0.01) + (j + 0.02) * (j + 0.02);
            dn += std::pow(r2, -2.5);
        }
    CHECK(std::abs(epstein_zeta(qn, s) - dn) < 1e-6);

    // Integer shift equals the origin case (with the shifted point removed).
    CHECK(std::abs(epstein_zeta(Vec{1.0, -2.0}, {4.0, 0.0}) - z2_oracle({4.0, 0.0})) < 1e-10);
}

TEST_CASE("epstein zeta in d=3 against direct summation") {
    Vec q{0.0, 0.0, 0.0};
    Complex s{6.0, 0.0};
    Complex direct = 0.0;
    for (int i = -40; i <= 40; ++i)
        for (int j = -40; j <= 40; ++j)
            for (int k = -40; k <= 40; ++k) {
                if (i == 0 && j == 0 && k == 0) continue;
                double r2 = double(i) * i + double(j) * j + double(k) * k;
                direct += std::pow(r2, -3.0);
            }
    CHECK(std::abs(epstein_zeta(q, s) - direct) < 1e-5);
}

TEST_CASE("epstein residue at s = d and the pole guard") {
    Vec q{0.0, 0.0};
    // (s-2) zeta at s = 2 + 1e-3 equals 2 pi to 1e-3 relative.
    Complex nearval = epstein_zeta(q, {2.001, 0.0});
    CHECK(std::abs(0.001 * nearval - 2.0 * M_PI) < 1e-3 * 2.0 * M_PI);
    // Contour residue to 1e-6 absolute.
    Complex res = residue_estimate([&](Complex s) { return epstein_zeta(q, s); }, 2.0, 0.5);
    CHECK(std::abs(res - 2.0 * M_PI) < 1e-6);
    // Shell-count oracle confirms the value at percent level.
    CHECK(std::abs(oracle::epstein_residue_shell_estimate() - 2.0 * M_PI) < 0.05 * 2.0 * M_PI);
    CHECK_THROWS_AS(epstein_zeta(q, {2.0, 0.0}), DomainError);
    // zeta(q, 0) = -1 for integer shifts.
    CHECK(std::abs(epstein_zeta(q, {0.0, 0.0}) - Complex(-1.0, 0.0)) < 1e-10);
}

TEST_CASE("residue_estimate on a simple pole") {
    Complex r = residue_estimate([](Complex s) { return 1.0 / (s - 2.0); }, 2.0, 0.3);
    CHECK(std::abs(r - 1.0) < 1e-12);
    Complex r2 = residue_estimate(
        [](Complex s) { return 3.0 / (s - 1.0) + std::exp(s); }, 1.0, 0.4);
    CHECK(std::abs(r2 - 3.0) < 1e-12);
}

TEST_CASE("convex zeta normalization identity for point bodies") {
    ConvexBody p1 = ConvexBody::point(Vec{0.0, 0.0});
    ConvexBody p2 = ConvexBody::point(Vec{0.3, 0.4});
    ConvexZetaEngine engine(p1, p2);
    Vec q{0.3 / (2.0 * M_PI), 0.4 / (2.0 * M_PI)};
    // Lengths are 2 pi |xi + q|, so zeta_conv(s) = (2 pi)^{-s} zeta_eps(q, s).
    for (Complex s : {Complex(3.5, 0.0), Complex(4.0, 1.0)}) {
        ZetaValue direct = engine.direct(s, 200.0);
        Complex want = std::pow(2.0 * M_PI, -s) * epstein_zeta(q, s);
        CHECK(std::abs(direct.value - want) <
              direct.tail_bound + 1e-9 * std::abs(want));
        ZetaValue cont = engine.continued(s);
        CHECK(std::abs(cont.value - want) < 5e-7 * std::max(1.0, std::abs(want)));
    }
    // Also on the continued strip below Re s = d.
    Complex s{1.6, 0.8};
    ZetaValue cont = engine.continued(s);
    Complex want = std::pow(2.0 * M_PI, -s) * epstein_zeta(q, s);
    CHECK(std::abs(cont.value - want) < 2e-4 * std::max(1.0, std::abs(want)));
}

TEST_CASE("convex zeta direct: tail bound and agreement with continued") {
    ConvexBody d1 = ConvexBody::ball(Vec{0.1, 0.3}, 0.22);
    ConvexBody d2 = ConvexBody::ball(Vec{-0.4, 0.2}, 0.31);
    ConvexZetaOptions opt;
    opt.t3 = 320.0;
    ConvexZetaEngine engine(d1, d2, opt);
    Complex s{3.5, 0.0};
    ZetaValue v50 = engine.direct(s, 50.0);
    ZetaValue v200 = engine.direct(s, 200.0);
    CHECK(std::abs(v200.value - v50.value) <= v50.tail_bound);
    CHECK(v200.tail_bound < v50.tail_bound);
    ZetaValue cont = engine.continued(s);
    CHECK(std::abs(cont.value - v200.value) < 1e-6);
    CHECK_THROWS_AS(engine.direct({1.5, 0.0}, 50.0), DomainError);
    CHECK_THROWS_AS(engine.continued({0.9, 0.0}), DomainError);
    CHECK_THROWS_AS(engine.continued({2.0, 0.0}), DomainError);
}

TEST_CASE("convex zeta residues: points and disks") {
    ConvexBody p1 = ConvexBody::point(Vec{0.0, 0.0});
    ConvexBody p2 = ConvexBody::point(Vec{0.3, 0.4});
    ConvexZetaEngine pe(p1, p2);
    Complex res = residue_estimate([&](Complex s) { return pe.continued(s).value; }, 2.0, 0.5);
    CHECK(std::abs(res - 1.0 / (2.0 * M_PI)) < 1e-3);

    ConvexBody d1 = ConvexBody::ball(Vec{0.1, 0.3}, 0.22);
    ConvexBody d2 = ConvexBody::ball(Vec{-0.4, 0.2}, 0.31);
    ConvexZetaEngine de(d1, d2);
    auto reports = de.pole_reports();
    REQUIRE(reports.size() == 2);
    // s = d: contour residue against vol(S^1)/(2 pi)^2 = 1/(2 pi).
    CHECK(reports[1].location == 2);
    CHECK(std::abs(reports[1].predicted - 1.0 / (2.0 * M_PI)) < 1e-6);
    CHECK(reports[1].relative_gap < 0.01);
    // s = 1: closed-form part carries pi^{1/2} V_1 / (Gamma(3/2) (2pi)^2) exactly.
    CHECK(reports[0].location == 1);
    CHECK(reports[0].relative_gap < 1e-12);
}

TEST_CASE("continued zeta is holomorphic off the pole (Cauchy-Riemann probe)") {
    ConvexBody d1 = ConvexBody::ball(Vec{0.1, 0.3}, 0.22);
    ConvexBody d2 = ConvexBody::ball(Vec{-0.4, 0.2}, 0.31);
    ConvexZetaEngine engine(d1, d2);
    double h = 1e-4;
    for (double re : {1.55, 1.8, 2.4, 3.1, 3.9}) {
        for (double im : {-0.9, 0.3, 1.5}) {
            Complex s{re, im};
            if (std::abs(s - Complex(2.0, 0.0)) < 0.3) continue;
            Complex dx = (engine.continued(s + Complex(h, 0)).value -
                          engine.continued(s - Complex(h, 0)).value) /
                         (2.0 * h);
            Complex dy = (engine.continued(s + Complex(0, h)).value -
                          engine.continued(s - Complex(0, h)).value) /
                         (2.0 * h);
            // Holomorphy: d/dy = i d/dx.
            CHECK(std::abs(dy - Complex(0, 1) * dx) < 1e-5 * (1.0 + std::abs(dx)));
        }
    }
}

TEST_CASE("pole at s = d is simple") {
    ConvexBody p = ConvexBody::point(Vec{0.0, 0.0});
    ConvexBody p2 = ConvexBody::point(Vec{0.5, 0.5});
    ConvexZetaEngine engine(p, p2);
    double prev_scaled = 0;
    for (double r : {0.2, 0.1, 0.05, 0.025}) {
        Complex s = Complex(2.0 + r, 0.0);
        Complex v = engine.continued(s).value;
        double first = std::abs((s - 2.0) * v);
        double second = std::abs((s - 2.0) * (s - 2.0) * v);
        CHECK(first < 1.0);  // bounded: residue is 1/(2 pi) ~ 0.159
        if (prev_scaled > 0) CHECK(second < prev_scaled);
        prev_scaled = second;
    }
}

TEST_CASE("residue/counting duality") {
    // The residue at s = d equals d/(2 pi)^d times the leading Steiner
    // coefficient recovered from a polynomial fit of the counting function.
    ConvexBody d1 = ConvexBody::ball(Vec{0.1, 0.3}, 0.22);
    ConvexBody d2 = ConvexBody::ball(Vec{-0.4, 0.2}, 0.31);
    ConvexZetaEngine engine(d1, d2);
    LengthSpectrum spec = length_spectrum_range(d1, d2, 0.0, 160.0);
    // Fit N(T) ~ a T^2 + b T + c on [40, 160].
    double sxx = 0, sx = 0, s1 = 0, sx3 = 0, sx4 = 0;
    double sy = 0, sxy = 0, sx2y = 0;
    for (double t = 40.0; t <= 160.0; t += 2.0) {
        long long n = 0;
        for (const auto& g : spec.records)
            if (g.length <= t) ++n;
        double x2 = t * t;
        sx4 += x2 * x2;
        sx3 += x2 * t;
        sxx += x2;
        sx += t;
        s1 += 1;
        sy += n;
        sxy += t * n;
        sx2y += x2 * n;
    }
    // Solve the 3x3 normal equations by elimination.
    double m[3][4] = {{sx4, sx3, sxx, sx2y}, {sx3, sxx, sx, sxy}, {sxx, sx, s1, sy}};
    for (int c = 0; c < 3; ++c) {
        for (int r = c + 1; r < 3; ++r) {
            double f = m[r][c] / m[c][c];
            for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
        }
    }
    double lead = 0;
    {
        double z = m[2][3] / m[2][2];
        double y = (m[1][3] - m[1][2] * z) / m[1][1];
        lead = (m[0][3] - m[0][1] * y - m[0][2] * z) / m[0][0];
    }
    Complex res = residue_estimate([&](Complex s) { return engine.continued(s).value; }, 2.0, 0.5);
    CHECK(std::abs(res.real() - 2.0 * lead) < 0.02 * std::abs(res.real()));
    CHECK(std::abs(res.imag()) < 1e-8);
}
