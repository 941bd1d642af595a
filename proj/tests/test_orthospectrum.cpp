#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "oracle/oracles.hpp"
#include "orthospec/errors.hpp"
#include "orthospec/orthospectrum.hpp"
#include "orthospec/steiner.hpp"

using namespace orthospec;

TEST_CASE("common perpendicular between balls has the tangency closed form") {
    ConvexBody b1 = ConvexBody::ball(Vec{0.2, 0.1}, 0.25);
    ConvexBody b2 = ConvexBody::ball(Vec{-0.3, 0.4}, 0.3);
    for (LatticeVec xi : {LatticeVec{1, 0}, LatticeVec{2, -1}, LatticeVec{0, 3}}) {
        auto g = common_perpendicular(b1, b2, xi);
        REQUIRE(g.has_value());
        Vec axis = 2.0 * M_PI * xi.to_vec() + Vec{-0.3, 0.4} - Vec{0.2, 0.1};
        CHECK(g->length == doctest::Approx(norm(axis) - 0.55).epsilon(1e-10));
        CHECK(norm(g->direction - normalized(axis)) < 1e-9);
        CHECK(norm(g->foot2 - g->foot1 - g->length * g->direction) < 1e-8);
    }
    // The zero class still has a short perpendicular here (center gap 0.583
    // against radius sum 0.55); genuinely overlapping bodies yield none.
    auto zero = common_perpendicular(b1, b2, LatticeVec{0, 0});
    REQUIRE(zero.has_value());
    CHECK(zero->length == doctest::Approx(std::hypot(0.5, 0.3) - 0.55).epsilon(1e-8));
    ConvexBody big = ConvexBody::ball(Vec{-0.3, 0.4}, 0.8);
    CHECK_FALSE(common_perpendicular(b1, big, LatticeVec{0, 0}).has_value());
}

TEST_CASE("common perpendicular between points is the straight segment") {
    ConvexBody p1 = ConvexBody::point(Vec{0.1, 0.2, 0.3});
    ConvexBody p2 = ConvexBody::point(Vec{0.5, -0.4, 0.0});
    LatticeVec xi{1, 1, -2};
    auto g = common_perpendicular(p1, p2, xi);
    REQUIRE(g.has_value());
    Vec gap = 2.0 * M_PI * xi.to_vec() + Vec{0.5, -0.4, 0.0} - Vec{0.1, 0.2, 0.3};
    CHECK(g->length == doctest::Approx(norm(gap)).epsilon(1e-13));
}

TEST_CASE("ellipse versus point matches the dense grid-search oracle") {
    ConvexBody ell = ConvexBody::ellipsoid(Vec{0.0, 0.0}, {{0.16, 0.0}, {0.0, 0.0625}});
    ConvexBody pt = ConvexBody::point(Vec{0.5, 0.5});
    LatticeVec xi{1, 0};
    auto g = common_perpendicular(ell, pt, xi);
    REQUIRE(g.has_value());
    Vec target = 2.0 * M_PI * xi.to_vec();
    double oracle_max = oracle::grid_search_max_objective(ell, pt, target, 1000000);
    CHECK(std::abs(g->length - oracle_max) < 1e-6);

    // 3D ellipsoid versus ball, against the spherical grid search.
    ConvexBody e3 = ConvexBody::ellipsoid(Vec{0.1, 0.0, 0.0},
                                          {{0.09, 0.0, 0.0}, {0.0, 0.16, 0.01}, {0.0, 0.01, 0.04}});
    ConvexBody b3 = ConvexBody::ball(Vec{0.4, 0.5, -0.2}, 0.2);
    LatticeVec xi3{1, -1, 0};
    auto g3 = common_perpendicular(e3, b3, xi3);
    REQUIRE(g3.has_value());
    double oracle3 =
        oracle::grid_search_max_objective(e3, b3, 2.0 * M_PI * xi3.to_vec(), 4000000);
    CHECK(std::abs(g3->length - oracle3) < 1e-5);
    CHECK(norm(g3->foot2 - g3->foot1 - g3->length * g3->direction) < 1e-8);
}

TEST_CASE("origin point pair spectrum has the first lattice shell") {
    ConvexBody p = ConvexBody::point(Vec{0.0, 0.0});
    LengthSpectrum spec = length_spectrum(p, p, 1.2 * 2.0 * M_PI);
    REQUIRE(spec.size() == 4);
    for (const Orthogeodesic& g : spec.records)
        CHECK(g.length == doctest::Approx(2.0 * M_PI).epsilon(1e-13));
    std::multiset<std::pair<long long, long long>> xs;
    for (const Orthogeodesic& g : spec.records) xs.insert({g.xi[0], g.xi[1]});
    std::multiset<std::pair<long long, long long>> expect{{-1, 0}, {0, -1}, {0, 1}, {1, 0}};
    CHECK(xs == expect);
}

TEST_CASE("counting function for origin points matches shell counts") {
    ConvexBody p = ConvexBody::point(Vec{0.0, 0.0});
    LengthSpectrum spec = length_spectrum(p, p, 1.5 * 2.0 * M_PI);
    CHECK(counting_function(spec, 1.5 * 2.0 * M_PI) == 8);  // shells 1 and sqrt(2)
    CHECK(counting_function(spec, 1.2 * 2.0 * M_PI) == 4);
    CHECK_THROWS_AS(counting_function(spec, 100.0), PreconditionError);
}

TEST_CASE("disk pair record count equals the lattice-membership oracle") {
    ConvexBody d1 = ConvexBody::ball(Vec{0.1, 0.3}, 0.22);
    ConvexBody d2 = ConvexBody::ball(Vec{-0.4, 0.2}, 0.31);
    double T = 40.0;
    LengthSpectrum spec = length_spectrum(d1, d2, T);
    // l(xi) = |2 pi xi + c2 - c1| - r1 - r2, membership in closed form.
    Vec dc = Vec{-0.4, 0.2} - Vec{0.1, 0.3};
    long long want = 0;
    for (long long i = -10; i <= 10; ++i)
        for (long long j = -10; j <= 10; ++j) {
            double l = norm(2.0 * M_PI * Vec{double(i), double(j)} + dc) - 0.53;
            if (l > spec.T0 && l <= T) ++want;
        }
    CHECK(static_cast<long long>(spec.size()) == want);
    // 20 intermediate cutoffs agree as well.
    for (int k = 1; k <= 20; ++k) {
        double t = spec.T0 + (T - spec.T0) * k / 20.0 - 0.37;
        if (t <= spec.T0) continue;
        long long a = counting_function(spec, t);
        long long b = 0;
        for (long long i = -10; i <= 10; ++i)
            for (long long j = -10; j <= 10; ++j) {
                double l = norm(2.0 * M_PI * Vec{double(i), double(j)} + dc) - 0.53;
                if (l > spec.T0 && l <= t) ++b;
            }
        CHECK(a == b);
    }
}

TEST_CASE("holonomy phases for points with half-integer beta") {
    ConvexBody p1 = ConvexBody::point(Vec{0.0, 0.0});
    ConvexBody p2 = ConvexBody::point(Vec{0.3, 0.4});
    OneForm form;
    form.beta = Vec{0.5, 0.0};
    LengthSpectrum spec = length_spectrum(p1, p2, 3.0 * 2.0 * M_PI, form);
    REQUIRE(spec.size() > 0);
    for (const Orthogeodesic& g : spec.records) {
        // beta . displacement = pi xi_1 + 0.5 * 0.3.
        double want = M_PI * static_cast<double>(g.xi[0]) + 0.5 * 0.3;
        CHECK(std::abs(g.holonomy_phase - std::polar(1.0, want)) < 1e-12);
    }

    // A pure gradient term df shifts phases by f(foot2) - f(foot1).
    OneForm withf = form;
    OneForm::FourierTerm t;
    t.k = LatticeVec{1, 0};
    t.cos_coeff = 0.2;
    withf.f_terms.push_back(t);
    LengthSpectrum spec2 = length_spectrum(p1, p2, 3.0 * 2.0 * M_PI, withf);
    REQUIRE(spec2.size() == spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const Orthogeodesic& g = spec2.records[i];
        double df = 0.2 * (std::cos(g.foot2[0]) - std::cos(g.foot1[0]));
        CHECK(std::abs(g.holonomy_phase -
                       spec.records[i].holonomy_phase * std::polar(1.0, df)) < 1e-12);
    }
}

TEST_CASE("length symmetry between the two orientations") {
    ConvexBody ell = ConvexBody::ellipsoid(Vec{0.2, 0.1}, {{0.09, 0.01}, {0.01, 0.04}});
    ConvexBody disk = ConvexBody::ball(Vec{-0.3, 0.5}, 0.2);
    OneForm form;
    form.beta = Vec{0.3, 0.7};
    double T = 30.0;
    LengthSpectrum s12 = length_spectrum(ell, disk, T, form);
    LengthSpectrum s21 = length_spectrum(disk, ell, T, form);
    REQUIRE(s12.size() == s21.size());
    std::vector<double> l12, l21;
    for (const auto& g : s12.records) l12.push_back(g.length);
    for (const auto& g : s21.records) l21.push_back(g.length);
    std::sort(l12.begin(), l12.end());
    std::sort(l21.begin(), l21.end());
    for (std::size_t i = 0; i < l12.size(); ++i) CHECK(std::abs(l12[i] - l21[i]) < 1e-9);

    // Matched records (xi <-> -xi) carry conjugate phases when f = 0.
    std::map<std::pair<long long, long long>, Complex> phases;
    for (const auto& g : s12.records) phases[{g.xi[0], g.xi[1]}] = g.holonomy_phase;
    for (const auto& g : s21.records) {
        auto it = phases.find({-g.xi[0], -g.xi[1]});
        REQUIRE(it != phases.end());
        CHECK(std::abs(g.holonomy_phase - std::conj(it->second)) < 1e-9);
    }
}

TEST_CASE("lengths are invariant under a common translation") {
    ConvexBody ell = ConvexBody::ellipsoid(Vec{0.0, 0.0}, {{0.16, 0.0}, {0.0, 0.0625}});
    ConvexBody disk = ConvexBody::ball(Vec{0.5, -0.2}, 0.3);
    Vec shift{0.9, -1.7};
    double T = 26.0;
    LengthSpectrum a = length_spectrum(ell, disk, T);
    LengthSpectrum b = length_spectrum(ell.translated(shift), disk.translated(shift), T);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(std::abs(a.records[i].length - b.records[i].length) < 1e-9);
}

TEST_CASE("counting is monotone and sandwiched by the center point pair") {
    ConvexBody ell = ConvexBody::ellipsoid(Vec{0.1, 0.2}, {{0.16, 0.0}, {0.0, 0.0625}});
    ConvexBody disk = ConvexBody::ball(Vec{0.4, 0.6}, 0.3);
    double T = 35.0;
    LengthSpectrum spec = length_spectrum(ell, disk, T);
    long long prev = 0;
    for (double t = spec.T0 + 0.5; t <= T; t += 0.5) {
        long long n = counting_function(spec, t);
        CHECK(n >= prev);
        prev = n;
    }
    // Bodies only shorten distances: N_bodies(T) <= N_points(T + R1 + R2)
    // for the center pair, with R_i the circumradius about the center.
    double r1 = 0.4, r2 = 0.3;  // max semi-axis / radius
    ConvexBody c1 = ConvexBody::point(Vec{0.1, 0.2});
    ConvexBody c2 = ConvexBody::point(Vec{0.4, 0.6});
    LengthSpectrum pts = length_spectrum(c1, c2, T + r1 + r2);
    CHECK(static_cast<long long>(spec.size()) <=
          counting_function(pts, T + r1 + r2));
}

TEST_CASE("counting error against the scaled Steiner volume stays O(T^{d-1})") {
    ConvexBody d1 = ConvexBody::ball(Vec{0.1, 0.3}, 0.22);
    ConvexBody d2 = ConvexBody::ball(Vec{-0.4, 0.2}, 0.31);
    double T = 100.0;
    LengthSpectrum spec = length_spectrum_range(d1, d2, 0.0, T);
    ConvexBody c = minkowski_difference(d1, d2);
    std::vector<double> poly = steiner_polynomial(c);
    auto steiner_pred = [&](double t) {
        double p = 0, tp = 1;
        for (double coeff : poly) {
            p += coeff * tp;
            tp *= t;
        }
        return p / std::pow(2.0 * M_PI, 2);
    };
    double worst = 0;
    for (double t = 10.0; t <= T; t += 1.37) {
        long long n = 0;
        for (const auto& g : spec.records)
            if (g.length <= t) ++n;
        double err = std::abs(static_cast<double>(n) - steiner_pred(t));
        worst = std::max(worst, err / t);
    }
    CHECK(worst < 2.0);  // bounded ratio |N - P| / T^{d-1}
}

TEST_CASE("parallel and serial enumerations agree exactly") {
    ConvexBody ell = ConvexBody::ellipsoid(Vec{0.0, 0.1}, {{0.09, 0.0}, {0.0, 0.04}});
    ConvexBody disk = ConvexBody::ball(Vec{0.5, 0.5}, 0.25);
    double T = 22.0;
    LengthSpectrum a = length_spectrum(ell, disk, T);
    LengthSpectrum b = length_spectrum_serial(ell, disk, T);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.records[i].length == b.records[i].length);
        CHECK(a.records[i].xi == b.records[i].xi);
    }
}

TEST_CASE("spectrum CSV export carries the expected header") {
    ConvexBody p = ConvexBody::point(Vec{0.0, 0.0});
    LengthSpectrum spec = length_spectrum(p, p, 8.0);
    std::string csv = spectrum_csv(spec);
    CHECK(csv.rfind("xi_0,xi_1,length,u_0,u_1,foot1_0,foot1_1,foot2_0,foot2_1,phase_re,phase_im",
                    0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + static_cast<long>(spec.size()));
}
