#include <cmath>
#include <random>

#include "doctest.h"
#include "oracle/oracles.hpp"
#include "orthospec/body.hpp"
#include "orthospec/errors.hpp"
#include "orthospec/quadrature.hpp"
#include "orthospec/steiner.hpp"

using namespace orthospec;

namespace {

Vec unit2(double phi) { return Vec{std::cos(phi), std::sin(phi)}; }

ConvexBody spec_ellipse() {
    return ConvexBody::ellipsoid(Vec{0.0, 0.0}, {{0.16, 0.0}, {0.0, 0.0625}});
}

}  // namespace

TEST_CASE("support values for ball, point and ellipsoid") {
    ConvexBody ball = ConvexBody::ball(Vec{0.1, 0.0}, 0.3);
    CHECK(support(ball, Vec{1.0, 0.0}) == doctest::Approx(0.4).epsilon(1e-14));

    ConvexBody pt = ConvexBody::point(Vec{0.2, 0.7});
    CHECK(support(pt, Vec{0.0, 1.0}) == doctest::Approx(0.7).epsilon(1e-14));

    ConvexBody ell = spec_ellipse();
    // Oracle: max over a dense boundary sample of <k, u>.
    double best = -1e300;
    for (int i = 0; i < 1000000; ++i) {
        double th = 2.0 * M_PI * i / 1000000.0;
        best = std::max(best, 0.25 * std::sin(th));  // k_2 = b sin(th)
    }
    CHECK(support(ell, Vec{0.0, 1.0}) == doctest::Approx(best).epsilon(1e-9));
    CHECK(support(ell, Vec{0.0, 1.0}) == doctest::Approx(0.25).epsilon(1e-12));

    CHECK_THROWS_AS(support(ell, Vec{0.5, 0.5}), PreconditionError);
}

TEST_CASE("boundary points and finite-difference gradients") {
    ConvexBody ball = ConvexBody::ball(Vec{-0.2, 0.4}, 0.25);
    Vec u = unit2(1.1);
    Vec x = boundary_point(ball, u);
    CHECK(norm(x - (Vec{-0.2, 0.4} + 0.25 * u)) < 1e-14);

    ConvexBody pt = ConvexBody::point(Vec{0.3, -0.1});
    CHECK(norm(boundary_point(pt, u) - Vec{0.3, -0.1}) < 1e-14);

    ConvexBody ell = spec_ellipse();
    for (double phi : {0.0, 0.7, 2.3, 4.0, 5.9}) {
        Vec uu = unit2(phi);
        Vec g = boundary_point(ell, uu);
        Vec fd = oracle::support_gradient_fd(ell, uu);
        CHECK(norm(g - fd) < 1e-7);
    }

    // 3D ellipsoid gradient against finite differences.
    ConvexBody e3 = ConvexBody::ellipsoid(Vec{0.1, 0.0, -0.2},
                                          {{0.09, 0.01, 0.0}, {0.01, 0.16, 0.02}, {0.0, 0.02, 0.25}});
    SphereQuadrature q = SphereQuadrature::sphere(6, 12);
    for (std::size_t i = 0; i < q.size(); i += 7) {
        Vec fd = oracle::support_gradient_fd(e3, q.nodes[i]);
        CHECK(norm(e3.support_gradient(q.nodes[i]) - fd) < 1e-7);
    }
}

TEST_CASE("minkowski difference support identity") {
    ConvexBody b1 = ConvexBody::ball(Vec{0.3, 0.1}, 0.2);
    ConvexBody b2 = ConvexBody::ball(Vec{-0.1, 0.5}, 0.35);
    ConvexBody diff = minkowski_difference(b1, b2);
    CHECK(diff.kind() == "ball");
    CHECK(support(diff, Vec{1.0, 0.0}) ==
          doctest::Approx(support(b1, Vec{1.0, 0.0}) + support(b2, Vec{-1.0, 0.0})).epsilon(1e-13));

    ConvexBody pt = ConvexBody::point(Vec{0.4, -0.2});
    ConvexBody shifted = minkowski_difference(b1, pt);
    for (double phi : {0.3, 1.9, 3.3}) {
        Vec u = unit2(phi);
        CHECK(support(shifted, u) ==
              doctest::Approx(support(b1, u) + support(pt, -u)).epsilon(1e-13));
    }

    ConvexBody ell = spec_ellipse();
    ConvexBody mixed = minkowski_difference(ell, b2);
    for (double phi : {0.0, 0.9, 2.7, 5.1}) {
        Vec u = unit2(phi);
        CHECK(support(mixed, u) ==
              doctest::Approx(support(ell, u) + support(b2, -u)).epsilon(1e-13));
    }

    ConvexBody p3 = ConvexBody::point(Vec{0.0, 0.0, 0.0});
    CHECK_THROWS_AS(minkowski_difference(b1, p3), PreconditionError);
}

TEST_CASE("steiner volumes: disk, ellipse, ball") {
    ConvexBody disk = ConvexBody::ball(Vec{0.2, -0.3}, 0.3);
    CHECK(steiner_volume(disk, 0.2) == doctest::Approx(M_PI * 0.25).epsilon(1e-12));

    ConvexBody ell = spec_ellipse();
    CHECK(steiner_volume(ell, 0.0) == doctest::Approx(M_PI * 0.4 * 0.25).epsilon(1e-9));

    ConvexBody ball3 = ConvexBody::ball(Vec{0.0, 0.0, 0.0}, 0.3);
    CHECK(steiner_volume(ball3, 0.1) ==
          doctest::Approx(4.0 * M_PI / 3.0 * std::pow(0.4, 3)).epsilon(1e-12));

    CHECK_THROWS_AS(steiner_volume(disk, -0.1), PreconditionError);

    // Parallel kernel and serial reference agree bit-for-bit.
    ConvexBody e3 = ConvexBody::ellipsoid(Vec{0.0, 0.0, 0.0},
                                          {{0.16, 0.0, 0.0}, {0.0, 0.09, 0.0}, {0.0, 0.0, 0.04}});
    CHECK(steiner_volume(e3, 0.4) == steiner_volume_serial(e3, 0.4));
}

TEST_CASE("intrinsic volumes of points, disks and balls") {
    ConvexBody pt = ConvexBody::point(Vec{0.3, 0.8});
    auto v = intrinsic_volumes(pt);
    CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(v[1]) < 1e-10);
    CHECK(std::abs(v[2]) < 1e-10);

    double r = 0.3;
    ConvexBody disk = ConvexBody::ball(Vec{0.0, 0.0}, r);
    v = intrinsic_volumes(disk);
    CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(v[1] == doctest::Approx(M_PI * r).epsilon(1e-9));
    CHECK(v[2] == doctest::Approx(M_PI * r * r).epsilon(1e-9));

    ConvexBody ball3 = ConvexBody::ball(Vec{0.1, 0.2, 0.3}, r);
    v = intrinsic_volumes(ball3);
    CHECK(v[2] == doctest::Approx(2.0 * M_PI * r * r).epsilon(1e-9));
    CHECK(v[3] == doctest::Approx(4.0 * M_PI / 3.0 * r * r * r).epsilon(1e-9));
}

TEST_CASE("support series body: convexity validation and geometry") {
    // Mild perturbation of a disk stays strictly convex.
    ConvexBody wavy = ConvexBody::support_series_2d(0.5, {0.0, 0.02}, {0.01, 0.0});
    wavy.validate();
    // Large high-order coefficient violates h + h'' > 0.
    CHECK_THROWS_AS(ConvexBody::support_series_2d(0.5, {0.0, 0.0, 0.0, 0.2}, {0.0, 0.0, 0.0, 0.0}),
                    BodyError);

    // Area from the boundary integral matches a dense shoelace evaluation.
    double area = steiner_volume(wavy, 0.0);
    double shoelace = 0.0;
    const int n = 200000;
    Vec prev = wavy.support_gradient(unit2(0.0));
    for (int i = 1; i <= n; ++i) {
        Vec cur = wavy.support_gradient(unit2(2.0 * M_PI * i / n));
        shoelace += prev[0] * cur[1] - prev[1] * cur[0];
        prev = cur;
    }
    shoelace *= 0.5;
    CHECK(area == doctest::Approx(shoelace).epsilon(1e-8));
}

TEST_CASE("homogeneity and subadditivity of support functions") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    ConvexBody bodies[] = {spec_ellipse(), ConvexBody::ball(Vec{0.2, 0.1}, 0.4),
                           ConvexBody::support_series_2d(0.6, {0.03, 0.01}, {0.0, 0.02})};
    for (const ConvexBody& b : bodies) {
        for (int i = 0; i < 100; ++i) {
            Vec u = unit2(ang(rng));
            double h = b.support(u);
            for (double lam : {0.5, 2.0})
                CHECK(std::abs(b.support(lam * u) - lam * h) <= 1e-10 * lam);
            Vec v = unit2(ang(rng));
            CHECK(b.support(u + v) <= b.support(u) + b.support(v) + 1e-10);
        }
    }
}

TEST_CASE("steiner polynomiality at held-out nodes") {
    ConvexBody ell = spec_ellipse();
    std::vector<double> coeffs = steiner_polynomial(ell);
    for (double t : {0.23, 0.77, 1.31}) {
        double fitted = 0, tp = 1;
        for (double c : coeffs) {
            fitted += c * tp;
            tp *= t;
        }
        double direct = steiner_volume(ell, t);
        CHECK(std::abs(fitted - direct) <= 1e-8 * std::abs(direct));
    }
}

TEST_CASE("V_{d-1} is half the boundary volume") {
    ConvexBody ell = spec_ellipse();
    auto v = intrinsic_volumes(ell);
    double per = oracle::perimeter_polyline_2d(ell);
    CHECK(std::abs(v[1] - 0.5 * per) <= 1e-6 * per);

    // d = 3 ellipsoid: area oracle by dense parametric quadrature.
    double a = 0.4, b = 0.3, c = 0.2;
    ConvexBody e3 = ConvexBody::ellipsoid(
        Vec{0.0, 0.0, 0.0}, {{a * a, 0.0, 0.0}, {0.0, b * b, 0.0}, {0.0, 0.0, c * c}});
    auto v3 = intrinsic_volumes(e3);
    double area = oracle::ellipsoid_area_parametric(a, b, c);
    CHECK(std::abs(v3[2] - 0.5 * area) <= 1e-6 * area);
}

TEST_CASE("intrinsic volumes are translation invariant") {
    ConvexBody ell = spec_ellipse();
    ConvexBody moved = ell.translated(Vec{1.3, -2.1});
    auto v0 = intrinsic_volumes(ell);
    auto v1 = intrinsic_volumes(moved);
    for (std::size_t i = 0; i < v0.size(); ++i) CHECK(std::abs(v0[i] - v1[i]) < 1e-10);
}

TEST_CASE("body JSON round trip and schema errors") {
    nlohmann::json j = {{"kind", "ball"}, {"center", {0.1, 0.2}}, {"radius", 0.3}};
    ConvexBody b = ConvexBody::from_json(j);
    CHECK(b.kind() == "ball");
    CHECK(b.to_json() == j);

    CHECK_THROWS_AS(
        ConvexBody::from_json({{"kind", "ball"}, {"center", {0.1, 0.2}}, {"radius", -0.3}}),
        ConfigError);
    CHECK_THROWS_AS(ConvexBody::from_json({{"kind", "cube"}, {"center", {0.0, 0.0}}}), ConfigError);
    CHECK_THROWS_AS(
        ConvexBody::from_json({{"kind", "ball"}, {"center", {0.1, 0.2}}, {"radius", 0.3}, {"x", 1}}),
        ConfigError);
    CHECK_THROWS_AS(
        ConvexBody::from_json(
            {{"kind", "ellipsoid"}, {"center", {0.0, 0.0}}, {"Q", {{0.1, 0.0}, {0.0, -0.2}}}}),
        BodyError);
}
