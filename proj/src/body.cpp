#include "orthospec/body.hpp"

#include <algorithm>
#include <cmath>

#include "orthospec/errors.hpp"
#include "orthospec/quadrature.hpp"

namespace orthospec {

double SmallMat::det_shifted(double t) const {
    if (n == 0) return 1.0;
    if (n == 1) return m[0] + t;
    if (n == 2) return (m[0] + t) * (m[3] + t) - m[1] * m[2];
    throw PreconditionError("SmallMat::det_shifted: n <= 2 supported");
}

double SmallMat::min_eigenvalue() const {
    if (n == 0) return 0.0;
    if (n == 1) return m[0];
    if (n == 2) {
        double tr = m[0] + m[3];
        double det = m[0] * m[3] - m[1] * m[2];
        double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
        return 0.5 * tr - disc;
    }
    throw PreconditionError("SmallMat::min_eigenvalue: n <= 2 supported");
}

// ---------------------------------------------------------------------------

struct ConvexBody::Impl {
    enum class Kind { Point, Ball, Ellipsoid, Series2D, Sum };
    Kind kind = Kind::Point;
    int dim = 0;

    // Point / Ball / Ellipsoid.
    Vec center;
    double radius = 0.0;
    std::vector<std::vector<double>> Q;  // row-major symmetric PD matrix

    // Series2D: h(phi) = a0 + sum c_k cos(k phi) + s_k sin(k phi).
    double a0 = 0.0;
    std::vector<double> cosc, sinc;

    // Sum of parts; each part evaluated at +u or -u (reflected).
    struct Part {
        std::shared_ptr<const Impl> body;
        bool reflected = false;
    };
    std::vector<Part> parts;

    double h(const Vec& u) const;
    Vec grad(const Vec& u) const;
    SmallMat curv(const Vec& u, const std::vector<Vec>& basis) const;

    // Series helpers (dim 2 only): value and derivatives of h(phi).
    void series_eval(double phi, double& h0, double& h1, double& h2) const {
        h0 = a0;
        h1 = 0;
        h2 = 0;
        for (std::size_t k = 1; k <= cosc.size(); ++k) {
            double kk = static_cast<double>(k);
            double ck = std::cos(kk * phi), sk = std::sin(kk * phi);
            double a = cosc[k - 1], b = sinc[k - 1];
            h0 += a * ck + b * sk;
            h1 += kk * (-a * sk + b * ck);
            h2 += kk * kk * (-a * ck - b * sk);
        }
    }
};

namespace {

using Impl = ConvexBody::Impl;

Vec mat_vec(const std::vector<std::vector<double>>& Q, const Vec& u) {
    Vec r(u.d);
    for (int i = 0; i < u.d; ++i) {
        double s = 0;
        for (int j = 0; j < u.d; ++j) s += Q[i][j] * u[j];
        r[i] = s;
    }
    return r;
}

}  // namespace

double Impl::h(const Vec& u) const {
    switch (kind) {
        case Kind::Point:
            return dot(center, u);
        case Kind::Ball:
            return dot(center, u) + radius * norm(u);
        case Kind::Ellipsoid: {
            Vec qu = mat_vec(Q, u);
            return dot(center, u) + std::sqrt(std::max(0.0, dot(u, qu)));
        }
        case Kind::Series2D: {
            double r = norm(u);
            double phi = std::atan2(u[1], u[0]);
            double h0, h1, h2;
            series_eval(phi, h0, h1, h2);
            return r * h0;
        }
        case Kind::Sum: {
            double s = 0;
            for (const Part& p : parts) s += p.body->h(p.reflected ? -u : u);
            return s;
        }
    }
    return 0;
}

Vec Impl::grad(const Vec& u) const {
    switch (kind) {
        case Kind::Point:
            return center;
        case Kind::Ball:
            return center + radius * normalized(u);
        case Kind::Ellipsoid: {
            Vec qu = mat_vec(Q, u);
            double h0 = std::sqrt(std::max(1e-300, dot(u, qu)));
            return center + (1.0 / h0) * qu;
        }
        case Kind::Series2D: {
            double phi = std::atan2(u[1], u[0]);
            double h0, h1, h2;
            series_eval(phi, h0, h1, h2);
            Vec ur{std::cos(phi), std::sin(phi)};
            Vec ut{-std::sin(phi), std::cos(phi)};
            return h0 * ur + h1 * ut;
        }
        case Kind::Sum: {
            Vec s(u.d);
            for (const Part& p : parts) {
                Vec g = p.body->grad(p.reflected ? -u : u);
                if (p.reflected) g = -g;
                s += g;
            }
            return s;
        }
    }
    return Vec(dim);
}

SmallMat Impl::curv(const Vec& u, const std::vector<Vec>& basis) const {
    const int n = static_cast<int>(basis.size());
    SmallMat w(n);
    switch (kind) {
        case Kind::Point:
            return w;
        case Kind::Ball:
            for (int i = 0; i < n; ++i) w.at(i, i) = radius;
            return w;
        case Kind::Ellipsoid: {
            Vec qu = mat_vec(Q, u);
            double h0 = std::sqrt(std::max(1e-300, dot(u, qu)));
            for (int i = 0; i < n; ++i) {
                Vec qti = mat_vec(Q, basis[i]);
                for (int j = 0; j < n; ++j) {
                    w.at(i, j) = dot(basis[j], qti) / h0 -
                                 dot(basis[i], qu) * dot(basis[j], qu) / (h0 * h0 * h0);
                }
            }
            return w;
        }
        case Kind::Series2D: {
            double phi = std::atan2(u[1], u[0]);
            double h0, h1, h2;
            series_eval(phi, h0, h1, h2);
            double rho = h0 + h2;  // radius of curvature
            if (rho <= 0) throw BodyError("support_series_2d: strict convexity violated (h + h'' <= 0)");
            // Basis vector is +-(-u2, u1); rho is basis-sign independent.
            w.at(0, 0) = rho;
            return w;
        }
        case Kind::Sum: {
            for (const Part& p : parts) {
                if (!p.reflected) {
                    w += p.body->curv(u, basis);
                } else {
                    // h(u) = h_B(-u): tangential Hessian at u equals B's at -u
                    // in the same basis (two sign flips cancel).
                    w += p.body->curv(-u, basis);
                }
            }
            return w;
        }
    }
    return w;
}

// ---------------------------------------------------------------------------

ConvexBody ConvexBody::point(const Vec& coords) {
    auto impl = std::make_shared<Impl>();
    impl->kind = Impl::Kind::Point;
    impl->dim = coords.d;
    impl->center = coords;
    return ConvexBody(std::move(impl));
}

ConvexBody ConvexBody::ball(const Vec& center, double radius) {
    if (radius <= 0) throw BodyError("ball: radius must be positive");
    auto impl = std::make_shared<Impl>();
    impl->kind = Impl::Kind::Ball;
    impl->dim = center.d;
    impl->center = center;
    impl->radius = radius;
    return ConvexBody(std::move(impl));
}

ConvexBody ConvexBody::ellipsoid(const Vec& center, const std::vector<std::vector<double>>& Q) {
    const int d = center.d;
    if (static_cast<int>(Q.size()) != d) throw BodyError("ellipsoid: Q must be d x d");
    for (const auto& row : Q)
        if (static_cast<int>(row.size()) != d) throw BodyError("ellipsoid: Q must be d x d");
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (std::abs(Q[i][j] - Q[j][i]) > 1e-12) throw BodyError("ellipsoid: Q must be symmetric");
    // Positive definiteness via Cholesky.
    std::vector<std::vector<double>> L(d, std::vector<double>(d, 0.0));
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = Q[i][j];
            for (int k = 0; k < j; ++k) s -= L[i][k] * L[j][k];
            if (i == j) {
                if (s <= 0) throw BodyError("ellipsoid: Q must be positive definite");
                L[i][i] = std::sqrt(s);
            } else {
                L[i][j] = s / L[j][j];
            }
        }
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = Impl::Kind::Ellipsoid;
    impl->dim = d;
    impl->center = center;
    impl->Q = Q;
    return ConvexBody(std::move(impl));
}

ConvexBody ConvexBody::support_series_2d(double a0, const std::vector<double>& cos_coeffs,
                                         const std::vector<double>& sin_coeffs) {
    if (cos_coeffs.size() != sin_coeffs.size())
        throw BodyError("support_series_2d: cos/sin coefficient lists must have equal length");
    auto impl = std::make_shared<Impl>();
    impl->kind = Impl::Kind::Series2D;
    impl->dim = 2;
    impl->a0 = a0;
    impl->cosc = cos_coeffs;
    impl->sinc = sin_coeffs;
    // Strict convexity: h + h'' > 0 on a dense grid; h > 0 as well (body contains
    // a neighborhood scale in every direction only if h can be negative for
    // off-origin bodies, so only the curvature condition is enforced).
    for (int i = 0; i < 2048; ++i) {
        double phi = 2.0 * M_PI * i / 2048.0;
        double h0, h1, h2;
        impl->series_eval(phi, h0, h1, h2);
        if (h0 + h2 <= 1e-12)
            throw BodyError("support_series_2d: strict convexity violated (h + h'' <= 0)");
    }
    return ConvexBody(std::move(impl));
}

ConvexBody minkowski_difference(const ConvexBody& k1, const ConvexBody& k2) {
    if (k1.dim() != k2.dim()) throw PreconditionError("minkowski_difference: dimension mismatch");
    // Ball - ball and translations collapse to closed forms.
    const Impl& a = *k1.impl_;
    const Impl& b = *k2.impl_;
    if ((a.kind == Impl::Kind::Ball || a.kind == Impl::Kind::Point) &&
        (b.kind == Impl::Kind::Ball || b.kind == Impl::Kind::Point)) {
        double r = a.radius + b.radius;
        Vec c = a.center - b.center;
        return r > 0 ? ConvexBody::ball(c, r) : ConvexBody::point(c);
    }
    if (b.kind == Impl::Kind::Point) return k1.translated(-b.center);
    auto impl = std::make_shared<Impl>();
    impl->kind = Impl::Kind::Sum;
    impl->dim = k1.dim();
    impl->parts.push_back({k1.impl_, false});
    impl->parts.push_back({k2.impl_, true});
    return ConvexBody(std::move(impl));
}

ConvexBody ConvexBody::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("body", "expected an object");
    if (!j.contains("kind")) throw ConfigError("body.kind", "missing");
    std::string kind = j.at("kind").get<std::string>();
    auto get_vec = [&](const char* key) {
        if (!j.contains(key)) throw ConfigError(std::string("body.") + key, "missing");
        std::vector<double> v = j.at(key).get<std::vector<double>>();
        if (v.size() < 2 || v.size() > kMaxDim)
            throw ConfigError(std::string("body.") + key, "dimension out of range");
        return Vec::from(v);
    };
    auto check_keys = [&](std::initializer_list<const char*> allowed) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            bool ok = false;
            for (const char* k : allowed)
                if (it.key() == k) ok = true;
            if (!ok) throw ConfigError("body." + it.key(), "unknown key");
        }
    };
    if (kind == "point") {
        check_keys({"kind", "coords"});
        return point(get_vec("coords"));
    }
    if (kind == "ball") {
        check_keys({"kind", "center", "radius"});
        if (!j.contains("radius")) throw ConfigError("body.radius", "missing");
        double r = j.at("radius").get<double>();
        if (r <= 0) throw ConfigError("body.radius", "must be positive");
        return ball(get_vec("center"), r);
    }
    if (kind == "ellipsoid") {
        check_keys({"kind", "center", "Q"});
        if (!j.contains("Q")) throw ConfigError("body.Q", "missing");
        auto Q = j.at("Q").get<std::vector<std::vector<double>>>();
        return ellipsoid(get_vec("center"), Q);
    }
    if (kind == "support_series_2d") {
        check_keys({"kind", "a0", "cos", "sin"});
        if (!j.contains("a0")) throw ConfigError("body.a0", "missing");
        std::vector<double> c, s;
        if (j.contains("cos")) c = j.at("cos").get<std::vector<double>>();
        if (j.contains("sin")) s = j.at("sin").get<std::vector<double>>();
        return support_series_2d(j.at("a0").get<double>(), c, s);
    }
    throw ConfigError("body.kind", "unknown kind '" + kind + "'");
}

nlohmann::json ConvexBody::to_json() const {
    const Impl& b = *impl_;
    nlohmann::json j;
    switch (b.kind) {
        case Impl::Kind::Point:
            j["kind"] = "point";
            j["coords"] = b.center.to_vector();
            break;
        case Impl::Kind::Ball:
            j["kind"] = "ball";
            j["center"] = b.center.to_vector();
            j["radius"] = b.radius;
            break;
        case Impl::Kind::Ellipsoid:
            j["kind"] = "ellipsoid";
            j["center"] = b.center.to_vector();
            j["Q"] = b.Q;
            break;
        case Impl::Kind::Series2D:
            j["kind"] = "support_series_2d";
            j["a0"] = b.a0;
            j["cos"] = b.cosc;
            j["sin"] = b.sinc;
            break;
        case Impl::Kind::Sum: {
            j["kind"] = "sum";
            nlohmann::json parts = nlohmann::json::array();
            for (const auto& p : b.parts) {
                nlohmann::json pj = ConvexBody(p.body).to_json();
                pj["reflected"] = p.reflected;
                parts.push_back(pj);
            }
            j["parts"] = parts;
            break;
        }
    }
    return j;
}

int ConvexBody::dim() const { return impl_->dim; }

bool ConvexBody::is_point() const { return impl_->kind == Impl::Kind::Point; }

bool ConvexBody::is_point_or_ball() const {
    const Impl& b = *impl_;
    if (b.kind == Impl::Kind::Point || b.kind == Impl::Kind::Ball) return true;
    if (b.kind == Impl::Kind::Sum) {
        for (const auto& p : b.parts) {
            if (p.body->kind != Impl::Kind::Point && p.body->kind != Impl::Kind::Ball) return false;
        }
        return true;
    }
    return false;
}

std::string ConvexBody::kind() const {
    switch (impl_->kind) {
        case Impl::Kind::Point: return "point";
        case Impl::Kind::Ball: return "ball";
        case Impl::Kind::Ellipsoid: return "ellipsoid";
        case Impl::Kind::Series2D: return "support_series_2d";
        case Impl::Kind::Sum: return "sum";
    }
    return "?";
}

double ConvexBody::support(const Vec& u) const { return impl_->h(u); }

Vec ConvexBody::support_gradient(const Vec& u) const { return impl_->grad(u); }

SmallMat ConvexBody::curvature(const Vec& u, const std::vector<Vec>& basis) const {
    return impl_->curv(u, basis);
}

namespace {

double hull_radius_closed_form(const Impl& b) {
    if (b.kind == Impl::Kind::Sum) {
        double m = 0;
        for (const auto& p : b.parts) m += hull_radius_closed_form(*p.body);
        return m;
    }
    return norm(b.center) + b.radius;
}

double diameter_closed_form(const Impl& b) {
    if (b.kind == Impl::Kind::Sum) {
        double m = 0;
        for (const auto& p : b.parts) m += diameter_closed_form(*p.body);
        return m;
    }
    return 2.0 * b.radius;
}

std::vector<Vec> sample_directions(int d) {
    if (d == 2) {
        std::vector<Vec> dirs;
        dirs.reserve(512);
        for (int i = 0; i < 512; ++i) {
            double phi = 2.0 * M_PI * i / 512;
            dirs.push_back(Vec{std::cos(phi), std::sin(phi)});
        }
        return dirs;
    }
    return SphereQuadrature::sphere(32, 64).nodes;
}

}  // namespace

double ConvexBody::max_support() const {
    if (dim() > 3) return hull_radius_closed_form(*impl_);  // points/balls only
    double m = 0;
    for (const Vec& u : sample_directions(dim())) m = std::max(m, std::abs(impl_->h(u)));
    return m;
}

double ConvexBody::diameter() const {
    if (is_point()) return 0.0;
    if (impl_->kind == Impl::Kind::Ball) return 2.0 * impl_->radius;
    if (dim() > 3) return diameter_closed_form(*impl_);  // points/balls only
    double m = 0;
    for (const Vec& u : sample_directions(dim()))
        m = std::max(m, impl_->h(u) + impl_->h(-u));
    return m;
}

ConvexBody ConvexBody::translated(const Vec& t) const {
    const Impl& b = *impl_;
    auto impl = std::make_shared<Impl>(b);
    if (b.kind == Impl::Kind::Sum) {
        // Fold the translation into a point summand.
        auto pt = std::make_shared<Impl>();
        pt->kind = Impl::Kind::Point;
        pt->dim = b.dim;
        pt->center = t;
        impl->parts.push_back({std::move(pt), false});
    } else {
        impl->center = b.center + t;
    }
    return ConvexBody(std::move(impl));
}

void ConvexBody::validate() const {
    const int d = dim();
    if (d < 2) throw BodyError("validate: dimension >= 2 required");
    SphereQuadrature q = d <= 3 ? SphereQuadrature::standard(d) : SphereQuadrature::circle(4);
    std::vector<Vec> dirs;
    if (d <= 3) {
        dirs = q.nodes;
    } else {
        for (int i = 0; i < d; ++i) {
            Vec e(d);
            e[i] = 1;
            dirs.push_back(e);
            dirs.push_back(-e);
        }
    }
    for (const Vec& u : dirs) {
        double h = impl_->h(u);
        for (double lam : {0.5, 2.0}) {
            if (std::abs(impl_->h(lam * u) - lam * h) > 1e-10 * std::max(1.0, lam))
                throw BodyError("validate: support function not 1-homogeneous");
        }
        Vec x = impl_->grad(u);
        if (std::abs(dot(x, u) - h) > 1e-10)
            throw BodyError("validate: boundary_point(u) . u != h(u)");
        if (!is_point() && d <= 3) {
            SmallMat w = impl_->curv(u, tangent_basis(u));
            if (!is_point_or_ball() && w.min_eigenvalue() <= 0)
                throw BodyError("validate: tangential Hessian not positive definite");
        }
    }
}

double support(const ConvexBody& body, const Vec& u) {
    if (!is_unit(u)) throw PreconditionError("support: |u| = 1 required");
    return body.support(u);
}

Vec boundary_point(const ConvexBody& body, const Vec& u) {
    if (!is_unit(u)) throw PreconditionError("boundary_point: |u| = 1 required");
    return body.support_gradient(u);
}

}  // namespace orthospec
