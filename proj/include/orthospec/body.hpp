#pragma once

#include <memory>
#include <string>
#include <vector>

#include "orthospec/vec.hpp"

#include "json.hpp"

namespace orthospec {

/// Small dense symmetric matrix, used for tangential Hessians ((d-1) x (d-1)).
struct SmallMat {
    std::array<double, 9> m{};
    int n = 0;

    explicit SmallMat(int size = 0) : n(size) {}
    double& at(int i, int j) { return m[i * n + j]; }
    double at(int i, int j) const { return m[i * n + j]; }

    SmallMat& operator+=(const SmallMat& o) {
        for (int i = 0; i < n * n; ++i) m[i] += o.m[i];
        return *this;
    }
    /// det(M + t I).
    double det_shifted(double t) const;
    /// Minimum eigenvalue (n <= 2).
    double min_eigenvalue() const;
};

/// Strictly convex compact body in R^d given through its support function
/// h(u) = max_{k in K} <k, u>.  Points are admitted with h linear.
/// Immutable after construction; cheap to copy and safe to share across threads.
class ConvexBody {
public:
    struct Impl;

    ConvexBody() = default;

    static ConvexBody point(const Vec& coords);
    static ConvexBody ball(const Vec& center, double radius);
    /// h(u) = <center, u> + sqrt(u^T Q u); Q symmetric positive definite.
    static ConvexBody ellipsoid(const Vec& center, const std::vector<std::vector<double>>& Q);
    /// d = 2 body with support series h(phi) = a0 + sum_k (c_k cos k phi + s_k sin k phi).
    /// Requires h + h'' > 0 on a dense grid.
    static ConvexBody support_series_2d(double a0, const std::vector<double>& cos_coeffs,
                                        const std::vector<double>& sin_coeffs);

    /// Parses {"kind": "ball" | "point" | "ellipsoid" | "support_series_2d", ...}.
    static ConvexBody from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    int dim() const;
    bool is_point() const;
    /// Every summand is a point or a ball (closed-form Steiner data available in any d).
    bool is_point_or_ball() const;
    std::string kind() const;

    /// Support value at unit u; homogeneous extension used internally.
    double support(const Vec& u) const;
    /// Gradient of the (1-homogeneous) support function at unit u;
    /// equals the boundary point with outward normal u.
    Vec support_gradient(const Vec& u) const;
    /// Tangential Hessian of the 1-homogeneous support function at unit u,
    /// expressed in the given orthonormal tangent basis.  Its eigenvalues are
    /// the principal radii of curvature; zero for points.
    SmallMat curvature(const Vec& u, const std::vector<Vec>& basis) const;

    /// max_u h(u) over the sphere (hull radius around the origin), sampled.
    double max_support() const;
    /// Diameter = max width = max_u (h(u) + h(-u)), sampled.
    double diameter() const;

    ConvexBody translated(const Vec& t) const;

    /// Checks homogeneity, strict convexity and the support identity
    /// <boundary_point(u), u> = h(u); throws BodyError on failure.
    void validate() const;

private:
    explicit ConvexBody(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;

    friend ConvexBody minkowski_difference(const ConvexBody& k1, const ConvexBody& k2);
};

/// Support value h_K(u); requires |u| = 1 to 1e-12.
double support(const ConvexBody& body, const Vec& u);

/// Boundary point with outward unit normal u (the point itself for point bodies).
Vec boundary_point(const ConvexBody& body, const Vec& u);

/// Body with support h(u) = h_{K1}(u) + h_{K2}(-u), i.e. K1 - K2 = {a - b}.
ConvexBody minkowski_difference(const ConvexBody& k1, const ConvexBody& k2);

}  // namespace orthospec
