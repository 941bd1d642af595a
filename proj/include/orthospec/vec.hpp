#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

#include "orthospec/errors.hpp"

namespace orthospec {

/// Maximum supported ambient dimension.  Generic bodies are limited to
/// d = 2, 3 elsewhere; points and balls work up to kMaxDim.
inline constexpr int kMaxDim = 8;

/// Small fixed-capacity Euclidean vector; avoids heap traffic in lattice loops.
struct Vec {
    std::array<double, kMaxDim> c{};
    int d = 0;

    Vec() = default;
    explicit Vec(int dim) : d(dim) {
        if (dim < 0 || dim > kMaxDim) throw PreconditionError("Vec: dimension out of range");
    }
    Vec(std::initializer_list<double> xs) : d(static_cast<int>(xs.size())) {
        if (d > kMaxDim) throw PreconditionError("Vec: dimension out of range");
        int i = 0;
        for (double x : xs) c[i++] = x;
    }
    static Vec from(const std::vector<double>& xs) {
        Vec v(static_cast<int>(xs.size()));
        for (int i = 0; i < v.d; ++i) v.c[i] = xs[i];
        return v;
    }

    double& operator[](int i) { return c[i]; }
    double operator[](int i) const { return c[i]; }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < d; ++i) c[i] += o.c[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < d; ++i) c[i] -= o.c[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int i = 0; i < d; ++i) c[i] *= s;
        return *this;
    }
    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(double s, Vec a) { return a *= s; }
    friend Vec operator*(Vec a, double s) { return a *= s; }
    friend Vec operator-(Vec a) {
        for (int i = 0; i < a.d; ++i) a.c[i] = -a.c[i];
        return a;
    }

    std::vector<double> to_vector() const { return std::vector<double>(c.begin(), c.begin() + d); }
};

inline double dot(const Vec& a, const Vec& b) {
    double s = 0;
    for (int i = 0; i < a.d; ++i) s += a.c[i] * b.c[i];
    return s;
}

inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

inline Vec normalized(const Vec& a) {
    double n = norm(a);
    if (n == 0) throw PreconditionError("normalized: zero vector");
    return (1.0 / n) * a;
}

inline bool is_unit(const Vec& u, double tol = 1e-12) { return std::abs(norm(u) - 1.0) <= tol; }

/// Integer lattice vector.
struct LatticeVec {
    std::array<std::int64_t, kMaxDim> c{};
    int d = 0;

    LatticeVec() = default;
    explicit LatticeVec(int dim) : d(dim) {}
    LatticeVec(std::initializer_list<std::int64_t> xs) : d(static_cast<int>(xs.size())) {
        int i = 0;
        for (auto x : xs) c[i++] = x;
    }

    std::int64_t& operator[](int i) { return c[i]; }
    std::int64_t operator[](int i) const { return c[i]; }

    Vec to_vec() const {
        Vec v(d);
        for (int i = 0; i < d; ++i) v[i] = static_cast<double>(c[i]);
        return v;
    }

    bool operator==(const LatticeVec& o) const {
        if (d != o.d) return false;
        for (int i = 0; i < d; ++i)
            if (c[i] != o.c[i]) return false;
        return true;
    }
    /// Lexicographic order, used for deterministic tie-breaking.
    bool operator<(const LatticeVec& o) const {
        for (int i = 0; i < d; ++i) {
            if (c[i] != o.c[i]) return c[i] < o.c[i];
        }
        return false;
    }
    bool is_zero() const {
        for (int i = 0; i < d; ++i)
            if (c[i] != 0) return false;
        return true;
    }
};

/// Visits every lattice point in the box |xi_i| <= bound[i], in a fixed
/// lexicographic order (deterministic regardless of thread count).
inline void for_each_lattice_point(const std::array<std::int64_t, kMaxDim>& bound, int d,
                                   const std::function<void(const LatticeVec&)>& fn) {
    LatticeVec xi(d);
    for (int i = 0; i < d; ++i) xi[i] = -bound[i];
    while (true) {
        fn(xi);
        int k = d - 1;
        while (k >= 0) {
            if (xi[k] < bound[k]) {
                ++xi[k];
                break;
            }
            xi[k] = -bound[k];
            --k;
        }
        if (k < 0) break;
    }
}

/// All lattice points in the centered box with per-axis bound, as a vector.
inline std::vector<LatticeVec> lattice_box(const std::array<std::int64_t, kMaxDim>& bound, int d) {
    std::vector<LatticeVec> out;
    std::int64_t total = 1;
    for (int i = 0; i < d; ++i) total *= 2 * bound[i] + 1;
    out.reserve(static_cast<std::size_t>(total));
    for_each_lattice_point(bound, d, [&](const LatticeVec& xi) { out.push_back(xi); });
    return out;
}

}  // namespace orthospec
