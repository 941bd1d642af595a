#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "orthospec/quadrature.hpp"
#include "orthospec/special.hpp"
#include "orthospec/vec.hpp"

#include "json.hpp"

namespace orthospec {

/// Complex-valued function on S^{d-1}, d = 2 or 3, backed either by a closed
/// form or by samples on a structured quadrature grid (with spectral
/// interpolation: trigonometric for d=2, spherical-harmonic for d=3).
class SphereFunction {
public:
    SphereFunction() = default;

    static SphereFunction zero(int dim);
    static SphereFunction constant(int dim, Complex value);
    static SphereFunction from_callable(int dim, std::function<Complex(const Vec&)> f);
    static SphereFunction from_grid(const SphereQuadrature& grid, std::vector<Complex> values);

    int dim() const;
    bool valid() const { return impl_ != nullptr; }
    Complex operator()(const Vec& u) const;

    /// Circle Fourier coefficients c_k, k = -kmax..kmax (d=2 only):
    /// f(phi) = sum c_k e^{i k phi}.
    std::vector<Complex> circle_coefficients(int kmax) const;

    /// Spherical-harmonic coefficients c_{l,m} up to degree lmax (d=3 only),
    /// indexed [l][m + l], with L^2-normalized harmonics.
    std::vector<std::vector<Complex>> sphere_coefficients(int lmax) const;

    /// Sobolev norm on the sphere: d=2 uses 2 pi sum <k>^{2M} |c_k|^2,
    /// d=3 uses sum (1 + l(l+1))^M |c_lm|^2; fractional and negative M allowed.
    double sobolev_norm(double m_order) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

/// Function on S T^d = T^d x S^{d-1} stored as finitely many Fourier modes in
/// x with sphere coefficient functions.
struct Observable {
    struct Mode {
        LatticeVec xi;
        SphereFunction coeff;
    };
    int dim = 0;
    std::vector<Mode> modes;
    std::shared_ptr<const SphereQuadrature> grid;  // shared product grid

    static Observable make(int dim, std::vector<Mode> modes);
    static Observable from_json(const nlohmann::json& j, int dim);

    const SphereFunction* find_mode(const LatticeVec& xi) const;
    /// L^2 norm on T^d x S^{d-1} with the normalized torus measure:
    /// ||phi||^2 = sum_xi int |phi_xi|^2 dVol.
    double l2_norm() const;
    /// Checks whether modes come in conjugate pairs (real-valued observable).
    bool is_real(double tol = 1e-9) const;
};

/// Parses a single coefficient spec: {"type": "constant" | "harmonic" | "bump", ...}.
SphereFunction sphere_function_from_json(const nlohmann::json& j, int dim);

struct Projectors {
    SphereFunction p0;  // mode-0 coefficient (zero function when absent)
    struct PoleValue {
        LatticeVec xi;
        Complex plus;    // coeff at +xi/|xi|
        Complex minus;   // coeff at -xi/|xi|
    };
    std::vector<PoleValue> pole_values;  // nonzero modes
};

/// P_0 phi and the pole traces Pi_0^{+-} phi (coefficients at +-xi/|xi|).
Projectors projectors(const Observable& phi);

/// Anisotropic norm (sum_xi <xi>^{2N} ||phi_xi||_{H^M(S^{d-1})}^2)^{1/2}.
double anisotropic_norm(const Observable& u, double m_order, double n_order);

}  // namespace orthospec
