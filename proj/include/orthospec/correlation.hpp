#pragma once

#include <complex>
#include <vector>

#include "orthospec/observable.hpp"

namespace orthospec {

/// Fast evaluator for the sphere oscillatory integral
/// I_F(xi, t) = int_{S^{d-1}} e^{i t xi . theta} F(theta) dVol(theta)
/// at many t for a fixed mode xi: spectral expansion of F against the
/// rotationally aligned basis reduces each evaluation to a short Bessel sum.
class OscillatoryMode {
public:
    OscillatoryMode(const SphereFunction& f, const LatticeVec& xi);

    Complex eval(double t) const;
    double xi_norm() const { return xi_norm_; }
    /// F at the phase-stationary directions +-xi/|xi|.
    Complex pole_plus() const { return pole_plus_; }
    Complex pole_minus() const { return pole_minus_; }
    /// Magnitude of the dropped spectral tail (0 when fully converged).
    double truncation_error() const { return truncation_error_; }

private:
    int dim_ = 0;
    double xi_norm_ = 0.0;
    double truncation_error_ = 0.0;
    Complex pole_plus_{0.0}, pole_minus_{0.0};
    // d=2: coefficients of F(psi + alpha) as s_k with I = 2 pi [s_0 J_0 + sum i^k J_k s_k],
    // s_k = d_k + d_{-k}.  d=3: Legendre coefficients a_l of the ring average.
    std::vector<Complex> coeffs_;
};

/// Contract-level oscillatory integral with accuracy control.
/// Throws DomainError when t |xi| > 1e5 and NumericError when the spectral
/// truncation cannot reach ~1e-8 relative accuracy.
Complex oscillatory_integral(const SphereFunction& f, const LatticeVec& xi, double t);

/// Dense-quadrature serial reference (auto-refined to >= 8 nodes per
/// oscillation); used to validate the spectral path and in benchmarks.
Complex oscillatory_integral_dense(const SphereFunction& f, const LatticeVec& xi, double t);

/// Correlation of the geodesic-flow evolution:
/// Cor(t) = sum_xi I_{phi_xi conj(psi_xi)}(xi, t), torus measure normalized.
Complex correlation(const Observable& phi, const Observable& psi, double t);

/// Correlation on a grid of times, parallel over t with a fixed reduction order.
std::vector<Complex> correlation_grid(const Observable& phi, const Observable& psi,
                                      const std::vector<double>& ts);

/// Serial reference for the grid (plain loop, dense quadrature per point).
std::vector<Complex> correlation_grid_serial(const Observable& phi, const Observable& psi,
                                             const std::vector<double>& ts);

/// Shared mode machinery for the correlation: the pairing functions
/// F_xi = phi_xi conj(psi_xi) with their fast evaluators.
struct CorrelationModes {
    int dim = 0;
    Complex invariant;  // <P_0 phi, P_0 psi>_{L^2(S^{d-1})}
    struct Entry {
        LatticeVec xi;
        OscillatoryMode mode;
    };
    std::vector<Entry> entries;  // nonzero modes present in both observables

    static CorrelationModes build(const Observable& phi, const Observable& psi);
    Complex eval(double t) const;
};

/// Leading large-time model: invariant term plus the two stationary directions,
/// (2 pi/t)^{(d-1)/2} sum_{+-} e^{∓i pi (d-1)/4} sum_{xi != 0}
///   e^{+-i t |xi|} |xi|^{-(d-1)/2} phi_xi(+-xi/|xi|) conj(psi_xi(+-xi/|xi|)).
Complex stationary_phase_leading(const Observable& phi, const Observable& psi, double t);

}  // namespace orthospec
