#pragma once

#include <complex>
#include <vector>

#include "orthospec/correlation.hpp"

namespace orthospec {

struct TransformValue {
    Complex s;
    Complex value;
    Complex cutoff_part;  // finite-integral part, entire in s
    Complex tail_part;    // closed-form / model tail beyond the split
};

struct TransformOptions {
    double t_split = 200.0;   // numeric integration up to here, model tail beyond
    double im_budget = 16.0;  // largest |Im s| the cached quadrature resolves
    double chi_cutoff = 8.0;  // Mellin cutoff chi supported in [1, chi_cutoff]
    bool probe = false;       // allow evaluation near singular points
};

/// Precomputed correlation transforms for a fixed observable pair.
/// The correlation samples along the time quadrature grid are cached once,
/// so evaluating at many s is cheap.
class CorrelationTransforms {
public:
    CorrelationTransforms(const Observable& phi, const Observable& psi,
                          TransformOptions opt = {});

    /// Laplace transform int_0^inf e^{-st} Cor(t) dt, Re(s) >= 0.
    /// Beyond t_split the two stationary-phase branches (order 0 plus a fitted
    /// order-1 correction) integrate in closed form.
    TransformValue laplace(Complex s) const;

    /// Mellin transform int_1^inf t^{-s} Cor(t) dt away from the pole s = 1;
    /// the chi-split parts are returned separately by mellin_parts.
    TransformValue mellin(Complex s) const;

    /// The two chi-split pieces: M_0 (entire, compactly supported integrand)
    /// and M_inf (carries the pole at s = 1).
    std::pair<Complex, Complex> mellin_parts(Complex s) const;

    Complex invariant() const { return modes_.invariant; }
    double t_split() const { return opt_.t_split; }

    /// Distance from s to the nearest Laplace singularity i*{0, +-|xi|}.
    double laplace_singularity_distance(Complex s) const;

private:
    struct ModeTail {
        double xi_norm = 0.0;
        Complex a_plus, a_minus;  // order-0 stationary amplitudes
        Complex b_plus, b_minus;  // fitted order-1 corrections
    };

    Complex cor_at(std::size_t node) const;
    Complex laplace_tail(const ModeTail& mt, Complex s) const;
    Complex mellin_tail(const ModeTail& mt, Complex s) const;

    TransformOptions opt_;
    int dim_ = 0;
    CorrelationModes modes_;
    std::vector<ModeTail> tails_;
    // Composite Gauss-Legendre grid on [0, t_split] with cached values.
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<Complex> cor_values_;     // Cor(t) - invariant at the nodes
    std::vector<double> chi_values_;      // Mellin cutoff chi at the nodes
};

/// One-shot wrappers matching the operation contracts.
TransformValue laplace_transform(const Observable& phi, const Observable& psi, Complex s,
                                 double t_split = 200.0, bool probe = false);
TransformValue mellin_transform(const Observable& phi, const Observable& psi, Complex s,
                                double chi_cutoff = 8.0, bool probe = false);

/// Smooth cutoff: 1 on t <= a, 0 on t >= b, C^inf ramp between.
double smooth_cutoff(double t, double a, double b);

}  // namespace orthospec
