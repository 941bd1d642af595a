#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "orthospec/body.hpp"
#include "orthospec/vec.hpp"

#include "json.hpp"

namespace orthospec {

/// Closed one-form beta = sum beta_j dx_j + df on the 2pi-torus, with f a
/// finite real Fourier series f(x) = sum_j (a_j cos(k_j . x) + b_j sin(k_j . x)).
struct OneForm {
    Vec beta;  // empty (d = 0) means no twist
    struct FourierTerm {
        LatticeVec k;
        double cos_coeff = 0.0;
        double sin_coeff = 0.0;
    };
    std::vector<FourierTerm> f_terms;

    bool empty() const { return beta.d == 0 && f_terms.empty(); }
    bool beta_is_integer(double tol = 1e-12) const;
    double f(const Vec& x) const;

    static OneForm from_json(const nlohmann::json& j, int dim);
    nlohmann::json to_json() const;
};

/// One common perpendicular between K1 and K2 + 2 pi xi.
struct Orthogeodesic {
    LatticeVec xi;
    double length = 0.0;
    Vec direction;             // outward normal of K1 at foot1
    Vec foot1;                 // lifted to R^d
    Vec foot2;                 // lifted; foot2 - foot1 = length * direction
    std::complex<double> holonomy_phase{1.0, 0.0};

    Vec displacement() const { return foot2 - foot1; }
};

enum class Orientation { K1toK2, K2toK1 };

/// Finite length spectrum: records sorted by (length, lexicographic xi),
/// all lengths in (T0, T].
struct LengthSpectrum {
    std::vector<Orthogeodesic> records;
    double T0 = 0.0;
    double T = 0.0;
    Orientation orientation = Orientation::K1toK2;
    OneForm one_form;

    std::size_t size() const { return records.size(); }
};

/// Options for the per-xi solver.
struct SolverOptions {
    double kkt_tol = 1e-8;       // final optimality check
    double newton_tol = 1e-13;   // gradient norm target
    int max_newton = 60;
    int coarse_samples = 64;     // fallback grid size (per angle for d=2)
    double trust_radius = 0.0;   // |2 pi xi| above which Newton from xi/|xi| is trusted;
                                 // 0 means derive it from the body sizes
};

/// Common perpendicular from K1 to K2 + 2 pi xi: maximizes
/// F(u) = 2 pi <xi, u> - h_{K1}(u) - h_{K2}(-u) over the unit sphere.
/// Returns nullopt when max F <= 0 (the bodies meet).
std::optional<Orthogeodesic> common_perpendicular(const ConvexBody& k1, const ConvexBody& k2,
                                                  const LatticeVec& xi,
                                                  const SolverOptions& opt = {});

/// T0 rule: diam(K1) + diam(K2) + 1.
double default_t0(const ConvexBody& k1, const ConvexBody& k2);

/// All orthogeodesics with T0 < length <= T, one per lattice class, with
/// holonomy phases exp(i (beta . displacement + f(foot2) - f(foot1))).
/// Parallel over lattice classes; deterministic output.
LengthSpectrum length_spectrum(const ConvexBody& k1, const ConvexBody& k2, double T,
                               const OneForm& beta = {}, const SolverOptions& opt = {});

/// Variant with an explicit lower cutoff; t_min = 0 enumerates every positive
/// length (used by the zeta sums, where the full set matters).
LengthSpectrum length_spectrum_range(const ConvexBody& k1, const ConvexBody& k2, double t_min,
                                     double T, const OneForm& beta = {},
                                     const SolverOptions& opt = {});

/// Sorted lengths only, enumerated in fixed-size blocks; memory stays bounded
/// even for cutoffs with hundreds of thousands of lattice classes.
std::vector<double> ortho_lengths(const ConvexBody& k1, const ConvexBody& k2, double t_min,
                                  double T, const SolverOptions& opt = {});

/// #{gamma : T0 < l(gamma) <= T}; requires T <= spec.T.
long long counting_function(const LengthSpectrum& spec, double T);

/// Serial reference enumeration (no OpenMP), for equality tests and benchmarks.
LengthSpectrum length_spectrum_serial(const ConvexBody& k1, const ConvexBody& k2, double T,
                                      const OneForm& beta = {}, const SolverOptions& opt = {});

/// CSV rows: xi..., length, u..., foot1..., foot2..., phase_re, phase_im.
std::string spectrum_csv(const LengthSpectrum& spec);

/// JSON metadata (bodies, cutoffs, one-form).
nlohmann::json spectrum_metadata(const ConvexBody& k1, const ConvexBody& k2,
                                 const LengthSpectrum& spec);

}  // namespace orthospec
