#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "orthospec/body.hpp"
#include "orthospec/orthospectrum.hpp"
#include "orthospec/special.hpp"

namespace orthospec {

struct ZetaValue {
    Complex s;
    Complex value;
    double tail_bound = 0.0;
    std::string method;  // "direct" or "continued"
};

struct PoleReport {
    int location = 0;       // pole at s = location, location in 1..d
    Complex residue;        // measured (contour or closed form)
    Complex predicted;      // l pi^{l/2} V_{d-l}(K1-K2) / (Gamma(l/2+1) (2 pi)^d)
    double relative_gap = 0.0;
};

/// Epstein zeta sum_{xi in Z^d \ {-q}} |xi + q|^{-s}, all s != d, via the
/// incomplete-gamma (theta) splitting; absolute accuracy ~1e-12 for |s| <= 10.
Complex epstein_zeta(const Vec& q, Complex s);

/// Contour residue (1/2 pi i) oint f ds on the circle |s - pole| = radius,
/// trapezoidal rule with the given number of nodes.
Complex residue_estimate(const std::function<Complex(Complex)>& f, double pole, double radius,
                         int nodes = 64);

struct ConvexZetaOptions {
    double t1 = 0.0;    // splitting point; 0 = max(T0, 4 pi)
    double t3 = 0.0;    // lattice remainder integration cutoff; 0 = auto per dimension
    SolverOptions solver;
};

/// Zeta function of the length orthospectrum: sum over all common
/// perpendiculars of length^{-s}.  Direct summation for Re(s) > d; numeric
/// continuation on Re(s) > d-1 by splitting off the Steiner polynomial part
/// of the counting function (closed-form simple poles at s = 1..d).
class ConvexZetaEngine {
public:
    ConvexZetaEngine(const ConvexBody& k1, const ConvexBody& k2, ConvexZetaOptions opt = {});

    int dim() const { return dim_; }
    double t1() const { return t1_; }
    double t3() const { return t3_; }

    /// Partial sum over lengths <= t_max plus a Steiner tail bound. Re(s) > d.
    ZetaValue direct(Complex s, double t_max);

    /// Continued value, validated on Re(s) > d-1, s away from d.
    ZetaValue continued(Complex s) const;

    /// Steiner polynomial coefficient of T^l for Vol(K1-K2+TB)/(2 pi)^d.
    double scaled_steiner_coeff(int l) const { return p_[l]; }

    /// Residue of the closed-form meromorphic part at s = l (equals l * p_l).
    double closed_form_residue(int l) const;

    /// Pole reports at s = 1..d: closed-form residues for l < d, contour
    /// residue of the full continued function at l = d.
    std::vector<PoleReport> pole_reports() const;

    /// Sorted positive lengths enumerated up to the current cache cutoff.
    const std::vector<double>& lengths() const { return lengths_; }

private:
    void ensure_lengths(double t);
    /// Steiner polynomial value P(T) = Vol(C + T B)/(2 pi)^d.
    double steiner_P(double t) const;

    ConvexBody k1_, k2_;
    int dim_ = 0;
    double t1_ = 0.0;
    double t3_ = 0.0;
    SolverOptions solver_;
    std::vector<double> p_;        // scaled Steiner coefficients
    std::vector<double> lengths_;  // sorted, all > 0
    double cached_t_ = 0.0;
};

/// One-shot wrappers matching the operation contracts.
ZetaValue convex_zeta_direct(const ConvexBody& k1, const ConvexBody& k2, Complex s, double t_max);
ZetaValue convex_zeta_continued(const ConvexBody& k1, const ConvexBody& k2, Complex s);

}  // namespace orthospec
