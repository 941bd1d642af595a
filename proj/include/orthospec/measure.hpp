#pragma once

#include <complex>
#include <vector>

#include "orthospec/orthospectrum.hpp"
#include "orthospec/special.hpp"

namespace orthospec {

/// Finite weighted sum of Dirac masses on the real line.
struct AtomicMeasure {
    struct Atom {
        double position = 0.0;
        Complex weight{0.0, 0.0};
    };
    std::vector<Atom> atoms;      // sorted by position, duplicates merged
    double growth_exponent = 0.0; // bound on the polynomial growth of the counting function

    std::size_t size() const { return atoms.size(); }

    /// Builds a measure from raw atoms: sorts and merges positions closer than tol.
    static AtomicMeasure from_atoms(std::vector<Atom> atoms, double merge_tol = 1e-9);
};

/// Comb of unit masses at the orthogeodesic lengths (holonomy ignored).
AtomicMeasure dirac_comb(const LengthSpectrum& spec);

/// Smoothed Fourier transform of the measure at frequency tau, resolution sigma:
/// (1/(sigma sqrt(2 pi))) sum w e^{-i tau l} e^{-l^2/(2 sigma^2)},
/// i.e. the pairing of the transform with a unit-mass frequency window of
/// width 1/sigma.
Complex windowed_fourier(const AtomicMeasure& m, double tau, double sigma);

/// Scale-ladder probe of the singular support of the Fourier transform.
struct ScanReport {
    std::vector<double> tau_grid;
    std::vector<double> scales;
    std::vector<std::vector<Complex>> values;  // [tau][scale]
    std::vector<double> exponents;             // slope of log|W| vs log sigma
    std::vector<double> fit_residuals;         // rms residual of the fit
    std::vector<bool> flagged;                 // exponent above threshold
    std::vector<bool> inconclusive;            // residual above threshold
    double flag_threshold = 0.25;
    double residual_threshold = 0.5;

    std::vector<double> flagged_taus() const;
};

struct ScanOptions {
    double flag_threshold = 0.25;
    double residual_threshold = 0.5;
};

ScanReport singularity_scan(const AtomicMeasure& m, const std::vector<double>& tau_grid,
                            const std::vector<double>& scales, const ScanOptions& opt = {});

/// Serial reference scan (no OpenMP), for equality tests and benchmarks.
ScanReport singularity_scan_serial(const AtomicMeasure& m, const std::vector<double>& tau_grid,
                                   const std::vector<double>& scales, const ScanOptions& opt = {});

/// Symmetrized, weighted length comb: atoms at +l with weight
/// e^{i int beta}/l^{(d-1)/2} from spec12 and at -l with weight
/// (-i)^{d-1} e^{-i int beta}/l^{(d-1)/2} from spec21.
/// Requires both spectra twisted by the same non-integer beta.
AtomicMeasure guinand_meyer_measure(const LengthSpectrum& spec12, const LengthSpectrum& spec21,
                                    int d);

/// Fejer-kernel pairing of the measure's Fourier transform around lambda,
/// normalized so a unit Dirac atom of the transform returns ~1:
/// (2 pi / sigma) sum w e^{-i lambda t} (1 - |t|/sigma)_+.
Complex atom_extract(const AtomicMeasure& m, double lambda, double sigma);

/// Candidate atom positions {+-|xi + beta|} up to the given radius, sorted,
/// de-duplicated within tol.
std::vector<double> twisted_spectrum(const Vec& beta, double radius, double tol = 1e-9);

}  // namespace orthospec
