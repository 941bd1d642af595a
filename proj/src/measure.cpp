#include "orthospec/measure.hpp"

#include <algorithm>
#include <cmath>

#include "orthospec/errors.hpp"

namespace orthospec {

AtomicMeasure AtomicMeasure::from_atoms(std::vector<Atom> atoms, double merge_tol) {
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.position < b.position; });
    AtomicMeasure m;
    for (const Atom& a : atoms) {
        if (!std::isfinite(a.position)) throw PreconditionError("AtomicMeasure: non-finite position");
        if (!m.atoms.empty() && a.position - m.atoms.back().position <= merge_tol) {
            m.atoms.back().weight += a.weight;
        } else {
            m.atoms.push_back(a);
        }
    }
    return m;
}

AtomicMeasure dirac_comb(const LengthSpectrum& spec) {
    if (spec.records.empty()) throw PreconditionError("dirac_comb: empty spectrum");
    std::vector<AtomicMeasure::Atom> atoms;
    atoms.reserve(spec.size());
    for (const Orthogeodesic& g : spec.records) atoms.push_back({g.length, {1.0, 0.0}});
    AtomicMeasure m = AtomicMeasure::from_atoms(std::move(atoms));
    m.growth_exponent = static_cast<double>(spec.records.front().direction.d);
    return m;
}

Complex windowed_fourier(const AtomicMeasure& m, double tau, double sigma) {
    if (sigma <= 0) throw PreconditionError("windowed_fourier: sigma > 0 required");
    Complex sum = 0.0;
    double inv2s2 = 0.5 / (sigma * sigma);
    for (const AtomicMeasure::Atom& a : m.atoms) {
        double window = std::exp(-a.position * a.position * inv2s2);
        sum += a.weight * std::polar(window, -tau * a.position);
    }
    return sum / (sigma * std::sqrt(2.0 * M_PI));
}

namespace {

ScanReport scan_impl(const AtomicMeasure& m, const std::vector<double>& tau_grid,
                     const std::vector<double>& scales, const ScanOptions& opt, bool parallel) {
    if (scales.size() < 4) throw PreconditionError("singularity_scan: at least 4 scales required");
    for (std::size_t i = 1; i < scales.size(); ++i)
        if (scales[i] <= scales[i - 1])
            throw PreconditionError("singularity_scan: scales must be increasing");

    ScanReport rep;
    rep.tau_grid = tau_grid;
    rep.scales = scales;
    rep.flag_threshold = opt.flag_threshold;
    rep.residual_threshold = opt.residual_threshold;
    const std::size_t nt = tau_grid.size(), ns = scales.size();
    rep.values.assign(nt, std::vector<Complex>(ns));
    rep.exponents.assign(nt, 0.0);
    rep.fit_residuals.assign(nt, 0.0);
    rep.flagged.assign(nt, false);
    rep.inconclusive.assign(nt, false);

    auto process_tau = [&](std::size_t i) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::vector<double> xs(ns), ys(ns);
        for (std::size_t k = 0; k < ns; ++k) {
            Complex w = windowed_fourier(m, tau_grid[i], scales[k]);
            rep.values[i][k] = w;
            xs[k] = std::log(scales[k]);
            ys[k] = std::log(std::max(std::abs(w), 1e-300));
            sx += xs[k];
            sy += ys[k];
            sxx += xs[k] * xs[k];
            sxy += xs[k] * ys[k];
        }
        double n = static_cast<double>(ns);
        double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        double intercept = (sy - slope * sx) / n;
        double rss = 0;
        for (std::size_t k = 0; k < ns; ++k) {
            double r = ys[k] - slope * xs[k] - intercept;
            rss += r * r;
        }
        rep.exponents[i] = slope;
        rep.fit_residuals[i] = std::sqrt(rss / n);
        rep.inconclusive[i] = rep.fit_residuals[i] > opt.residual_threshold;
        rep.flagged[i] = !rep.inconclusive[i] && slope > opt.flag_threshold;
    };

    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(nt); ++i)
            process_tau(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < nt; ++i) process_tau(i);
    }
    return rep;
}

}  // namespace

std::vector<double> ScanReport::flagged_taus() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < tau_grid.size(); ++i)
        if (flagged[i]) out.push_back(tau_grid[i]);
    return out;
}

ScanReport singularity_scan(const AtomicMeasure& m, const std::vector<double>& tau_grid,
                            const std::vector<double>& scales, const ScanOptions& opt) {
    return scan_impl(m, tau_grid, scales, opt, true);
}

ScanReport singularity_scan_serial(const AtomicMeasure& m, const std::vector<double>& tau_grid,
                                   const std::vector<double>& scales, const ScanOptions& opt) {
    return scan_impl(m, tau_grid, scales, opt, false);
}

AtomicMeasure guinand_meyer_measure(const LengthSpectrum& spec12, const LengthSpectrum& spec21,
                                    int d) {
    if (spec12.one_form.beta.d == 0 || spec21.one_form.beta.d == 0)
        throw PreconditionError("guinand_meyer_measure: both spectra must carry a one-form");
    if (spec12.one_form.beta_is_integer())
        throw PreconditionError(
            "guinand_meyer_measure: beta in Z^d is excluded (extra singularity at tau = 0)");
    for (int i = 0; i < d; ++i)
        if (std::abs(spec12.one_form.beta[i] - spec21.one_form.beta[i]) > 1e-12)
            throw PreconditionError("guinand_meyer_measure: spectra built with different beta");

    // (-i)^{d-1}
    Complex mirror_factor{1.0, 0.0};
    for (int k = 1; k < d; ++k) mirror_factor *= Complex(0.0, -1.0);

    std::vector<AtomicMeasure::Atom> atoms;
    atoms.reserve(spec12.size() + spec21.size());
    for (const Orthogeodesic& g : spec12.records) {
        double w = std::pow(g.length, -0.5 * (d - 1));
        atoms.push_back({g.length, w * g.holonomy_phase});
    }
    for (const Orthogeodesic& g : spec21.records) {
        double w = std::pow(g.length, -0.5 * (d - 1));
        atoms.push_back({-g.length, mirror_factor * w * std::conj(g.holonomy_phase)});
    }
    AtomicMeasure m = AtomicMeasure::from_atoms(std::move(atoms));
    m.growth_exponent = static_cast<double>(d);
    return m;
}

Complex atom_extract(const AtomicMeasure& m, double lambda, double sigma) {
    if (sigma <= 0) throw PreconditionError("atom_extract: sigma > 0 required");
    Complex sum = 0.0;
    for (const AtomicMeasure::Atom& a : m.atoms) {
        double tri = 1.0 - std::abs(a.position) / sigma;
        if (tri <= 0) continue;
        sum += a.weight * tri * std::polar(1.0, -lambda * a.position);
    }
    return 2.0 * M_PI / sigma * sum;
}

std::vector<double> twisted_spectrum(const Vec& beta, double radius, double tol) {
    const int d = beta.d;
    std::array<std::int64_t, kMaxDim> bound{};
    for (int i = 0; i < d; ++i)
        bound[i] = static_cast<std::int64_t>(std::ceil(radius + std::abs(beta[i]))) + 1;
    std::vector<double> vals;
    for_each_lattice_point(bound, d, [&](const LatticeVec& xi) {
        double r = norm(xi.to_vec() + beta);
        if (r <= radius) vals.push_back(r);
    });
    std::sort(vals.begin(), vals.end());
    std::vector<double> dedup;
    for (double v : vals) {
        if (dedup.empty() || v - dedup.back() > tol) dedup.push_back(v);
    }
    std::vector<double> out;
    for (auto it = dedup.rbegin(); it != dedup.rend(); ++it) out.push_back(-*it);
    for (double v : dedup) out.push_back(v);
    return out;
}

}  // namespace orthospec
