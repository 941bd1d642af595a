#include "orthospec/zeta.hpp"

#include <algorithm>
#include <cmath>

#include "orthospec/errors.hpp"
#include "orthospec/quadrature.hpp"
#include "orthospec/special.hpp"
#include "orthospec/steiner.hpp"

namespace orthospec {

namespace {

struct LatticeTerm {
    double r2;      // |xi + q|^2
    double phase;   // 2 pi m . q (for the dual sum)
};

/// Lattice points with |xi + q| <= rmax, sorted by |xi + q|^2 (fixed shell order).
std::vector<LatticeTerm> shifted_lattice(const Vec& q, double rmax) {
    const int d = q.d;
    std::array<std::int64_t, kMaxDim> bound{};
    for (int i = 0; i < d; ++i)
        bound[i] = static_cast<std::int64_t>(std::ceil(rmax + std::abs(q[i]))) + 1;
    std::vector<LatticeTerm> terms;
    for_each_lattice_point(bound, d, [&](const LatticeVec& xi) {
        Vec x = xi.to_vec() + q;
        double r2 = norm2(x);
        if (r2 <= rmax * rmax) terms.push_back({r2, 0.0});
    });
    std::sort(terms.begin(), terms.end(),
              [](const LatticeTerm& a, const LatticeTerm& b) { return a.r2 < b.r2; });
    return terms;
}

std::vector<LatticeTerm> dual_lattice(const Vec& q, double rmax) {
    const int d = q.d;
    std::array<std::int64_t, kMaxDim> bound{};
    for (int i = 0; i < d; ++i) bound[i] = static_cast<std::int64_t>(std::ceil(rmax)) + 1;
    std::vector<LatticeTerm> terms;
    for_each_lattice_point(bound, d, [&](const LatticeVec& m) {
        if (m.is_zero()) return;
        Vec x = m.to_vec();
        double r2 = norm2(x);
        if (r2 <= rmax * rmax) terms.push_back({r2, 2.0 * M_PI * dot(x, q)});
    });
    std::sort(terms.begin(), terms.end(),
              [](const LatticeTerm& a, const LatticeTerm& b) { return a.r2 < b.r2; });
    return terms;
}

/// Kahan-compensated theta sum sum_j w_j e^{-pi t r2_j} with w_j = e^{i phase_j}.
Complex theta_sum(const std::vector<LatticeTerm>& terms, double t) {
    Complex sum = 0.0, comp = 0.0;
    for (const LatticeTerm& lt : terms) {
        double e = std::exp(-M_PI * t * lt.r2);
        Complex w = lt.phase == 0.0 ? Complex(e, 0.0) : std::polar(e, lt.phase);
        Complex y = w - comp;
        Complex tt = sum + y;
        comp = (tt - sum) - y;
        sum = tt;
    }
    return sum;
}

std::vector<double> log_panels(double a, double b) {
    std::vector<double> breaks{a};
    double x = a;
    while (x < b) {
        x = std::min(b, x * 2.0);
        breaks.push_back(x);
    }
    return breaks;
}

}  // namespace

Complex epstein_zeta(const Vec& q, Complex s) {
    const int d = q.d;
    if (d < 1 || d > kMaxDim) throw PreconditionError("epstein_zeta: bad dimension");
    if (std::abs(s - Complex(d, 0)) < 1e-9) throw DomainError("epstein_zeta: pole at s = d");
    if (std::abs(s.imag()) > 200.0) throw DomainError("epstein_zeta: |Im s| too large");
    const Complex a = 0.5 * s;

    // Reduce q to the centered fundamental cell; the sum is Z^d-periodic in q.
    Vec qr(d);
    for (int i = 0; i < d; ++i) qr[i] = q[i] - std::round(q[i]);
    double rho2 = norm2(qr);
    bool q_integer = rho2 < 1e-28;

    // Primal terms |xi + q| >= rho_far; a single near term (if any) is handled
    // in closed form so the theta integral keeps Gaussian decay.
    const double near_cut = 0.35;
    bool has_near = !q_integer && std::sqrt(rho2) < near_cut;

    std::vector<LatticeTerm> primal = shifted_lattice(qr, 4.2);
    std::vector<LatticeTerm> far;
    far.reserve(primal.size());
    for (const LatticeTerm& lt : primal) {
        if (lt.r2 < 1e-28) continue;                  // excluded xi = -q term
        if (has_near && lt.r2 < near_cut * near_cut) continue;
        far.push_back(lt);
    }
    std::vector<LatticeTerm> dual = dual_lattice(qr, 4.2);

    double rho_far2 = far.empty() ? 1.0 : far.front().r2;
    double t_end1 = std::min(130.0, 48.0 / (M_PI * rho_far2));
    double t_end2 = 48.0 / M_PI;

    auto f1 = [&](double t) { return std::pow(t, a - 1.0) * theta_sum(far, t); };
    auto f2 = [&](double t) { return std::pow(t, 0.5 * (static_cast<double>(d) - s) - 1.0) * theta_sum(dual, t); };
    Complex i1 = gl_integrate_panels(f1, log_panels(1.0, t_end1), 32);
    Complex i2 = gl_integrate_panels(f2, log_panels(1.0, t_end2), 32);

    Complex lam = 2.0 / (s - static_cast<double>(d)) + i1 + i2;
    Complex prefactor = std::pow(M_PI, a) / cgamma(a);
    Complex value = prefactor * lam;
    if (q_integer) {
        // -2/s merged with the prefactor: -2 pi^a / (s Gamma(a)) = -pi^a / Gamma(a+1).
        value += -std::pow(M_PI, a) / cgamma(a + 1.0);
    }
    if (has_near) {
        // Exact shifted term rho^{-s} minus its [0,1] theta-side counterpart,
        // written with the regularized lower incomplete gamma (entire in a).
        double x = M_PI * rho2;
        Complex series = 0.0;
        double xn = 1.0;
        for (int n = 0; n < 80; ++n) {
            Complex contrib = xn / cgamma(a + static_cast<double>(n) + 1.0);
            series += contrib;
            xn *= x;
            if (std::abs(contrib) < 1e-18 * (1.0 + std::abs(series))) break;
        }
        value += std::pow(rho2, -0.5 * s) - std::pow(M_PI, a) * std::exp(-x) * series;
    }
    return value;
}

Complex residue_estimate(const std::function<Complex(Complex)>& f, double pole, double radius,
                         int nodes) {
    if (radius <= 0 || nodes < 8) throw PreconditionError("residue_estimate: bad parameters");
    Complex sum = 0.0;
    for (int k = 0; k < nodes; ++k) {
        double th = 2.0 * M_PI * k / nodes;
        Complex z = std::polar(radius, th);
        sum += f(Complex(pole, 0.0) + z) * z;
    }
    return sum / static_cast<double>(nodes);
}

// ---------------------------------------------------------------------------

ConvexZetaEngine::ConvexZetaEngine(const ConvexBody& k1, const ConvexBody& k2,
                                   ConvexZetaOptions opt)
    : k1_(k1), k2_(k2), dim_(k1.dim()), solver_(opt.solver) {
    if (k1.dim() != k2.dim()) throw PreconditionError("ConvexZetaEngine: dimension mismatch");
    double t0 = default_t0(k1, k2);
    t1_ = opt.t1 > 0 ? opt.t1 : std::max(t0, 4.0 * M_PI);
    t3_ = opt.t3 > 0 ? opt.t3 : (dim_ == 2 ? std::max(240.0, 3.0 * t1_) : std::max(120.0, 3.0 * t1_));
    if (t3_ <= t1_) throw PreconditionError("ConvexZetaEngine: t3 must exceed t1");

    ConvexBody c = minkowski_difference(k1, k2);
    std::vector<double> poly = steiner_polynomial(c);
    p_.assign(dim_ + 1, 0.0);
    double norm = std::pow(2.0 * M_PI, dim_);
    for (int l = 0; l <= dim_; ++l) p_[l] = poly[l] / norm;

    ensure_lengths(t3_);
}

void ConvexZetaEngine::ensure_lengths(double t) {
    if (t <= cached_t_) return;
    LengthSpectrum spec = length_spectrum_range(k1_, k2_, 0.0, t, {}, solver_);
    lengths_.clear();
    lengths_.reserve(spec.size());
    for (const Orthogeodesic& g : spec.records) lengths_.push_back(g.length);
    cached_t_ = t;
}

double ConvexZetaEngine::steiner_P(double t) const {
    double v = 0, tp = 1;
    for (int l = 0; l <= dim_; ++l) {
        v += p_[l] * tp;
        tp *= t;
    }
    return v;
}

ZetaValue ConvexZetaEngine::direct(Complex s, double t_max) {
    if (s.real() <= dim_)
        throw DomainError("convex_zeta_direct: Re(s) > d required (use the continued form)");
    ensure_lengths(t_max);
    Complex sum = 0.0;
    for (double l : lengths_) {
        if (l > t_max) break;
        sum += std::pow(l, -s);
    }
    double sigma = s.real();
    double tail = 0.0;
    for (int l = 1; l <= dim_; ++l)
        tail += p_[l] * l * std::pow(t_max, l - 1 - sigma) / (sigma + 1 - l);
    tail *= std::abs(s);
    return {s, sum, tail, "direct"};
}

ZetaValue ConvexZetaEngine::continued(Complex s) const {
    if (s.real() <= dim_ - 1)
        throw DomainError("convex_zeta_continued: validated only on Re(s) > d-1");
    if (std::abs(s - Complex(dim_, 0)) < 1e-6)
        throw DomainError("convex_zeta_continued: pole at s = d");

    // Head: exact sum over lengths <= t1.
    Complex head = 0.0;
    std::size_t i = 0;
    while (i < lengths_.size() && lengths_[i] <= t1_) {
        head += std::pow(lengths_[i], -s);
        ++i;
    }
    long long n_head = static_cast<long long>(i);

    // Closed-form meromorphic part from the Steiner polynomial.
    Complex pole_part = (p_[0] - steiner_P(t1_)) * std::pow(t1_, -s);
    for (int l = 1; l <= dim_; ++l)
        pole_part += p_[l] * s * std::pow(t1_, static_cast<double>(l) - s) /
                     (s - static_cast<double>(l));

    // Exact piecewise integral of the lattice remainder on [t1, t3]:
    // rho(T) = Ntilde(T) - (P(T) - P(t1)) with Ntilde the count in (t1, T].
    // Between breakpoints, s int_a^b T^{l-s-1} dT = s (b^{l-s} - a^{l-s})/(l-s),
    // evaluated in the cancellation-stable phi1 form.
    auto stable_int = [&](double aa, double bb, int l) -> Complex {
        // (bb^{l-s} - aa^{l-s})/(l-s) = aa^{l-s} log(bb/aa) phi1((l-s) log(bb/aa)).
        Complex e = (static_cast<double>(l) - s);
        Complex z = e * std::log(bb / aa);
        Complex phi1;
        if (std::abs(z) < 1e-4) {
            phi1 = 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
        } else {
            phi1 = (std::exp(z) - 1.0) / z;
        }
        return std::pow(aa, e) * std::log(bb / aa) * phi1;
    };

    Complex remainder = 0.0;
    double a = t1_;
    long long count = 0;
    std::size_t j = i;
    double p_t1 = steiner_P(t1_);
    auto add_interval = [&](double aa, double bb, long long n) {
        if (bb <= aa) return;
        remainder += (static_cast<double>(n) + p_t1) * (std::pow(aa, -s) - std::pow(bb, -s));
        for (int l = 0; l <= dim_; ++l)
            remainder -= p_[l] * s * stable_int(aa, bb, l);
    };
    while (j < lengths_.size() && lengths_[j] <= t3_) {
        add_interval(a, lengths_[j], count);
        a = lengths_[j];
        double len = lengths_[j];
        while (j < lengths_.size() && lengths_[j] == len) {
            ++count;
            ++j;
        }
    }
    add_interval(a, t3_, count);

    // Tail beyond t3: the constant -E(t1) piece integrates exactly; the
    // oscillating lattice remainder E(T) = N0(T) - P(T) is only bounded.
    double e_t1 = static_cast<double>(n_head) - p_t1;
    Complex tail_const = -e_t1 * std::pow(t3_, -s);

    // Bound max |E(T)| / T^{d-1} over [t1, t3] at interval endpoints.
    double chat = 0.0;
    {
        long long n0 = n_head;
        double prev = t1_;
        for (std::size_t k = i; k <= lengths_.size(); ++k) {
            double tk = (k < lengths_.size() && lengths_[k] <= t3_) ? lengths_[k] : t3_;
            double e_low = std::abs(static_cast<double>(n0) - steiner_P(prev));
            double e_high = std::abs(static_cast<double>(n0) - steiner_P(tk));
            double denom = std::pow(std::max(prev, 1.0), dim_ - 1);
            chat = std::max(chat, std::max(e_low, e_high) / denom);
            if (k == lengths_.size() || lengths_[k] > t3_) break;
            ++n0;
            prev = tk;
        }
    }
    double sigma = s.real();
    double tail_bound =
        std::abs(s) * chat * std::pow(t3_, dim_ - 1 - sigma) / (sigma - (dim_ - 1));

    Complex value = head + pole_part + remainder + tail_const;
    return {s, value, tail_bound, "continued"};
}

double ConvexZetaEngine::closed_form_residue(int l) const {
    if (l < 1 || l > dim_) throw PreconditionError("closed_form_residue: l in 1..d");
    // Res_{s=l} of p_l s t1^{l-s} / (s-l) is l * p_l.
    return l * p_[l];
}

std::vector<PoleReport> ConvexZetaEngine::pole_reports() const {
    std::vector<PoleReport> reports;
    ConvexBody c = minkowski_difference(k1_, k2_);
    std::vector<double> v = intrinsic_volumes(c);
    for (int l = 1; l <= dim_; ++l) {
        PoleReport r;
        r.location = l;
        r.predicted = l * std::pow(M_PI, 0.5 * l) * v[dim_ - l] /
                      (std::tgamma(0.5 * l + 1.0) * std::pow(2.0 * M_PI, dim_));
        if (l == dim_) {
            r.residue = residue_estimate([&](Complex s) { return continued(s).value; },
                                         static_cast<double>(dim_), 0.5);
        } else {
            r.residue = closed_form_residue(l);
        }
        double denom = std::abs(r.predicted);
        r.relative_gap = denom > 0 ? std::abs(r.residue - r.predicted) / denom
                                   : std::abs(r.residue - r.predicted);
        reports.push_back(r);
    }
    return reports;
}

ZetaValue convex_zeta_direct(const ConvexBody& k1, const ConvexBody& k2, Complex s, double t_max) {
    ConvexZetaOptions opt;
    opt.t3 = std::max(t_max, 1.0 + default_t0(k1, k2));
    ConvexZetaEngine engine(k1, k2, opt);
    return engine.direct(s, t_max);
}

ZetaValue convex_zeta_continued(const ConvexBody& k1, const ConvexBody& k2, Complex s) {
    ConvexZetaEngine engine(k1, k2);
    return engine.continued(s);
}

}  // namespace orthospec
