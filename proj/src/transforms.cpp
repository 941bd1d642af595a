#include "orthospec/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "orthospec/errors.hpp"
#include "orthospec/special.hpp"

namespace orthospec {

double smooth_cutoff(double t, double a, double b) {
    if (t <= a) return 1.0;
    if (t >= b) return 0.0;
    auto g = [](double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; };
    double up = g((b - t) / (b - a));
    double down = g((t - a) / (b - a));
    return up / (up + down);
}

CorrelationTransforms::CorrelationTransforms(const Observable& phi, const Observable& psi,
                                             TransformOptions opt)
    : opt_(opt), dim_(phi.dim), modes_(CorrelationModes::build(phi, psi)) {
    if (opt_.t_split <= 1.0) throw PreconditionError("CorrelationTransforms: t_split > 1 required");
    if (opt_.chi_cutoff <= 1.0 || opt_.chi_cutoff >= opt_.t_split)
        throw PreconditionError("CorrelationTransforms: need 1 < chi_cutoff < t_split");

    // Composite Gauss-Legendre grid resolving e^{-i Im(s) t} and the mode
    // phases, with a panel boundary pinned at t = 1 so the Mellin integrals
    // over [1, t_split] drop whole panels only.
    double max_freq = opt_.im_budget;
    for (const auto& e : modes_.entries) max_freq = std::max(max_freq, e.mode.xi_norm());
    double width = 2.0 / (1.0 + max_freq);
    std::vector<double> edges;
    int head_panels = std::max(1, static_cast<int>(std::ceil(1.0 / width)));
    for (int p = 0; p <= head_panels; ++p) edges.push_back(static_cast<double>(p) / head_panels);
    int main_panels = std::max(1, static_cast<int>(std::ceil((opt_.t_split - 1.0) / width)));
    for (int p = 1; p <= main_panels; ++p)
        edges.push_back(1.0 + (opt_.t_split - 1.0) * p / main_panels);
    const GaussLegendre& gl = gauss_legendre(16);
    nodes_.reserve((edges.size() - 1) * 16);
    weights_.reserve(nodes_.capacity());
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        double a = edges[p], b = edges[p + 1];
        for (int i = 0; i < 16; ++i) {
            nodes_.push_back(0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[i]);
            weights_.push_back(0.5 * (b - a) * gl.weights[i]);
        }
    }
    cor_values_.resize(nodes_.size());
    chi_values_.resize(nodes_.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(nodes_.size()); ++i) {
        std::size_t k = static_cast<std::size_t>(i);
        Complex sum = 0.0;
        for (const auto& e : modes_.entries) sum += e.mode.eval(nodes_[k]);
        cor_values_[k] = sum;
        chi_values_[k] =
            smooth_cutoff(nodes_[k], 1.0 + 0.35 * (opt_.chi_cutoff - 1.0), opt_.chi_cutoff);
    }

    // Stationary-phase tail model per mode: order-0 amplitudes from the pole
    // values, order-1 corrections fitted on the last stretch before t_split.
    double p = 0.5 * (dim_ - 1);
    for (const auto& e : modes_.entries) {
        ModeTail mt;
        mt.xi_norm = e.mode.xi_norm();
        Complex rot_minus = std::polar(1.0, -0.25 * M_PI * (dim_ - 1));
        Complex rot_plus = std::polar(1.0, 0.25 * M_PI * (dim_ - 1));
        double amp = std::pow(2.0 * M_PI / mt.xi_norm, p);
        mt.a_plus = amp * rot_minus * e.mode.pole_plus();
        mt.a_minus = amp * rot_plus * e.mode.pole_minus();

        // Least squares for r(t) = I(t) - order0(t) against
        // {e^{+i|xi|t} t^{-p-1}, e^{-i|xi|t} t^{-p-1}}.
        const int ns = 24;
        Complex g11 = 0, g12 = 0, g22 = 0, r1 = 0, r2 = 0;
        for (int k = 0; k < ns; ++k) {
            double t = opt_.t_split * (0.7 + 0.3 * (k + 0.5) / ns);
            Complex order0 = std::pow(t, -p) * (mt.a_plus * std::polar(1.0, mt.xi_norm * t) +
                                                mt.a_minus * std::polar(1.0, -mt.xi_norm * t));
            Complex resid = e.mode.eval(t) - order0;
            Complex b1 = std::pow(t, -p - 1.0) * std::polar(1.0, mt.xi_norm * t);
            Complex b2 = std::pow(t, -p - 1.0) * std::polar(1.0, -mt.xi_norm * t);
            g11 += std::conj(b1) * b1;
            g12 += std::conj(b1) * b2;
            g22 += std::conj(b2) * b2;
            r1 += std::conj(b1) * resid;
            r2 += std::conj(b2) * resid;
        }
        Complex det = g11 * g22 - g12 * std::conj(g12);
        if (std::abs(det) > 1e-30) {
            mt.b_plus = (r1 * g22 - g12 * r2) / det;
            mt.b_minus = (g11 * r2 - std::conj(g12) * r1) / det;
        }
        tails_.push_back(mt);
    }
}

double CorrelationTransforms::laplace_singularity_distance(Complex s) const {
    // The origin is singular only when the invariant term is present.
    double d = std::abs(modes_.invariant) > 1e-300 ? std::abs(s) : 1e300;
    for (const auto& e : modes_.entries) {
        d = std::min(d, std::abs(s - Complex(0.0, e.mode.xi_norm())));
        d = std::min(d, std::abs(s - Complex(0.0, -e.mode.xi_norm())));
    }
    return d;
}

Complex CorrelationTransforms::laplace_tail(const ModeTail& mt, Complex s) const {
    double p = 0.5 * (dim_ - 1);
    Complex zp = s - Complex(0.0, mt.xi_norm);
    Complex zm = s + Complex(0.0, mt.xi_norm);
    Complex tail = 0.0;
    tail += mt.a_plus * tail_exp_integral(p, zp, opt_.t_split);
    tail += mt.a_minus * tail_exp_integral(p, zm, opt_.t_split);
    tail += mt.b_plus * tail_exp_integral(p + 1.0, zp, opt_.t_split);
    tail += mt.b_minus * tail_exp_integral(p + 1.0, zm, opt_.t_split);
    return tail;
}

TransformValue CorrelationTransforms::laplace(Complex s) const {
    if (s.real() < 0) throw PreconditionError("laplace_transform: Re(s) >= 0 required");
    if (std::abs(s.imag()) > opt_.im_budget)
        throw PreconditionError("laplace_transform: |Im s| beyond the cached resolution");
    double dist = laplace_singularity_distance(s);
    if (dist < 1e-12)
        throw DomainError("laplace_transform: s at a singular point of {0} U {+-i|xi|}");
    if (!opt_.probe && dist < 1e-4)
        throw DomainError("laplace_transform: s within 1e-4 of a singular point (set probe)");

    // Invariant term integrates in closed form: c0/s split at t_split.
    Complex c0 = modes_.invariant;
    Complex cutoff = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        cutoff += weights_[i] * cor_values_[i] * std::exp(-s * nodes_[i]);
    // c0 (1 - e^{-s t_split})/s, stable near s = 0.
    Complex tail = 0.0;
    if (std::abs(c0) > 1e-300) {
        if (std::abs(s) * opt_.t_split < 1e-6) {
            cutoff += c0 * opt_.t_split * (1.0 - 0.5 * s * opt_.t_split);
        } else {
            cutoff += c0 * (1.0 - std::exp(-s * opt_.t_split)) / s;
        }
        tail += c0 * std::exp(-s * opt_.t_split) / s;
    }
    for (const ModeTail& mt : tails_) tail += laplace_tail(mt, s);
    return {s, cutoff + tail, cutoff, tail};
}

Complex CorrelationTransforms::mellin_tail(const ModeTail& mt, Complex s) const {
    double p = 0.5 * (dim_ - 1);
    Complex tail = 0.0;
    tail += mt.a_plus * tail_oscillatory_integral(s + p, mt.xi_norm, opt_.t_split);
    tail += mt.a_minus * tail_oscillatory_integral(s + p, -mt.xi_norm, opt_.t_split);
    tail += mt.b_plus * tail_oscillatory_integral(s + p + 1.0, mt.xi_norm, opt_.t_split);
    tail += mt.b_minus * tail_oscillatory_integral(s + p + 1.0, -mt.xi_norm, opt_.t_split);
    return tail;
}

std::pair<Complex, Complex> CorrelationTransforms::mellin_parts(Complex s) const {
    Complex c0 = modes_.invariant;
    Complex m0 = 0.0, minf_num = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i] < 1.0) continue;
        Complex w = weights_[i] * std::pow(nodes_[i], -s) * (cor_values_[i] + c0);
        m0 += chi_values_[i] * w;
        minf_num += (1.0 - chi_values_[i]) * w;
    }
    // Tail of the invariant part: c0 t_split^{1-s}/(s-1) carries the pole.
    Complex minf = minf_num + c0 * std::pow(opt_.t_split, 1.0 - s) / (s - 1.0);
    for (const ModeTail& mt : tails_) minf += mellin_tail(mt, s);
    return {m0, minf};
}

TransformValue CorrelationTransforms::mellin(Complex s) const {
    if (std::abs(s - Complex(1.0, 0.0)) < 1e-9)
        throw DomainError("mellin_transform: pole at s = 1");
    if (std::abs(s.imag()) > opt_.im_budget)
        throw PreconditionError("mellin_transform: |Im s| beyond the cached resolution");
    auto [m0, minf] = mellin_parts(s);
    return {s, m0 + minf, m0, minf};
}

TransformValue laplace_transform(const Observable& phi, const Observable& psi, Complex s,
                                 double t_split, bool probe) {
    TransformOptions opt;
    opt.t_split = t_split;
    opt.probe = probe;
    CorrelationTransforms ct(phi, psi, opt);
    return ct.laplace(s);
}

TransformValue mellin_transform(const Observable& phi, const Observable& psi, Complex s,
                                double chi_cutoff, bool probe) {
    TransformOptions opt;
    opt.chi_cutoff = chi_cutoff;
    opt.probe = probe;
    CorrelationTransforms ct(phi, psi, opt);
    return ct.mellin(s);
}

}  // namespace orthospec
