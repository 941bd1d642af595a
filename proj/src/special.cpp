#include "orthospec/special.hpp"

#include <cmath>

#include "orthospec/errors.hpp"
#include "orthospec/quadrature.hpp"

namespace orthospec {

namespace {

// Lanczos coefficients, g = 7, n = 9.
constexpr double kLanczos[9] = {
    0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
    771.32342877765313,   -176.61502916214059, 12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

Complex lanczos_gamma(Complex z) {
    if (z.real() < 0.5) {
        // Reflection formula.
        return M_PI / (std::sin(M_PI * z) * lanczos_gamma(1.0 - z));
    }
    z -= 1.0;
    Complex x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    Complex t = z + 7.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

}  // namespace

Complex cgamma(Complex z) { return lanczos_gamma(z); }

Complex clgamma(Complex z) {
    if (z.real() <= 0) throw PreconditionError("clgamma: Re z > 0 required");
    z -= 1.0;
    Complex x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    Complex t = z + 7.5;
    return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(x);
}

namespace {

// J_0 and J_1 by power series (|x| <= 12) or Hankel asymptotics.
void bessel_j01(double x, double& j0, double& j1) {
    if (x < 12.0) {
        double q = 0.25 * x * x;
        double term = 1.0, sum0 = 1.0;
        for (int k = 1; k <= 40; ++k) {
            term *= -q / (static_cast<double>(k) * k);
            sum0 += term;
            if (std::abs(term) < 1e-18 * std::abs(sum0)) break;
        }
        j0 = sum0;
        term = 1.0;
        double sum1 = 1.0;
        for (int k = 1; k <= 40; ++k) {
            term *= -q / (static_cast<double>(k) * (k + 1.0));
            sum1 += term;
            if (std::abs(term) < 1e-18 * std::abs(sum1)) break;
        }
        j1 = 0.5 * x * sum1;
        return;
    }
    // Hankel expansion J_nu = sqrt(2/(pi x)) (P cos(chi) - Q sin(chi)),
    // chi = x - (nu/2 + 1/4) pi.  Truncated near the smallest term.
    auto hankel = [&](double nu) {
        double mu = 4.0 * nu * nu;
        double p = 1.0, q = (mu - 1.0) / (8.0 * x);
        double pterm = 1.0, qterm = q;
        for (int k = 1; k < 12; ++k) {
            double a1 = (mu - (4.0 * k - 3.0) * (4.0 * k - 3.0)) * (mu - (4.0 * k - 1.0) * (4.0 * k - 1.0));
            pterm *= -a1 / ((2.0 * k - 1.0) * (2.0 * k) * 64.0 * x * x);
            double a2 = (mu - (4.0 * k - 1.0) * (4.0 * k - 1.0)) * (mu - (4.0 * k + 1.0) * (4.0 * k + 1.0));
            qterm *= -a2 / ((2.0 * k) * (2.0 * k + 1.0) * 64.0 * x * x);
            if (std::abs(pterm) < 1e-17 && std::abs(qterm) < 1e-17) break;
            p += pterm;
            q += qterm;
        }
        double chi = x - (0.5 * nu + 0.25) * M_PI;
        return std::sqrt(2.0 / (M_PI * x)) * (p * std::cos(chi) - q * std::sin(chi));
    };
    j0 = hankel(0.0);
    j1 = hankel(1.0);
}

}  // namespace

std::vector<double> bessel_j_array(int n, double x) {
    if (x < 0) throw PreconditionError("bessel_j_array: x >= 0 required");
    std::vector<double> j(n + 1, 0.0);
    if (x == 0.0) {
        j[0] = 1.0;
        return j;
    }
    if (x > static_cast<double>(n) + 4.0) {
        // Forward recurrence is stable while the order stays below the argument.
        double j0, j1;
        bessel_j01(x, j0, j1);
        j[0] = j0;
        if (n >= 1) j[1] = j1;
        for (int k = 1; k < n; ++k) j[k + 1] = (2.0 * k / x) * j[k] - j[k - 1];
        return j;
    }
    // Miller backward recurrence, normalized by J_0 + 2 sum_k J_{2k} = 1.
    int start = n + 20 + static_cast<int>(1.2 * x);
    if (start % 2) ++start;
    std::vector<double> all(start + 2, 0.0);
    all[start + 1] = 0.0;
    all[start] = 1e-300;
    for (int k = start; k >= 1; --k) {
        all[k - 1] = (2.0 * k / x) * all[k] - all[k + 1];
        if (std::abs(all[k - 1]) > 1e250) {
            for (int i = k - 1; i <= start + 1; ++i) all[i] *= 1e-250;
        }
    }
    double norm = all[0];
    for (int k = 2; k <= start; k += 2) norm += 2.0 * all[k];
    for (int i = 0; i <= n; ++i) j[i] = all[i] / norm;
    return j;
}

std::vector<double> sph_bessel_array(int n, double x) {
    if (x < 0) throw PreconditionError("sph_bessel_array: x >= 0 required");
    std::vector<double> j(n + 1, 0.0);
    if (x == 0.0) {
        j[0] = 1.0;
        return j;
    }
    if (x > static_cast<double>(n) + 2.0) {
        j[0] = std::sin(x) / x;
        if (n >= 1) j[1] = std::sin(x) / (x * x) - std::cos(x) / x;
        for (int k = 1; k < n; ++k) j[k + 1] = (2.0 * k + 1.0) / x * j[k] - j[k - 1];
        return j;
    }
    // Backward recurrence normalized against j_0.
    int start = n + 16 + static_cast<int>(x);
    std::vector<double> all(start + 2, 0.0);
    all[start + 1] = 0.0;
    all[start] = 1e-300;
    for (int k = start; k >= 1; --k) {
        all[k - 1] = (2.0 * k + 1.0) / x * all[k] - all[k + 1];
        if (std::abs(all[k - 1]) > 1e250) {
            for (int i = k - 1; i <= start + 1; ++i) all[i] *= 1e-250;
        }
    }
    double scale = (std::sin(x) / x) / all[0];
    for (int i = 0; i <= n; ++i) j[i] = all[i] * scale;
    return j;
}

namespace {

// Series form of E_p around w = 0 (p not a positive integer):
// E_p(w) = Gamma(1-p) w^{p-1} - sum_{n>=0} (-w)^n / (n! (n+1-p)).
Complex expint_series_nonint(double p, Complex w) {
    Complex sum = 0.0;
    Complex term = 1.0;  // (-w)^n / n!
    for (int n = 0; n <= 60; ++n) {
        Complex contrib = term / (n + 1.0 - p);
        sum += contrib;
        term *= -w / (n + 1.0);
        if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return cgamma(1.0 - p) * std::pow(w, p - 1.0) - sum;
}

// E_1(w) = -gamma - log w + sum_{n>=1} (-1)^{n+1} w^n / (n n!).
Complex expint_series_e1(Complex w) {
    const double euler_gamma = 0.57721566490153286061;
    Complex sum = 0.0;
    Complex term = 1.0;  // w^n / n!
    for (int n = 1; n <= 60; ++n) {
        term *= w / static_cast<double>(n);
        Complex contrib = term / static_cast<double>(n);
        sum += (n % 2 ? contrib : -contrib);
        if (std::abs(term) < 1e-18) break;
    }
    return -euler_gamma - std::log(w) + sum;
}

// Rotated-contour quadrature: E_p(w) = (e^{-w}/w) int_0^inf e^{-x} (1 + x/w)^{-p} dx.
Complex expint_quadrature(double p, Complex w) {
    auto f = [&](double x) { return std::exp(-x) * std::pow(1.0 + x / w, -p); };
    std::vector<double> breaks = {0.0, 2.0, 6.0, 14.0, 30.0, 60.0, 110.0, 180.0, 260.0};
    Complex integral = gl_integrate_panels(f, breaks, 32);
    return std::exp(-w) / w * integral;
}

}  // namespace

Complex expint_ep(double p, Complex w) {
    if (w == Complex(0.0)) throw PreconditionError("expint_ep: w != 0 required");
    if (w.real() < -1e-12) throw PreconditionError("expint_ep: Re(w) >= 0 required");
    if (std::abs(w) <= 4.0) {
        if (std::abs(p - std::round(p)) < 1e-12 && p >= 1.0) {
            int ip = static_cast<int>(std::round(p));
            Complex e = expint_series_e1(w);
            // Upward recurrence E_{q+1}(w) = (e^{-w} - w E_q(w)) / q.
            for (int q = 1; q < ip; ++q) e = (std::exp(-w) - w * e) / static_cast<double>(q);
            return e;
        }
        return expint_series_nonint(p, w);
    }
    return expint_quadrature(p, w);
}

Complex tail_exp_integral(double p, Complex z, double a) {
    if (a <= 0) throw PreconditionError("tail_exp_integral: a > 0 required");
    return std::pow(a, 1.0 - p) * expint_ep(p, z * a);
}

Complex tail_oscillatory_integral(Complex q, double w, double a) {
    if (w == 0.0) throw PreconditionError("tail_oscillatory_integral: w != 0 required");
    if (a <= 0) throw PreconditionError("tail_oscillatory_integral: a > 0 required");
    // Rotate t = a + i sgn(w) v:  int = i sgn(w) e^{i w a} int_0^inf e^{-|w| v} (a + i sgn(w) v)^{-q} dv.
    double sgn = (w > 0) ? 1.0 : -1.0;
    Complex rot(0.0, sgn);
    auto f = [&](double v) { return std::exp(-std::abs(w) * v) * std::pow(a + rot * v, -q); };
    // Decay scale 1/|w|; panels sized accordingly.
    double s = 1.0 / std::abs(w);
    std::vector<double> breaks;
    for (double b : {0.0, 1.0, 3.0, 7.0, 15.0, 30.0, 50.0}) breaks.push_back(b * s);
    Complex integral = gl_integrate_panels(f, breaks, 32);
    return rot * std::exp(Complex(0.0, w * a)) * integral;
}

void normalized_assoc_legendre(int lmax, int m, double x, std::vector<double>& out) {
    // Holmes-Featherstone style stable recurrence for Pbar_l^m, l = m..lmax.
    out.assign(lmax - m + 1, 0.0);
    double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    double pmm = std::sqrt(1.0 / (4.0 * M_PI));
    for (int k = 1; k <= m; ++k) pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
    out[0] = pmm;
    if (lmax == m) return;
    double pm1 = std::sqrt(2.0 * m + 3.0) * x * pmm;
    out[1] = pm1;
    double pll2 = pmm, pll1 = pm1;
    for (int l = m + 2; l <= lmax; ++l) {
        double al = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
        double bl = std::sqrt(((l - 1.0) * (l - 1.0) - static_cast<double>(m) * m) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
        double pl = al * (x * pll1 - bl * pll2);
        out[l - m] = pl;
        pll2 = pll1;
        pll1 = pl;
    }
}

}  // namespace orthospec
