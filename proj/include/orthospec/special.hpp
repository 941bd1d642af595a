#pragma once

#include <complex>
#include <vector>

namespace orthospec {

using Complex = std::complex<double>;

/// Gamma function for complex argument (Lanczos approximation, ~13 digits).
Complex cgamma(Complex z);

/// log Gamma for complex argument, principal branch on Re z > 0.
Complex clgamma(Complex z);

/// Bessel functions J_0(x)..J_n(x), x >= 0.  Power series for small x,
/// Hankel asymptotics plus forward recurrence when x dominates the order,
/// Miller backward recurrence otherwise.
std::vector<double> bessel_j_array(int n, double x);

/// Spherical Bessel functions j_0(x)..j_n(x), x >= 0.
std::vector<double> sph_bessel_array(int n, double x);

/// Generalized exponential integral E_p(w) = int_1^inf e^{-w u} u^{-p} du
/// for real order p > 0 and complex w with Re(w) >= 0, w != 0.
/// Series around w = 0, rotated-contour quadrature for larger |w|.
Complex expint_ep(double p, Complex w);

/// Tail integral int_{a}^{inf} e^{-z t} t^{-p} dt = a^{1-p} E_p(z a), a > 0.
Complex tail_exp_integral(double p, Complex z, double a);

/// Tail integral int_{a}^{inf} t^{-q} e^{i w t} dt for complex exponent q with
/// Re(q) > ... (convergence by oscillation), real w != 0, a > 0.
/// Evaluated by rotating the contour into the decaying half-plane.
Complex tail_oscillatory_integral(Complex q, double w, double a);

/// Fully normalized associated Legendre values Pbar_l^m(x) for l = m..lmax at
/// fixed m >= 0; Pbar includes the sqrt((2l+1)/(4pi) (l-m)!/(l+m)!) factor so
/// that Y_lm = Pbar_l^m(cos(theta)) e^{i m phi} is L^2-normalized on S^2.
void normalized_assoc_legendre(int lmax, int m, double x, std::vector<double>& out);

}  // namespace orthospec
