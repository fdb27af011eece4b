#pragma once

#include <complex>

namespace biphoton {

using cdouble = std::complex<double>;

double sinc(double x);

// Faddeeva function w(z) = exp(-z^2) erfc(-iz). Throws DomainOverflow when the
// lower half-plane value overflows.
cdouble faddeeva(cdouble z);

// Error function of complex argument, relative accuracy ~1e-13 in practice.
// Documented domain |Im z| <= 30; throws DomainOverflow if the result overflows.
cdouble erf_complex(cdouble z);

// exp(-y^2) * erf(x - i y) for real x, y, without the intermediate overflow of
// the unscaled erf when y is large.
cdouble damped_erf(double x, double y);

struct FresnelMoments {
    cdouble m0;  // integral_0^X x^{-1/2} exp(i beta / x) dx
    cdouble m1;  // integral_0^X x^{+1/2} exp(i beta / x) dx
};

// Closed forms via the substitution s = beta / x and the rotated-contour
// erfc representation; asymptotic series when beta / X is large.
FresnelMoments fresnel_moments(double beta, double X);

inline cdouble fresnel_tail(double beta, double X) { return fresnel_moments(beta, X).m0; }

// Integral of sinc(x) sinc(x + y) over the real line, evaluated by quadrature.
double sinc_convolution_check(double y);

}  // namespace biphoton
