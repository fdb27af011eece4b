#include "biphoton/special.hpp"

#include <cmath>
#include <vector>

#include "biphoton/error.hpp"
#include "biphoton/params.hpp"
#include "biphoton/quadrature.hpp"

namespace biphoton {

double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

// Faddeeva function after Poppe & Wijers (ACM TOMS 680): power series near the
// origin, Laplace continued fraction far away, Taylor-accelerated fraction in
// between. Evaluated in the first quadrant, then reflected.
cdouble faddeeva(cdouble z) {
    constexpr double factor = 1.12837916709551257388;  // 2/sqrt(pi)
    constexpr double rmaxexp = 708.503061461606;
    constexpr double rmaxgoni = 3.53711887601422e15;

    const double xi = z.real();
    const double yi = z.imag();
    const double xabs = std::abs(xi);
    const double yabs = std::abs(yi);
    const double x = xabs / 6.3;
    const double y = yabs / 4.4;
    if (!std::isfinite(xabs) || !std::isfinite(yabs))
        throw DomainOverflow("faddeeva: non-finite argument");

    double qrho = x * x + y * y;
    const double xquad = xabs * xabs - yabs * yabs;
    const double yquad = 2.0 * xabs * yabs;
    double u = 0.0, v = 0.0, u2 = 0.0, v2 = 0.0;
    const bool small = qrho < 0.085264;
    if (small) {
        qrho = (1.0 - 0.85 * y) * std::sqrt(qrho);
        int n = static_cast<int>(std::lround(6.0 + 72.0 * qrho));
        int j = 2 * n + 1;
        double xsum = 1.0 / j;
        double ysum = 0.0;
        for (int i = n; i >= 1; --i) {
            j -= 2;
            double xaux = (xsum * xquad - ysum * yquad) / i;
            ysum = (xsum * yquad + ysum * xquad) / i;
            xsum = xaux + 1.0 / j;
        }
        double u1 = -factor * (xsum * yabs + ysum * xabs) + 1.0;
        double v1 = factor * (xsum * xabs - ysum * yabs);
        double daux = std::exp(-xquad);
        u2 = daux * std::cos(yquad);
        v2 = -daux * std::sin(yquad);
        u = u1 * u2 - v1 * v2;
        v = u1 * v2 + v1 * u2;
    } else {
        double h = 0.0, h2 = 0.0;
        int kapn = 0, nu = 0;
        if (qrho > 1.0) {
            qrho = std::sqrt(qrho);
            nu = static_cast<int>(3.0 + 1442.0 / (26.0 * qrho + 77.0));
        } else {
            qrho = (1.0 - y) * std::sqrt(1.0 - qrho);
            h = 1.88 * qrho;
            h2 = 2.0 * h;
            kapn = static_cast<int>(std::lround(7.0 + 34.0 * qrho));
            nu = static_cast<int>(std::lround(16.0 + 26.0 * qrho));
        }
        const bool b = h > 0.0;
        double qlambda = b ? std::pow(h2, kapn) : 0.0;
        double rx = 0.0, ry = 0.0, sx = 0.0, sy = 0.0;
        for (int n = nu; n >= 0; --n) {
            double np1 = n + 1.0;
            double tx = yabs + h + np1 * rx;
            double ty = xabs - np1 * ry;
            double c = 0.5 / (tx * tx + ty * ty);
            rx = c * tx;
            ry = c * ty;
            if (b && n <= kapn) {
                tx = qlambda + sx;
                sx = rx * tx - ry * sy;
                sy = ry * tx + rx * sy;
                qlambda /= h2;
            }
        }
        if (h == 0.0) {
            u = factor * rx;
            v = factor * ry;
        } else {
            u = factor * sx;
            v = factor * sy;
        }
        if (yabs == 0.0) u = std::exp(-xabs * xabs);
    }

    if (yi < 0.0) {
        if (small) {
            u2 *= 2.0;
            v2 *= 2.0;
        } else {
            double xq = -xquad;
            if (yquad > rmaxgoni || xq > rmaxexp)
                throw DomainOverflow("faddeeva: value overflows in the lower half-plane");
            double w1 = 2.0 * std::exp(xq);
            u2 = w1 * std::cos(yquad);
            v2 = -w1 * std::sin(yquad);
        }
        u = u2 - u;
        v = v2 - v;
        if (xi > 0.0) v = -v;
    } else if (xi < 0.0) {
        v = -v;
    }
    return {u, v};
}

namespace {

constexpr double kTwoOverSqrtPi = 1.12837916709551257390;

cdouble erf_series(cdouble z) {
    cdouble z2 = z * z;
    cdouble term = z;
    cdouble sum = z;
    for (int n = 1; n < 200; ++n) {
        term *= -z2 / static_cast<double>(n);
        cdouble t = term / static_cast<double>(2 * n + 1);
        sum += t;
        if (std::abs(t) < 1e-17 * std::abs(sum)) break;
    }
    return kTwoOverSqrtPi * sum;
}

// erf for Re z >= 0 via erf = 1 - exp(-z^2) w(iz).
cdouble erf_right(cdouble z) {
    const double x = z.real(), y = z.imag();
    cdouble w = faddeeva(cdouble(-y, x));
    double logmag = (y * y - x * x) + std::log(std::abs(w));
    if (logmag > 709.0) throw DomainOverflow("erf_complex: result overflows double precision");
    cdouble e = std::exp(cdouble(y * y - x * x, -2.0 * x * y));
    return 1.0 - e * w;
}

}  // namespace

cdouble erf_complex(cdouble z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainOverflow("erf_complex: non-finite argument");
    if (std::abs(z) < 2.0) return erf_series(z);
    if (z.real() >= 0.0) return erf_right(z);
    return -erf_right(-z);
}

cdouble damped_erf(double x, double y) {
    cdouble z(x, -y);
    if (std::abs(z) < 2.0) return std::exp(-y * y) * erf_series(z);
    cdouble phase = std::exp(cdouble(-x * x, 2.0 * x * y));
    if (x >= 0.0) return std::exp(-y * y) - phase * faddeeva(cdouble(y, x));
    return -std::exp(-y * y) + phase * faddeeva(cdouble(-y, -x));
}

namespace {

// sum_k (a)_k (-i/s)^k, truncated at the smallest term.
cdouble asymptotic_sum(double a, double s) {
    cdouble term = 1.0;
    cdouble sum = 1.0;
    double last = 1.0;
    for (int k = 0; k < 60; ++k) {
        cdouble next = term * cdouble(0.0, -(a + k) / s);
        double mag = std::abs(next);
        if (mag > last) break;
        term = next;
        sum += term;
        last = mag;
        if (mag < 1e-17) break;
    }
    return sum;
}

constexpr double kAsymptoticSwitch = 40.0;

}  // namespace

FresnelMoments fresnel_moments(double beta, double X) {
    if (!(beta >= 0.0) || !(X > 0.0))
        throw ValidationError("fresnel_moments: need beta >= 0 and X > 0");
    const double sx = std::sqrt(X);
    if (beta == 0.0) return {cdouble(2.0 * sx), cdouble(2.0 / 3.0 * X * sx)};
    const double s0 = beta / X;
    const cdouble I(0.0, 1.0);
    const cdouble e = std::exp(cdouble(0.0, s0));
    FresnelMoments r;
    if (s0 > kAsymptoticSwitch) {
        r.m0 = I * e * (X * sx / beta) * asymptotic_sum(1.5, s0);
        r.m1 = I * e * (X * X * sx / beta) * asymptotic_sum(2.5, s0);
        return r;
    }
    const cdouble rot = std::polar(1.0, kPi / 4.0);
    cdouble half = std::sqrt(kPi) * rot * e * faddeeva(std::sqrt(s0) * rot);
    r.m0 = 2.0 * sx * e + 2.0 * I * std::sqrt(beta) * half;
    r.m1 = (2.0 / 3.0) * (X * sx * e + I * beta * r.m0);
    return r;
}

double sinc_convolution_check(double y) {
    // Integrate over [-X, X] with X a multiple of pi, breaking at every multiple
    // of pi, and add the leading tail cos(y)/X of the two half-lines.
    constexpr int kPeriods = 160;
    const double X = kPeriods * kPi;
    std::vector<double> breaks;
    breaks.reserve(2 * kPeriods + 1);
    for (int k = -kPeriods; k <= kPeriods; ++k) breaks.push_back(k * kPi);
    QuadOptions opt;
    opt.tol = 1e-12;
    auto f = [y](double x) { return sinc(x) * sinc(x + y); };
    return integrate_adaptive(f, breaks, opt).value + std::cos(y) / X;
}

}  // namespace biphoton
