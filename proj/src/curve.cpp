#include "biphoton/curve.hpp"

#include <algorithm>
#include <cmath>

#include "biphoton/error.hpp"

namespace biphoton {

Curve::Curve(std::vector<double> x, std::vector<double> y) : xs(std::move(x)), ys(std::move(y)) {
    validate();
}

void Curve::validate() const {
    if (xs.size() != ys.size()) throw ValidationError("curve: xs and ys differ in length");
    if (xs.size() < 3) throw ValidationError("curve: need at least 3 samples");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]))
            throw ValidationError("curve: non-finite sample");
        if (ys[i] < 0.0) throw ValidationError("curve: negative y sample");
        if (i > 0 && !(xs[i] > xs[i - 1])) throw ValidationError("curve: xs not strictly increasing");
    }
}

void Curve::normalize_peak() {
    double m = *std::max_element(ys.begin(), ys.end());
    if (m > 0.0)
        for (auto& y : ys) y /= m;
}

namespace {

double bisect_crossing(const std::function<double(double)>& f, double a, double b, double level,
                       double rel_tol) {
    // f(a) - level and f(b) - level have opposite signs (or touch zero).
    double fa = f(a) - level;
    double scale = std::max({std::abs(a), std::abs(b), std::abs(b - a)});
    for (int it = 0; it < 200 && std::abs(b - a) > rel_tol * scale; ++it) {
        double m = 0.5 * (a + b);
        double fm = f(m) - level;
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

double lerp_crossing(double x0, double y0, double x1, double y1, double level) {
    if (y1 == y0) return 0.5 * (x0 + x1);
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0);
}

}  // namespace

FwhmResult fwhm(const Curve& curve, const std::function<double(double)>& refine, double rel_tol) {
    curve.validate();
    const auto& xs = curve.xs;
    const auto& ys = curve.ys;
    const std::size_t n = xs.size();
    std::size_t ip = std::max_element(ys.begin(), ys.end()) - ys.begin();
    double peak = ys[ip];
    if (!(peak > 0.0)) throw ValidationError("fwhm: curve has no positive maximum");
    double half = 0.5 * peak;

    // Outermost samples still at or above half maximum.
    std::size_t il = 0;
    while (ys[il] < half) ++il;
    std::size_t ir = n - 1;
    while (ys[ir] < half) --ir;
    if (il == 0) throw NoHalfCrossing("fwhm: no half-maximum crossing on the left of the window");
    if (ir == n - 1) throw NoHalfCrossing("fwhm: no half-maximum crossing on the right of the window");

    FwhmResult r{};
    r.peak_x = xs[ip];
    r.peak_y = peak;
    if (refine) {
        r.x_left = bisect_crossing(refine, xs[il - 1], xs[il], half, rel_tol);
        r.x_right = bisect_crossing(refine, xs[ir], xs[ir + 1], half, rel_tol);
    } else {
        r.x_left = lerp_crossing(xs[il - 1], ys[il - 1], xs[il], ys[il], half);
        r.x_right = lerp_crossing(xs[ir], ys[ir], xs[ir + 1], ys[ir + 1], half);
    }
    r.width = r.x_right - r.x_left;
    return r;
}

}  // namespace biphoton

namespace biphoton {

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 2) throw ValidationError("linspace: need at least two points");
    std::vector<double> v(n);
    const double h = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) v[i] = lo + h * i;
    v.back() = hi;
    return v;
}

MeasuredCurve measure_function(const std::vector<double>& xs, const std::function<double(double)>& f) {
    std::vector<double> ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = f(xs[i]);
    std::size_t ip = std::max_element(ys.begin(), ys.end()) - ys.begin();
    double px = xs[ip], py = ys[ip];
    if (!(py > 0.0)) throw ValidationError("measure: function has no positive maximum on the window");
    if (ip > 0 && ip + 1 < xs.size()) {
        // Golden-section polish; never accept a point below the best sample.
        constexpr double g = 0.61803398874989484820;
        double a = xs[ip - 1], b = xs[ip + 1];
        double c = b - g * (b - a), d = a + g * (b - a);
        double fc = f(c), fd = f(d);
        for (int it = 0; it < 80 && (b - a) > 1e-12 * std::max(std::abs(a), std::abs(b)); ++it) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = f(d);
            }
        }
        double xm = 0.5 * (a + b), fm = f(xm);
        if (fm > py) {
            px = xm;
            py = fm;
        }
    }
    MeasuredCurve out;
    for (auto& y : ys) y /= py;
    out.curve = Curve(xs, std::move(ys));
    auto normalized = [&f, py](double x) { return f(x) / py; };
    out.width = fwhm(out.curve, normalized);
    out.width.peak_x = px;
    out.width.peak_y = 1.0;
    return out;
}

}  // namespace biphoton
