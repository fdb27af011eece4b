#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace biphoton {

struct Curve {
    std::vector<double> xs;
    std::vector<double> ys;
    std::map<std::string, std::string> meta;  // x_label, x_unit, y_label, ...

    Curve() = default;
    Curve(std::vector<double> x, std::vector<double> y);

    // len >= 3, strictly increasing xs, finite non-negative ys.
    void validate() const;
    std::size_t size() const { return xs.size(); }
    void normalize_peak();
};

struct FwhmResult {
    double width;
    double x_left;
    double x_right;
    double peak_x;
    double peak_y;
};

// Outermost half-maximum crossings. With `refine` the crossings are bisected on
// the exact function (same normalization as the samples); otherwise the
// bracketing interval is linearly interpolated.
FwhmResult fwhm(const Curve& curve, const std::function<double(double)>& refine = {},
                double rel_tol = 1e-10);

struct MeasuredCurve {
    Curve curve;  // peak-normalized
    FwhmResult width;
};

// Samples f on xs, polishes the peak between neighbouring samples, normalizes
// to the polished peak and measures the FWHM with bisection on f.
MeasuredCurve measure_function(const std::vector<double>& xs, const std::function<double(double)>& f);

std::vector<double> linspace(double lo, double hi, int n);

}  // namespace biphoton
