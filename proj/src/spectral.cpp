#include "biphoton/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "biphoton/error.hpp"
#include "biphoton/quadrature.hpp"

namespace biphoton {

namespace {

constexpr double kSincFwhm = 2.78;  // FWHM of sinc^2(x) in x, rounded as in the width formulas
constexpr int kMaxWiden = 3;

}  // namespace

double nu_to_lambda(double nu, const PhysicalConfig& cfg) {
    double omega = 0.5 * derive(cfg).omega0 + nu;
    if (!(omega > 0.0)) throw ValidationError("nu_to_lambda: detuning below -omega0/2");
    return 2.0 * kPi * cfg.c / omega;
}

double lambda_to_nu(double lambda, const PhysicalConfig& cfg) {
    if (!(lambda > 0.0)) throw ValidationError("lambda_to_nu: wavelength must be positive");
    return 2.0 * kPi * cfg.c / lambda - 0.5 * derive(cfg).omega0;
}

double mismatch(double nu1, double nu2, const PhysicalConfig& cfg) {
    const double w0 = derive(cfg).omega0;
    const double d = nu1 - nu2;
    return (cfg.A * (nu1 + nu2) - cfg.B * d * d / w0) / cfg.c;
}

double phase_match_curve(double nu2, const PhysicalConfig& cfg) {
    // p (nu1 + nu2) = (nu1 - nu2)^2 with p = A omega0 / B; small root, written
    // without cancellation.
    const double p = cfg.A * derive(cfg).omega0 / cfg.B;
    const double rad = 0.25 * p * p + 2.0 * p * nu2;
    if (rad < 0.0) throw OutOfBranch("phase_match_curve: nu2 below -A omega0/(8B), no real root");
    return nu2 - 2.0 * p * nu2 / (0.5 * p + std::sqrt(rad));
}

double phase_match_curve_approx(double nu2, const PhysicalConfig& cfg) {
    return -nu2 + 4.0 * cfg.B * nu2 * nu2 / (cfg.A * derive(cfg).omega0);
}

double phase_match_sum(double nu1, const PhysicalConfig& cfg) {
    const double w0 = derive(cfg).omega0;
    const double b = cfg.A * w0 + 4.0 * cfg.B * nu1;
    const double rad = cfg.A * cfg.A * w0 * w0 + 8.0 * cfg.A * cfg.B * w0 * nu1;
    if (rad < 0.0) throw OutOfBranch("phase_match_sum: nu1 below -A omega0/(8B), no real root");
    return 8.0 * cfg.B * nu1 * nu1 / (b + std::sqrt(rad));
}

cdouble jsa(double nu1, double nu2, const PhysicalConfig& cfg) {
    const double u = nu1 + nu2;
    const double pump = std::exp(-u * u * cfg.tau * cfg.tau / (8.0 * kLn2));
    return {pump * sinc(0.5 * cfg.L * mismatch(nu1, nu2, cfg)), 0.0};
}

void SpectralGrid::validate() const {
    if (n1 < 16 || n2 < 16) throw ValidationError("spectral grid: need at least 16 points per axis");
    if (!(nu1_half > 0.0) || !(nu2_half > 0.0))
        throw ValidationError("spectral grid: half-widths must be positive");
}

double SpectralGrid::nu1(int i) const { return nu1_center - nu1_half + 2.0 * nu1_half * i / (n1 - 1); }
double SpectralGrid::nu2(int j) const { return nu2_center - nu2_half + 2.0 * nu2_half * j / (n2 - 1); }

AmplitudeGrid sample_jsa(const SpectralGrid& grid, const PhysicalConfig& cfg) {
    grid.validate();
    AmplitudeGrid out{grid, Eigen::MatrixXcd(grid.n1, grid.n2)};
    for (int i = 0; i < grid.n1; ++i)
        for (int j = 0; j < grid.n2; ++j) out.values(i, j) = jsa(grid.nu1(i), grid.nu2(j), cfg);
    return out;
}

double coincidence_width_estimate(const PhysicalConfig& cfg) {
    return kSincFwhm * 2.0 * cfg.c / (cfg.A * cfg.L);
}

double pump_width(const PhysicalConfig& cfg) { return 4.0 * kLn2 / cfg.tau; }

double single_width_short(const PhysicalConfig& cfg) {
    return std::sqrt(2.0 * cfg.A * kLn2 * derive(cfg).omega0 / (cfg.B * cfg.tau));
}

double single_width_long(const PhysicalConfig& cfg) {
    return std::sqrt(kSincFwhm * cfg.c * derive(cfg).omega0 / (cfg.L * cfg.B));
}

namespace {

struct FreqWindow {
    double lo, hi;
};

// Samples g(nu) on the requested axis and measures it. On the wavelength axis the
// curve is sampled uniformly in lambda and no Jacobian is applied.
MeasuredCurve measure_on_axis(const std::function<double(double)>& g, FreqWindow fw, int points,
                              Axis axis, const PhysicalConfig& cfg) {
    if (points < 3) throw ValidationError("window: need at least 3 points");
    MeasuredCurve m;
    if (axis == Axis::Frequency) {
        m = measure_function(linspace(fw.lo, fw.hi, points), g);
        m.curve.meta = {{"x_label", "nu1"}, {"x_unit", "rad/s"}, {"y_label", "intensity"},
                        {"y_unit", "peak-normalized"}};
    } else {
        const double l_lo = nu_to_lambda(fw.hi, cfg);
        const double l_hi = nu_to_lambda(fw.lo, cfg);
        auto h = [&](double lam) { return g(lambda_to_nu(lam, cfg)); };
        m = measure_function(linspace(l_lo, l_hi, points), h);
        m.curve.meta = {{"x_label", "lambda1"}, {"x_unit", "m"}, {"y_label", "intensity"},
                        {"y_unit", "peak-normalized"}};
    }
    return m;
}

FreqWindow to_freq_window(const Window& w, Axis axis, const PhysicalConfig& cfg) {
    if (axis == Axis::Frequency) return {w.lo, w.hi};
    return {lambda_to_nu(w.hi, cfg), lambda_to_nu(w.lo, cfg)};
}

// Measures on an explicit window, or on an auto window widened x2 on NoHalfCrossing.
MeasuredCurve measure_windowed(const std::function<double(double)>& g, const Window& window,
                               FreqWindow auto_window, Axis axis, const PhysicalConfig& cfg,
                               double floor_nu = -1e300) {
    if (!window.is_auto()) return measure_on_axis(g, to_freq_window(window, axis, cfg), window.points, axis, cfg);
    FreqWindow fw = auto_window;
    for (int attempt = 0;; ++attempt) {
        try {
            return measure_on_axis(g, fw, window.points, axis, cfg);
        } catch (const NoHalfCrossing&) {
            if (attempt == kMaxWiden) throw;
            const double c = 0.5 * (fw.lo + fw.hi);
            const double h = fw.hi - fw.lo;
            fw = {std::max(c - h, floor_nu), c + h};
        }
    }
}

// Keeps auto windows above the detuning where the optical frequency vanishes.
double detuning_floor(const PhysicalConfig& cfg) { return -0.45 * derive(cfg).omega0; }

}  // namespace

MeasuredCurve coincidence_spectrum(double nu2_fixed, const Window& window, const PhysicalConfig& cfg,
                                   Axis axis) {
    auto g = [&](double nu1) { return std::norm(jsa(nu1, nu2_fixed, cfg)); };
    double c_match;
    try {
        c_match = phase_match_curve(nu2_fixed, cfg);
    } catch (const OutOfBranch&) {
        c_match = -nu2_fixed;
    }
    const double c_pump = -nu2_fixed;
    const double w = std::min(coincidence_width_estimate(cfg), pump_width(cfg));
    FreqWindow fw{std::min(c_match, c_pump) - 6.0 * w, std::max(c_match, c_pump) + 6.0 * w};
    auto m = measure_windowed(g, window, fw, axis, cfg, detuning_floor(cfg));
    m.curve.meta["kind"] = "coincidence";
    return m;
}

double single_particle_density(double nu1, const PhysicalConfig& cfg, double tol) {
    // Integrate over u = nu1 + nu2 in units of the pump width; the pump
    // intensity is below 1e-16 outside |u| < 10.1/tau.
    const double wp = pump_width(cfg);
    const double umax = 10.1 / cfg.tau / wp;
    auto f = [&](double x) { return std::norm(jsa(nu1, x * wp - nu1, cfg)); };
    std::vector<double> breaks{-umax, 0.0, umax};
    try {
        const double centre = phase_match_sum(nu1, cfg) / wp;
        const double ws = coincidence_width_estimate(cfg) / wp;
        for (double k : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
            for (double s : {-1.0, 1.0}) {
                double b = centre + s * k * ws;
                if (b > -umax && b < umax) breaks.push_back(b);
            }
        }
    } catch (const OutOfBranch&) {
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    QuadOptions opt;
    opt.tol = tol;
    return wp * integrate_adaptive(f, breaks, opt).value;
}

MeasuredCurve single_particle_spectrum(const Window& window, const PhysicalConfig& cfg,
                                       SingleMethod method, Axis axis) {
    const auto d = derive(cfg);
    std::function<double(double)> g;
    switch (method) {
        case SingleMethod::Numeric:
            g = [&](double nu1) { return single_particle_density(nu1, cfg); };
            break;
        case SingleMethod::Analytic: {
            if (d.eta > 0.3)
                throw AnalyticOutOfRegime("single_particle_spectrum: analytic short-pulse form needs eta <= 0.3");
            g = [&cfg, d](double nu1) {
                const double rad = cfg.A * cfg.A * d.omega0 * d.omega0 + 8.0 * cfg.A * cfg.B * d.omega0 * nu1;
                if (!(rad > 0.0)) return 0.0;
                const double nu = phase_match_sum(nu1, cfg);
                return std::exp(-nu * nu * cfg.tau * cfg.tau / (4.0 * kLn2)) / std::sqrt(rad);
            };
            break;
        }
        case SingleMethod::AnalyticLong:
            g = [&cfg, d](double nu1) {
                const double s = sinc(2.0 * cfg.L * cfg.B * nu1 * nu1 / (cfg.c * d.omega0));
                return s * s;
            };
            break;
    }
    const double ws = single_width_short(cfg);
    const double wl = single_width_long(cfg);
    const double half = 2.0 * std::sqrt(ws * ws + wl * wl);
    auto m = measure_windowed(g, window, {std::max(-half, detuning_floor(cfg)), half}, axis, cfg,
                              detuning_floor(cfg));
    m.curve.meta["kind"] = method == SingleMethod::Numeric    ? "single_numeric"
                           : method == SingleMethod::Analytic ? "single_analytic"
                                                              : "single_analytic_long";
    return m;
}

MeasuredCurve pump_spectrum(double nu2_fixed, const Window& window, const PhysicalConfig& cfg, Axis axis) {
    auto g = [&](double nu1) {
        const double u = nu1 + nu2_fixed;
        return std::exp(-u * u * cfg.tau * cfg.tau / (4.0 * kLn2));
    };
    const double w = pump_width(cfg);
    auto m = measure_windowed(g, window, {-nu2_fixed - 6.0 * w, -nu2_fixed + 6.0 * w}, axis, cfg,
                              detuning_floor(cfg));
    m.curve.meta["kind"] = "pump";
    return m;
}

namespace {

double crystal_factor(const PhysicalConfig& cfg) {
    return cfg.A / std::sqrt(cfg.B) * std::sqrt(cfg.L / cfg.lambda0);
}

double r_interp_at(const PhysicalConfig& cfg, double eta) {
    const double k = crystal_factor(cfg);
    const double cs = std::sqrt(2.0 * kPi * kLn2) / kSincFwhm;
    const double cl = std::sqrt(kSincFwhm * kPi) / (std::pow(2.0, 2.5) * kLn2);
    const double rs = cs * k / std::sqrt(eta);
    const double rl = cl * k * eta;
    return std::sqrt(rs * rs + rl * rl);
}

}  // namespace

RParameters r_parameter(const PhysicalConfig& cfg) {
    const double eta = derive(cfg).eta;
    const double k = crystal_factor(cfg);
    const double cs = std::sqrt(2.0 * kPi * kLn2) / kSincFwhm;
    const double cl = std::sqrt(kSincFwhm * kPi) / (std::pow(2.0, 2.5) * kLn2);
    RParameters r{};
    r.R_short = cs * k / std::sqrt(eta);
    r.R_long = cl * k * eta;
    r.R_interp = std::sqrt(r.R_short * r.R_short + r.R_long * r.R_long);
    r.R_unified = 0.75 * k * std::sqrt(eta * eta + 1.0 / eta);
    return r;
}

RMinimum r_min(const PhysicalConfig& cfg) {
    cfg.validate();
    // Golden section in log(eta); R_interp is unimodal in eta.
    constexpr double g = 0.61803398874989484820;
    double a = std::log(1e-3), b = std::log(1e3);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = r_interp_at(cfg, std::exp(c)), fd = r_interp_at(cfg, std::exp(d));
    while (b - a > 1e-12) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = r_interp_at(cfg, std::exp(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = r_interp_at(cfg, std::exp(d));
        }
    }
    const double eta = std::exp(0.5 * (a + b));
    return {eta, tau_for_eta(cfg, eta), r_interp_at(cfg, eta)};
}

RMeasured r_measured(const PhysicalConfig& cfg) {
    RMeasured r{};
    r.single_width = single_particle_spectrum(Window{}, cfg, SingleMethod::Numeric).width.width;
    r.coincidence_width = coincidence_spectrum(0.0, Window{}, cfg).width.width;
    r.R = r.single_width / r.coincidence_width;
    return r;
}

}  // namespace biphoton
