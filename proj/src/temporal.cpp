#include "biphoton/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "biphoton/error.hpp"
#include "biphoton/quadrature.hpp"
#include "biphoton/schmidt.hpp"
#include "biphoton/spectral.hpp"

namespace biphoton {

namespace {

// Pump envelope is below 1e-15 of its peak more than this many tau away.
constexpr double kGaussReach = 5.0;
constexpr double kWidthTimeLong = 0.555;  // FWHM of |F|^2 in units of tau0
constexpr int kMaxWiden = 3;

bool long_pulse(const PhysicalConfig& cfg) { return derive(cfg).eta >= 1.0; }

// Range in t_minus beyond which |psi|^2 is negligible: a few region I widths
// for short pulses, a few tau0 for long ones.
double t_minus_extent(const PhysicalConfig& cfg) {
    const auto d = derive(cfg);
    return std::max(6.0 * walkoff_time(cfg) / std::sqrt(d.a_const), 12.0 * d.tau0);
}

}  // namespace

ExitFaceAmplitude::ExitFaceAmplitude(const PhysicalConfig& cfg, PsiOptions opt) : cfg_(cfg), opt_(opt) {
    const auto d = derive(cfg);
    tw_ = walkoff_time(cfg);
    tau0_ = d.tau0;
    a_ = d.a_const;
    if (!(opt_.tol > 0.0) || !(opt_.phase_split > 0.0))
        throw ValidationError("psi_exit: tolerance and phase split must be positive");
}

double ExitFaceAmplitude::gauss(double x, double t_plus) const {
    const double p = (tw_ * (1.0 - x) - t_plus) / cfg_.tau;
    return std::exp(-2.0 * kLn2 * p * p);
}

cdouble ExitFaceAmplitude::exact(double t_plus, double t_minus) const {
    // In x = (L - z)/L the amplitude is integral_0^1 x^{-1/2} g(x) exp(i s / x) dx
    // with s = (t_minus / tau0)^2. Below x_c = s / phase_split the Gaussian is
    // linearized about x_c and the Fresnel moments close the integral; above
    // it, u = sqrt(x) removes the endpoint singularity.
    const double s = (t_minus / tau0_) * (t_minus / tau0_);
    const double xc = s > 0.0 ? std::min(s / opt_.phase_split, 1.0) : 0.0;
    cdouble inner = 0.0;
    if (xc > 0.0) {
        const double p = (tw_ * (1.0 - xc) - t_plus) / cfg_.tau;
        const double g = std::exp(-2.0 * kLn2 * p * p);
        const double gp = g * 4.0 * kLn2 * p * tw_ / cfg_.tau;
        const auto m = fresnel_moments(s, xc);
        inner = (g - xc * gp) * m.m0 + gp * m.m1;
    }
    if (xc >= 1.0) return inner;

    // Only the part of [xc, 1] where the pump envelope is non-negligible.
    const double reach = kGaussReach * cfg_.tau / tw_;
    const double x0 = 1.0 - t_plus / tw_;
    const double xlo = std::max(xc, x0 - reach), xhi = std::min(1.0, x0 + reach);
    if (!(xhi > xlo)) return inner;
    const double ulo = std::sqrt(xlo), uhi = std::sqrt(xhi);
    std::vector<double> breaks{ulo, uhi};
    const double step = cfg_.tau / tw_;
    for (double k : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
        const double x = x0 + k * step;
        if (x > xlo && x < xhi) breaks.push_back(std::sqrt(x));
    }
    std::sort(breaks.begin(), breaks.end());
    auto f = [&](double u) {
        const double x = u * u;
        return 2.0 * gauss(x, t_plus) * std::polar(1.0, x > 0.0 ? s / x : 0.0);
    };
    QuadOptions q;
    q.tol = opt_.tol;
    return inner + integrate_adaptive(f, breaks, q).value;
}

namespace {

void check_erf_domain(double tw, double tau, double t_plus) {
    if (tw - t_plus < 3.0 * tau)
        throw ApproxOutOfDomain("psi_exit: erf/exp forms need LA - c t+ >= 3 c tau (pump inside the crystal)");
}

}  // namespace

cdouble ExitFaceAmplitude::erf_form(double t_plus, double t_minus) const {
    check_erf_domain(tw_, cfg_.tau, t_plus);
    const double r = 1.0 - t_plus / tw_;
    const double s = (t_minus / tau0_) * (t_minus / tau0_);
    const double y = t_minus / (tw_ - t_plus);
    const double Y = a_ * y * y;
    const double k = std::sqrt(2.0 * kLn2);
    const double X1 = k * (tw_ - t_plus) / cfg_.tau;
    const double X0 = -k * t_plus / cfg_.tau;
    const double pref = std::sqrt(kPi) * cfg_.tau / (2.0 * k * tw_ * std::sqrt(r));
    return pref * std::polar(1.0, s / r) * (damped_erf(X1, Y) - damped_erf(X0, Y));
}

cdouble ExitFaceAmplitude::exp_form(double t_plus, double t_minus) const {
    check_erf_domain(tw_, cfg_.tau, t_plus);
    if (t_plus < 3.0 * cfg_.tau)
        throw ApproxOutOfDomain("psi_exit: exp form needs t+ >= 3 tau (pump fully inside the crystal)");
    const double r = 1.0 - t_plus / tw_;
    const double s = (t_minus / tau0_) * (t_minus / tau0_);
    const double y = t_minus / (tw_ - t_plus);
    const double Y = a_ * y * y;
    const double k = std::sqrt(2.0 * kLn2);
    const double pref = std::sqrt(kPi) * cfg_.tau / (k * tw_ * std::sqrt(r));
    return pref * std::polar(1.0, s / r) * std::exp(-Y * Y);
}

cdouble ExitFaceAmplitude::operator()(double t1, double t2, PsiMethod method) const {
    const double tp = 0.5 * (t1 + t2), tm = t1 - t2;
    switch (method) {
        case PsiMethod::Exact: return exact(tp, tm);
        case PsiMethod::Erf: return erf_form(tp, tm);
        case PsiMethod::Exp: return exp_form(tp, tm);
    }
    return exact(tp, tm);
}

cdouble psi_exit(double t1, double t2, const PhysicalConfig& cfg, PsiMethod method, PsiOptions opt) {
    return ExitFaceAmplitude(cfg, opt)(t1, t2, method);
}

TimeWindow default_time_window(const PhysicalConfig& cfg, int points) {
    const double tw = walkoff_time(cfg);
    if (long_pulse(cfg)) return {-3.0 * cfg.tau, tw + 3.0 * cfg.tau, points};
    return {-0.5 * tw, 1.2 * tw, points};
}

namespace {

TimeWindow resolve(const TimeWindow& w, const PhysicalConfig& cfg) {
    if (!w.is_auto()) {
        if (w.points < 3) throw ValidationError("time window: need at least 3 points");
        return w;
    }
    return default_time_window(cfg, w.points);
}

void tag(MeasuredCurve& m, const char* kind, const char* x_label) {
    m.curve.meta = {{"kind", kind}, {"x_label", x_label}, {"x_unit", "s"}, {"y_label", "intensity"},
                    {"y_unit", "peak-normalized"}};
}

// Measure on the window; in auto mode widen on NoHalfCrossing and then zoom in
// on the half-maximum span so narrow peaks are sampled finely.
MeasuredCurve measure_time(const std::function<double(double)>& f, const TimeWindow& requested,
                           const PhysicalConfig& cfg, bool zoom) {
    TimeWindow w = resolve(requested, cfg);
    if (!requested.is_auto()) return measure_function(linspace(w.lo, w.hi, w.points), f);
    MeasuredCurve m;
    for (int attempt = 0;; ++attempt) {
        try {
            m = measure_function(linspace(w.lo, w.hi, w.points), f);
            break;
        } catch (const NoHalfCrossing&) {
            if (attempt == kMaxWiden) throw;
            const double c = 0.5 * (w.lo + w.hi), h = w.hi - w.lo;
            w.lo = c - h;
            w.hi = c + h;
        }
    }
    if (!zoom) return m;
    const double span = m.width.width;
    const double lo = std::max(w.lo, m.width.x_left - 2.0 * span);
    const double hi = std::min(w.hi, m.width.x_right + 2.0 * span);
    // Keep the coarse result if it is already finer than the zoom would be.
    if ((hi - lo) / (w.points - 1) >= (w.hi - w.lo) / (w.points - 1) * 0.5) return m;
    try {
        return measure_function(linspace(lo, hi, w.points), f);
    } catch (const NoHalfCrossing&) {
        return m;
    }
}

}  // namespace

TemporalPacket temporal_packet(const PhysicalConfig& cfg, const TimeWindow& window, PsiMethod method,
                               PsiOptions opt) {
    const TimeWindow w = resolve(window, cfg);
    const ExitFaceAmplitude psi(cfg, opt);
    TemporalPacket pk;
    pk.t1s = linspace(w.lo, w.hi, w.points);
    pk.t2s = pk.t1s;
    const int n = w.points;
    pk.values.resize(n, n);
    // psi depends on t+ and t-^2 only, so the matrix is symmetric.
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            cdouble v = psi(pk.t1s[i], pk.t2s[j], method);
            pk.values(i, j) = v;
            pk.values(j, i) = v;
        }
    return pk;
}

MeasuredCurve diagonal_profile(const PhysicalConfig& cfg, const TimeWindow& window, PsiOptions opt) {
    const ExitFaceAmplitude psi(cfg, opt);
    auto f = [&](double t) { return std::norm(psi.exact(t, 0.0)); };
    TimeWindow w = window;
    if (w.is_auto() && w.points < 2001) w.points = 2001;
    auto m = measure_time(f, w, cfg, false);
    tag(m, "diagonal", "t");
    return m;
}

MeasuredCurve coincidence_signal(double t2_fixed, const PhysicalConfig& cfg, const TimeWindow& window,
                                 PsiOptions opt) {
    const ExitFaceAmplitude psi(cfg, opt);
    auto f = [&](double t1) { return std::norm(psi(t1, t2_fixed)); };
    TimeWindow w = window;
    if (w.is_auto() && w.points < 2001) w.points = 2001;
    auto m = measure_time(f, w, cfg, true);
    tag(m, "coincidence", "t1");
    m.curve.meta["t2"] = std::to_string(t2_fixed);
    return m;
}

namespace {

double row_integral(const ExitFaceAmplitude& psi, double t1, double extent, double pref, double tol) {
    // t2 = t1 - tm; integrate over tm in units of `extent`, break points
    // clustered around tm = 0 where the packet is narrowest.
    std::vector<double> breaks{-1.0, 0.0, 1.0};
    for (int k = 1; k <= 14; ++k) {
        const double b = std::ldexp(1.0, -k);
        breaks.push_back(b);
        breaks.push_back(-b);
    }
    std::sort(breaks.begin(), breaks.end());
    auto f = [&](double x) {
        const double tm = x * extent;
        return std::norm(psi.exact(t1 - 0.5 * tm, tm)) / pref;
    };
    QuadOptions q;
    q.tol = tol;
    return integrate_adaptive(f, breaks, q).value;
}

}  // namespace

MeasuredCurve single_particle_signal(const PhysicalConfig& cfg, const TimeWindow& window, PsiOptions opt) {
    const ExitFaceAmplitude psi(cfg, opt);
    const double extent = t_minus_extent(cfg);
    const double tw = walkoff_time(cfg);
    const double scale = std::sqrt(kPi) * cfg.tau / (std::sqrt(2.0 * kLn2) * tw);
    const double pref = std::min(scale * scale, 4.0);
    const double row_tol = std::max(opt.tol * 100.0, 1e-9);
    auto f = [&](double t1) { return row_integral(psi, t1, extent, pref, row_tol); };
    auto m = measure_time(f, window, cfg, false);
    tag(m, "single", "t1");
    return m;
}

std::string region_name(Region r) {
    switch (r) {
        case Region::I: return "I";
        case Region::II: return "II";
        case Region::III: return "III";
    }
    return "?";
}

double region_I_half_width(const PhysicalConfig& cfg, double t_plus) {
    const auto d = derive(cfg);
    return walkoff_time(cfg) / std::sqrt(d.a_const) *
           (1.0 - 0.24 * std::sqrt(2.0 * kLn2) * t_plus / cfg.tau);
}

namespace {

// Half-max condition 2 a^2 y^4 = ln2 of the exp form, y = t- / (LA/c - t+).
double region_II_slope(const PhysicalConfig& cfg) {
    return 4.0 * std::sqrt(kLn2 * cfg.B * cfg.lambda0 / (kPi * cfg.A * cfg.c * cfg.tau));
}

}  // namespace

double region_II_half_width(const PhysicalConfig& cfg, double t_plus) {
    return region_II_slope(cfg) * (walkoff_time(cfg) - t_plus);
}

double region_III_half_width(const PhysicalConfig& cfg, double t_plus) {
    const double excess = cfg.c * t_plus - cfg.L * cfg.A;
    if (!(excess > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return cfg.tau * std::sqrt(cfg.B * cfg.lambda0 / (cfg.A * excess));
}

double region_I_II_crossing(const PhysicalConfig& cfg) {
    const double tw = walkoff_time(cfg);
    const double k1 = tw / std::sqrt(derive(cfg).a_const);
    const double s1 = 0.24 * std::sqrt(2.0 * kLn2) / cfg.tau;
    const double k2 = region_II_slope(cfg);
    return (k1 - k2 * tw) / (k1 * s1 - k2);
}

Region classify_region(const PhysicalConfig& cfg, double t_plus) {
    if (walkoff_time(cfg) - t_plus < 3.0 * cfg.tau) return Region::III;
    if (t_plus < region_I_II_crossing(cfg)) return Region::I;
    return Region::II;
}

double localization_half_width(const ExitFaceAmplitude& psi, double t_plus) {
    const PhysicalConfig& cfg = psi.config();
    double extent = t_minus_extent(cfg);
    auto h = [&](double tm) { return std::norm(psi.exact(t_plus, tm)); };
    constexpr int n = 401;
    for (int attempt = 0; attempt <= kMaxWiden; ++attempt, extent *= 2.0) {
        std::vector<double> ys(n);
        double peak = 0.0;
        for (int k = 0; k < n; ++k) {
            ys[k] = h(extent * k / (n - 1));
            peak = std::max(peak, ys[k]);
        }
        if (!(peak > 0.0)) throw NoHalfCrossing("localization: amplitude vanishes at this t+");
        const double half = 0.5 * peak;
        int last = n - 1;
        while (last >= 0 && ys[last] < half) --last;
        if (last == n - 1) continue;
        double a = extent * last / (n - 1), b = extent * (last + 1) / (n - 1);
        for (int it = 0; it < 200 && (b - a) > 1e-10 * b; ++it) {
            const double m = 0.5 * (a + b);
            (h(m) >= half ? a : b) = m;
        }
        return 0.5 * (a + b);
    }
    throw NoHalfCrossing("localization: no half-maximum crossing in t- (window widened 3 times)");
}

LocalizationBoundary localization_boundaries(const PhysicalConfig& cfg, const std::vector<double>& t_plus,
                                             PsiOptions opt) {
    const ExitFaceAmplitude psi(cfg, opt);
    LocalizationBoundary out;
    out.t_plus = t_plus;
    for (double tp : t_plus) {
        const double hw = localization_half_width(psi, tp);
        out.t_minus_upper.push_back(hw);
        out.t_minus_lower.push_back(-hw);
        out.region_tags.push_back(classify_region(cfg, tp));
        out.line_I.push_back(region_I_half_width(cfg, tp));
        out.line_II.push_back(region_II_half_width(cfg, tp));
        out.est_III.push_back(region_III_half_width(cfg, tp));
    }
    return out;
}

double coincidence_width_analytic(double t2, const PhysicalConfig& cfg) {
    if (classify_region(cfg, t2) != Region::II)
        throw RegionMismatch("coincidence_width_analytic: t2 is outside region II");
    return 2.0 * region_II_half_width(cfg, t2);
}

cdouble long_pulse_factor(double t_minus, const PhysicalConfig& cfg) {
    // Written with |t-| throughout so that |F|^2 is even in t-.
    const double r = std::abs(t_minus) / derive(cfg).tau0;
    const cdouble sqrt_i = std::polar(1.0, kPi / 4.0);
    const cdouble e = std::polar(1.0, r * r);
    return 1.0 + std::sqrt(kPi) * sqrt_i * e * r * (-1.0 + erf_complex(sqrt_i * r));
}

RtReport rt_parameter(const PhysicalConfig& cfg) {
    const auto d = derive(cfg);
    if (d.eta < 1.0)
        throw ShortPulseRegime("rt_parameter: temporal R is defined for long pulses only (eta >= 1), got eta = " +
                               std::to_string(d.eta));
    RtReport r{};
    r.R_t = cfg.tau / (kWidthTimeLong * d.tau0);
    r.R_long = r_parameter(cfg).R_long;
    r.K_long = k_analytic(cfg).K_long;
    r.R_long_scaled = 0.75 * r.R_long;
    r.K_long_scaled = 0.94 * r.K_long;
    return r;
}

double single_duration_analytic(const PhysicalConfig& cfg) { return walkoff_time(cfg); }

double long_pulse_center(const PhysicalConfig& cfg) { return 2.0 * walkoff_time(cfg) / 3.0; }

FactorizationCheck long_pulse_factorization(const PhysicalConfig& cfg, double center, int n, PsiOptions opt) {
    if (n < 3) throw ValidationError("factorization: need at least 3 samples per axis");
    if (std::isnan(center)) center = long_pulse_center(cfg);
    const ExitFaceAmplitude psi(cfg, opt);
    const double tau0 = derive(cfg).tau0;
    const auto tps = linspace(center - cfg.tau, center + cfg.tau, n);
    const auto tms = linspace(-tau0, tau0, n);
    Eigen::MatrixXd meas(n, n), model(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            meas(i, j) = std::norm(psi.exact(tps[i], tms[j]));
            const double dt = tps[i] - center;
            model(i, j) = std::exp(-4.0 * kLn2 * dt * dt / (cfg.tau * cfg.tau)) * std::norm(long_pulse_factor(tms[j], cfg));
        }
    const double peak = meas.maxCoeff();
    if (!(peak > 0.0)) throw ZeroKernel("factorization: amplitude vanishes on the grid");
    meas /= peak;
    double acc = 0.0;
    int cnt = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (meas(i, j) >= 0.5) {
                const double d = meas(i, j) - model(i, j);
                acc += d * d;
                ++cnt;
            }
    return {std::sqrt(acc / std::max(cnt, 1)), cnt, center};
}

}  // namespace biphoton
