#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "biphoton/curve.hpp"
#include "biphoton/params.hpp"
#include "biphoton/special.hpp"

namespace biphoton {

// Times are the shifted times t~ (zero when a photon moving at the
// down-converted group velocity from the entrance face reaches the exit face).
// t_plus = (t1 + t2)/2, t_minus = t1 - t2.

enum class PsiMethod { Exact, Erf, Exp };

struct PsiOptions {
    double tol = 1e-10;
    double phase_split = 1e3;  // rad; inner part closed in Fresnel form
};

// Exit-face two-time amplitude, normalized as
// (1/sqrt L) * integral_0^L dz (L - z)^{-1/2} G(z) exp(i beta / (L - z)).
class ExitFaceAmplitude {
public:
    explicit ExitFaceAmplitude(const PhysicalConfig& cfg, PsiOptions opt = {});

    cdouble exact(double t_plus, double t_minus) const;
    cdouble erf_form(double t_plus, double t_minus) const;
    cdouble exp_form(double t_plus, double t_minus) const;
    cdouble operator()(double t1, double t2, PsiMethod method = PsiMethod::Exact) const;

    const PhysicalConfig& config() const { return cfg_; }
    double walkoff() const { return tw_; }
    double tau0() const { return tau0_; }

private:
    double gauss(double x, double t_plus) const;  // pump envelope at x = (L - z) / L

    PhysicalConfig cfg_;
    PsiOptions opt_;
    double tw_, tau0_, a_;
};

cdouble psi_exit(double t1, double t2, const PhysicalConfig& cfg, PsiMethod method = PsiMethod::Exact,
                 PsiOptions opt = {});

struct TemporalPacket {
    std::vector<double> t1s, t2s;
    Eigen::MatrixXcd values;  // values(i, j) = psi(t1s[i], t2s[j])
};

struct TimeWindow {
    double lo = 0.0;
    double hi = 0.0;
    int points = 1024;
    bool is_auto() const { return !(hi > lo); }
};

// Default t~ range for the two-time grid: [-0.5, 1.2] LA/c for short pulses,
// pump envelope plus walk-off for long ones.
TimeWindow default_time_window(const PhysicalConfig& cfg, int points = 1024);

TemporalPacket temporal_packet(const PhysicalConfig& cfg, const TimeWindow& window = {},
                               PsiMethod method = PsiMethod::Exact, PsiOptions opt = {});

MeasuredCurve diagonal_profile(const PhysicalConfig& cfg, const TimeWindow& window = {}, PsiOptions opt = {});

MeasuredCurve coincidence_signal(double t2_fixed, const PhysicalConfig& cfg, const TimeWindow& window = {},
                                 PsiOptions opt = {});

MeasuredCurve single_particle_signal(const PhysicalConfig& cfg, const TimeWindow& window = {},
                                     PsiOptions opt = {});

enum class Region { I, II, III };
std::string region_name(Region r);

struct LocalizationBoundary {
    std::vector<double> t_plus;
    std::vector<double> t_minus_upper;
    std::vector<double> t_minus_lower;
    std::vector<Region> region_tags;
    std::vector<double> line_I;    // analytic region I half-width
    std::vector<double> line_II;   // analytic region II half-width
    std::vector<double> est_III;   // region III estimate (NaN where t+ <= LA/c)
};

LocalizationBoundary localization_boundaries(const PhysicalConfig& cfg, const std::vector<double>& t_plus,
                                             PsiOptions opt = {});

// Measured half-width in t_minus at fixed t_plus.
double localization_half_width(const ExitFaceAmplitude& psi, double t_plus);

// Analytic region proxies.
double region_I_half_width(const PhysicalConfig& cfg, double t_plus);
double region_II_half_width(const PhysicalConfig& cfg, double t_plus);
double region_III_half_width(const PhysicalConfig& cfg, double t_plus);
double region_I_II_crossing(const PhysicalConfig& cfg);
Region classify_region(const PhysicalConfig& cfg, double t_plus);

double coincidence_width_analytic(double t2, const PhysicalConfig& cfg);

cdouble long_pulse_factor(double t_minus, const PhysicalConfig& cfg);

struct RtReport {
    double R_t;
    double R_long;
    double K_long;
    double R_long_scaled;  // 0.75 R_long
    double K_long_scaled;  // 0.94 K_long
};

// Requires eta >= 1; throws ShortPulseRegime otherwise.
RtReport rt_parameter(const PhysicalConfig& cfg);

double single_duration_analytic(const PhysicalConfig& cfg);

struct FactorizationCheck {
    double rms;        // over samples where the measured |psi|^2 >= half max
    int samples;
    double center;     // t_plus centre used for the pump envelope
};

// Centre of the long-pulse envelope in t_plus: the mean of LA/c (1 - x) under
// the x^{-1/2} exit-face weight, i.e. 2LA/(3c).
double long_pulse_center(const PhysicalConfig& cfg);

// Compares the normalized |psi|^2 with G(t+ - center) |F(t-)|^2, G the pump
// intensity envelope. NaN centre means long_pulse_center(cfg).
FactorizationCheck long_pulse_factorization(const PhysicalConfig& cfg, double center = std::nan(""), int n = 41,
                                            PsiOptions opt = {});

}  // namespace biphoton
