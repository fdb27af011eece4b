#pragma once

#include <Eigen/Dense>

#include "biphoton/curve.hpp"
#include "biphoton/params.hpp"
#include "biphoton/special.hpp"

namespace biphoton {

// Detuning nu = omega - omega0/2 [rad/s] <-> vacuum wavelength [m].
double nu_to_lambda(double nu, const PhysicalConfig& cfg);
double lambda_to_nu(double lambda, const PhysicalConfig& cfg);

// Phase mismatch (1/c)[A(nu1+nu2) - B(nu1-nu2)^2/omega0] [1/m].
double mismatch(double nu1, double nu2, const PhysicalConfig& cfg);

// Root nu1 of mismatch(nu1, nu2) = 0 on the physical branch. Throws OutOfBranch
// for nu2 < -A omega0 / (8B).
double phase_match_curve(double nu2, const PhysicalConfig& cfg);
double phase_match_curve_approx(double nu2, const PhysicalConfig& cfg);

// nu = nu1 + nu2 on the phase-matching curve, as a function of nu1.
double phase_match_sum(double nu1, const PhysicalConfig& cfg);

cdouble jsa(double nu1, double nu2, const PhysicalConfig& cfg);

struct SpectralGrid {
    double nu1_center = 0.0, nu1_half = 0.0;
    double nu2_center = 0.0, nu2_half = 0.0;
    int n1 = 64, n2 = 64;

    void validate() const;
    double nu1(int i) const;
    double nu2(int j) const;
};

struct AmplitudeGrid {
    SpectralGrid grid;
    Eigen::MatrixXcd values;  // values(i, j) = jsa(nu1_i, nu2_j)
};

AmplitudeGrid sample_jsa(const SpectralGrid& grid, const PhysicalConfig& cfg);

enum class Axis { Frequency, Wavelength };

// Sampling window on the chosen axis (rad/s or m). lo >= hi requests auto-sizing.
struct Window {
    double lo = 0.0;
    double hi = 0.0;
    int points = 2001;
    bool is_auto() const { return !(hi > lo); }
};

MeasuredCurve coincidence_spectrum(double nu2_fixed, const Window& window, const PhysicalConfig& cfg,
                                   Axis axis = Axis::Frequency);

enum class SingleMethod { Numeric, Analytic, AnalyticLong };

MeasuredCurve single_particle_spectrum(const Window& window, const PhysicalConfig& cfg,
                                       SingleMethod method, Axis axis = Axis::Frequency);

// Unnormalized single-particle density: integral over nu2 of |jsa|^2.
double single_particle_density(double nu1, const PhysicalConfig& cfg, double tol = 1e-10);

MeasuredCurve pump_spectrum(double nu2_fixed, const Window& window, const PhysicalConfig& cfg,
                            Axis axis = Axis::Frequency);

// Analytic width estimates [rad/s].
double coincidence_width_estimate(const PhysicalConfig& cfg);    // 2.78 * 2c/(AL)
double pump_width(const PhysicalConfig& cfg);                     // 4 ln2 / tau
double single_width_short(const PhysicalConfig& cfg);             // sqrt(2 A ln2 omega0/(B tau))
double single_width_long(const PhysicalConfig& cfg);              // sqrt(2.78 c omega0/(L B))

struct RParameters {
    double R_short;
    double R_long;
    double R_interp;
    double R_unified;  // 0.75 (A/sqrt B) sqrt(L/lambda0) sqrt(eta^2 + 1/eta)
};

RParameters r_parameter(const PhysicalConfig& cfg);

struct RMinimum {
    double eta;
    double tau;
    double R;
};

// Minimum of R_interp over the pump duration for the crystal in cfg.
RMinimum r_min(const PhysicalConfig& cfg);

struct RMeasured {
    double R;
    double single_width;
    double coincidence_width;
};

RMeasured r_measured(const PhysicalConfig& cfg);

}  // namespace biphoton
