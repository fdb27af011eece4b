#pragma once

#include <string>

namespace biphoton {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kLn2 = 0.69314718055994530942;

// Crystal and pump parameters, SI units throughout.
struct PhysicalConfig {
    double A = 0.17;        // walk-off constant
    double B = 0.069;       // dispersion constant
    double L = 0.5e-2;      // crystal length [m]
    double lambda0 = 400e-9;  // pump central wavelength [m]
    double tau = 50e-15;    // pump duration (intensity FWHM) [s]
    double c = kSpeedOfLight;

    void validate() const;
    bool operator==(const PhysicalConfig&) const = default;
};

struct DerivedConstants {
    double omega0;   // 2 pi c / lambda0
    double eta;      // 2 c tau / (A L)
    double a_const;  // pi c tau A / (16 sqrt(2 ln2) B lambda0)
    double tau0;     // sqrt(8 B lambda0 L / pi) / c
};

DerivedConstants derive(const PhysicalConfig& cfg);

// Pump duration that gives the requested eta for the crystal in cfg.
double tau_for_eta(const PhysicalConfig& cfg, double eta);

// Crystal walk-off time L A / c.
double walkoff_time(const PhysicalConfig& cfg);

struct AngularParameters {
    double A_tilde;
    double B_tilde;
    double eta_tilde;
    double R_min_angular;
};

AngularParameters angular_parameters(const PhysicalConfig& cfg, double np, double np_prime,
                                     double alpha0);

}  // namespace biphoton
