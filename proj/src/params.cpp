#include "biphoton/params.hpp"

#include <cmath>

#include "biphoton/error.hpp"

namespace biphoton {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw ValidationError(std::string("field '") + name + "' must be positive and finite");
}

}  // namespace

void PhysicalConfig::validate() const {
    require_positive(A, "A");
    require_positive(B, "B");
    require_positive(L, "L");
    require_positive(lambda0, "lambda0");
    require_positive(tau, "tau");
    require_positive(c, "c");
}

DerivedConstants derive(const PhysicalConfig& cfg) {
    cfg.validate();
    DerivedConstants d{};
    d.omega0 = 2.0 * kPi * cfg.c / cfg.lambda0;
    d.eta = 2.0 * cfg.c * cfg.tau / (cfg.A * cfg.L);
    d.a_const = kPi * cfg.c * cfg.tau * cfg.A / (16.0 * std::sqrt(2.0 * kLn2) * cfg.B * cfg.lambda0);
    d.tau0 = std::sqrt(8.0 * cfg.B * cfg.lambda0 * cfg.L / kPi) / cfg.c;
    return d;
}

double tau_for_eta(const PhysicalConfig& cfg, double eta) {
    require_positive(eta, "eta");
    return eta * cfg.A * cfg.L / (2.0 * cfg.c);
}

double walkoff_time(const PhysicalConfig& cfg) { return cfg.L * cfg.A / cfg.c; }

AngularParameters angular_parameters(const PhysicalConfig& cfg, double np, double np_prime,
                                     double alpha0) {
    cfg.validate();
    require_positive(np, "np");
    require_positive(alpha0, "alpha0");
    if (!std::isfinite(np_prime)) throw ValidationError("field 'np_prime' must be finite");
    AngularParameters p{};
    p.A_tilde = kPi * cfg.c * np_prime / (cfg.lambda0 * np);
    p.B_tilde = kPi * kPi * cfg.c * cfg.c / (2.0 * np * cfg.lambda0);
    p.eta_tilde = 4.0 * kLn2 * cfg.lambda0 * np / (kPi * alpha0 * cfg.L * np_prime);
    p.R_min_angular = np_prime * std::sqrt(2.0 * cfg.L / (np * cfg.lambda0));
    return p;
}

}  // namespace biphoton
