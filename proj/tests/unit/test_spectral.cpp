#include <cmath>
#include <random>

#include "biphoton/error.hpp"
#include "biphoton/quadrature.hpp"
#include "biphoton/spectral.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace biphoton;

namespace {

const PhysicalConfig base{};

PhysicalConfig with_tau(double tau) {
    PhysicalConfig c;
    c.tau = tau;
    return c;
}

}  // namespace

TEST_CASE("mismatch") {
    CHECK(mismatch(0.0, 0.0, base) == 0.0);
    const double w0 = derive(base).omega0;
    for (double nu : {1e12, -3e13, 2e14})
        CHECK(mismatch(nu, -nu, base) == doctest::Approx(-4.0 * base.B * nu * nu / (w0 * base.c)).epsilon(1e-13));
    CHECK(mismatch(1e13, 0.0, base) == doctest::Approx(oracle::mismatch_1e13_0).epsilon(1e-13));
}

TEST_CASE("phase-matching curve") {
    CHECK(phase_match_curve(0.0, base) == 0.0);
    CHECK(phase_match_curve(2e14, base) == doctest::Approx(oracle::pm_curve_p2e14).epsilon(1e-12));
    CHECK(phase_match_curve(-2e14, base) == doctest::Approx(oracle::pm_curve_m2e14).epsilon(1e-12));
    CHECK(phase_match_curve_approx(2e14, base) == doctest::Approx(-2e14 + 1.38e13).epsilon(1e-3));
    for (double nu : {1e13, 1e14, 3e14}) CHECK(phase_match_curve(nu, base) + phase_match_curve(-nu, base) > 0.0);
    for (double nu : {-4e14, -1e14, 5e13, 4e14}) CHECK(std::abs(mismatch(phase_match_curve(nu, base), nu, base)) < 1e-6);
    const double edge = derive(base).omega0 * base.A / (8.0 * base.B);
    CHECK_THROWS_AS(phase_match_curve(-1.01 * edge, base), OutOfBranch);
}

TEST_CASE("joint spectral amplitude") {
    CHECK(jsa(0.0, 0.0, base) == cdouble(1.0, 0.0));
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-5e14, 5e14);
    for (int k = 0; k < 500; ++k) {
        const double a = u(rng), b = u(rng);
        CHECK(std::abs(jsa(a, b, base)) == std::abs(jsa(b, a, base)));
    }
    // on the phase-matching curve only the pump factor remains
    for (double nu2 : {-3e14, -1e14, 0.0, 2e14}) {
        const double nu1 = phase_match_curve(nu2, base);
        const double s = nu1 + nu2;
        const double pump = std::exp(-s * s * base.tau * base.tau / (8.0 * kLn2));
        CHECK(jsa(nu1, nu2, base).real() == doctest::Approx(pump).epsilon(1e-10));
    }
}

TEST_CASE("sampled amplitude grid is symmetric under photon exchange") {
    SpectralGrid g;
    g.nu1_half = g.nu2_half = 4e14;
    g.n1 = g.n2 = 65;
    auto a = sample_jsa(g, base);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) CHECK(std::abs(a.values(i, j)) == std::abs(a.values(j, i)));
    SpectralGrid bad = g;
    bad.n1 = 8;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("coincidence spectrum at the baseline") {
    auto f = coincidence_spectrum(0.0, Window{}, base);
    CHECK(f.width.width == doctest::Approx(coincidence_width_estimate(base)).epsilon(0.01));
    CHECK(coincidence_width_estimate(base) == doctest::Approx(1.96e12).epsilon(0.005));
    auto w = coincidence_spectrum(0.0, Window{}, base, Axis::Wavelength);
    CHECK(w.width.width == doctest::Approx(0.658e-9).epsilon(0.02));
    for (double y : w.curve.ys) CHECK(y <= 1.0 + 1e-12);
}

TEST_CASE("coincidence width follows the local slope of the mismatch") {
    // The window in nu1 is set by |d Delta / d nu1| = (A - 2B (nu1 - nu2)/omega0)/c,
    // so the width scales as its inverse away from degeneracy.
    const double w0 = derive(base).omega0;
    const double ref = coincidence_spectrum(0.0, Window{}, base).width.width;
    for (double lam2 : {700e-9, 750e-9, 850e-9, 870e-9, 900e-9}) {
        const double nu2 = lambda_to_nu(lam2, base);
        const double nu1 = phase_match_curve(nu2, base);
        const double slope = std::abs(base.A - 2.0 * base.B * (nu1 - nu2) / w0) / base.A;
        auto c = coincidence_spectrum(nu2, Window{}, base);
        CAPTURE(lam2);
        CHECK(c.width.width * slope == doctest::Approx(ref).epsilon(0.005));
        // The peak sits on the phase-matching curve within one sample step
        // while the pump is flat there; further out the Gaussian tilts it.
        const double s = (nu1 + nu2) * base.tau;
        if (std::exp(-s * s / (8.0 * kLn2)) >= 0.95) {
            const double step = c.curve.xs[1] - c.curve.xs[0];
            CHECK(std::abs(c.width.peak_x - nu1) <= step);
        }
        CHECK(std::abs(c.width.peak_x - nu1) < 0.03 * c.width.width);
    }
}

TEST_CASE("coincidence spectrum for long pulses is pump limited") {
    const auto cfg = with_tau(7e-12);
    auto f = coincidence_spectrum(0.0, Window{}, cfg);
    CHECK(f.width.width == doctest::Approx(4.0 * kLn2 / cfg.tau).epsilon(0.02));
}

TEST_CASE("pump spectrum") {
    auto f = pump_spectrum(0.0, Window{}, base);
    CHECK(f.width.width == doctest::Approx(4.0 * kLn2 / base.tau).epsilon(1e-8));
    CHECK(pump_width(base) == doctest::Approx(4.0 * kLn2 / base.tau));
    auto w = pump_spectrum(0.0, Window{}, base, Axis::Wavelength);
    CHECK(w.width.width == doctest::Approx(18.8e-9).epsilon(0.01));
    auto c = coincidence_spectrum(0.0, Window{}, base, Axis::Wavelength);
    CHECK(w.width.width / c.width.width == doctest::Approx(28.57).epsilon(0.03));
}

TEST_CASE("single-particle density matches direct quadrature") {
    const double nu1 = 1e14;
    // brute force: fine fixed breakpoints across several pump widths
    const double wp = pump_width(base);
    std::vector<double> br;
    for (int k = -4000; k <= 4000; ++k) br.push_back(-nu1 + k * wp * 2e-3);
    QuadOptions q;
    q.tol = 1e-12;
    const double want =
        integrate_adaptive([&](double nu2) { return std::norm(jsa(nu1, nu2, base)); }, br, q).value;
    CHECK(single_particle_density(nu1, base) == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("single-particle spectrum at the baseline") {
    auto n = single_particle_spectrum(Window{}, base, SingleMethod::Numeric);
    auto a = single_particle_spectrum(Window{}, base, SingleMethod::Analytic);
    CHECK(n.width.width == doctest::Approx(single_width_short(base)).epsilon(0.02));
    CHECK(single_width_short(base) == doctest::Approx(5.67e14).epsilon(0.01));
    CHECK(n.width.width == doctest::Approx(a.width.width).epsilon(0.05));
    auto nw = single_particle_spectrum(Window{}, base, SingleMethod::Numeric, Axis::Wavelength);
    CHECK(nw.width.width == doctest::Approx(195e-9).epsilon(0.03));
    CHECK_THROWS_AS(single_particle_spectrum(Window{}, with_tau(2e-12), SingleMethod::Analytic), AnalyticOutOfRegime);
}

TEST_CASE("single-particle spectrum for long pulses") {
    const auto cfg = with_tau(7e-12);
    auto n = single_particle_spectrum(Window{}, cfg, SingleMethod::Numeric);
    auto l = single_particle_spectrum(Window{}, cfg, SingleMethod::AnalyticLong);
    CHECK(n.width.width == doctest::Approx(single_width_long(cfg)).epsilon(0.03));
    CHECK(l.width.width == doctest::Approx(single_width_long(cfg)).epsilon(0.01));
}

TEST_CASE("R parameter forms") {
    const auto r = r_parameter(base);
    CHECK(r.R_short == doctest::Approx(295).epsilon(0.03));
    CHECK(r.R_interp == doctest::Approx(std::hypot(r.R_short, r.R_long)).epsilon(1e-14));
    const auto d = derive(base);
    const double k = base.A / std::sqrt(base.B) * std::sqrt(base.L / base.lambda0);
    CHECK(r.R_short == doctest::Approx(0.7507 * k / std::sqrt(d.eta)).epsilon(1e-4));
    CHECK(r.R_long == doctest::Approx(0.7537 * k * d.eta).epsilon(1e-4));
    CHECK(r.R_unified == doctest::Approx(0.75 * k * std::sqrt(d.eta * d.eta + 1.0 / d.eta)).epsilon(1e-14));

    const auto l = r_parameter(with_tau(7e-12));
    CHECK(derive(with_tau(7e-12)).eta == doctest::Approx(4.87).epsilon(0.02));
    CHECK(l.R_long == doctest::Approx(269).epsilon(0.03));
}

TEST_CASE("R_interp has a single interior minimum") {
    const auto m = r_min(base);
    // sqrt(cs^2 / eta + cl^2 eta^2) is smallest at (cs^2 / (2 cl^2))^{1/3}
    const double cs = std::sqrt(2.0 * kPi * kLn2) / 2.78, cl = std::sqrt(2.78 * kPi) / (std::pow(2.0, 2.5) * kLn2);
    CHECK(m.eta == doctest::Approx(std::cbrt(cs * cs / (2.0 * cl * cl))).epsilon(1e-6));
    CHECK(m.eta == doctest::Approx(std::pow(2.0, -1.0 / 3.0)).epsilon(0.02));
    CHECK(m.R == doctest::Approx(73).epsilon(0.05));
    CHECK(m.tau == doctest::Approx(tau_for_eta(base, m.eta)));
    CHECK(m.tau > 1.12e-12);
    CHECK(m.tau < 1.14e-12);
    // one sign change of the discrete slope on a log-spaced scan
    int changes = 0;
    double prev = 0.0, prev_slope = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double eta = 0.01 * std::pow(1e4, i / 199.0);
        const double R = r_parameter(with_tau(tau_for_eta(base, eta))).R_interp;
        if (i > 0) {
            const double slope = R - prev;
            if (i > 1 && (slope > 0) != (prev_slope > 0)) ++changes;
            prev_slope = slope;
        }
        prev = R;
    }
    CHECK(changes == 1);
}

TEST_CASE("measured R against the asymptotic forms") {
    CHECK(r_measured(base).R == doctest::Approx(r_parameter(base).R_short).epsilon(0.10));
    const auto cfg = with_tau(7e-12);
    CHECK(r_measured(cfg).R == doctest::Approx(r_parameter(cfg).R_long).epsilon(0.10));
}

namespace {

double length_exponent(bool fixed_eta) {
    double mx = 0, my = 0, x[3], y[3];
    int i = 0;
    for (double L : {0.25e-2, 0.5e-2, 1e-2}) {
        PhysicalConfig c;
        c.L = L;
        if (fixed_eta) c.tau = tau_for_eta(c, 0.035);
        x[i] = std::log(L);
        y[i] = std::log(r_measured(c).R);
        mx += x[i] / 3;
        my += y[i] / 3;
        ++i;
    }
    double sxy = 0, sxx = 0;
    for (i = 0; i < 3; ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
    return sxy / sxx;
}

}  // namespace

TEST_CASE("measured R scales with crystal length") {
    // short pulses: R ~ sqrt(L / eta), eta ~ tau / L
    CHECK(length_exponent(true) == doctest::Approx(0.5).epsilon(0.10));
    CHECK(length_exponent(false) == doctest::Approx(1.0).epsilon(0.10));
}

TEST_CASE("wavelength conversion") {
    CHECK(nu_to_lambda(0.0, base) == doctest::Approx(800e-9).epsilon(1e-14));
    for (double lam : {700e-9, 800e-9, 870e-9}) CHECK(nu_to_lambda(lambda_to_nu(lam, base), base) == doctest::Approx(lam));
}
