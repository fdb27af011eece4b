#include "biphoton/schmidt.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "biphoton/error.hpp"
#include "biphoton/spectral.hpp"
#include "biphoton/svd.hpp"

namespace biphoton {

cdouble BandedKernel::operator()(int i, int j) const {
    if (std::abs(i - j) > w) return 0.0;
    return ab[static_cast<std::size_t>(w + i - j) + static_cast<std::size_t>(j) * (2 * w + 1)];
}

BandedKernel sample_banded(const Kernel& kernel, int n, int w, double h, double W) {
    if (n < 2 || w < 0 || !(h > 0.0)) throw ValidationError("sample_banded: bad grid");
    w = std::min(w, n - 1);
    BandedKernel k{n, w, h, W, {}};
    const std::size_t ld = 2 * static_cast<std::size_t>(w) + 1;
    k.ab.assign(ld * n, cdouble(0.0));
    for (int j = 0; j < n; ++j) {
        const double nu2 = W - j * h;
        const int i0 = std::max(0, j - w), i1 = std::min(n - 1, j + w);
        for (int i = i0; i <= i1; ++i) {
            cdouble v = kernel(-W + i * h, nu2);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw ValidationError("sample_banded: kernel returned a non-finite value");
            k.ab[static_cast<std::size_t>(w + i - j) + j * ld] = v;
        }
    }
    return k;
}

std::vector<double> banded_schmidt_coefficients(const BandedKernel& k) {
    const lapack_int n = k.n, w = k.w, ld = 2 * k.w + 1;
    std::vector<cdouble> ab = k.ab;
    double peak = 0.0;
    for (const auto& v : ab) peak = std::max(peak, std::abs(v));
    if (!(peak > 0.0)) throw ZeroKernel("schmidt: kernel is identically zero on the grid");
    for (auto& v : ab) v /= peak;

    std::vector<double> d(n), e(std::max<lapack_int>(n - 1, 1));
    cdouble dummy(0.0);
    lapack_int info = LAPACKE_zgbbrd(LAPACK_COL_MAJOR, 'N', n, n, 0, w, w, ab.data(), ld, d.data(),
                                     e.data(), &dummy, 1, &dummy, 1, &dummy, 1);
    if (info != 0) throw NonConvergence("schmidt: band bidiagonalization failed (info " + std::to_string(info) + ")");
    double ddummy = 0.0;
    info = LAPACKE_dbdsqr(LAPACK_COL_MAJOR, 'U', n, 0, 0, 0, d.data(), e.data(), &ddummy, 1, &ddummy, 1,
                          &ddummy, 1);
    if (info != 0) throw NonConvergence("schmidt: bidiagonal SVD did not converge (info " + std::to_string(info) + ")");
    return schmidt_from_singular_values(std::move(d), k.h, k.h).coeffs;
}

double banded_overlap_K(const BandedKernel& k) {
    const int n = k.n, w = k.w;
    const std::size_t ld = 2 * static_cast<std::size_t>(w) + 1;
    const int bw = 2 * w;  // bandwidth of rho = M M^dagger
    // Upper band of rho: rho(i, i + d) at r[d + i (bw + 1)], d = 0..bw.
    std::vector<cdouble> r(static_cast<std::size_t>(bw + 1) * n, cdouble(0.0));
    double peak = 0.0;
    for (const auto& v : k.ab) peak = std::max(peak, std::abs(v));
    if (!(peak > 0.0)) throw ZeroKernel("schmidt: kernel is identically zero on the grid");
    std::vector<cdouble> col(ld);
    for (int j = 0; j < n; ++j) {
        const int i0 = std::max(0, j - w), i1 = std::min(n - 1, j + w);
        const int m = i1 - i0 + 1;
        for (int a = 0; a < m; ++a) col[a] = k.ab[static_cast<std::size_t>(w + i0 + a - j) + j * ld] / peak;
        for (int a = 0; a < m; ++a) {
            const cdouble ca = col[a];
            cdouble* row = &r[static_cast<std::size_t>(i0 + a) * (bw + 1)];
            for (int b = a; b < m; ++b) row[b - a] += ca * std::conj(col[b]);
        }
    }
    double trace = 0.0, frob = 0.0;
    for (int i = 0; i < n; ++i) {
        const cdouble* row = &r[static_cast<std::size_t>(i) * (bw + 1)];
        trace += row[0].real();
        frob += std::norm(row[0]);
        for (int d = 1; d <= bw; ++d) frob += 2.0 * std::norm(row[d]);
    }
    if (!(frob > 0.0)) throw ZeroKernel("schmidt: kernel is identically zero on the grid");
    return trace * trace / frob;
}

SchmidtGridSpec auto_grid(const PhysicalConfig& cfg, SchmidtGridSpec spec) {
    cfg.validate();
    // Pump amplitude exp(-u^2 tau^2 / (8 ln2)) drops below 1e-6 beyond the band.
    if (!(spec.band > 0.0)) spec.band = std::sqrt(8.0 * kLn2 * std::log(1e6)) / cfg.tau;
    if (!(spec.step > 0.0)) {
        const double sigma_u = 2.0 * std::sqrt(kLn2) / cfg.tau;
        const double sinc_period = 2.0 * kPi * cfg.c / (cfg.L * cfg.A);
        spec.step = 0.5 * std::min(sigma_u, sinc_period);
    }
    if (!(spec.half_width > 0.0)) {
        const double ws = single_width_short(cfg), wl = single_width_long(cfg);
        spec.half_width = 2.0 * std::sqrt(ws * ws + wl * wl);
    }
    return spec;
}

namespace {

enum class Estimator { Svd, Overlap };

SchmidtResult run_schmidt(const PhysicalConfig& cfg, const SchmidtGridSpec& in, const Kernel& kernel,
                          Estimator est) {
    SchmidtGridSpec spec = auto_grid(cfg, in);
    Kernel k = kernel ? kernel : Kernel([&cfg](double a, double b) { return jsa(a, b, cfg); });
    SchmidtResult res;
    res.method = est == Estimator::Svd ? "svd" : "integral4d";
    double prev = 0.0;
    double h = spec.step;
    for (int level = 0;; ++level) {
        const int n = static_cast<int>(std::ceil(2.0 * spec.half_width / h)) + 1;
        const int w = spec.dense ? n - 1 : std::min(n - 1, static_cast<int>(std::ceil(spec.band / h)));
        const std::size_t samples = static_cast<std::size_t>(n) * (2 * static_cast<std::size_t>(w) + 1);
        if (samples > spec.max_samples)
            throw NonConvergence("schmidt: refinement exceeded the sample budget before K settled");
        const double W = 0.5 * (n - 1) * h;
        BandedKernel bk = sample_banded(k, n, w, h, W);
        double K;
        if (est == Estimator::Svd) {
            auto coeffs = banded_schmidt_coefficients(bk);
            double purity = 0.0;
            for (double p : coeffs) purity += p * p;
            K = 1.0 / purity;
            res.coeffs = std::move(coeffs);
        } else {
            K = banded_overlap_K(bk);
        }
        res.trace.push_back({n, w, h, K});
        res.K = K;
        res.final_grid = spec;
        res.final_grid.step = h;
        res.final_grid.half_width = W;
        res.final_grid.refine = false;
        if (!spec.refine) break;
        if (level > 0 && std::abs(K - prev) < spec.rel_change * K) break;
        prev = K;
        h *= 0.5;
    }
    return res;
}

}  // namespace

SchmidtResult schmidt_svd(const PhysicalConfig& cfg, const SchmidtGridSpec& spec, const Kernel& kernel) {
    return run_schmidt(cfg, spec, kernel, Estimator::Svd);
}

SchmidtResult schmidt_integral4d(const PhysicalConfig& cfg, const SchmidtGridSpec& spec,
                                 const Kernel& kernel) {
    return run_schmidt(cfg, spec, kernel, Estimator::Overlap);
}

namespace {

double crystal_factor(const PhysicalConfig& cfg) {
    return cfg.A / std::sqrt(cfg.B) * std::sqrt(cfg.L / cfg.lambda0);
}

}  // namespace

AnalyticK k_analytic(const PhysicalConfig& cfg) {
    const double eta = derive(cfg).eta;
    const double k = crystal_factor(cfg);
    const double cs = std::sqrt(2.0) * std::pow(2.0 * kLn2, 0.25) * std::tgamma(1.25) / std::sqrt(kPi);
    const double cl = 105.0 * std::sqrt(kPi) / (72.0 * std::sqrt(2.0 * kLn2) * (std::pow(2.0, 1.5) - 1.0)) / 2.0;
    AnalyticK r{};
    r.K_short = cs * k / std::sqrt(eta);
    r.K_long = cl * k * eta;
    r.K_interp = std::hypot(r.K_short, r.K_long);
    return r;
}

double kr_ratio(double eta) {
    if (!(eta > 0.0)) throw ValidationError("kr_ratio: eta must be positive");
    const double e3 = eta * eta * eta;
    if (!std::isfinite(e3)) return 1.04 * std::sqrt(0.586);
    return 1.04 * std::sqrt((1.0 + 0.586 * e3) / (1.0 + e3));
}

EntanglementReport entanglement_report(const PhysicalConfig& cfg, std::optional<double> K_numeric) {
    const auto r = r_parameter(cfg);
    const auto k = k_analytic(cfg);
    EntanglementReport rep{};
    rep.eta = derive(cfg).eta;
    rep.R_short = r.R_short;
    rep.R_long = r.R_long;
    rep.R_interp = r.R_interp;
    rep.K_short = k.K_short;
    rep.K_long = k.K_long;
    rep.K_interp = k.K_interp;
    rep.K_numeric = K_numeric;
    rep.KR_ratio = kr_ratio(rep.eta);
    return rep;
}

}  // namespace biphoton
