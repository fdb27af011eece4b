#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "biphoton/params.hpp"
#include "biphoton/special.hpp"

namespace biphoton {

using Kernel = std::function<cdouble(double nu1, double nu2)>;

// Photon 1 on nu1_i = -W + i h, photon 2 on the reversed grid nu2_j = W - j h,
// so nu1 + nu2 = (i - j) h and a pump-limited kernel is banded: entries with
// |i - j| > w are dropped. dense = true keeps the full matrix.
struct SchmidtGridSpec {
    double half_width = 0.0;  // W [rad/s]; 0 = auto
    double step = 0.0;        // h [rad/s]; 0 = auto
    double band = 0.0;        // cut-off in |nu1 + nu2| [rad/s]; 0 = auto
    bool dense = false;
    bool refine = true;
    double rel_change = 5e-3;
    std::size_t max_samples = std::size_t{4096} * 4096;
};

struct BandedKernel {
    int n = 0;
    int w = 0;
    double h = 0.0;
    double W = 0.0;
    // Column-major LAPACK band storage, leading dimension 2w + 1:
    // K(i, j) = ab[(w + i - j) + j (2w + 1)] for |i - j| <= w.
    std::vector<cdouble> ab;

    std::size_t samples() const { return ab.size(); }
    cdouble operator()(int i, int j) const;
};

BandedKernel sample_banded(const Kernel& kernel, int n, int w, double h, double W);

struct RefinementStep {
    int n;
    int w;
    double h;
    double K;
};

struct SchmidtResult {
    double K = 1.0;
    std::vector<double> coeffs;  // Schmidt probabilities (svd only)
    std::string method;
    std::vector<RefinementStep> trace;
    SchmidtGridSpec final_grid;
};

// Schmidt probabilities of a banded kernel (band bidiagonalization + bidiagonal SVD).
std::vector<double> banded_schmidt_coefficients(const BandedKernel& k);

// K = (tr rho)^2 / sum |rho_ik|^2 with rho = M M^dagger, never forming a 4-fold loop.
double banded_overlap_K(const BandedKernel& k);

// Auto-sized grid for the JSA of cfg; fields already set in `spec` are kept.
SchmidtGridSpec auto_grid(const PhysicalConfig& cfg, SchmidtGridSpec spec = {});

SchmidtResult schmidt_svd(const PhysicalConfig& cfg, const SchmidtGridSpec& spec = {},
                          const Kernel& kernel = {});
SchmidtResult schmidt_integral4d(const PhysicalConfig& cfg, const SchmidtGridSpec& spec = {},
                                 const Kernel& kernel = {});

struct AnalyticK {
    double K_short;
    double K_long;
    double K_interp;
};

AnalyticK k_analytic(const PhysicalConfig& cfg);

double kr_ratio(double eta);

struct EntanglementReport {
    double eta;
    double R_short, R_long, R_interp;
    double K_short, K_long, K_interp;
    std::optional<double> K_numeric;
    double KR_ratio;
};

EntanglementReport entanglement_report(const PhysicalConfig& cfg,
                                       std::optional<double> K_numeric = std::nullopt);

}  // namespace biphoton
