#include "biphoton/svd.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>

#include "biphoton/error.hpp"

namespace biphoton {

SchmidtSpectrum schmidt_from_singular_values(std::vector<double> sv, double dx, double dy) {
    if (!(dx > 0.0) || !(dy > 0.0)) throw ValidationError("svd_schmidt: grid steps must be positive");
    std::sort(sv.begin(), sv.end(), std::greater<>());
    double total = 0.0;
    for (double s : sv) total += s * s * dx * dy;
    if (!(total > 0.0) || !std::isfinite(total)) throw ZeroKernel("svd_schmidt: kernel is identically zero");
    SchmidtSpectrum out;
    out.coeffs.reserve(sv.size());
    double purity = 0.0;
    for (double s : sv) {
        double p = s * s * dx * dy / total;
        out.coeffs.push_back(p);
        purity += p * p;
    }
    out.K = 1.0 / purity;
    return out;
}

SchmidtSpectrum svd_schmidt(const Eigen::MatrixXcd& kernel, double dx, double dy) {
    if (kernel.size() == 0) throw ZeroKernel("svd_schmidt: empty kernel");
    if (!kernel.allFinite()) throw ValidationError("svd_schmidt: kernel has non-finite entries");
    double peak = kernel.cwiseAbs().maxCoeff();
    if (!(peak > 0.0)) throw ZeroKernel("svd_schmidt: kernel is identically zero");
    // Scale first so tiny or huge kernels do not underflow in s^2.
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(kernel / peak);
    const auto& s = svd.singularValues();
    return schmidt_from_singular_values(std::vector<double>(s.data(), s.data() + s.size()), dx, dy);
}

}  // namespace biphoton
