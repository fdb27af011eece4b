#pragma once

#include <Eigen/Dense>
#include <vector>

namespace biphoton {

struct SchmidtSpectrum {
    std::vector<double> coeffs;  // non-increasing, sums to 1
    double K;
};

// Schmidt probabilities from singular values: lambda_n = s_n^2 / sum s_m^2.
// The grid cell area dx*dy cancels in the normalized probabilities but is kept
// in the signature so callers pass the physical discretization.
SchmidtSpectrum schmidt_from_singular_values(std::vector<double> sv, double dx, double dy);

SchmidtSpectrum svd_schmidt(const Eigen::MatrixXcd& kernel, double dx, double dy);

}  // namespace biphoton
