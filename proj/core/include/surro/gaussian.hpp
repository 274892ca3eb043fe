#pragma once

#include <vector>

#include <Eigen/Dense>

namespace surro {

/// Gaussian over one state block at one time index.
struct GaussianBelief {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  int time = 0;

  int dim() const { return static_cast<int>(mean.size()); }
};

/// In-place C <- (C + C^T)/2.
void symmetrize(Eigen::MatrixXd& m);

/// Relative ridge added before inversions: jitter * trace/dim on the
/// diagonal (with an absolute floor for zero-trace matrices).
void add_jitter(Eigen::MatrixXd& m, double rel = 1e-10);

/// Solve m x = b with jittered LDLT; throws NumericError on failure.
Eigen::MatrixXd jittered_solve(const Eigen::MatrixXd& m, const Eigen::MatrixXd& b,
                               const char* what);
Eigen::MatrixXd jittered_inverse(const Eigen::MatrixXd& m, const char* what);

/// Precision-weighted product of Gaussian densities over a common block:
/// C = (sum C_i^-1)^-1, m = C * sum C_i^-1 m_i.
GaussianBelief gaussian_precision_product(const std::vector<GaussianBelief>& beliefs);

}  // namespace surro
