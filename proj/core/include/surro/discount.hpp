#pragma once

#include <optional>

#include <Eigen/Dense>

#include "surro/gaussian.hpp"

namespace surro {

/// Discount factors per state block, all in (0, 1]. A discount d keeps a
/// fraction d of the filtered information across one evolution step
/// (d = 1 means a static state). Covariate coefficients are static by
/// default; the optional overrides let individual shared blocks deviate
/// from the common shared discount.
struct DiscountConfig {
  double shared = 0.95;
  double subject = 0.95;
  double covariate = 1.0;
  std::optional<double> treatment;  // defaults to `shared`
  std::optional<double> surrogate;  // defaults to `shared`

  double treatment_discount() const { return treatment.value_or(shared); }
  double surrogate_discount() const { return surrogate.value_or(shared); }
  void validate() const;
  /// True when every block evolves at one common factor; the recombination
  /// bootstrap is exact algebra only in that regime.
  bool uniform(bool has_covariates) const;
};

/// One evolution step under identity dynamics: the predictive covariance is
/// the filtered one inflated per coordinate, R(a,b) = C(a,b)/sqrt(d_a d_b),
/// so each diagonal block obeys R = C/d, equivalently W = ((1-d)/d) C. The
/// mean is unchanged.
GaussianBelief discount_predict(const GaussianBelief& filtered, const Eigen::VectorXd& discounts);

/// Uniform-discount convenience overload.
GaussianBelief discount_predict(const GaussianBelief& filtered, double discount);

/// Whole-belief step using the shared-block factor of `config`.
GaussianBelief discount_predict(const GaussianBelief& filtered, const DiscountConfig& config);

}  // namespace surro
