#include "surro/discount.hpp"

#include <cmath>

#include "surro/errors.hpp"

namespace surro {

namespace {
void check_discount(double d, const char* name) {
  if (!(d > 0.0) || d > 1.0)
    throw ConfigError(std::string("discount: ") + name + " must lie in (0, 1]");
}
}  // namespace

void DiscountConfig::validate() const {
  check_discount(shared, "shared");
  check_discount(subject, "subject");
  check_discount(covariate, "covariate");
  if (treatment) check_discount(*treatment, "treatment");
  if (surrogate) check_discount(*surrogate, "surrogate");
}

bool DiscountConfig::uniform(bool has_covariates) const {
  bool u = shared == subject && treatment_discount() == shared &&
           surrogate_discount() == shared;
  if (has_covariates) u = u && covariate == shared;
  return u;
}

GaussianBelief discount_predict(const GaussianBelief& filtered, const Eigen::VectorXd& discounts) {
  if (discounts.size() != filtered.dim())
    throw ConfigError("discount: factor vector does not match state dimension");
  for (int k = 0; k < discounts.size(); ++k) check_discount(discounts[k], "factor");
  GaussianBelief out;
  out.time = filtered.time + 1;
  out.mean = filtered.mean;
  Eigen::VectorXd scale = discounts.array().sqrt().inverse();
  out.cov = scale.asDiagonal() * filtered.cov * scale.asDiagonal();
  symmetrize(out.cov);
  return out;
}

GaussianBelief discount_predict(const GaussianBelief& filtered, double discount) {
  return discount_predict(filtered,
                          Eigen::VectorXd::Constant(filtered.dim(), discount));
}

GaussianBelief discount_predict(const GaussianBelief& filtered, const DiscountConfig& config) {
  config.validate();
  return discount_predict(filtered, config.shared);
}

}  // namespace surro
