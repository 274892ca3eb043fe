#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "surro/basis.hpp"
#include "surro/discount.hpp"
#include "surro/layout.hpp"
#include "surro/panel.hpp"

namespace surro {

enum class ModelTag { Marginal, Conditional };

std::string to_string(ModelTag tag);

/// One nonzero of a design row, indexed into the shared block.
struct DesignEntry {
  int state;
  double value;
};
using DesignRow = std::vector<DesignEntry>;

/// Conditional-model configuration: how much surrogate history enters the
/// outcome equation and in what form.
struct ConditionalConfig {
  int max_lag = 0;  // lags 0..max_lag; times t < max_lag use the available prefix
  SurrogateBasis basis;
  std::vector<std::string> covariates;
  bool treatment_surrogate_interaction = false;

  bool arm_specific() const { return treatment_surrogate_interaction || basis.per_arm; }
};

/// A fully materialized working model: state layout, per-cell design rows,
/// evolution discounts and prior scale. Rows are built once, in subject
/// order, so identical inputs give bitwise identical specs.
struct ModelSpec {
  ModelTag tag = ModelTag::Marginal;
  StateLayout layout;
  DiscountConfig discounts;
  double kappa = 1e6;        // diffuse prior factor
  double prior_scale = 1.0;  // kappa * var(Y) * mean observation variance
  double obs_variance[2] = {1.0, 1.0};

  /// rows[t][i]: shared-block design entries for cell (i, t); empty means
  /// the cell contributes no observation. Every nonempty row implicitly
  /// loads subject i's level with coefficient 1.
  std::vector<std::vector<DesignRow>> rows;

  /// contrast[t][i]: for control subjects with a complete lag window at t,
  /// the interaction-column basis values used by the residual-effect
  /// average. Empty when the model has no arm-specific surrogate effect.
  std::vector<std::vector<DesignRow>> contrast;
  /// contrast_eligible[t][i]: control i has a complete surrogate window at
  /// t (a zero basis value can make an eligible row empty, so eligibility
  /// is tracked separately). Populated only for arm-specific models.
  std::vector<std::vector<std::uint8_t>> contrast_eligible;

  int dropped_cells = 0;  // outcome cells lost to incomplete lag windows
  ConditionalConfig conditional;
  std::vector<std::string> covariates;

  bool observed(int subject, int t) const {
    return !rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(subject)].empty();
  }
  double cell_variance(int arm) const { return obs_variance[arm]; }

  /// Per-coordinate discount factors over the shared block.
  Eigen::VectorXd shared_discounts() const;
  /// True when every evolving block (including subject levels and any
  /// covariate states) uses one common discount; precision recombination is
  /// exact algebra only then.
  bool uniform_discounts() const { return discounts.uniform(!covariates.empty()); }
};

/// Marginal working model: time-varying intercept, per-time treatment
/// coefficient, static covariate coefficients, one level per subject.
ModelSpec build_marginal(const Panel& panel, const std::vector<std::string>& covariates,
                         const DiscountConfig& discounts, double kappa = 1e6,
                         double v_control = 1.0, double v_treated = 1.0);

/// Conditional working model: adds basis expansions of the surrogate at
/// lags 0..K (arm-specific columns when configured).
ModelSpec build_conditional(const Panel& panel, const ConditionalConfig& config,
                            const DiscountConfig& discounts, double kappa = 1e6,
                            double v_control = 1.0, double v_treated = 1.0);

namespace state_name {
std::string intercept();
std::string treatment();
std::string surrogate(int lag, int basis_index);
std::string surrogate_interaction(int lag, int basis_index);
std::string covariate(const std::string& name);
}  // namespace state_name

}  // namespace surro
