#pragma once

#include <cstdint>
#include <vector>

#include "surro/bootstrap.hpp"
#include "surro/estimators.hpp"
#include "surro/model_spec.hpp"
#include "surro/panel.hpp"

namespace surro {

enum class BaselineMethod { Ols, Diff };

/// Result of a baseline estimator. OLS fills the per-time paths; Diff is a
/// single endpoint-change contrast and leaves them empty.
struct BaselineResult {
  BaselineMethod method = BaselineMethod::Ols;
  PteResult pte;                   // paths empty for Diff beyond one entry
  std::vector<int> flagged_times;  // rank-deficient / unusable times (OLS)
  int dropped_subjects = 0;        // missing endpoints (Diff)
  bool defined = true;
};

/// Per-time cross-sectional least squares for both working models,
/// assembled into the same PTE formulas as the sequential estimator.
BaselineResult ols_pte(const Panel& panel, const ConditionalConfig& config);

/// Endpoint-change estimator: outcome and surrogate changes from first to
/// last time. Meaningful only for monotone effects; flagged otherwise via
/// near-zero denominators.
BaselineResult diff_pte(const Panel& panel);

/// Full-refit bootstrap for a baseline, consuming the same subject index
/// streams as the sequential bootstrap (same seed => same resampled
/// panels).
struct BaselineBootstrap {
  BaselineResult point;
  IntervalEstimate pte;
  int undefined_replicates = 0;
};

BaselineBootstrap baseline_bootstrap(const Panel& panel, const ConditionalConfig& config,
                                     BaselineMethod method, const BootstrapOptions& options);

/// Resampled copy of a panel (subjects duplicated by multiplicity, fresh
/// ids); shared by baseline bootstraps and the refit oracle in tests.
Panel resample_panel(const Panel& panel, const std::vector<int>& counts);

}  // namespace surro
