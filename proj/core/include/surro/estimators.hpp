#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "surro/kalman.hpp"
#include "surro/model_spec.hpp"
#include "surro/panel.hpp"
#include "surro/recombine.hpp"

namespace surro {

enum class EffectLabel { Delta, DeltaR, DeltaDiff };

/// A treatment-effect path over t = 0..T in outcome units.
struct EffectPath {
  std::vector<double> values;
  EffectLabel label = EffectLabel::Delta;

  int n_times() const { return static_cast<int>(values.size()); }
  double sum() const;
};

/// Lightweight view over any fitted model that exposes named shared paths.
struct FitView {
  ModelTag tag = ModelTag::Marginal;
  const ModelSpec* spec = nullptr;
  std::map<std::string, std::vector<double>> named;

  const std::vector<double>& path(const std::string& name) const;
};

FitView make_view(const SmoothedFit& fit);
FitView make_view(const RecombinedFit& fit);

/// Treatment-effect path from a marginal fit: the smoothed per-time
/// treatment coefficient.
EffectPath estimate_delta(const FitView& marginal_fit);

struct DeltaRResult {
  EffectPath path;
  /// Times whose control average had to borrow the nearest earlier control
  /// set (no eligible controls of their own).
  std::vector<int> borrowed_times;
};

/// Residual treatment-effect path from a conditional fit: the direct
/// coefficient plus the arm contrast of the surrogate effect averaged over
/// control surrogate histories. `control_weights`, when given, reweights
/// controls by their bootstrap multiplicity.
DeltaRResult estimate_delta_R(const FitView& conditional_fit, const Panel& panel,
                              const std::vector<int>* control_weights = nullptr);

/// Local, cumulative and global proportion-of-treatment-effect estimates.
/// Ratios with denominators below eps_denom are flagged undefined rather
/// than clamped; estimates may fall outside [0, 1].
struct PteResult {
  std::vector<double> lpte, cpte;
  std::vector<std::uint8_t> lpte_defined, cpte_defined;
  double pte = 0.0;
  bool pte_defined = false;
  std::vector<double> delta, delta_r;
  std::vector<double> cumulative_delta;  // per-t denominators
  double eps_denom = 0.0;
};

/// Scale-aware denominator guard.
double default_eps_denom(const Panel& panel);

PteResult compute_pte(const EffectPath& delta, const EffectPath& delta_r, double eps_denom);

/// Marginal diagnostic for the surrogate-ordering condition: per time, the
/// largest CDF gap max_s(F1(s) - F0(s)) between arms. Values at or below
/// the sampling slack support dominance of the treated arm.
struct DominanceReport {
  std::vector<int> times;
  std::vector<double> statistic;  // aligned with times
  std::vector<int> skipped_times;  // fewer than min_per_arm observations
  double slack = 0.0;
  bool violation = false;  // some statistic exceeds the slack
};

DominanceReport check_surrogate_dominance(const Panel& panel, int min_per_arm = 5);

}  // namespace surro
