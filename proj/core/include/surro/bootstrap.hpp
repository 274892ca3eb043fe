#pragma once

#include <cstdint>
#include <vector>

#include "surro/estimators.hpp"
#include "surro/panel.hpp"
#include "surro/recombine.hpp"
#include "surro/subject_posterior.hpp"

namespace surro {

/// Subject-resampling draws with the paired effect paths recomputed per
/// replicate from recombined posteriors.
struct BootstrapDraws {
  int n_replicates = 0;
  std::uint64_t seed = 0;
  bool stratified = true;
  std::vector<std::vector<int>> counts;        // [b][subject] multiplicity
  std::vector<std::vector<double>> delta;      // [b][t]
  std::vector<std::vector<double>> delta_r;    // [b][t]
  std::vector<std::vector<double>> lpte;       // [b][t] (NaN when undefined)
  std::vector<std::vector<double>> cpte;       // [b][t]
  std::vector<double> pte;                     // [b]
  std::vector<std::uint8_t> pte_defined;       // [b]
};

struct IntervalEstimate {
  double point = 0.0;
  double se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double level = 0.95;
  bool defined = true;
};

struct BootstrapOptions {
  int n_replicates = 2000;
  double level = 0.95;
  std::uint64_t seed = 0;
  bool stratified = true;  // preserve per-arm counts
};

/// Full bootstrap summary for one panel: the global estimate plus per-time
/// intervals for every reported path.
struct BootstrapResult {
  BootstrapDraws draws;
  PteResult point;  // from the identity recombination
  IntervalEstimate pte;
  std::vector<IntervalEstimate> lpte, cpte, delta, delta_r;  // per t
  int undefined_replicates = 0;
  bool unreliable = false;  // more than half the replicates undefined
  bool exact_algebra = true;  // false when discounts are non-uniform
  std::vector<int> borrowed_times;  // control-average fallbacks in the point fit
};

/// Draw one replicate's multiplicity vector. Stratified draws resample
/// within each arm, preserving the arm counts exactly.
std::vector<int> draw_counts(const std::vector<int>& arm_of, bool stratified, std::uint64_t seed,
                             std::uint64_t replicate);

/// The paired recombination bootstrap: the same index multiset drives both
/// model recombinations and the control average of the residual effect uses
/// the replicate's own control multiset.
BootstrapResult bootstrap_pte(const SubjectPosteriorSet& marginal,
                              const SubjectPosteriorSet& conditional, const Panel& panel,
                              const BootstrapOptions& options);

struct ValidityDecision {
  double threshold = 0.75;
  double alpha = 0.05;
  bool reject = false;  // true: declared a strong surrogate
  double ci_low = 0.0;
};

/// One-sided surrogate-validity test: reject (declare strong) when the
/// interval's lower bound exceeds the threshold. The interval level must be
/// 1 - 2*alpha.
ValidityDecision validity_test(const IntervalEstimate& pte_interval, double threshold = 0.75,
                               double alpha = 0.05);

/// Percentile interval over finite draws (linear-interpolation quantiles).
IntervalEstimate percentile_interval(std::vector<double> draws, double point, double level);

}  // namespace surro
