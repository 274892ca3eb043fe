#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "surro/bootstrap.hpp"
#include "surro/estimators.hpp"

namespace surro {

/// Deviation-from-constancy path: diff(t) = deltaR(t) - (1 - tau) delta(t)
/// with tau the plug-in global estimate, so the path sums to zero by
/// construction. sigma(t) is the bootstrap SD of the same combination with
/// tau held fixed.
struct DiffPath {
  std::vector<double> values;
  std::vector<double> sigma;
  double tau_hat = 0.0;
  std::vector<double> delta, delta_r;  // the point paths behind the diff
};

enum class HomogeneityMethod { Msd, Wald };

struct TestResult {
  double statistic = 0.0;
  double critical_value = 0.0;
  double p_value = 1.0;
  double alpha = 0.05;
  HomogeneityMethod method = HomogeneityMethod::Msd;
  int draws_used = 0;
  bool reject = false;
  std::string note;
};

DiffPath delta_diff(const EffectPath& delta_r, const EffectPath& delta,
                    const BootstrapDraws& draws);

struct MsdOptions {
  double alpha = 0.05;
  int n_null_draws = 10000;
  std::uint64_t seed = 0;
  /// Re-estimate tau inside each null draw (the default mirrors how the
  /// observed statistic embeds tau's sampling variability); fixed-tau mode
  /// is a sensitivity check.
  bool reestimate_tau = true;
};

/// Maximum standardized deviation test: statistic max_t |diff(t)/sigma(t)|
/// with critical values simulated from a Gaussian null calibrated to the
/// bootstrap covariance of the stacked (deltaR, delta) paths, centered so
/// the diff vanishes.
TestResult msd_test(const DiffPath& diff, const BootstrapDraws& draws, const MsdOptions& options);

/// Quadratic-form comparator on the sum-to-zero subspace, chi-squared with
/// T degrees of freedom. Known to turn anti-conservative as the number of
/// time points grows; reported for comparison only.
TestResult wald_test(const DiffPath& diff, const BootstrapDraws& draws, double alpha = 0.05);

}  // namespace surro
