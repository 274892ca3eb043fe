#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "surro/subject_posterior.hpp"

namespace surro {

/// Shared-block posterior paths produced by recombining per-subject
/// factors. Covariances are filled only on request; bootstrap replicates
/// need means alone.
struct RecombinedFit {
  ModelTag tag = ModelTag::Marginal;
  const ModelSpec* spec = nullptr;
  std::vector<Eigen::VectorXd> filtered_mean;
  std::vector<Eigen::VectorXd> smoothed_mean;
  std::vector<Eigen::MatrixXd> filtered_cov;  // optional
  std::vector<Eigen::MatrixXd> smoothed_cov;  // optional

  std::vector<double> path(const std::string& name) const;
  double smoothed_at(int t, int state) const {
    return smoothed_mean[static_cast<std::size_t>(t)][state];
  }
};

/// Multiplicity vector helpers.
std::vector<int> identity_counts(int n_subjects);

/// Combine the per-subject filtered factors with the given multiplicities
/// (per time: precision and information-vector sums, then one solve) and
/// close with the fixed-interval pass on the recombined sequence. With the
/// identity multiset this reproduces the full-panel fit; with bootstrap
/// multisets it matches a refit on the resampled panel. The algebra is
/// exact when all blocks share one discount factor; otherwise it is a
/// documented approximation.
RecombinedFit recombine(const SubjectPosteriorSet& set, const std::vector<int>& counts,
                        bool want_cov = false);

/// Workspace-reusing variant for tight replicate loops.
class Recombiner {
 public:
  explicit Recombiner(const SubjectPosteriorSet& set);
  /// Means-only recombination into preallocated storage.
  void run(const std::vector<int>& counts, RecombinedFit& out) const;

 private:
  const SubjectPosteriorSet& set_;
  bool fast_path_;
  std::vector<int> arm_total_;  // original per-arm counts
  mutable Eigen::MatrixXd precision_;
  mutable Eigen::VectorXd info_;

  void accumulate_info(const std::vector<int>& counts, int t) const;
  bool counts_match_arms(const std::vector<int>& counts) const;
  void smooth_means(RecombinedFit& out) const;
};

}  // namespace surro
