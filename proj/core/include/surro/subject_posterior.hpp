#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "surro/gaussian.hpp"
#include "surro/kalman.hpp"
#include "surro/model_spec.hpp"
#include "surro/panel.hpp"

namespace surro {

/// Posterior factor for one subject: the model restricted to the shared
/// block plus that subject's own level, fit on the subject's observations
/// alone with a 1/N share of the shared-block prior. Stores both the
/// filtered shared-block information forms (the recombination currency) and
/// the smoothed beliefs.
struct SubjectPosterior {
  int subject = -1;  // panel index
  int arm = 0;
  // Shared-block marginal of the filtered posterior, information form.
  std::vector<Eigen::MatrixXd> filt_precision;  // per t
  std::vector<Eigen::VectorXd> filt_info;       // per t
  // Smoothed beliefs for diagnostics and the algebraic identity checks.
  std::vector<GaussianBelief> smoothed_shared;
  std::vector<double> level_mean, level_var;
};

SubjectPosterior fit_subject_posterior(const ModelSpec& spec, const Panel& panel,
                                       const std::string& subject_id, double prior_share);
SubjectPosterior fit_subject_posterior(const ModelSpec& spec, const Panel& panel,
                                       int subject_index, double prior_share);

/// All per-subject factors for one model, plus the caches that make each
/// bootstrap replicate cheap: when stratified resampling keeps per-arm
/// counts fixed and every subject within an arm carries identical design
/// rows, the recombined precisions do not depend on the draw at all and
/// their factorizations are reused across replicates.
struct SubjectPosteriorSet {
  std::shared_ptr<const ModelSpec> spec;
  double prior_share = 1.0;  // 1/N
  std::vector<SubjectPosterior> subjects;
  std::vector<int> arm_of;  // per subject

  // Arm-homogeneous precision cache (empty when designs differ in-arm).
  bool arm_homogeneous = false;
  std::vector<Eigen::LLT<Eigen::MatrixXd>> cached_llt;  // per t, identity-count precision

  int n_subjects() const { return static_cast<int>(subjects.size()); }
  int n_times() const { return subjects.empty() ? 0 : static_cast<int>(subjects.front().filt_info.size()); }
  int shared_dim() const { return spec ? spec->layout.shared_dim() : 0; }
};

/// Decompose the full-panel posterior into per-subject factors.
SubjectPosteriorSet decompose(std::shared_ptr<const ModelSpec> spec, const Panel& panel);

}  // namespace surro
