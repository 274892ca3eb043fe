#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "surro/gaussian.hpp"
#include "surro/model_spec.hpp"
#include "surro/panel.hpp"

namespace surro {

/// One observed cell inside a filtering problem: a sparse design row over
/// the problem's full state, the observed value and its variance.
struct CellObs {
  DesignRow row;  // state indices local to the problem
  double y = 0.0;
  double v = 1.0;
};

/// A self-contained linear-Gaussian filtering problem with identity
/// evolution and per-coordinate discount factors. Both the joint panel fit
/// and the single-subject fits reduce to this.
struct FilterProblem {
  Eigen::VectorXd prior_mean;
  Eigen::VectorXd prior_var;  // diagonal
  Eigen::VectorXd discounts;  // per coordinate, in (0, 1]
  std::vector<std::vector<CellObs>> obs;  // per time step

  int dim() const { return static_cast<int>(prior_mean.size()); }
  int n_times() const { return static_cast<int>(obs.size()); }
};

struct FilterStep {
  Eigen::VectorXd a, m;       // predictive / filtered mean
  Eigen::MatrixXd R, C;       // predictive / filtered covariance
  std::vector<double> residuals;  // one-step forecast errors, processing order
  int n_obs = 0;
};

/// Forward pass output. Holds the spec and subject count when produced from
/// a panel so the smoother can name paths; the raw `run_filter` entry point
/// leaves those unset.
struct FilterTrace {
  std::vector<FilterStep> steps;
  Eigen::VectorXd discounts;
  const ModelSpec* spec = nullptr;  // non-owning; set by kalman_filter

  int n_times() const { return static_cast<int>(steps.size()); }
  int dim() const { return steps.empty() ? 0 : static_cast<int>(steps.front().m.size()); }
  /// Evolution covariance actually applied entering step t (t >= 1):
  /// W_t = R_t - C_{t-1}. Exposed for oracle reconstruction of the implied
  /// joint prior.
  Eigen::MatrixXd evolution_cov(int t) const;
};

/// Fixed-interval smoothing output with named fixed-effect paths.
struct SmoothedFit {
  ModelTag tag = ModelTag::Marginal;
  const ModelSpec* spec = nullptr;
  std::vector<GaussianBelief> shared;  // per t, shared-block marginal
  std::vector<std::vector<double>> subject_mean;  // [subject][t]
  std::vector<std::vector<double>> subject_var;   // [subject][t]
  std::map<std::string, std::vector<double>> named;  // shared paths by name
  std::string config_log;

  const std::vector<double>& path(const std::string& name) const;
};

/// Raw smoothed sequence for a bare FilterProblem run.
struct SmoothedSequence {
  std::vector<Eigen::VectorXd> mean;
  std::vector<Eigen::MatrixXd> cov;
};

FilterTrace run_filter(const FilterProblem& problem);
SmoothedSequence run_smoother(const FilterTrace& trace);

/// Assemble the joint replicated-series problem from a spec and panel.
FilterProblem joint_problem(const ModelSpec& spec, const Panel& panel);

/// Forward Kalman pass over the full panel.
FilterTrace kalman_filter(const ModelSpec& spec, const Panel& panel);

/// Backward fixed-interval pass; extracts named shared paths and
/// per-subject level paths. The trace must come from kalman_filter.
SmoothedFit kalman_smoother(const FilterTrace& trace);

}  // namespace surro
