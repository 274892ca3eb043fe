#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace surro {

struct Subject {
  std::string id;
  int arm = 0;  // 0 control, 1 treated
  std::vector<double> covariates;  // aligned with Panel::covariate_names
};

/// A replicated longitudinal trial in long form: one outcome and one
/// surrogate series per subject on the integer grid 0..T. Missing cells are
/// NaN. Subjects are kept sorted by id so that identical data always yields
/// identical internal ordering (and therefore bitwise identical fits).
class Panel {
 public:
  Panel() = default;
  Panel(std::vector<Subject> subjects, int t_max, std::vector<std::string> covariate_names);

  int n_subjects() const { return static_cast<int>(subjects_.size()); }
  int t_max() const { return t_max_; }
  int n_times() const { return t_max_ + 1; }
  const std::vector<Subject>& subjects() const { return subjects_; }
  const Subject& subject(int i) const { return subjects_[static_cast<std::size_t>(i)]; }
  const std::vector<std::string>& covariate_names() const { return covariate_names_; }

  /// Index of a subject id, or -1.
  int find_subject(const std::string& id) const;

  double outcome(int i, int t) const { return outcome_(t, i); }
  double surrogate(int i, int t) const { return surrogate_(t, i); }
  bool has_outcome(int i, int t) const { return std::isfinite(outcome_(t, i)); }
  bool has_surrogate(int i, int t) const { return std::isfinite(surrogate_(t, i)); }

  void set_outcome(int i, int t, double v) { outcome_(t, i) = v; }
  void set_surrogate(int i, int t, double v) { surrogate_(t, i) = v; }

  int arm_count(int arm) const;
  std::vector<int> arm_indices(int arm) const;

  /// Sample variance of all observed outcomes (diffuse-prior scale).
  double outcome_variance() const;
  /// Sample standard deviation of all observed outcomes.
  double outcome_sd() const { return std::sqrt(outcome_variance()); }

  /// Shift every observed outcome by a constant (test hook for location
  /// invariance checks).
  void shift_outcomes(double c);

 private:
  std::vector<Subject> subjects_;
  int t_max_ = 0;
  std::vector<std::string> covariate_names_;
  // (T+1) x N, NaN = missing
  Eigen::MatrixXd outcome_;
  Eigen::MatrixXd surrogate_;
};

/// One line of the panel validation report.
struct PanelCheck {
  std::string name;
  bool pass = true;
  std::string detail;
};

/// Validation summary: regular-grid / finiteness / arm-count checks plus the
/// per-(arm, time) observation counts used by the lag-cap rule.
struct PanelReport {
  std::vector<PanelCheck> checks;
  // counts[arm][t] = subjects in `arm` with outcome observed at t
  std::vector<std::vector<int>> outcome_counts;
  std::vector<std::vector<int>> surrogate_counts;
  bool all_pass() const;
  /// Latest time with at least `threshold` outcome observations per arm;
  /// -1 when no time qualifies.
  int latest_time_with_min_count(int threshold) const;
};

PanelReport validate_panel(const Panel& panel);

}  // namespace surro
