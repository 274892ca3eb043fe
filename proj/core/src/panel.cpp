#include "surro/panel.hpp"

#include <algorithm>
#include <limits>

#include "surro/errors.hpp"

namespace surro {

Panel::Panel(std::vector<Subject> subjects, int t_max, std::vector<std::string> covariate_names)
    : subjects_(std::move(subjects)),
      t_max_(t_max),
      covariate_names_(std::move(covariate_names)) {
  if (t_max_ < 0) throw ConfigError("panel: t_max must be >= 0");
  std::sort(subjects_.begin(), subjects_.end(),
            [](const Subject& a, const Subject& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < subjects_.size(); ++i) {
    if (subjects_[i].id == subjects_[i - 1].id)
      throw DataError("panel: duplicate subject id '" + subjects_[i].id + "'");
  }
  for (const auto& s : subjects_) {
    if (s.arm != 0 && s.arm != 1)
      throw DataError("panel: subject '" + s.id + "' has arm outside {0,1}");
    if (s.covariates.size() != covariate_names_.size())
      throw DataError("panel: subject '" + s.id + "' covariate count mismatch");
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  outcome_ = Eigen::MatrixXd::Constant(t_max_ + 1, n_subjects(), nan);
  surrogate_ = Eigen::MatrixXd::Constant(t_max_ + 1, n_subjects(), nan);
}

int Panel::find_subject(const std::string& id) const {
  auto it = std::lower_bound(subjects_.begin(), subjects_.end(), id,
                             [](const Subject& s, const std::string& key) { return s.id < key; });
  if (it == subjects_.end() || it->id != id) return -1;
  return static_cast<int>(it - subjects_.begin());
}

int Panel::arm_count(int arm) const {
  int n = 0;
  for (const auto& s : subjects_) n += (s.arm == arm);
  return n;
}

std::vector<int> Panel::arm_indices(int arm) const {
  std::vector<int> out;
  for (int i = 0; i < n_subjects(); ++i)
    if (subjects_[static_cast<std::size_t>(i)].arm == arm) out.push_back(i);
  return out;
}

double Panel::outcome_variance() const {
  double sum = 0.0, sum2 = 0.0;
  long n = 0;
  for (int i = 0; i < n_subjects(); ++i) {
    for (int t = 0; t <= t_max_; ++t) {
      double y = outcome_(t, i);
      if (std::isfinite(y)) {
        sum += y;
        sum2 += y * y;
        ++n;
      }
    }
  }
  if (n < 2) return 1.0;
  double mean = sum / static_cast<double>(n);
  double var = (sum2 - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
  return var > 0 ? var : 1.0;
}

void Panel::shift_outcomes(double c) {
  for (int i = 0; i < n_subjects(); ++i)
    for (int t = 0; t <= t_max_; ++t)
      if (std::isfinite(outcome_(t, i))) outcome_(t, i) += c;
}

bool PanelReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const PanelCheck& c) { return c.pass; });
}

int PanelReport::latest_time_with_min_count(int threshold) const {
  if (outcome_counts.size() != 2) return -1;
  int best = -1;
  const auto t_count = static_cast<int>(outcome_counts[0].size());
  for (int t = 0; t < t_count; ++t) {
    if (outcome_counts[0][static_cast<std::size_t>(t)] >= threshold &&
        outcome_counts[1][static_cast<std::size_t>(t)] >= threshold)
      best = t;
  }
  return best;
}

PanelReport validate_panel(const Panel& panel) {
  PanelReport report;
  const int T = panel.t_max();
  const int N = panel.n_subjects();

  report.outcome_counts.assign(2, std::vector<int>(static_cast<std::size_t>(T + 1), 0));
  report.surrogate_counts.assign(2, std::vector<int>(static_cast<std::size_t>(T + 1), 0));
  for (int i = 0; i < N; ++i) {
    const int g = panel.subject(i).arm;
    for (int t = 0; t <= T; ++t) {
      if (panel.has_outcome(i, t)) ++report.outcome_counts[static_cast<std::size_t>(g)][static_cast<std::size_t>(t)];
      if (panel.has_surrogate(i, t)) ++report.surrogate_counts[static_cast<std::size_t>(g)][static_cast<std::size_t>(t)];
    }
  }

  // Regular grid: every time in 0..T carries at least one observation.
  {
    PanelCheck c{"equally_spaced_grid", true, ""};
    for (int t = 0; t <= T; ++t) {
      int total = report.outcome_counts[0][static_cast<std::size_t>(t)] +
                  report.outcome_counts[1][static_cast<std::size_t>(t)] +
                  report.surrogate_counts[0][static_cast<std::size_t>(t)] +
                  report.surrogate_counts[1][static_cast<std::size_t>(t)];
      if (total == 0) {
        c.pass = false;
        c.detail = "time " + std::to_string(t) + " has no observations";
        break;
      }
    }
    report.checks.push_back(c);
  }

  // Finiteness holds by construction (NaN means missing); report count of
  // observed values instead.
  {
    long n_obs = 0;
    for (int g = 0; g < 2; ++g)
      for (int t = 0; t <= T; ++t) n_obs += report.outcome_counts[static_cast<std::size_t>(g)][static_cast<std::size_t>(t)];
    report.checks.push_back({"finite_values", true, std::to_string(n_obs) + " outcome observations"});
  }

  // Positivity: both arms populated.
  {
    PanelCheck c{"both_arms_present", true, ""};
    int n0 = panel.arm_count(0), n1 = panel.arm_count(1);
    if (n0 == 0 || n1 == 0) {
      c.pass = false;
      c.detail = "arm counts " + std::to_string(n0) + "/" + std::to_string(n1);
    } else {
      c.detail = "control " + std::to_string(n0) + ", treated " + std::to_string(n1);
    }
    report.checks.push_back(c);
  }

  // Degenerate panel guard: at least two distinct outcome values.
  {
    PanelCheck c{"non_degenerate_outcome", true, ""};
    bool found_first = false, distinct = false;
    double first = 0.0;
    for (int i = 0; i < N && !distinct; ++i) {
      for (int t = 0; t <= T && !distinct; ++t) {
        if (!panel.has_outcome(i, t)) continue;
        double y = panel.outcome(i, t);
        if (!found_first) {
          first = y;
          found_first = true;
        } else if (y != first) {
          distinct = true;
        }
      }
    }
    if (!distinct) {
      c.pass = false;
      c.detail = "all observed outcomes share one value";
    }
    report.checks.push_back(c);
  }

  return report;
}

}  // namespace surro
