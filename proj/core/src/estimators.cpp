#include "surro/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "surro/errors.hpp"

namespace surro {

double EffectPath::sum() const {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

const std::vector<double>& FitView::path(const std::string& name) const {
  auto it = named.find(name);
  if (it == named.end()) throw ConfigError("fit view: no path named '" + name + "'");
  return it->second;
}

FitView make_view(const SmoothedFit& fit) {
  FitView v;
  v.tag = fit.tag;
  v.spec = fit.spec;
  v.named = fit.named;
  return v;
}

FitView make_view(const RecombinedFit& fit) {
  FitView v;
  v.tag = fit.tag;
  v.spec = fit.spec;
  for (const auto& name : fit.spec->layout.shared_names()) v.named.emplace(name, fit.path(name));
  return v;
}

EffectPath estimate_delta(const FitView& marginal_fit) {
  if (marginal_fit.tag != ModelTag::Marginal)
    throw ConfigError("estimate_delta: fit is not tagged marginal");
  EffectPath out;
  out.label = EffectLabel::Delta;
  out.values = marginal_fit.path(state_name::treatment());
  return out;
}

DeltaRResult estimate_delta_R(const FitView& conditional_fit, const Panel& panel,
                              const std::vector<int>* control_weights) {
  if (conditional_fit.tag != ModelTag::Conditional)
    throw ConfigError("estimate_delta_R: fit is not tagged conditional");
  const ModelSpec& spec = *conditional_fit.spec;
  const std::vector<double>& direct = conditional_fit.path(state_name::treatment());
  const int n_t = static_cast<int>(direct.size());

  DeltaRResult out;
  out.path.label = EffectLabel::DeltaR;
  out.path.values = direct;
  if (spec.contrast_eligible.empty()) return out;  // shared basis: contrast is zero

  // Coefficient paths for the interaction columns.
  std::vector<const std::vector<double>*> coef(static_cast<std::size_t>(spec.layout.shared_dim()), nullptr);
  for (const auto& name : spec.layout.shared_names()) {
    if (name.rfind("f_trt[", 0) == 0)
      coef[static_cast<std::size_t>(spec.layout.at(name))] = &conditional_fit.path(name);
  }

  // Control average of the fitted arm contrast at each time; when a time has
  // no eligible control, reuse the latest earlier control set with the
  // current time's coefficients.
  auto average_at = [&](int coef_t, int history_t, bool& ok) {
    double num = 0.0, den = 0.0;
    const auto& eligible = spec.contrast_eligible[static_cast<std::size_t>(history_t)];
    const auto& rows = spec.contrast[static_cast<std::size_t>(history_t)];
    for (int i = 0; i < panel.n_subjects(); ++i) {
      if (!eligible[static_cast<std::size_t>(i)]) continue;
      double w = control_weights ? static_cast<double>((*control_weights)[static_cast<std::size_t>(i)]) : 1.0;
      if (w <= 0.0) continue;
      double value = 0.0;
      for (const auto& e : rows[static_cast<std::size_t>(i)])
        value += (*coef[static_cast<std::size_t>(e.state)])[static_cast<std::size_t>(coef_t)] * e.value;
      num += w * value;
      den += w;
    }
    ok = den > 0.0;
    return ok ? num / den : 0.0;
  };

  for (int t = 0; t < n_t; ++t) {
    bool ok = false;
    double avg = average_at(t, t, ok);
    if (!ok) {
      for (int back = t - 1; back >= 0 && !ok; --back) avg = average_at(t, back, ok);
      if (ok) out.borrowed_times.push_back(t);
    }
    out.path.values[static_cast<std::size_t>(t)] += avg;  // zero when nothing eligible at all
  }
  return out;
}

double default_eps_denom(const Panel& panel) {
  return 1e-8 * panel.outcome_sd();
}

PteResult compute_pte(const EffectPath& delta, const EffectPath& delta_r, double eps_denom) {
  if (delta.n_times() != delta_r.n_times())
    throw ConfigError("compute_pte: path lengths differ");
  const int n_t = delta.n_times();
  if (n_t == 0) throw ConfigError("compute_pte: empty paths");

  PteResult out;
  out.delta = delta.values;
  out.delta_r = delta_r.values;
  out.eps_denom = eps_denom;
  out.lpte.assign(static_cast<std::size_t>(n_t), std::numeric_limits<double>::quiet_NaN());
  out.cpte.assign(static_cast<std::size_t>(n_t), std::numeric_limits<double>::quiet_NaN());
  out.lpte_defined.assign(static_cast<std::size_t>(n_t), 0);
  out.cpte_defined.assign(static_cast<std::size_t>(n_t), 0);
  out.cumulative_delta.resize(static_cast<std::size_t>(n_t));

  double cum_d = 0.0, cum_r = 0.0;
  for (int t = 0; t < n_t; ++t) {
    const auto tt = static_cast<std::size_t>(t);
    const double d = delta.values[tt];
    const double r = delta_r.values[tt];
    cum_d += d;
    cum_r += r;
    out.cumulative_delta[tt] = cum_d;
    if (std::abs(d) >= eps_denom) {
      out.lpte[tt] = 1.0 - r / d;
      out.lpte_defined[tt] = 1;
    }
    if (std::abs(cum_d) >= eps_denom) {
      out.cpte[tt] = 1.0 - cum_r / cum_d;
      out.cpte_defined[tt] = 1;
    }
  }
  out.pte = out.cpte[static_cast<std::size_t>(n_t - 1)];
  out.pte_defined = out.cpte_defined[static_cast<std::size_t>(n_t - 1)] != 0;
  return out;
}

DominanceReport check_surrogate_dominance(const Panel& panel, int min_per_arm) {
  DominanceReport report;
  const int n0 = panel.arm_count(0), n1 = panel.arm_count(1);
  if (n0 == 0 || n1 == 0) throw DataError("dominance: both arms required");
  // Two-sample slack at roughly the 5% level.
  report.slack = 1.36 * std::sqrt(1.0 / static_cast<double>(n0) + 1.0 / static_cast<double>(n1));

  for (int t = 0; t <= panel.t_max(); ++t) {
    std::vector<double> s0, s1;
    for (int i = 0; i < panel.n_subjects(); ++i) {
      if (!panel.has_surrogate(i, t)) continue;
      (panel.subject(i).arm == 0 ? s0 : s1).push_back(panel.surrogate(i, t));
    }
    if (static_cast<int>(s0.size()) < min_per_arm || static_cast<int>(s1.size()) < min_per_arm) {
      report.skipped_times.push_back(t);
      continue;
    }
    std::sort(s0.begin(), s0.end());
    std::sort(s1.begin(), s1.end());
    std::vector<double> grid = s0;
    grid.insert(grid.end(), s1.begin(), s1.end());
    std::sort(grid.begin(), grid.end());
    double worst = -std::numeric_limits<double>::infinity();
    for (double s : grid) {
      auto cdf = [](const std::vector<double>& v, double x) {
        return static_cast<double>(std::upper_bound(v.begin(), v.end(), x) - v.begin()) /
               static_cast<double>(v.size());
      };
      worst = std::max(worst, cdf(s1, s) - cdf(s0, s));
    }
    report.times.push_back(t);
    report.statistic.push_back(worst);
    if (worst > report.slack) report.violation = true;
  }
  return report;
}

}  // namespace surro
