#include "surro/comparators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "surro/errors.hpp"

namespace surro {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct CrossSection {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::vector<int> subjects;  // row -> panel index
};

// Least squares with rank check; returns empty vector when deficient.
Eigen::VectorXd solve_ls(const CrossSection& cs) {
  if (cs.x.rows() < cs.x.cols()) return {};
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(cs.x);
  qr.setThreshold(1e-9);
  if (qr.rank() < cs.x.cols()) return {};
  return qr.solve(cs.y);
}

}  // namespace

BaselineResult ols_pte(const Panel& panel, const ConditionalConfig& config) {
  // Reuse the model builders so the OLS design matches the sequential one
  // column for column at each time.
  DiscountConfig discounts;  // discounts are irrelevant to the per-time fits
  ModelSpec marg = build_marginal(panel, config.covariates, discounts);
  ModelSpec cond = build_conditional(panel, config, discounts);
  const int n_t = panel.n_times();
  const int n = panel.n_subjects();

  BaselineResult result;
  result.method = BaselineMethod::Ols;

  EffectPath delta, delta_r;
  delta.label = EffectLabel::Delta;
  delta_r.label = EffectLabel::DeltaR;
  delta.values.assign(static_cast<std::size_t>(n_t), kNan);
  delta_r.values.assign(static_cast<std::size_t>(n_t), kNan);

  const int marg_delta = marg.layout.at(state_name::treatment());
  const int cond_delta = cond.layout.at(state_name::treatment());

  for (int t = 0; t < n_t; ++t) {
    const auto tt = static_cast<std::size_t>(t);
    bool ok = true;
    for (const ModelSpec* spec : {&marg, &cond}) {
      const int p = spec->layout.shared_dim();
      CrossSection cs;
      std::vector<Eigen::VectorXd> rows;
      for (int i = 0; i < n; ++i) {
        const DesignRow& row = spec->rows[tt][static_cast<std::size_t>(i)];
        if (row.empty()) continue;
        Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
        for (const auto& e : row) x[e.state] = e.value;
        rows.push_back(std::move(x));
        cs.subjects.push_back(i);
      }
      cs.x.resize(static_cast<long>(rows.size()), p);
      cs.y.resize(static_cast<long>(rows.size()));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        cs.x.row(static_cast<long>(r)) = rows[r].transpose();
        cs.y[static_cast<long>(r)] = panel.outcome(cs.subjects[r], t);
      }
      Eigen::VectorXd coef = solve_ls(cs);
      if (coef.size() == 0) {
        ok = false;
        break;
      }
      if (spec == &marg) {
        delta.values[tt] = coef[marg_delta];
      } else {
        double dr = coef[cond_delta];
        if (!cond.contrast_eligible.empty()) {
          double num = 0.0, den = 0.0;
          for (int i = 0; i < n; ++i) {
            if (!cond.contrast_eligible[tt][static_cast<std::size_t>(i)]) continue;
            double value = 0.0;
            for (const auto& e : cond.contrast[tt][static_cast<std::size_t>(i)])
              value += coef[e.state] * e.value;
            num += value;
            den += 1.0;
          }
          if (den > 0) dr += num / den;
        }
        delta_r.values[tt] = dr;
      }
    }
    if (!ok) result.flagged_times.push_back(t);
  }

  // Flagged times keep NaN paths; the PTE accumulates over usable times
  // only, so treat NaN as zero contribution and mark definedness via flags.
  EffectPath delta_clean = delta, delta_r_clean = delta_r;
  for (int t = 0; t < n_t; ++t) {
    const auto tt = static_cast<std::size_t>(t);
    if (!std::isfinite(delta_clean.values[tt])) delta_clean.values[tt] = 0.0;
    if (!std::isfinite(delta_r_clean.values[tt])) delta_r_clean.values[tt] = 0.0;
  }
  result.pte = compute_pte(delta_clean, delta_r_clean, default_eps_denom(panel));
  result.pte.delta = delta.values;
  result.pte.delta_r = delta_r.values;
  result.defined = result.pte.pte_defined && result.flagged_times.empty();
  return result;
}

BaselineResult diff_pte(const Panel& panel) {
  const int T = panel.t_max();
  BaselineResult result;
  result.method = BaselineMethod::Diff;

  // Change scores per subject with both endpoints observed.
  std::vector<double> dy, ds;
  std::vector<int> arm;
  for (int i = 0; i < panel.n_subjects(); ++i) {
    if (!panel.has_outcome(i, 0) || !panel.has_outcome(i, T) || !panel.has_surrogate(i, 0) ||
        !panel.has_surrogate(i, T)) {
      ++result.dropped_subjects;
      continue;
    }
    dy.push_back(panel.outcome(i, T) - panel.outcome(i, 0));
    ds.push_back(panel.surrogate(i, T) - panel.surrogate(i, 0));
    arm.push_back(panel.subject(i).arm);
  }
  const int n = static_cast<int>(dy.size());
  int n1 = 0;
  for (int g : arm) n1 += g;
  const int n0 = n - n1;
  if (n0 < 2 || n1 < 2) throw DataError("diff: too few subjects with observed endpoints");

  // Marginal contrast of outcome changes.
  double mean1 = 0.0, mean0 = 0.0;
  for (int r = 0; r < n; ++r) (arm[static_cast<std::size_t>(r)] ? mean1 : mean0) += dy[static_cast<std::size_t>(r)];
  mean1 /= n1;
  mean0 /= n0;
  const double marg_contrast = mean1 - mean0;

  // Conditional step: outcome change on (1, G, surrogate change).
  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd y(n);
  for (int r = 0; r < n; ++r) {
    x(r, 0) = 1.0;
    x(r, 1) = arm[static_cast<std::size_t>(r)];
    x(r, 2) = ds[static_cast<std::size_t>(r)];
    y[r] = dy[static_cast<std::size_t>(r)];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-9);
  double cond_contrast = kNan;
  if (qr.rank() == 3) cond_contrast = qr.solve(y)[1];

  EffectPath delta, delta_r;
  delta.label = EffectLabel::Delta;
  delta_r.label = EffectLabel::DeltaR;
  delta.values = {marg_contrast};
  delta_r.values = {std::isfinite(cond_contrast) ? cond_contrast : 0.0};
  result.pte = compute_pte(delta, delta_r, default_eps_denom(panel));
  result.defined = result.pte.pte_defined && std::isfinite(cond_contrast);
  if (!result.defined) result.pte.pte_defined = false;
  return result;
}

Panel resample_panel(const Panel& panel, const std::vector<int>& counts) {
  if (static_cast<int>(counts.size()) != panel.n_subjects())
    throw ConfigError("resample: counts size mismatch");
  std::vector<Subject> subjects;
  int copies_total = 0;
  for (int i = 0; i < panel.n_subjects(); ++i) {
    for (int k = 0; k < counts[static_cast<std::size_t>(i)]; ++k) {
      Subject s = panel.subject(i);
      s.id = s.id + "#" + std::to_string(k);
      subjects.push_back(std::move(s));
      ++copies_total;
    }
  }
  if (copies_total == 0) throw ConfigError("resample: empty multiset");
  Panel out(std::move(subjects), panel.t_max(),
            std::vector<std::string>(panel.covariate_names()));
  for (int i = 0; i < panel.n_subjects(); ++i) {
    for (int k = 0; k < counts[static_cast<std::size_t>(i)]; ++k) {
      const std::string id = panel.subject(i).id + "#" + std::to_string(k);
      int j = out.find_subject(id);
      for (int t = 0; t <= panel.t_max(); ++t) {
        if (panel.has_outcome(i, t)) out.set_outcome(j, t, panel.outcome(i, t));
        if (panel.has_surrogate(i, t)) out.set_surrogate(j, t, panel.surrogate(i, t));
      }
    }
  }
  return out;
}

BaselineBootstrap baseline_bootstrap(const Panel& panel, const ConditionalConfig& config,
                                     BaselineMethod method, const BootstrapOptions& options) {
  BaselineBootstrap out;
  out.point = method == BaselineMethod::Ols ? ols_pte(panel, config) : diff_pte(panel);

  std::vector<int> arm_of(static_cast<std::size_t>(panel.n_subjects()));
  for (int i = 0; i < panel.n_subjects(); ++i) arm_of[static_cast<std::size_t>(i)] = panel.subject(i).arm;

  std::vector<double> draws(static_cast<std::size_t>(options.n_replicates), kNan);
  for (int b = 0; b < options.n_replicates; ++b) {
    std::vector<int> counts =
        draw_counts(arm_of, options.stratified, options.seed, static_cast<std::uint64_t>(b));
    Panel replica = resample_panel(panel, counts);
    try {
      BaselineResult fit =
          method == BaselineMethod::Ols ? ols_pte(replica, config) : diff_pte(replica);
      if (fit.pte.pte_defined) draws[static_cast<std::size_t>(b)] = fit.pte.pte;
    } catch (const DataError&) {
      // replicate unusable; stays NaN
    }
  }
  out.undefined_replicates = static_cast<int>(
      std::count_if(draws.begin(), draws.end(), [](double x) { return !std::isfinite(x); }));
  out.pte = percentile_interval(draws, out.point.pte.pte, options.level);
  return out;
}

}  // namespace surro
