#include "surro/model_spec.hpp"

#include <algorithm>

#include "surro/errors.hpp"

namespace surro {

std::string to_string(ModelTag tag) {
  return tag == ModelTag::Marginal ? "marginal" : "conditional";
}

namespace state_name {
std::string intercept() { return "intercept"; }
std::string treatment() { return "delta"; }
std::string surrogate(int lag, int basis_index) {
  return "f[" + std::to_string(lag) + "][" + std::to_string(basis_index) + "]";
}
std::string surrogate_interaction(int lag, int basis_index) {
  return "f_trt[" + std::to_string(lag) + "][" + std::to_string(basis_index) + "]";
}
std::string covariate(const std::string& name) { return "x:" + name; }
}  // namespace state_name

int StateLayout::add(const std::string& name) {
  if (index_.count(name) > 0) throw ConfigError("layout: duplicate state name '" + name + "'");
  int idx = static_cast<int>(names_.size());
  names_.push_back(name);
  index_.emplace(name, idx);
  return idx;
}

int StateLayout::at(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ConfigError("layout: unknown state name '" + name + "'");
  return it->second;
}

Eigen::VectorXd ModelSpec::shared_discounts() const {
  Eigen::VectorXd d(layout.shared_dim());
  for (int k = 0; k < layout.shared_dim(); ++k) {
    const std::string& name = layout.shared_names()[static_cast<std::size_t>(k)];
    if (name.rfind("x:", 0) == 0)
      d[k] = discounts.covariate;
    else if (name == state_name::treatment())
      d[k] = discounts.treatment_discount();
    else if (name.rfind("f", 0) == 0)
      d[k] = discounts.surrogate_discount();
    else
      d[k] = discounts.shared;
  }
  return d;
}

namespace {

std::vector<int> covariate_positions(const Panel& panel, const std::vector<std::string>& wanted) {
  std::vector<int> pos;
  pos.reserve(wanted.size());
  for (const auto& name : wanted) {
    auto it = std::find(panel.covariate_names().begin(), panel.covariate_names().end(), name);
    if (it == panel.covariate_names().end())
      throw ConfigError("model: unknown covariate '" + name + "'");
    pos.push_back(static_cast<int>(it - panel.covariate_names().begin()));
  }
  return pos;
}

void require_both_arms(const Panel& panel) {
  if (panel.arm_count(0) == 0 || panel.arm_count(1) == 0)
    throw DataError("model: panel must contain subjects in both arms");
}

void finish_common(ModelSpec& spec, const Panel& panel, const DiscountConfig& discounts,
                   double kappa, double v_control, double v_treated) {
  discounts.validate();
  if (!(kappa > 0)) throw ConfigError("model: kappa must be positive");
  if (!(v_control > 0) || !(v_treated > 0))
    throw ConfigError("model: observation variances must be positive");
  spec.discounts = discounts;
  spec.kappa = kappa;
  spec.obs_variance[0] = v_control;
  spec.obs_variance[1] = v_treated;
  // The prior scales with the observation variance so that rescaling V
  // rescales the whole model and leaves point estimates untouched.
  spec.prior_scale = kappa * panel.outcome_variance() * 0.5 * (v_control + v_treated);
  spec.layout.set_n_subjects(panel.n_subjects());
}

}  // namespace

ModelSpec build_marginal(const Panel& panel, const std::vector<std::string>& covariates,
                         const DiscountConfig& discounts, double kappa, double v_control,
                         double v_treated) {
  require_both_arms(panel);
  const std::vector<int> cov_pos = covariate_positions(panel, covariates);

  ModelSpec spec;
  spec.tag = ModelTag::Marginal;
  spec.covariates = covariates;
  const int i_mu = spec.layout.add(state_name::intercept());
  const int i_delta = spec.layout.add(state_name::treatment());
  std::vector<int> i_cov;
  for (const auto& name : covariates) i_cov.push_back(spec.layout.add(state_name::covariate(name)));
  finish_common(spec, panel, discounts, kappa, v_control, v_treated);

  const int T = panel.t_max();
  const int N = panel.n_subjects();
  spec.rows.assign(static_cast<std::size_t>(T + 1), std::vector<DesignRow>(static_cast<std::size_t>(N)));
  for (int t = 0; t <= T; ++t) {
    for (int i = 0; i < N; ++i) {
      if (!panel.has_outcome(i, t)) continue;
      if (!std::isfinite(panel.outcome(i, t)))
        throw DataError("model: non-finite outcome at subject " + panel.subject(i).id +
                        ", time " + std::to_string(t));
      DesignRow row;
      row.push_back({i_mu, 1.0});
      const Subject& s = panel.subject(i);
      if (s.arm == 1) row.push_back({i_delta, 1.0});
      for (std::size_t c = 0; c < cov_pos.size(); ++c) {
        double x = s.covariates[static_cast<std::size_t>(cov_pos[c])];
        if (x != 0.0) row.push_back({i_cov[c], x});
      }
      spec.rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] = std::move(row);
    }
  }
  return spec;
}

ModelSpec build_conditional(const Panel& panel, const ConditionalConfig& config,
                            const DiscountConfig& discounts, double kappa, double v_control,
                            double v_treated) {
  require_both_arms(panel);
  config.basis.validate();
  if (config.max_lag < 0) throw ConfigError("model: max_lag must be >= 0");
  if (config.max_lag > panel.t_max())
    throw ConfigError("model: max_lag " + std::to_string(config.max_lag) +
                      " exceeds final time " + std::to_string(panel.t_max()));
  const std::vector<int> cov_pos = covariate_positions(panel, config.covariates);
  const bool arm_specific = config.arm_specific();
  const int K = config.max_lag;
  const int bdim = config.basis.dim();

  ModelSpec spec;
  spec.tag = ModelTag::Conditional;
  spec.conditional = config;
  spec.covariates = config.covariates;
  const int i_mu = spec.layout.add(state_name::intercept());
  const int i_delta = spec.layout.add(state_name::treatment());
  std::vector<int> i_f(static_cast<std::size_t>((K + 1) * bdim));
  std::vector<int> i_ftrt;
  for (int h = 0; h <= K; ++h)
    for (int k = 0; k < bdim; ++k)
      i_f[static_cast<std::size_t>(h * bdim + k)] = spec.layout.add(state_name::surrogate(h, k));
  if (arm_specific) {
    i_ftrt.resize(static_cast<std::size_t>((K + 1) * bdim));
    for (int h = 0; h <= K; ++h)
      for (int k = 0; k < bdim; ++k)
        i_ftrt[static_cast<std::size_t>(h * bdim + k)] =
            spec.layout.add(state_name::surrogate_interaction(h, k));
  }
  std::vector<int> i_cov;
  for (const auto& name : config.covariates)
    i_cov.push_back(spec.layout.add(state_name::covariate(name)));
  finish_common(spec, panel, discounts, kappa, v_control, v_treated);

  const int T = panel.t_max();
  const int N = panel.n_subjects();
  spec.rows.assign(static_cast<std::size_t>(T + 1), std::vector<DesignRow>(static_cast<std::size_t>(N)));
  spec.contrast.assign(static_cast<std::size_t>(T + 1), std::vector<DesignRow>(static_cast<std::size_t>(N)));
  if (arm_specific)
    spec.contrast_eligible.assign(static_cast<std::size_t>(T + 1),
                                  std::vector<std::uint8_t>(static_cast<std::size_t>(N), 0));

  int used_cells = 0;
  for (int t = 0; t <= T; ++t) {
    const int lags_here = std::min(K, t);  // ragged start: no pre-baseline lags
    for (int i = 0; i < N; ++i) {
      const Subject& s = panel.subject(i);
      bool window_complete = true;
      for (int h = 0; h <= lags_here && window_complete; ++h)
        window_complete = panel.has_surrogate(i, t - h);

      if (panel.has_outcome(i, t)) {
        if (!std::isfinite(panel.outcome(i, t)))
          throw DataError("model: non-finite outcome at subject " + s.id + ", time " +
                          std::to_string(t));
        if (!window_complete) {
          ++spec.dropped_cells;
        } else {
          DesignRow row;
          row.push_back({i_mu, 1.0});
          if (s.arm == 1) row.push_back({i_delta, 1.0});
          for (int h = 0; h <= lags_here; ++h) {
            const auto phi = basis_expand(config.basis, panel.surrogate(i, t - h));
            for (int k = 0; k < bdim; ++k) {
              double v = phi[static_cast<std::size_t>(k)];
              if (v == 0.0) continue;
              row.push_back({i_f[static_cast<std::size_t>(h * bdim + k)], v});
              if (arm_specific && s.arm == 1)
                row.push_back({i_ftrt[static_cast<std::size_t>(h * bdim + k)], v});
            }
          }
          for (std::size_t c = 0; c < cov_pos.size(); ++c) {
            double x = s.covariates[static_cast<std::size_t>(cov_pos[c])];
            if (x != 0.0) row.push_back({i_cov[c], x});
          }
          spec.rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] = std::move(row);
          ++used_cells;
        }
      }

      // Controls with a complete surrogate window feed the residual-effect
      // average whether or not their outcome is observed at t.
      if (arm_specific && s.arm == 0 && window_complete) {
        spec.contrast_eligible[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] = 1;
        DesignRow ctr;
        for (int h = 0; h <= lags_here; ++h) {
          const auto phi = basis_expand(config.basis, panel.surrogate(i, t - h));
          for (int k = 0; k < bdim; ++k) {
            double v = phi[static_cast<std::size_t>(k)];
            if (v != 0.0) ctr.push_back({i_ftrt[static_cast<std::size_t>(h * bdim + k)], v});
          }
        }
        spec.contrast[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] = std::move(ctr);
      }
    }
  }
  if (used_cells == 0) throw DataError("model: every outcome cell was dropped (missing lags)");
  return spec;
}

}  // namespace surro
