#include "surro/kalman.hpp"

#include <cmath>

#include "surro/errors.hpp"

namespace surro {

Eigen::MatrixXd FilterTrace::evolution_cov(int t) const {
  if (t < 1 || t >= n_times()) throw ConfigError("trace: evolution_cov needs 1 <= t <= T");
  return steps[static_cast<std::size_t>(t)].R - steps[static_cast<std::size_t>(t - 1)].C;
}

const std::vector<double>& SmoothedFit::path(const std::string& name) const {
  auto it = named.find(name);
  if (it == named.end()) throw ConfigError("fit: no path named '" + name + "'");
  return it->second;
}

namespace {

// Sequential scalar measurement update in Joseph form. Exact for a diagonal
// observation covariance and avoids any matrix inversion.
void scalar_update(Eigen::VectorXd& m, Eigen::MatrixXd& P, const CellObs& cell,
                   double& residual) {
  const int p = static_cast<int>(m.size());
  Eigen::VectorXd u = Eigen::VectorXd::Zero(p);  // u = P f
  for (const auto& e : cell.row) u += P.col(e.state) * e.value;
  double fm = 0.0, fu = 0.0;
  for (const auto& e : cell.row) {
    fm += e.value * m[e.state];
    fu += e.value * u[e.state];
  }
  const double q = fu + cell.v;
  if (!(q > 0.0) || !std::isfinite(q))
    throw NumericError("filter: non-positive innovation variance");
  residual = cell.y - fm;
  const Eigen::VectorXd gain = u / q;
  m += gain * residual;
  // Joseph form: (I - K f') P (I - K f')' + v K K', expanded with u = P f.
  P -= gain * u.transpose();
  P -= u * gain.transpose();
  P += (q * gain) * gain.transpose();
  symmetrize(P);
}

}  // namespace

FilterTrace run_filter(const FilterProblem& problem) {
  const int p = problem.dim();
  const int n_t = problem.n_times();
  if (n_t == 0) throw ConfigError("filter: empty time grid");
  if (problem.discounts.size() != p || problem.prior_var.size() != p)
    throw ConfigError("filter: dimension mismatch in problem definition");
  for (int k = 0; k < p; ++k)
    if (!(problem.discounts[k] > 0.0) || problem.discounts[k] > 1.0)
      throw ConfigError("filter: discounts must lie in (0, 1]");

  const Eigen::VectorXd inflate = problem.discounts.array().sqrt().inverse();

  FilterTrace trace;
  trace.discounts = problem.discounts;
  trace.steps.resize(static_cast<std::size_t>(n_t));

  Eigen::VectorXd m = problem.prior_mean;
  Eigen::MatrixXd C = problem.prior_var.asDiagonal();
  for (int t = 0; t < n_t; ++t) {
    FilterStep& step = trace.steps[static_cast<std::size_t>(t)];
    if (t > 0) {
      // Identity evolution with discount inflation per coordinate.
      C = inflate.asDiagonal() * C * inflate.asDiagonal();
      symmetrize(C);
    }
    step.a = m;
    step.R = C;
    const auto& cells = problem.obs[static_cast<std::size_t>(t)];
    step.residuals.resize(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (!std::isfinite(cells[j].y)) throw DataError("filter: non-finite observation value");
      scalar_update(m, C, cells[j], step.residuals[j]);
    }
    step.n_obs = static_cast<int>(cells.size());
    step.m = m;
    step.C = C;
  }
  return trace;
}

SmoothedSequence run_smoother(const FilterTrace& trace) {
  const int n_t = trace.n_times();
  if (n_t == 0) throw ConfigError("smoother: empty trace");
  SmoothedSequence out;
  out.mean.resize(static_cast<std::size_t>(n_t));
  out.cov.resize(static_cast<std::size_t>(n_t));
  out.mean[static_cast<std::size_t>(n_t - 1)] = trace.steps.back().m;
  out.cov[static_cast<std::size_t>(n_t - 1)] = trace.steps.back().C;
  for (int t = n_t - 2; t >= 0; --t) {
    const FilterStep& here = trace.steps[static_cast<std::size_t>(t)];
    const FilterStep& next = trace.steps[static_cast<std::size_t>(t + 1)];
    // Identity evolution: gain B = C_t R_{t+1}^-1, solved as R B' = C.
    Eigen::MatrixXd bt;
    try {
      bt = jittered_solve(next.R, here.C, "smoother gain").transpose();
    } catch (const NumericError&) {
      throw NumericError("smoother: singular predictive covariance at t=" +
                         std::to_string(t + 1));
    }
    out.mean[static_cast<std::size_t>(t)] =
        here.m + bt * (out.mean[static_cast<std::size_t>(t + 1)] - next.a);
    Eigen::MatrixXd s = here.C +
                        bt * (out.cov[static_cast<std::size_t>(t + 1)] - next.R) * bt.transpose();
    symmetrize(s);
    out.cov[static_cast<std::size_t>(t)] = std::move(s);
  }
  return out;
}

FilterProblem joint_problem(const ModelSpec& spec, const Panel& panel) {
  const int s_dim = spec.layout.shared_dim();
  const int n = panel.n_subjects();
  const int p = s_dim + n;
  if (spec.layout.n_subjects() != n)
    throw ConfigError("filter: spec subject count does not match panel");

  FilterProblem prob;
  prob.prior_mean = Eigen::VectorXd::Zero(p);
  prob.prior_var = Eigen::VectorXd::Constant(p, spec.prior_scale);
  prob.discounts.resize(p);
  prob.discounts.head(s_dim) = spec.shared_discounts();
  prob.discounts.tail(n).setConstant(spec.discounts.subject);

  const int n_t = static_cast<int>(spec.rows.size());
  if (n_t != panel.n_times()) throw ConfigError("filter: spec rows do not cover the panel grid");
  prob.obs.resize(static_cast<std::size_t>(n_t));
  for (int t = 0; t < n_t; ++t) {
    auto& cells = prob.obs[static_cast<std::size_t>(t)];
    for (int i = 0; i < n; ++i) {
      const DesignRow& row = spec.rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
      if (row.empty()) continue;
      CellObs cell;
      cell.row = row;
      for (const auto& e : cell.row)
        if (e.state >= s_dim) throw ConfigError("filter: design row exceeds shared block");
      cell.row.push_back({s_dim + i, 1.0});
      cell.y = panel.outcome(i, t);
      cell.v = spec.cell_variance(panel.subject(i).arm);
      cells.push_back(std::move(cell));
    }
  }
  return prob;
}

FilterTrace kalman_filter(const ModelSpec& spec, const Panel& panel) {
  FilterTrace trace = run_filter(joint_problem(spec, panel));
  trace.spec = &spec;
  return trace;
}

SmoothedFit kalman_smoother(const FilterTrace& trace) {
  if (trace.spec == nullptr)
    throw ConfigError("smoother: trace is missing its model spec");
  const ModelSpec& spec = *trace.spec;
  const int s_dim = spec.layout.shared_dim();
  const int n = spec.layout.n_subjects();
  const int n_t = trace.n_times();

  SmoothedSequence seq = run_smoother(trace);

  SmoothedFit fit;
  fit.tag = spec.tag;
  fit.spec = trace.spec;
  fit.shared.resize(static_cast<std::size_t>(n_t));
  fit.subject_mean.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n_t), 0.0));
  fit.subject_var.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n_t), 0.0));
  for (int t = 0; t < n_t; ++t) {
    GaussianBelief& b = fit.shared[static_cast<std::size_t>(t)];
    b.time = t;
    b.mean = seq.mean[static_cast<std::size_t>(t)].head(s_dim);
    b.cov = seq.cov[static_cast<std::size_t>(t)].topLeftCorner(s_dim, s_dim);
    for (int i = 0; i < n; ++i) {
      fit.subject_mean[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] =
          seq.mean[static_cast<std::size_t>(t)][s_dim + i];
      fit.subject_var[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] =
          seq.cov[static_cast<std::size_t>(t)](s_dim + i, s_dim + i);
    }
  }
  for (int k = 0; k < s_dim; ++k) {
    std::vector<double> path(static_cast<std::size_t>(n_t));
    for (int t = 0; t < n_t; ++t)
      path[static_cast<std::size_t>(t)] = fit.shared[static_cast<std::size_t>(t)].mean[k];
    fit.named.emplace(spec.layout.shared_names()[static_cast<std::size_t>(k)], std::move(path));
  }
  fit.config_log = to_string(spec.tag) + " model, " + std::to_string(s_dim) +
                   " shared states, " + std::to_string(n) + " subjects";
  return fit;
}

}  // namespace surro
