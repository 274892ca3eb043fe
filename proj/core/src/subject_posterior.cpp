#include "surro/subject_posterior.hpp"

#include "surro/errors.hpp"
#include "surro/parallel.hpp"

namespace surro {

namespace {

FilterProblem subject_problem(const ModelSpec& spec, const Panel& panel, int subject,
                              double prior_share) {
  const int s_dim = spec.layout.shared_dim();
  const int p = s_dim + 1;  // shared block + own level
  FilterProblem prob;
  prob.prior_mean = Eigen::VectorXd::Zero(p);
  prob.prior_var.resize(p);
  // 1/N of the shared-block prior precision; the own level keeps its full
  // prior, matching the product decomposition of the joint prior.
  prob.prior_var.head(s_dim).setConstant(spec.prior_scale / prior_share);
  prob.prior_var[s_dim] = spec.prior_scale;
  prob.discounts.resize(p);
  prob.discounts.head(s_dim) = spec.shared_discounts();
  prob.discounts[s_dim] = spec.discounts.subject;

  const int n_t = static_cast<int>(spec.rows.size());
  prob.obs.resize(static_cast<std::size_t>(n_t));
  const double v = spec.cell_variance(panel.subject(subject).arm);
  for (int t = 0; t < n_t; ++t) {
    const DesignRow& row = spec.rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(subject)];
    if (row.empty()) continue;
    CellObs cell;
    cell.row = row;
    cell.row.push_back({s_dim, 1.0});
    cell.y = panel.outcome(subject, t);
    cell.v = v;
    prob.obs[static_cast<std::size_t>(t)].push_back(std::move(cell));
  }
  return prob;
}

}  // namespace

SubjectPosterior fit_subject_posterior(const ModelSpec& spec, const Panel& panel,
                                       int subject_index, double prior_share) {
  if (subject_index < 0 || subject_index >= panel.n_subjects())
    throw DataError("subject posterior: subject index out of range");
  if (!(prior_share > 0.0) || prior_share > 1.0)
    throw ConfigError("subject posterior: prior share must lie in (0, 1]");

  const int s_dim = spec.layout.shared_dim();
  FilterTrace trace = run_filter(subject_problem(spec, panel, subject_index, prior_share));
  SmoothedSequence seq = run_smoother(trace);
  const int n_t = trace.n_times();

  SubjectPosterior post;
  post.subject = subject_index;
  post.arm = panel.subject(subject_index).arm;
  post.filt_precision.resize(static_cast<std::size_t>(n_t));
  post.filt_info.resize(static_cast<std::size_t>(n_t));
  post.smoothed_shared.resize(static_cast<std::size_t>(n_t));
  post.level_mean.resize(static_cast<std::size_t>(n_t));
  post.level_var.resize(static_cast<std::size_t>(n_t));
  for (int t = 0; t < n_t; ++t) {
    const FilterStep& step = trace.steps[static_cast<std::size_t>(t)];
    Eigen::MatrixXd cov_sh = step.C.topLeftCorner(s_dim, s_dim);
    Eigen::MatrixXd prec = jittered_inverse(cov_sh, "subject posterior precision");
    symmetrize(prec);
    post.filt_info[static_cast<std::size_t>(t)] = prec * step.m.head(s_dim);
    post.filt_precision[static_cast<std::size_t>(t)] = std::move(prec);

    GaussianBelief& sb = post.smoothed_shared[static_cast<std::size_t>(t)];
    sb.time = t;
    sb.mean = seq.mean[static_cast<std::size_t>(t)].head(s_dim);
    sb.cov = seq.cov[static_cast<std::size_t>(t)].topLeftCorner(s_dim, s_dim);
    post.level_mean[static_cast<std::size_t>(t)] = seq.mean[static_cast<std::size_t>(t)][s_dim];
    post.level_var[static_cast<std::size_t>(t)] = seq.cov[static_cast<std::size_t>(t)](s_dim, s_dim);
  }
  return post;
}

SubjectPosterior fit_subject_posterior(const ModelSpec& spec, const Panel& panel,
                                       const std::string& subject_id, double prior_share) {
  int idx = panel.find_subject(subject_id);
  if (idx < 0) throw DataError("subject posterior: no subject with id '" + subject_id + "'");
  return fit_subject_posterior(spec, panel, idx, prior_share);
}

SubjectPosteriorSet decompose(std::shared_ptr<const ModelSpec> spec, const Panel& panel) {
  if (!spec) throw ConfigError("decompose: null spec");
  const int n = panel.n_subjects();
  SubjectPosteriorSet set;
  set.spec = spec;
  set.prior_share = 1.0 / static_cast<double>(n);
  set.subjects.resize(static_cast<std::size_t>(n));
  set.arm_of.resize(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    set.subjects[i] = fit_subject_posterior(*spec, panel, static_cast<int>(i), set.prior_share);
    set.arm_of[i] = set.subjects[i].arm;
  });

  // Detect in-arm homogeneity of the precision streams. Precisions depend
  // on the design only, so subjects with identical rows (same arm, same
  // missingness, same covariate and surrogate columns) match bitwise. When
  // both arms are homogeneous, any stratified draw reproduces the
  // identity-count precision sum and its factorization can be cached.
  set.arm_homogeneous = true;
  const int n_t = set.n_times();
  int first_of_arm[2] = {-1, -1};
  for (int i = 0; i < n && set.arm_homogeneous; ++i) {
    int g = set.arm_of[static_cast<std::size_t>(i)];
    if (first_of_arm[g] < 0) {
      first_of_arm[g] = i;
      continue;
    }
    const auto& a = set.subjects[static_cast<std::size_t>(first_of_arm[g])].filt_precision;
    const auto& b = set.subjects[static_cast<std::size_t>(i)].filt_precision;
    for (int t = 0; t < n_t && set.arm_homogeneous; ++t)
      if ((a[static_cast<std::size_t>(t)].array() != b[static_cast<std::size_t>(t)].array()).any())
        set.arm_homogeneous = false;
  }
  if (set.arm_homogeneous && first_of_arm[0] >= 0 && first_of_arm[1] >= 0) {
    const double n0 = static_cast<double>(panel.arm_count(0));
    const double n1 = static_cast<double>(panel.arm_count(1));
    set.cached_llt.resize(static_cast<std::size_t>(n_t));
    for (int t = 0; t < n_t; ++t) {
      Eigen::MatrixXd prec =
          n0 * set.subjects[static_cast<std::size_t>(first_of_arm[0])].filt_precision[static_cast<std::size_t>(t)] +
          n1 * set.subjects[static_cast<std::size_t>(first_of_arm[1])].filt_precision[static_cast<std::size_t>(t)];
      add_jitter(prec);
      set.cached_llt[static_cast<std::size_t>(t)].compute(prec);
      if (set.cached_llt[static_cast<std::size_t>(t)].info() != Eigen::Success) {
        set.arm_homogeneous = false;
        set.cached_llt.clear();
        break;
      }
    }
  } else {
    set.arm_homogeneous = false;
  }
  return set;
}

}  // namespace surro
