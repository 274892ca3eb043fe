#include "surro/recombine.hpp"

#include <numeric>

#include "surro/errors.hpp"

namespace surro {

std::vector<double> RecombinedFit::path(const std::string& name) const {
  const int k = spec->layout.at(name);
  std::vector<double> out(smoothed_mean.size());
  for (std::size_t t = 0; t < smoothed_mean.size(); ++t) out[t] = smoothed_mean[t][k];
  return out;
}

std::vector<int> identity_counts(int n_subjects) {
  return std::vector<int>(static_cast<std::size_t>(n_subjects), 1);
}

Recombiner::Recombiner(const SubjectPosteriorSet& set) : set_(set) {
  if (set_.n_subjects() == 0) throw ConfigError("recombine: empty posterior set");
  fast_path_ = set_.arm_homogeneous && !set_.cached_llt.empty();
  arm_total_.assign(2, 0);
  for (int g : set_.arm_of) ++arm_total_[static_cast<std::size_t>(g)];
  const int p = set_.shared_dim();
  precision_.resize(p, p);
  info_.resize(p);
}

bool Recombiner::counts_match_arms(const std::vector<int>& counts) const {
  int per_arm[2] = {0, 0};
  for (std::size_t i = 0; i < counts.size(); ++i)
    per_arm[static_cast<std::size_t>(set_.arm_of[i])] += counts[i];
  return per_arm[0] == arm_total_[0] && per_arm[1] == arm_total_[1];
}

void Recombiner::accumulate_info(const std::vector<int>& counts, int t) const {
  info_.setZero();
  const auto tt = static_cast<std::size_t>(t);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const int k = counts[i];
    if (k == 0) continue;
    const auto& b = set_.subjects[i].filt_info[tt];
    if (k == 1)
      info_ += b;
    else
      info_ += static_cast<double>(k) * b;
  }
}

void Recombiner::smooth_means(RecombinedFit& out) const {
  const int n_t = static_cast<int>(out.filtered_mean.size());
  const Eigen::VectorXd d = set_.spec->shared_discounts();
  out.smoothed_mean.resize(static_cast<std::size_t>(n_t));
  out.smoothed_mean[static_cast<std::size_t>(n_t - 1)] = out.filtered_mean[static_cast<std::size_t>(n_t - 1)];
  // Discount evolution makes the smoother gain diagonal on the shared
  // block, so the backward pass is exponential smoothing of the filtered
  // means: s_t = (1 - d) m_t + d s_{t+1}, coordinatewise.
  for (int t = n_t - 2; t >= 0; --t) {
    const auto tt = static_cast<std::size_t>(t);
    out.smoothed_mean[tt] =
        out.filtered_mean[tt] +
        d.asDiagonal() * (out.smoothed_mean[tt + 1] - out.filtered_mean[tt]);
  }
}

void Recombiner::run(const std::vector<int>& counts, RecombinedFit& out) const {
  const int n = set_.n_subjects();
  if (static_cast<int>(counts.size()) != n)
    throw ConfigError("recombine: multiplicity vector size mismatch");
  long total = std::accumulate(counts.begin(), counts.end(), 0L);
  if (total <= 0) throw ConfigError("recombine: empty index multiset");

  const int n_t = set_.n_times();
  out.tag = set_.spec->tag;
  out.spec = set_.spec.get();
  out.filtered_mean.resize(static_cast<std::size_t>(n_t));
  out.filtered_cov.clear();
  out.smoothed_cov.clear();

  const bool use_cached = fast_path_ && counts_match_arms(counts);
  for (int t = 0; t < n_t; ++t) {
    const auto tt = static_cast<std::size_t>(t);
    accumulate_info(counts, t);
    if (use_cached) {
      out.filtered_mean[tt] = set_.cached_llt[tt].solve(info_);
    } else {
      precision_.setZero();
      for (std::size_t i = 0; i < counts.size(); ++i) {
        const int k = counts[i];
        if (k == 0) continue;
        const auto& prec = set_.subjects[i].filt_precision[tt];
        if (k == 1)
          precision_ += prec;
        else
          precision_ += static_cast<double>(k) * prec;
      }
      add_jitter(precision_);
      Eigen::LLT<Eigen::MatrixXd> llt(precision_);
      if (llt.info() != Eigen::Success)
        throw NumericError("recombine: singular precision sum at t=" + std::to_string(t));
      out.filtered_mean[tt] = llt.solve(info_);
    }
  }
  smooth_means(out);
}

RecombinedFit recombine(const SubjectPosteriorSet& set, const std::vector<int>& counts,
                        bool want_cov) {
  Recombiner worker(set);
  RecombinedFit out;
  worker.run(counts, out);
  if (want_cov) {
    const int n_t = set.n_times();
    const int p = set.shared_dim();
    out.filtered_cov.resize(static_cast<std::size_t>(n_t));
    out.smoothed_cov.resize(static_cast<std::size_t>(n_t));
    for (int t = 0; t < n_t; ++t) {
      const auto tt = static_cast<std::size_t>(t);
      Eigen::MatrixXd precision = Eigen::MatrixXd::Zero(p, p);
      for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) continue;
        precision += static_cast<double>(counts[i]) * set.subjects[i].filt_precision[tt];
      }
      out.filtered_cov[tt] = jittered_inverse(precision, "recombine covariance");
      symmetrize(out.filtered_cov[tt]);
    }
    // Backward covariance pass mirroring the mean recursion:
    // S_t = C_t + D (S_{t+1} - R_{t+1}) D with R_{t+1} = C_t scaled by the
    // discount inflation.
    const Eigen::VectorXd d = set.spec->shared_discounts();
    const Eigen::VectorXd inflate = d.array().sqrt().inverse();
    out.smoothed_cov[static_cast<std::size_t>(n_t - 1)] = out.filtered_cov[static_cast<std::size_t>(n_t - 1)];
    for (int t = n_t - 2; t >= 0; --t) {
      const auto tt = static_cast<std::size_t>(t);
      Eigen::MatrixXd r_next = inflate.asDiagonal() * out.filtered_cov[tt] * inflate.asDiagonal();
      Eigen::MatrixXd s = out.filtered_cov[tt] +
                          d.asDiagonal() * (out.smoothed_cov[tt + 1] - r_next) * d.asDiagonal();
      symmetrize(s);
      out.smoothed_cov[tt] = std::move(s);
    }
  }
  return out;
}

}  // namespace surro
