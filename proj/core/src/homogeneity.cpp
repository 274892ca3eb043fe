#include "surro/homogeneity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <Eigen/Dense>

#include "surro/errors.hpp"
#include "surro/parallel.hpp"
#include "surro/rng.hpp"

namespace surro {

DiffPath delta_diff(const EffectPath& delta_r, const EffectPath& delta,
                    const BootstrapDraws& draws) {
  if (delta_r.n_times() != delta.n_times())
    throw ConfigError("delta_diff: path lengths differ");
  const int n_t = delta.n_times();
  const double sum_d = delta.sum();
  if (sum_d == 0.0) throw NumericError("delta_diff: total treatment effect is zero");
  const double tau = 1.0 - delta_r.sum() / sum_d;

  DiffPath out;
  out.tau_hat = tau;
  out.delta = delta.values;
  out.delta_r = delta_r.values;
  out.values.resize(static_cast<std::size_t>(n_t));
  for (int t = 0; t < n_t; ++t) {
    const auto tt = static_cast<std::size_t>(t);
    out.values[tt] = delta_r.values[tt] - (1.0 - tau) * delta.values[tt];
  }

  // Bootstrap SD of deltaR(t) - (1 - tau) delta(t) with tau held at the
  // point estimate.
  const int b_total = draws.n_replicates;
  if (b_total < 2) throw ConfigError("delta_diff: bootstrap draws required");
  out.sigma.assign(static_cast<std::size_t>(n_t), 0.0);
  for (int t = 0; t < n_t; ++t) {
    const auto tt = static_cast<std::size_t>(t);
    double mean = 0.0;
    for (int b = 0; b < b_total; ++b)
      mean += draws.delta_r[static_cast<std::size_t>(b)][tt] -
              (1.0 - tau) * draws.delta[static_cast<std::size_t>(b)][tt];
    mean /= static_cast<double>(b_total);
    double ss = 0.0;
    for (int b = 0; b < b_total; ++b) {
      double x = draws.delta_r[static_cast<std::size_t>(b)][tt] -
                 (1.0 - tau) * draws.delta[static_cast<std::size_t>(b)][tt] - mean;
      ss += x * x;
    }
    out.sigma[tt] = std::sqrt(ss / static_cast<double>(b_total - 1));
    if (!(out.sigma[tt] > 0.0))
      throw NumericError("delta_diff: degenerate variance at t=" + std::to_string(t));
  }
  return out;
}

namespace {

// Covariance of the stacked vector (deltaR(0..T), delta(0..T)) across
// bootstrap replicates.
Eigen::MatrixXd stacked_covariance(const BootstrapDraws& draws, int n_t) {
  const int b_total = draws.n_replicates;
  const int dim = 2 * n_t;
  Eigen::MatrixXd z(b_total, dim);
  for (int b = 0; b < b_total; ++b) {
    for (int t = 0; t < n_t; ++t) {
      z(b, t) = draws.delta_r[static_cast<std::size_t>(b)][static_cast<std::size_t>(t)];
      z(b, n_t + t) = draws.delta[static_cast<std::size_t>(b)][static_cast<std::size_t>(t)];
    }
  }
  Eigen::RowVectorXd mean = z.colwise().mean();
  z.rowwise() -= mean;
  return (z.transpose() * z) / static_cast<double>(b_total - 1);
}

double max_abs_standardized(const Eigen::VectorXd& diff, const std::vector<double>& sigma) {
  double worst = 0.0;
  for (int t = 0; t < diff.size(); ++t)
    worst = std::max(worst, std::abs(diff[t] / sigma[static_cast<std::size_t>(t)]));
  return worst;
}

}  // namespace

TestResult msd_test(const DiffPath& diff, const BootstrapDraws& draws, const MsdOptions& options) {
  const int n_t = static_cast<int>(diff.values.size());
  if (n_t == 0) throw ConfigError("msd: empty diff path");
  if (!(options.alpha > 0.0) || options.alpha >= 1.0)
    throw ConfigError("msd: alpha must lie in (0, 1)");
  if (options.n_null_draws < 100) throw ConfigError("msd: need at least 100 null draws");

  TestResult result;
  result.method = HomogeneityMethod::Msd;
  result.alpha = options.alpha;
  result.draws_used = options.n_null_draws;

  Eigen::VectorXd observed(n_t);
  for (int t = 0; t < n_t; ++t) observed[t] = diff.values[static_cast<std::size_t>(t)];
  result.statistic = max_abs_standardized(observed, diff.sigma);

  if (draws.n_replicates < 10 * n_t)
    result.note = "bootstrap replicates below 10x time points; null covariance may be noisy";

  // Gaussian null for the stacked paths: center deltaR at (1 - tau) delta
  // so the diff vanishes, keep the bootstrap covariance.
  Eigen::MatrixXd cov = stacked_covariance(draws, n_t);
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    add_jitter(cov, 1e-8);
    llt.compute(cov);
    if (llt.info() != Eigen::Success)
      throw NumericError("msd: null covariance is not positive definite even after jitter");
    result.note += std::string(result.note.empty() ? "" : "; ") +
                   "null covariance regularized with jitter";
  }
  Eigen::MatrixXd chol = llt.matrixL();

  Eigen::VectorXd center(2 * n_t);
  const double shrink = 1.0 - diff.tau_hat;
  for (int t = 0; t < n_t; ++t) {
    center[t] = shrink * diff.delta[static_cast<std::size_t>(t)];
    center[n_t + t] = diff.delta[static_cast<std::size_t>(t)];
  }

  const int m = options.n_null_draws;
  std::vector<double> null_stats(static_cast<std::size_t>(m));
  parallel_for(static_cast<std::size_t>(m), [&](std::size_t j) {
    Rng rng = make_stream(options.seed, rng_lane::kNullDraw, j);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd z(2 * n_t);
    for (int k = 0; k < 2 * n_t; ++k) z[k] = gauss(rng);
    Eigen::VectorXd draw = center + chol * z;
    const auto r_part = draw.head(n_t);
    const auto d_part = draw.tail(n_t);
    double tau_draw = diff.tau_hat;
    if (options.reestimate_tau) {
      double sd = d_part.sum();
      if (sd != 0.0) tau_draw = 1.0 - r_part.sum() / sd;
    }
    Eigen::VectorXd dd = r_part - (1.0 - tau_draw) * d_part;
    null_stats[j] = max_abs_standardized(dd, diff.sigma);
  });

  std::sort(null_stats.begin(), null_stats.end());
  const auto above = static_cast<double>(
      null_stats.end() - std::lower_bound(null_stats.begin(), null_stats.end(), result.statistic));
  result.p_value = above / static_cast<double>(m);
  // Critical value chosen so that (statistic > critical) matches
  // (p < alpha) on continuous draws.
  const double keep = (1.0 - options.alpha) * static_cast<double>(m);
  std::size_t rank;
  if (std::abs(keep - std::round(keep)) < 1e-9)
    rank = static_cast<std::size_t>(std::llround(keep));
  else
    rank = static_cast<std::size_t>(std::ceil(keep)) - 1;
  rank = std::min(rank, null_stats.size() - 1);
  result.critical_value = null_stats[rank];
  result.reject = result.p_value < options.alpha;
  return result;
}

TestResult wald_test(const DiffPath& diff, const BootstrapDraws& draws, double alpha) {
  const int n_t = static_cast<int>(diff.values.size());
  if (n_t == 0) throw ConfigError("wald: empty diff path");
  if (!(alpha > 0.0) || alpha >= 1.0) throw ConfigError("wald: alpha must lie in (0, 1)");

  TestResult result;
  result.method = HomogeneityMethod::Wald;
  result.alpha = alpha;
  result.draws_used = draws.n_replicates;

  if (n_t == 1) {
    // One time point: the diff is identically zero by construction.
    result.statistic = 0.0;
    result.p_value = 1.0;
    result.critical_value = 0.0;
    result.reject = false;
    return result;
  }

  // Covariance of the fixed-tau diff across replicates.
  const int b_total = draws.n_replicates;
  Eigen::MatrixXd z(b_total, n_t);
  for (int b = 0; b < b_total; ++b)
    for (int t = 0; t < n_t; ++t)
      z(b, t) = draws.delta_r[static_cast<std::size_t>(b)][static_cast<std::size_t>(t)] -
                (1.0 - diff.tau_hat) *
                    draws.delta[static_cast<std::size_t>(b)][static_cast<std::size_t>(t)];
  Eigen::RowVectorXd mean = z.colwise().mean();
  z.rowwise() -= mean;
  Eigen::MatrixXd cov = (z.transpose() * z) / static_cast<double>(b_total - 1);

  // Project onto the sum-to-zero subspace; pseudo-inverse there.
  Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(n_t, n_t) -
      Eigen::MatrixXd::Constant(n_t, n_t, 1.0 / static_cast<double>(n_t));
  Eigen::MatrixXd projected = centering * cov * centering;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(projected);
  if (eig.info() != Eigen::Success) throw NumericError("wald: eigendecomposition failed");
  const double max_eig = eig.eigenvalues().maxCoeff();
  if (!(max_eig > 0.0))
    throw NumericError("wald: covariance numerically singular; use the MSD test");
  const double tol = 1e-10 * max_eig;
  Eigen::VectorXd observed(n_t);
  for (int t = 0; t < n_t; ++t) observed[t] = diff.values[static_cast<std::size_t>(t)];
  observed = centering * observed;

  int rank = 0;
  double statistic = 0.0;
  for (int k = 0; k < n_t; ++k) {
    const double lambda = eig.eigenvalues()[k];
    if (lambda <= tol) continue;
    ++rank;
    const double coord = eig.eigenvectors().col(k).dot(observed);
    statistic += coord * coord / lambda;
  }
  if (rank == 0) throw NumericError("wald: covariance numerically singular; use the MSD test");

  const int df = n_t - 1;
  boost::math::chi_squared chi2(static_cast<double>(df));
  result.statistic = statistic;
  result.p_value = boost::math::cdf(boost::math::complement(chi2, statistic));
  result.critical_value = boost::math::quantile(chi2, 1.0 - alpha);
  result.reject = result.p_value < alpha;
  return result;
}

}  // namespace surro
