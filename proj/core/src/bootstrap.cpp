#include "surro/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "surro/errors.hpp"
#include "surro/parallel.hpp"
#include "surro/rng.hpp"

namespace surro {

std::vector<int> draw_counts(const std::vector<int>& arm_of, bool stratified, std::uint64_t seed,
                             std::uint64_t replicate) {
  const int n = static_cast<int>(arm_of.size());
  std::vector<int> counts(static_cast<std::size_t>(n), 0);
  Rng rng = make_stream(seed, rng_lane::kBootstrapReplicate, replicate);
  if (stratified) {
    for (int g = 0; g < 2; ++g) {
      std::vector<int> members;
      for (int i = 0; i < n; ++i)
        if (arm_of[static_cast<std::size_t>(i)] == g) members.push_back(i);
      if (members.empty()) continue;
      std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
      for (std::size_t k = 0; k < members.size(); ++k)
        ++counts[static_cast<std::size_t>(members[pick(rng)])];
    }
  } else {
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int k = 0; k < n; ++k) ++counts[static_cast<std::size_t>(pick(rng))];
  }
  return counts;
}

IntervalEstimate percentile_interval(std::vector<double> draws, double point, double level) {
  IntervalEstimate out;
  out.point = point;
  out.level = level;
  draws.erase(std::remove_if(draws.begin(), draws.end(),
                             [](double x) { return !std::isfinite(x); }),
              draws.end());
  if (draws.size() < 2) {
    out.defined = false;
    out.se = out.ci_low = out.ci_high = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double n = static_cast<double>(draws.size());
  double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : draws) ss += (x - mean) * (x - mean);
  out.se = std::sqrt(ss / (n - 1.0));

  std::sort(draws.begin(), draws.end());
  auto quantile = [&](double q) {
    double pos = q * (n - 1.0);
    std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t hi = std::min(lo + 1, draws.size() - 1);
    double w = pos - static_cast<double>(lo);
    return (1.0 - w) * draws[lo] + w * draws[hi];
  };
  const double tail = (1.0 - level) / 2.0;
  out.ci_low = quantile(tail);
  out.ci_high = quantile(1.0 - tail);
  return out;
}

namespace {

std::vector<IntervalEstimate> per_time_intervals(const std::vector<std::vector<double>>& draws,
                                                 const std::vector<double>& point, double level) {
  const std::size_t n_t = point.size();
  std::vector<IntervalEstimate> out(n_t);
  std::vector<double> column;
  column.reserve(draws.size());
  for (std::size_t t = 0; t < n_t; ++t) {
    column.clear();
    for (const auto& d : draws) column.push_back(d[t]);
    out[t] = percentile_interval(column, point[t], level);
  }
  return out;
}

}  // namespace

BootstrapResult bootstrap_pte(const SubjectPosteriorSet& marginal,
                              const SubjectPosteriorSet& conditional, const Panel& panel,
                              const BootstrapOptions& options) {
  if (marginal.spec->tag != ModelTag::Marginal || conditional.spec->tag != ModelTag::Conditional)
    throw ConfigError("bootstrap: posterior sets have mismatched model tags");
  if (marginal.n_subjects() != panel.n_subjects() ||
      conditional.n_subjects() != panel.n_subjects())
    throw ConfigError("bootstrap: posterior sets were not built from this panel");
  if (options.n_replicates < 2) throw ConfigError("bootstrap: need at least 2 replicates");
  if (!(options.level > 0.0) || options.level >= 1.0)
    throw ConfigError("bootstrap: level must lie in (0, 1)");

  const int n = panel.n_subjects();
  const int b_total = options.n_replicates;
  const double eps = default_eps_denom(panel);

  BootstrapResult result;
  result.exact_algebra =
      marginal.spec->uniform_discounts() && conditional.spec->uniform_discounts();

  // Point estimates from the identity multiset.
  const std::vector<int> ones = identity_counts(n);
  RecombinedFit marg_point = recombine(marginal, ones);
  RecombinedFit cond_point = recombine(conditional, ones);
  EffectPath delta_point = estimate_delta(make_view(marg_point));
  DeltaRResult delta_r_point = estimate_delta_R(make_view(cond_point), panel);
  result.point = compute_pte(delta_point, delta_r_point.path, eps);
  result.borrowed_times = delta_r_point.borrowed_times;

  BootstrapDraws& draws = result.draws;
  draws.n_replicates = b_total;
  draws.seed = options.seed;
  draws.stratified = options.stratified;
  draws.counts.resize(static_cast<std::size_t>(b_total));
  draws.delta.resize(static_cast<std::size_t>(b_total));
  draws.delta_r.resize(static_cast<std::size_t>(b_total));
  draws.lpte.resize(static_cast<std::size_t>(b_total));
  draws.cpte.resize(static_cast<std::size_t>(b_total));
  draws.pte.resize(static_cast<std::size_t>(b_total));
  draws.pte_defined.resize(static_cast<std::size_t>(b_total));

  const Recombiner marg_worker(marginal);
  const Recombiner cond_worker(conditional);
  parallel_for(static_cast<std::size_t>(b_total), [&](std::size_t b) {
    std::vector<int> counts = draw_counts(marginal.arm_of, options.stratified, options.seed,
                                          static_cast<std::uint64_t>(b));
    RecombinedFit marg_fit, cond_fit;
    marg_worker.run(counts, marg_fit);
    cond_worker.run(counts, cond_fit);
    EffectPath d = estimate_delta(make_view(marg_fit));
    DeltaRResult r = estimate_delta_R(make_view(cond_fit), panel, &counts);
    PteResult pte = compute_pte(d, r.path, eps);
    draws.delta[b] = std::move(pte.delta);
    draws.delta_r[b] = std::move(pte.delta_r);
    draws.lpte[b] = std::move(pte.lpte);
    draws.cpte[b] = std::move(pte.cpte);
    draws.pte[b] = pte.pte;
    draws.pte_defined[b] = pte.pte_defined ? 1 : 0;
    draws.counts[b] = std::move(counts);
  });

  result.undefined_replicates =
      static_cast<int>(std::count(draws.pte_defined.begin(), draws.pte_defined.end(), 0));
  result.unreliable = result.undefined_replicates * 2 > b_total;

  // Undefined replicates carry NaN and drop out of percentiles inside
  // percentile_interval; the count is reported alongside.
  std::vector<double> pte_draws(draws.pte);
  for (std::size_t b = 0; b < pte_draws.size(); ++b)
    if (!draws.pte_defined[b]) pte_draws[b] = std::numeric_limits<double>::quiet_NaN();
  result.pte = percentile_interval(pte_draws, result.point.pte, options.level);
  result.pte.defined = result.pte.defined && result.point.pte_defined;

  result.delta = per_time_intervals(draws.delta, result.point.delta, options.level);
  result.delta_r = per_time_intervals(draws.delta_r, result.point.delta_r, options.level);
  result.lpte = per_time_intervals(draws.lpte, result.point.lpte, options.level);
  result.cpte = per_time_intervals(draws.cpte, result.point.cpte, options.level);
  return result;
}

ValidityDecision validity_test(const IntervalEstimate& pte_interval, double threshold,
                               double alpha) {
  if (!(alpha > 0.0) || alpha >= 0.5) throw ConfigError("validity test: alpha must lie in (0, 0.5)");
  const double expected_level = 1.0 - 2.0 * alpha;
  if (std::abs(pte_interval.level - expected_level) > 1e-9)
    throw ConfigError("validity test: interval level " + std::to_string(pte_interval.level) +
                      " does not match 1 - 2*alpha = " + std::to_string(expected_level));
  ValidityDecision decision;
  decision.threshold = threshold;
  decision.alpha = alpha;
  decision.ci_low = pte_interval.ci_low;
  decision.reject = pte_interval.defined && pte_interval.ci_low > threshold;
  return decision;
}

}  // namespace surro
