#include "surro/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/digamma.hpp>

#include "surro/errors.hpp"
#include "surro/parallel.hpp"

namespace surro {

std::string to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::Monotone: return "monotone";
    case TrajectoryKind::Parabola: return "parabola";
    case TrajectoryKind::RandomWalk: return "random-walk";
    default: return "custom";
  }
}

TrajectoryKind trajectory_kind_from_string(const std::string& s) {
  if (s == "monotone") return TrajectoryKind::Monotone;
  if (s == "parabola") return TrajectoryKind::Parabola;
  if (s == "random-walk" || s == "random_walk") return TrajectoryKind::RandomWalk;
  throw ConfigError("trajectory: unknown kind '" + s + "'");
}

double Trajectory::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

Trajectory make_trajectory(TrajectoryKind kind, int t_max) {
  if (t_max < 0) throw ConfigError("trajectory: t_max must be >= 0");
  Trajectory out;
  out.kind = kind;
  out.values.resize(static_cast<std::size_t>(t_max) + 1);
  const double tm = std::max(t_max, 1);
  switch (kind) {
    case TrajectoryKind::Monotone:
      for (int t = 0; t <= t_max; ++t)
        out.values[static_cast<std::size_t>(t)] = static_cast<double>(t) / tm;
      break;
    case TrajectoryKind::Parabola:
      for (int t = 0; t <= t_max; ++t) {
        double x = static_cast<double>(t) / tm;
        out.values[static_cast<std::size_t>(t)] = 4.0 * x * (1.0 - x);
      }
      break;
    case TrajectoryKind::RandomWalk: {
      // Frozen seed: the path is a constant of the build, so runs are
      // reproducible without shipping tables.
      Rng rng = make_stream(0x5eedc0de, rng_lane::kTrajectory, static_cast<std::uint64_t>(t_max));
      std::normal_distribution<double> gauss(0.0, 1.0);
      double level = 0.0;
      double lo = 0.0, hi = 0.0;
      for (int t = 0; t <= t_max; ++t) {
        if (t > 0) level += gauss(rng);
        out.values[static_cast<std::size_t>(t)] = level;
        lo = std::min(lo, level);
        hi = std::max(hi, level);
      }
      const double span = hi > lo ? hi - lo : 1.0;
      for (auto& v : out.values) v = (v - lo) / span;
      break;
    }
    default:
      throw ConfigError("trajectory: custom kind has no generator");
  }
  return out;
}

void GenConfig::validate() const {
  if (n_control < 1 || n_treated < 1) throw ConfigError("generator: need subjects in both arms");
  if (t_max < 0) throw ConfigError("generator: t_max must be >= 0");
  if (!(alpha_shape > 0)) throw ConfigError("generator: alpha_shape must be positive");
  if (!(df_tau > 0)) throw ConfigError("generator: df_tau must be positive");
  if (!(v_scale > 0)) throw ConfigError("generator: v_scale must be positive");
  if (!(w_evolution > 0)) throw ConfigError("generator: w_evolution must be positive");
  if (std::abs(phi1) > 1.0) throw ConfigError("generator: |phi1| must be <= 1");
  if (!(std::abs(phi2) < 1.0)) throw ConfigError("generator: |phi2| must be < 1");
  if (sign != 1 && sign != -1) throw ConfigError("generator: sign must be +1 or -1");
  if (static_cast<int>(h1.values.size()) != t_max + 1 ||
      static_cast<int>(h2.values.size()) != t_max + 1)
    throw ConfigError("generator: trajectory lengths must equal t_max + 1");
}

double log_gamma_sample(double alpha, Rng& rng) {
  if (!(alpha > 0)) throw ConfigError("log-gamma: alpha must be positive");
  // E[log X] = digamma(alpha) - log(rate); rate = exp(digamma(alpha))
  // centers the draw at zero.
  const double rate = std::exp(boost::math::digamma(alpha));
  std::gamma_distribution<double> gamma(alpha, 1.0 / rate);
  return std::log(gamma(rng));
}

namespace {

double effect_on_outcome(const GenConfig& c, int t) {
  double h2_now = c.h2.values[static_cast<std::size_t>(t)];
  double h2_prev = t > 0 ? c.h2.values[static_cast<std::size_t>(t - 1)] : 0.0;
  return c.gamma1 * c.h1.values[static_cast<std::size_t>(t)] +
         c.gamma2 * (c.beta * h2_now + c.beta_lag1 * h2_prev);
}

}  // namespace

TruthRecord analytic_truth(const GenConfig& config) {
  config.validate();
  const int n_t = config.t_max + 1;
  TruthRecord truth;
  truth.method = "analytic";
  truth.delta.resize(static_cast<std::size_t>(n_t));
  truth.delta_r.resize(static_cast<std::size_t>(n_t));
  truth.lpte.assign(static_cast<std::size_t>(n_t), std::numeric_limits<double>::quiet_NaN());
  truth.cpte.assign(static_cast<std::size_t>(n_t), std::numeric_limits<double>::quiet_NaN());
  double cum_d = 0.0, cum_r = 0.0;
  for (int t = 0; t < n_t; ++t) {
    const auto tt = static_cast<std::size_t>(t);
    // Conditioning both arms on a common surrogate trajectory removes the
    // surrogate pathway: only the direct term survives.
    truth.delta[tt] = effect_on_outcome(config, t);
    truth.delta_r[tt] = config.gamma1 * config.h1.values[tt];
    cum_d += truth.delta[tt];
    cum_r += truth.delta_r[tt];
    if (truth.delta[tt] != 0.0) truth.lpte[tt] = 1.0 - truth.delta_r[tt] / truth.delta[tt];
    if (cum_d != 0.0) truth.cpte[tt] = 1.0 - cum_r / cum_d;
  }
  truth.pte = truth.cpte[static_cast<std::size_t>(n_t - 1)];
  return truth;
}

std::pair<Panel, TruthRecord> generate_panel(const GenConfig& config) {
  config.validate();
  const int n = config.n_control + config.n_treated;
  const int n_t = config.t_max + 1;

  std::vector<Subject> subjects;
  subjects.reserve(static_cast<std::size_t>(n));
  // Zero-padded ids keep lexicographic order equal to generation order.
  int digits = 1;
  for (int v = n; v >= 10; v /= 10) ++digits;
  for (int i = 0; i < n; ++i) {
    std::string num = std::to_string(i);
    num.insert(0, static_cast<std::size_t>(digits) - num.size(), '0');
    subjects.push_back({"s" + num, i < config.n_control ? 0 : 1, {}});
  }
  Panel panel(std::move(subjects), config.t_max, {});

  const double gamma_shape = config.df_tau / 2.0;
  const double gamma_second = config.df_tau / (2.0 * config.v_scale);

  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    Rng rng = make_stream(config.seed, rng_lane::kSimulateSubject, i);
    const int g = panel.subject(static_cast<int>(i)).arm;
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::gamma_distribution<double> mix(
        gamma_shape,
        config.gamma_rate_parameterization ? 1.0 / gamma_second : gamma_second);

    double mu = 0.0, nu = 0.0;
    for (int t = 0; t < n_t; ++t) {
      const double v_it = mix(rng);
      if (t == 0) {
        mu = std::sqrt(v_it / (1.0 - config.phi2)) * log_gamma_sample(config.alpha_shape, rng);
        nu = gauss(rng) * std::sqrt(config.w_evolution / (1.0 - config.phi2));
      } else {
        mu = config.phi1 * mu + config.sign * v_it * log_gamma_sample(config.alpha_shape, rng);
        nu = config.phi2 * nu + gauss(rng) * std::sqrt(config.w_evolution);
      }
      const double s_now = nu + config.gamma2 * config.h2.values[static_cast<std::size_t>(t)] * g;
      panel.set_surrogate(static_cast<int>(i), t, s_now);
      double y = mu + config.beta * s_now +
                 config.gamma1 * config.h1.values[static_cast<std::size_t>(t)] * g;
      if (config.beta_lag1 != 0.0 && t > 0)
        y += config.beta_lag1 * panel.surrogate(static_cast<int>(i), t - 1);
      panel.set_outcome(static_cast<int>(i), t, y);
    }
  });

  return {std::move(panel), analytic_truth(config)};
}

GenConfig calibrate(double target_pte, TrajectoryKind h1_kind, TrajectoryKind h2_kind,
                    GenConfig base) {
  if (!(target_pte >= 0.0) || target_pte > 1.0)
    throw ConfigError("calibrate: target PTE must lie in [0, 1]");
  base.h1 = make_trajectory(h1_kind, base.t_max);
  base.h2 = make_trajectory(h2_kind, base.t_max);
  if (base.beta_lag1 != 0.0)
    throw ConfigError("calibrate: closed-form calibration assumes a lag-0 slope only");

  if (target_pte == 0.0) {
    base.gamma2 = 0.0;
    if (base.gamma1 == 0.0) base.gamma1 = 0.05;
    return base;
  }
  const double indirect = base.beta * base.gamma2 * base.h2.sum();
  if (!(indirect > 0.0))
    throw ConfigError("calibrate: beta * gamma2 * sum(H2) must be positive for target > 0");
  const double sum_h1 = base.h1.sum();
  if (!(sum_h1 > 0.0)) throw ConfigError("calibrate: sum(H1) must be positive");
  base.gamma1 = (1.0 - target_pte) / target_pte * indirect / sum_h1;
  return base;
}

GenConfig scenario(int id, double duration_years, GenConfig base) {
  if (id < 1 || id > 5) throw ConfigError("scenario: id must lie in 1..5");
  if (!(duration_years > 0)) throw ConfigError("scenario: duration must be positive");
  // Measurements every 3 months.
  const int t_max = static_cast<int>(std::lround(4.0 * duration_years));
  base.t_max = t_max;
  const double tm = std::max(t_max, 1);

  Trajectory h1, h2;
  h1.kind = h2.kind = TrajectoryKind::Custom;
  h1.values.resize(static_cast<std::size_t>(t_max) + 1);
  h2.values.resize(static_cast<std::size_t>(t_max) + 1);

  // Amplitudes are frozen constants; sinusoidal components have a one-year
  // period (four steps).
  constexpr double kSeasonalFloor = 0.25;
  const double two_pi = 2.0 * 3.14159265358979323846;
  for (int t = 0; t <= t_max; ++t) {
    const auto tt = static_cast<std::size_t>(t);
    const double x = static_cast<double>(t) / tm;
    const double seasonal = 0.5 * (1.0 - std::cos(two_pi * static_cast<double>(t) / 4.0));
    switch (id) {
      case 1:  // constant local PTE
        h1.values[tt] = x;
        h2.values[tt] = x;
        break;
      case 2:  // strong surrogate only while the direct effect sleeps
        h1.values[tt] = seasonal;
        h2.values[tt] = kSeasonalFloor;
        break;
      case 3:  // strong surrogate only while the surrogate pathway peaks
        h1.values[tt] = kSeasonalFloor;
        h2.values[tt] = seasonal;
        break;
      case 4:  // local PTE rising 0 -> 1, cumulative ends at 0.5
        h1.values[tt] = 1.0 - x;
        h2.values[tt] = x;
        break;
      case 5:  // local PTE falling 1 -> 0, cumulative ends at 0.8
        h1.values[tt] = x;
        h2.values[tt] = 1.0 - x;
        break;
      default: break;
    }
  }
  base.h1 = std::move(h1);
  base.h2 = std::move(h2);

  const double indirect_unit = base.beta * base.gamma2;
  if (!(indirect_unit > 0.0))
    throw ConfigError("scenario: beta * gamma2 must be positive");
  switch (id) {
    case 1:
      base.gamma1 = indirect_unit;  // constant local PTE 0.5
      break;
    case 2:
    case 3:
      base.gamma1 = indirect_unit;  // scale parity between the pathways
      break;
    case 4:
      base.gamma1 = indirect_unit;  // sum(H1) = sum(H2) -> cumulative 0.5
      break;
    case 5:
      base.gamma1 = indirect_unit / 4.0;  // cumulative 0.8
      break;
    default: break;
  }
  return base;
}

}  // namespace surro
