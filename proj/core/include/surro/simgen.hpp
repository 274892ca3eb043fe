#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "surro/panel.hpp"
#include "surro/rng.hpp"

namespace surro {

enum class TrajectoryKind { Monotone, Parabola, RandomWalk, Custom };

std::string to_string(TrajectoryKind kind);
TrajectoryKind trajectory_kind_from_string(const std::string& s);

/// Dimensionless treatment-effect shape over t = 0..T.
struct Trajectory {
  TrajectoryKind kind = TrajectoryKind::Monotone;
  std::vector<double> values;

  int t_max() const { return static_cast<int>(values.size()) - 1; }
  double sum() const;
};

/// Monotone: t/T. Parabola: 4 (t/T)(1 - t/T). Random walk: a frozen seeded
/// standard-normal cumulative sum rescaled to [0, 1] (identical for every
/// run at a given T).
Trajectory make_trajectory(TrajectoryKind kind, int t_max);

/// Synthetic-trial configuration. Outcome innovations are mean-zero
/// log-gamma scaled by a gamma-mixed factor (heavy, skewed tails); latent
/// levels follow AR(1) dynamics the working models do not assume.
struct GenConfig {
  int n_control = 150;
  int n_treated = 150;
  int t_max = 4;

  double alpha_shape = 1.0;  // log-gamma shape; larger = closer to Gaussian
  double df_tau = 10.0;      // gamma-mixture degrees of freedom
  double v_scale = 0.0025;   // base observation scale
  double w_evolution = 0.2 * 0.0025;  // surrogate innovation variance
  double phi1 = 0.9;         // outcome latent AR coefficient
  double phi2 = 0.9;         // surrogate latent AR coefficient
  int sign = +1;             // innovation skew direction

  double beta = 1.0;         // surrogate -> outcome slope (lag 0)
  double beta_lag1 = 0.0;    // optional lingering slope (lag 1)
  double gamma1 = 0.05;      // direct-effect scale on H1
  double gamma2 = 0.05;      // surrogate-effect scale on H2
  Trajectory h1, h2;

  std::uint64_t seed = 1;
  /// Gamma mixture parameterized by rate (mean of the scale factor equals
  /// v_scale); the scale reading is available for sensitivity checks.
  bool gamma_rate_parameterization = true;

  void validate() const;
};

/// Generator-implied effect paths and PTE quantities. Entries of lpte/cpte
/// where the corresponding treatment effect vanishes are NaN.
struct TruthRecord {
  std::vector<double> delta, delta_r, lpte, cpte;
  double pte = 0.0;
  std::string method;  // "analytic" or "monte-carlo"
};

/// Mean-zero log-gamma draw: log of a Gamma(alpha, rate = exp(digamma(alpha)))
/// variate.
double log_gamma_sample(double alpha, Rng& rng);

std::pair<Panel, TruthRecord> generate_panel(const GenConfig& config);

TruthRecord analytic_truth(const GenConfig& config);

/// Solve the direct-effect scale so the generator's PTE hits `target`,
/// keeping beta and gamma2 fixed. target = 0 switches the surrogate pathway
/// off instead.
GenConfig calibrate(double target_pte, TrajectoryKind h1_kind, TrajectoryKind h2_kind,
                    GenConfig base);

/// The five homogeneity settings on a 3-monthly grid (t_max = 4*years):
///   1 constant local PTE (null), 2 surrogate strong only when the
///   treatment is weak, 3 the reverse, 4 increasing local PTE with final
///   cumulative PTE 0.5, 5 decreasing local PTE with final cumulative PTE
///   0.8.
GenConfig scenario(int id, double duration_years, GenConfig base);

}  // namespace surro
