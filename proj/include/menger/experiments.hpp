#pragma once

// Ratio tables comparing curvature integrals against flatness and mass over
// seeded grids of balls.

#include <cstdint>
#include <string>
#include <vector>

#include "menger/estimators.hpp"
#include "menger/measure.hpp"

namespace menger {

enum class Experiment {
  Thm12,  // c_d^2(mu|B) against J^D(mu|B)
  Thm13,  // c_d^2(mu|B) against mu(B)
  Prop11, // curvature over U_lambda(B) against beta_2^2(B) mu(B)
  Prop43  // J^D(mu|B) against the continuous J(mu|6B)
};

Experiment parse_experiment(const std::string& name);
std::string experiment_name(Experiment e);

struct RatioParams {
  Experiment experiment = Experiment::Thm13;
  int d = 1;
  int n_balls = 20;
  double radius_lo = 0.25;  // radii uniform in [lo, hi] * support diameter
  double radius_hi = 1.0;
  std::vector<double> lambdas{0.2, 0.4, 0.8};
  double alpha0 = 0.25;
  double rho = 0.5;
  EstimatorOptions estimator{};
  std::uint64_t seed = 1;
};

struct RatioRow {
  int ball = 0;
  Vector center;
  double radius = 0.0;
  double lambda = 0.0;  // Prop11 only
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double lhs_std_error = 0.0;
  bool lhs_exact = false;
  double flatness = 0.0;  // J^D(mu|B); Thm12, Thm13
  double mass = 0.0;      // mu(B)
  double ratio_combined = 0.0;  // lhs / max(flatness, mass); Thm12, Thm13
  bool zero_over_zero = false;
  bool infinite = false;
};

/// Balls centred at seeded support points with radii uniform in
/// [lo, hi] * support diameter.
std::vector<Ball> experiment_balls(const WeightedPointCloud& cloud, int count, double lo, double hi, std::uint64_t seed);

std::vector<RatioRow> ratio_table(const WeightedPointCloud& cloud, const RatioParams& params);

}  // namespace menger
