#pragma once

// n-nets, covering ball families, partitions with the 1/4-3/4 sandwich
// property, local multiresolution families and Jones-type flatness sums.
//
// Scale index n corresponds to length alpha0^n; larger n is finer.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "menger/measure.hpp"
#include "menger/planes.hpp"

namespace menger {

struct NetLevel {
  int n = 0;
  double unit = 1.0;                  // alpha0^n
  std::vector<Index> net;             // net point indices, admission order
  std::vector<Index> ball_centers;    // indices of kept net points, j order
  std::vector<Ball> balls;            // B_{n,j}, radius 4 * unit
  std::vector<Index> leftover;        // dropped net points, in scan order
  std::vector<int> partition;         // point index -> j
};

/// alpha0^n computed so that n * ln(alpha0) round-off does not leak into
/// level boundaries.
double level_unit(double alpha0, int n);

/// Seeded permutation of 0..N-1; seed 0 gives the identity.
std::vector<Index> net_ordering(Index N, std::uint64_t seed);

/// Greedy scan in `ordering`: admit a point iff it is farther than alpha0^n
/// from every admitted point.
std::vector<Index> build_net(const WeightedPointCloud& cloud, int n, double alpha0, const std::vector<Index>& ordering);

/// Keeps net points whose quarter-balls B(x, alpha0^n) are disjoint from the
/// ones already kept (distance > 2 alpha0^n), scanning the net in order.
/// Returns kept positions into `net`.
std::vector<std::size_t> select_ball_family(const WeightedPointCloud& cloud, int n, double alpha0,
                                            const std::vector<Index>& net);

/// Partition of the support indexed by the kept balls: a point inside a kept
/// quarter-ball goes to that ball; otherwise it goes with the first leftover
/// quarter-ball containing it, which is assigned to the smallest j whose
/// quarter-ball meets it.
std::vector<int> build_partition(const WeightedPointCloud& cloud, int n, double alpha0, const std::vector<Index>& ball_centers,
                                 const std::vector<Index>& leftover);

NetLevel build_level(const WeightedPointCloud& cloud, int n, double alpha0, const std::vector<Index>& ordering);

/// Smallest integer m with alpha0^m <= diam(Q).
int m_of_Q(const Ball& Q, double alpha0);
int m_of_diameter(double diameter, double alpha0);

/// Finest level worth building: largest n with alpha0^n >= resolution.
int resolution_floor_level(const WeightedPointCloud& cloud, double alpha0);

class MultiresolutionFamily {
 public:
  /// Levels n_min..n_max inclusive.
  static MultiresolutionFamily build(const WeightedPointCloud& cloud, double alpha0, int n_min, int n_max,
                                     const std::vector<Index>& ordering);
  /// Levels from m(Q) down to the resolution floor.
  static MultiresolutionFamily build_for(const WeightedPointCloud& cloud, double alpha0, const Ball& Q,
                                         std::uint64_t ordering_seed = 0);

  double alpha0() const { return alpha0_; }
  int n_min() const { return n_min_; }
  int n_max() const { return n_max_; }
  const std::map<int, NetLevel>& levels() const { return levels_; }
  const NetLevel& level(int n) const { return levels_.at(n); }

 private:
  double alpha0_ = 0.25;
  int n_min_ = 0, n_max_ = -1;
  std::map<int, NetLevel> levels_;
};

struct FamilyBall {
  int level;
  int j;
  Ball ball;
};

/// Balls of levels n >= m(Q) meeting Q, by the center-distance rule
/// |c - c_Q| <= r + r_Q.
std::vector<FamilyBall> local_family(const MultiresolutionFamily& F, const Ball& Q);

/// Lambda_n(Q): indices j whose partition cell has a point in Q.
std::vector<int> partition_indices_meeting(const WeightedPointCloud& cloud, const NetLevel& L, const Ball& Q);

struct FlatnessTerm {
  int level = 0;
  int j = 0;              // ball index in the level, or point index (continuous)
  double t = 0.0;         // radius of the ball
  double beta2sq = 0.0;
  double mass = 0.0;      // mu(B) (discrete) or point weight times ln(1/rho) (continuous)
};

struct FlatnessReport {
  double total = 0.0;
  std::vector<FlatnessTerm> terms;
};

/// sum over B in D(Q) of beta_2^2(B) mu(B).
FlatnessReport jones_flatness_discrete(const WeightedPointCloud& cloud, const Ball& Q, const MultiresolutionFamily& F,
                                       int d, bool parallel = true);

struct ContinuousFlatnessOptions {
  double rho = 0.5;                           // geometric ratio of the t grid
  std::optional<Index> max_points;            // x-subsample size (seeded)
  std::uint64_t seed = 0;
};

/// Quadrature of int_0^{diam B} int_B beta_2^2(x, t) dmu(x) dt/t on the grid
/// t_j = diam(B) rho^j, weight ln(1/rho) per level, stopping below the
/// resolution floor.
FlatnessReport jones_flatness_continuous(const WeightedPointCloud& cloud, const Ball& B, int d,
                                         const ContinuousFlatnessOptions& opts = {}, bool parallel = true);

}  // namespace menger
