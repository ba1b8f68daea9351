#pragma once

// Weighted point clouds standing in for d-regular measures: ball queries,
// masses, regularity diagnostics, synthetic generators, tuple sampling and
// the CSV point-cloud format.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "menger/geometry.hpp"
#include "menger/rng.hpp"

namespace menger {

using Index = Eigen::Index;

/// Closed ball B(center, radius).
struct Ball {
  Vector center;
  double radius = 1.0;

  Ball() = default;
  Ball(Vector c, double r);

  double diameter() const { return 2.0 * radius; }
  /// gamma * B: same center, radius scaled by gamma.
  Ball blown_up(double gamma) const { return Ball(center, gamma * radius); }
  bool contains(const Vector& x) const { return (x - center).norm() <= radius; }
};

/// Input-file and parameter errors (the CLI maps these to exit code 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a restriction of the measure has no mass.
class EmptyRestrictionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
class KdTree;
}

/// Finite weighted point cloud. Immutable after construction.
class WeightedPointCloud {
 public:
  /// Clouds up to this size get an exact support diameter.
  static constexpr Index kExactDiameterLimit = 20000;

  /// `points` is D x N (one point per column); weights must be positive.
  WeightedPointCloud(Eigen::MatrixXd points, Eigen::VectorXd weights, int intrinsic_d = 0);
  WeightedPointCloud(const WeightedPointCloud& other);
  WeightedPointCloud(WeightedPointCloud&&) noexcept;
  WeightedPointCloud& operator=(const WeightedPointCloud& other);
  WeightedPointCloud& operator=(WeightedPointCloud&&) noexcept;
  ~WeightedPointCloud();

  Index size() const { return points_.cols(); }
  Index dim() const { return points_.rows(); }
  int intrinsic_dim() const { return intrinsic_d_; }

  const Eigen::MatrixXd& points() const { return points_; }
  Vector point(Index i) const { return points_.col(i); }
  const Eigen::VectorXd& weights() const { return weights_; }
  double weight(Index i) const { return weights_(i); }
  double total_mass() const { return total_mass_; }

  /// Exact for N <= kExactDiameterLimit, otherwise a certified upper bound
  /// (twice the largest distance from the centroid).
  double support_diameter() const { return support_diameter_; }
  bool diameter_exact() const { return diameter_exact_; }

  /// Empirical resolution: median nearest-neighbour distance.
  double resolution() const { return resolution_; }

  /// Indices of points in the closed ball, ascending.
  std::vector<Index> query_ball(const Vector& center, double radius) const;

  /// Image under x -> A x + b (weights kept).
  WeightedPointCloud transformed(const Eigen::MatrixXd& A, const Vector& b) const;

 private:
  void build();

  Eigen::MatrixXd points_;
  Eigen::VectorXd weights_;
  int intrinsic_d_ = 0;
  double total_mass_ = 0.0;
  double support_diameter_ = 0.0;
  bool diameter_exact_ = true;
  double resolution_ = 0.0;
  std::unique_ptr<detail::KdTree> index_;
};

// --- mass and membership ------------------------------------------------------

double ball_mass(const WeightedPointCloud& cloud, const Ball& B);
std::vector<Index> points_in_ball(const WeightedPointCloud& cloud, const Ball& B);
double mass_of(const WeightedPointCloud& cloud, const std::vector<Index>& indices);

// --- regularity -----------------------------------------------------------------

struct RegularitySample {
  Index center;
  double radius;
  double normalized_mass;  // mu(B(x, r)) / r^d
};

struct RegularityReport {
  double estimated_Cmu = 1.0;
  std::vector<RegularitySample> samples;
  bool degenerate = false;  // zero support diameter: no admissible radii
};

struct RegularityOptions {
  int n_centers = 64;
  int n_radii = 8;
  std::optional<double> r_min;  // defaults to cloud.resolution()
  std::optional<double> r_max;  // defaults to support diameter
  bool all_centers = false;     // use every point as a center
};

/// max over sampled (x, r) of max(mu(B)/r^d, r^d/mu(B)), radii log-uniform.
RegularityReport regularity_constant(const WeightedPointCloud& cloud, int d, const RegularityOptions& opts,
                                     const CounterRng& rng);

// --- synthetic measures ---------------------------------------------------------

/// Uniform sample of a unit d-cube lying in a seeded random d-plane of R^D.
WeightedPointCloud gen_plane_patch(int d, int D, Index N, std::uint64_t seed);
/// Base point and orthonormal frame (D x d) of the plane used by gen_plane_patch.
std::pair<Vector, Eigen::MatrixXd> plane_patch_frame(int d, int D, std::uint64_t seed);

/// Uniform sample of the unit sphere S^{D-1} (intrinsic dimension D-1).
WeightedPointCloud gen_sphere(int D, Index N, std::uint64_t seed);

/// Graph of a smooth map [0,1]^d -> R^{D-d} with Lipschitz constant at most
/// `lipschitz_const`, sampled uniformly over the domain.
WeightedPointCloud gen_lipschitz_graph(int d, int D, double lipschitz_const, Index N, std::uint64_t seed);

/// Four-corner Cantor set in [-1/2, 1/2]^2 at the given level: 4^level cell
/// centres, contraction 1/4, weight 4^-level each.
WeightedPointCloud gen_four_corner_cantor(int level);

// --- sampling -------------------------------------------------------------------

/// Draws point indices with probability proportional to weight, optionally
/// restricted to a ball.
class MassSampler {
 public:
  MassSampler(const WeightedPointCloud& cloud, const std::optional<Ball>& restriction);

  double mass() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  const std::vector<Index>& support() const { return indices_; }
  /// u in [0, 1).
  Index draw(double u) const;

 private:
  std::vector<Index> indices_;
  std::vector<double> cumulative_;
};

/// m i.i.d. indices for sample number `sample_id`.
std::vector<Index> sample_indices(const MassSampler& sampler, int m, const CounterRng& rng, std::uint64_t sample_id);

Tuple sample_tuple(const WeightedPointCloud& cloud, const std::optional<Ball>& restriction, int m,
                   const CounterRng& rng, std::uint64_t sample_id = 0);

Tuple tuple_from_indices(const WeightedPointCloud& cloud, const std::vector<Index>& indices);

// --- CSV format -----------------------------------------------------------------
// Header line `dim=D`, then one row per point: c_1,...,c_D,weight.

WeightedPointCloud read_cloud_csv(std::istream& in, int intrinsic_d = 0);
WeightedPointCloud read_cloud_csv_file(const std::string& path, int intrinsic_d = 0);
void write_cloud_csv(std::ostream& out, const WeightedPointCloud& cloud);
void write_cloud_csv_file(const std::string& path, const WeightedPointCloud& cloud);

}  // namespace menger
