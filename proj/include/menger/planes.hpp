#pragma once

// Affine d-planes, point-to-plane distances, l2 deviations of simplices,
// weighted least-squares plane fitting and beta_2 numbers.

#include <vector>

#include <Eigen/Dense>

#include "menger/geometry.hpp"
#include "menger/measure.hpp"

namespace menger {

/// base + span(frame columns). frame is D x d with orthonormal columns.
struct AffinePlane {
  Vector base;
  Eigen::MatrixXd frame;

  AffinePlane() = default;
  /// Throws std::invalid_argument unless frame is orthonormal to 1e-10 and d < D.
  AffinePlane(Vector base, Eigen::MatrixXd frame);

  /// Orthonormalizes the given directions (must have full column rank).
  static AffinePlane from_span(Vector base, const Eigen::MatrixXd& directions);

  int dim() const { return static_cast<int>(frame.cols()); }
  Eigen::Index ambient_dim() const { return base.size(); }
  Vector project(const Vector& x) const;
};

double distance_to_plane(const Vector& x, const AffinePlane& L);

/// D_2(X, L) = sqrt(sum_i dist^2(x_i, L)).
double deviation_D2(const Tuple& X, const AffinePlane& L);

/// Seeded random d-plane through a standard-normal base point.
AffinePlane random_plane(int d, int D, const CounterRng& rng, std::uint64_t id);

/// Canonical orthonormal basis of span(V): Gram-Schmidt on the projections
/// of e_1, e_2, ... onto the span. Independent of the basis V represents.
Eigen::MatrixXd canonical_frame(const Eigen::MatrixXd& V);

/// Weighted least-squares d-plane through the points `indices` of the cloud:
/// weighted centroid plus the top-d eigenvectors of the weighted covariance.
/// Eigenvalue ties at the cut are resolved by canonical_frame.
/// Throws EmptyRestrictionError when indices is empty.
AffinePlane fit_plane(const WeightedPointCloud& cloud, const std::vector<Index>& indices, int d);
AffinePlane fit_plane(const WeightedPointCloud& cloud, const Ball& B, int d);

struct Beta2Result {
  double value = 0.0;  // beta_2 (not squared)
  AffinePlane plane;
  double mass = 0.0;
  bool empty = false;  // mu(B) == 0, value reported as 0
};

/// sqrt(sum_{x in B} w(x) (dist(x, L) / diam B)^2 / mu(B)), diam B = 2 radius.
/// Zero when mu(B) == 0.
double beta2_with_plane(const WeightedPointCloud& cloud, const Ball& B, const AffinePlane& L);

Beta2Result beta2(const WeightedPointCloud& cloud, const Ball& B, int d);
/// Same, with the points of B already known.
Beta2Result beta2(const WeightedPointCloud& cloud, const Ball& B, const std::vector<Index>& in_ball, int d);

}  // namespace menger
