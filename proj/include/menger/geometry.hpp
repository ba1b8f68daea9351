#pragma once

// Simplex primitives: contents, edges, heights, polar sines, elevation
// sines and the discrete Menger-type curvatures.
//
// A simplex is an ordered tuple X = (x_0, ..., x_n) of points in R^D. The
// zeroth vertex is distinguished: max_at0/min_at0/scale_at0 and the
// elevation sines are all measured from x_0.

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace menger {

using Vector = Eigen::VectorXd;

/// Raised when a quantity is undefined for the given simplex (e.g. all
/// vertices coincide with x_0).
class DegenerateSimplexError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Tolerances {
  double degeneracy_eps = 1e-12;  // relative, on Gram determinants
  double identity_rtol = 1e-9;    // relative, on algebraic identities
};

/// Ordered tuple of points sharing one ambient dimension.
class Tuple {
 public:
  Tuple() = default;
  explicit Tuple(std::vector<Vector> points);
  Tuple(std::initializer_list<Vector> points);

  std::size_t size() const { return points_.size(); }
  /// n for a tuple in H^{n+1}.
  std::size_t order() const { return points_.empty() ? 0 : points_.size() - 1; }
  Eigen::Index ambient_dim() const { return points_.empty() ? 0 : points_.front().size(); }

  const Vector& operator[](std::size_t i) const { return points_[i]; }
  const Vector& at(std::size_t i) const { return points_.at(i); }
  const std::vector<Vector>& points() const { return points_; }

  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  bool operator==(const Tuple& other) const;

 private:
  std::vector<Vector> points_;
};

/// Convenience: a Vector from a braced list of coordinates.
Vector vec(std::initializer_list<double> coords);

// --- coordinate surgery -----------------------------------------------------

/// X(i): drops coordinate i, 0 <= i <= n.
Tuple remove_coordinate(const Tuple& X, std::size_t i);

/// X(y, i): replaces coordinate i by y, 1 <= i <= n.
Tuple replace_coordinate(const Tuple& X, const Vector& y, std::size_t i);

/// Same tuple with coordinate `base` moved to the front; the remaining
/// coordinates keep their relative order.
Tuple rebase(const Tuple& X, std::size_t base);

// --- content and edges ------------------------------------------------------

/// n-content M_n(X) = sqrt(det <x_i - x_0, x_j - x_0>). Computed from the
/// R factor of a column-pivoted QR of the edge matrix; numerically
/// rank-deficient edge sets (including n > D) give exactly 0.
double gram_content(const Tuple& X);

/// Gram determinant of the edges at x_0, i.e. gram_content(X)^2.
double gram_determinant(const Tuple& X);

double diam(const Tuple& X);
double min_edge(const Tuple& X);
bool has_coinciding_vertices(const Tuple& X);

double max_at0(const Tuple& X);
double min_at0(const Tuple& X);
/// min_at0 / max_at0. Throws DegenerateSimplexError when max_at0 == 0.
double scale_at0(const Tuple& X);

/// True iff the Gram determinant of the edges at x_0 exceeds `tol`.
bool is_nondegenerate(const Tuple& X, double tol);
/// Scale-relative default: tol = degeneracy_eps * max_at0^{2n}.
bool is_nondegenerate(const Tuple& X, const Tolerances& tol = {});

// --- heights and sines ------------------------------------------------------

/// Distance from x to the affine hull of X's vertices.
double affine_hull_distance(const Vector& x, const Tuple& X);

/// h_{x_i}(X) = dist(x_i, L[X(i)]).
double height(const Tuple& X, std::size_t i);
double min_height(const Tuple& X);

/// Polar sine of X at vertex x_i: content with x_i as base divided by the
/// product of the edge lengths at x_i. Zero when any two vertices coincide.
double polar_sine(const Tuple& X, std::size_t i);

/// sin(theta_i) = dist(x_i, L[X(i)]) / |x_i - x_0|, clamped to [0, 1].
/// Requires 1 <= i <= n and x_i != x_0.
double elevation_sine(const Tuple& X, std::size_t i);

// --- curvatures ---------------------------------------------------------------

/// Classical Menger curvature 1/R of three points. Zero if collinear or if
/// two points coincide.
double menger_curvature_1d(const Tuple& T);

/// c_d^2(X) from the mean of squared polar sines (canonical form).
double discrete_curvature_sq(const Tuple& X);
/// c_d^2(X) from the squared volume and inverse edge products.
double discrete_curvature_sq_volume_form(const Tuple& X);
/// c_d(X), d = |X| - 2.
double discrete_curvature(const Tuple& X);

/// Vol_{d+1}(X) over the product of |x_i - x_j| across ordered pairs i != j.
double direct_menger(const Tuple& X);

}  // namespace menger
