#include "menger/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace menger {

Tuple::Tuple(std::vector<Vector> points) : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("Tuple: needs at least one point");
  const auto D = points_.front().size();
  if (D < 1) throw std::invalid_argument("Tuple: ambient dimension must be >= 1");
  for (const auto& p : points_) {
    if (p.size() != D) throw std::invalid_argument("Tuple: ambient dimensions disagree");
    if (!p.allFinite()) throw std::invalid_argument("Tuple: non-finite coordinate");
  }
}

Tuple::Tuple(std::initializer_list<Vector> points) : Tuple(std::vector<Vector>(points)) {}

bool Tuple::operator==(const Tuple& other) const {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (points_[i].size() != other.points_[i].size()) return false;
    if (points_[i] != other.points_[i]) return false;
  }
  return true;
}

Vector vec(std::initializer_list<double> coords) {
  Vector v(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index k = 0;
  for (double c : coords) v(k++) = c;
  return v;
}

Tuple remove_coordinate(const Tuple& X, std::size_t i) {
  if (i >= X.size()) throw std::out_of_range("remove_coordinate: index out of range");
  if (X.size() < 2) throw std::invalid_argument("remove_coordinate: tuple would become empty");
  std::vector<Vector> pts;
  pts.reserve(X.size() - 1);
  for (std::size_t j = 0; j < X.size(); ++j)
    if (j != i) pts.push_back(X[j]);
  return Tuple(std::move(pts));
}

Tuple replace_coordinate(const Tuple& X, const Vector& y, std::size_t i) {
  if (i == 0 || i > X.order()) throw std::out_of_range("replace_coordinate: need 1 <= i <= n");
  if (y.size() != X.ambient_dim()) throw std::invalid_argument("replace_coordinate: dimension mismatch");
  std::vector<Vector> pts = X.points();
  pts[i] = y;
  return Tuple(std::move(pts));
}

Tuple rebase(const Tuple& X, std::size_t base) {
  if (base >= X.size()) throw std::out_of_range("rebase: index out of range");
  if (base == 0) return X;
  std::vector<Vector> pts;
  pts.reserve(X.size());
  pts.push_back(X[base]);
  for (std::size_t j = 0; j < X.size(); ++j)
    if (j != base) pts.push_back(X[j]);
  return Tuple(std::move(pts));
}

namespace {

Eigen::MatrixXd edge_matrix(const Tuple& X) {
  const auto n = static_cast<Eigen::Index>(X.order());
  Eigen::MatrixXd E(X.ambient_dim(), n);
  for (Eigen::Index j = 0; j < n; ++j) E.col(j) = X[static_cast<std::size_t>(j) + 1] - X[0];
  return E;
}

}  // namespace

double gram_content(const Tuple& X) {
  const auto n = static_cast<Eigen::Index>(X.order());
  if (n == 0) return 1.0;
  if (n > X.ambient_dim()) return 0.0;
  const Eigen::MatrixXd E = edge_matrix(X);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(E);
  if (qr.rank() < n) return 0.0;
  double content = 1.0;
  for (Eigen::Index j = 0; j < n; ++j) content *= std::abs(qr.matrixQR()(j, j));
  return content;
}

double gram_determinant(const Tuple& X) {
  const double m = gram_content(X);
  return m * m;
}

double diam(const Tuple& X) {
  double best = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t j = i + 1; j < X.size(); ++j) best = std::max(best, (X[i] - X[j]).norm());
  return best;
}

double min_edge(const Tuple& X) {
  if (X.size() < 2) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t j = i + 1; j < X.size(); ++j) best = std::min(best, (X[i] - X[j]).norm());
  return best;
}

bool has_coinciding_vertices(const Tuple& X) {
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t j = i + 1; j < X.size(); ++j)
      if (X[i] == X[j]) return true;
  return false;
}

double max_at0(const Tuple& X) {
  double best = 0.0;
  for (std::size_t i = 1; i < X.size(); ++i) best = std::max(best, (X[i] - X[0]).norm());
  return best;
}

double min_at0(const Tuple& X) {
  if (X.size() < 2) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < X.size(); ++i) best = std::min(best, (X[i] - X[0]).norm());
  return best;
}

double scale_at0(const Tuple& X) {
  const double mx = max_at0(X);
  if (!(mx > 0.0)) throw DegenerateSimplexError("scale_at0: all vertices coincide with x_0");
  return min_at0(X) / mx;
}

bool is_nondegenerate(const Tuple& X, double tol) {
  if (static_cast<Eigen::Index>(X.order()) > X.ambient_dim()) return false;
  return gram_determinant(X) > tol;
}

bool is_nondegenerate(const Tuple& X, const Tolerances& tol) {
  const double mx = max_at0(X);
  if (!(mx > 0.0)) return false;
  const double scaled = tol.degeneracy_eps * std::pow(mx, 2.0 * static_cast<double>(X.order()));
  return is_nondegenerate(X, scaled);
}

double affine_hull_distance(const Vector& x, const Tuple& X) {
  if (x.size() != X.ambient_dim()) throw std::invalid_argument("affine_hull_distance: dimension mismatch");
  const Vector v = x - X[0];
  if (X.order() == 0) return v.norm();
  const Eigen::MatrixXd E = edge_matrix(X);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(E);
  const Eigen::Index r = qr.rank();
  const Vector w = qr.householderQ().adjoint() * v;
  return w.tail(w.size() - r).norm();
}

double height(const Tuple& X, std::size_t i) {
  if (i >= X.size()) throw std::out_of_range("height: index out of range");
  return affine_hull_distance(X[i], remove_coordinate(X, i));
}

double min_height(const Tuple& X) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < X.size(); ++i) best = std::min(best, height(X, i));
  return best;
}

double polar_sine(const Tuple& X, std::size_t i) {
  if (i >= X.size()) throw std::out_of_range("polar_sine: index out of range");
  if (has_coinciding_vertices(X)) return 0.0;
  double denom = 1.0;
  for (std::size_t j = 0; j < X.size(); ++j)
    if (j != i) denom *= (X[j] - X[i]).norm();
  return gram_content(rebase(X, i)) / denom;
}

double elevation_sine(const Tuple& X, std::size_t i) {
  if (i == 0 || i > X.order()) throw std::out_of_range("elevation_sine: need 1 <= i <= n");
  const double edge = (X[i] - X[0]).norm();
  if (!(edge > 0.0)) throw DegenerateSimplexError("elevation_sine: x_i coincides with x_0");
  const double s = affine_hull_distance(X[i], remove_coordinate(X, i)) / edge;
  return std::clamp(s, 0.0, 1.0);
}

double menger_curvature_1d(const Tuple& T) {
  if (T.size() != 3) throw std::invalid_argument("menger_curvature_1d: needs exactly three points");
  if (has_coinciding_vertices(T)) return 0.0;
  const double a = (T[1] - T[2]).norm();
  const double b = (T[0] - T[2]).norm();
  const double c = (T[0] - T[1]).norm();
  // 4 * area / (abc) with area = M_2 / 2
  return 2.0 * gram_content(T) / (a * b * c);
}

namespace {

int intrinsic_dim_of(const Tuple& X) {
  if (X.size() < 3) throw std::invalid_argument("curvature: needs d+2 >= 3 points");
  return static_cast<int>(X.size()) - 2;
}

}  // namespace

double discrete_curvature_sq(const Tuple& X) {
  const int d = intrinsic_dim_of(X);
  if (has_coinciding_vertices(X)) return 0.0;
  const double dm = diam(X);
  if (!(dm > 0.0)) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double s = polar_sine(X, i);
    sum += s * s;
  }
  return sum / (static_cast<double>(d + 2) * std::pow(dm, d * (d + 1)));
}

double discrete_curvature_sq_volume_form(const Tuple& X) {
  const int d = intrinsic_dim_of(X);
  if (has_coinciding_vertices(X)) return 0.0;
  const double dm = diam(X);
  if (!(dm > 0.0)) return 0.0;
  const double vol = gram_content(X);
  double inv_sum = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    double prod = 1.0;
    for (std::size_t j = 0; j < X.size(); ++j)
      if (j != i) prod *= (X[j] - X[i]).squaredNorm();
    inv_sum += 1.0 / prod;
  }
  return vol * vol * inv_sum / (static_cast<double>(d + 2) * std::pow(dm, d * (d + 1)));
}

double discrete_curvature(const Tuple& X) { return std::sqrt(discrete_curvature_sq(X)); }

double direct_menger(const Tuple& X) {
  intrinsic_dim_of(X);
  if (has_coinciding_vertices(X)) return 0.0;
  double denom = 1.0;
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t j = i + 1; j < X.size(); ++j) denom *= (X[i] - X[j]).squaredNorm();
  return gram_content(X) / denom;
}

}  // namespace menger
