#include "menger/planes.hpp"

#include <algorithm>
#include <cmath>

namespace menger {

AffinePlane::AffinePlane(Vector b, Eigen::MatrixXd f) : base(std::move(b)), frame(std::move(f)) {
  if (frame.rows() != base.size()) throw std::invalid_argument("AffinePlane: frame/base dimension mismatch");
  if (frame.cols() >= frame.rows()) throw std::invalid_argument("AffinePlane: need d < D");
  const Eigen::MatrixXd gram = frame.transpose() * frame;
  if (frame.cols() > 0 && (gram - Eigen::MatrixXd::Identity(frame.cols(), frame.cols())).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("AffinePlane: frame is not orthonormal");
}

AffinePlane AffinePlane::from_span(Vector b, const Eigen::MatrixXd& directions) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(directions);
  if (qr.rank() < directions.cols()) throw std::invalid_argument("AffinePlane::from_span: rank-deficient directions");
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(directions.rows(), directions.cols());
  return AffinePlane(std::move(b), canonical_frame(Q));
}

Vector AffinePlane::project(const Vector& x) const {
  const Vector v = x - base;
  return base + frame * (frame.transpose() * v);
}

double distance_to_plane(const Vector& x, const AffinePlane& L) {
  if (x.size() != L.ambient_dim()) throw std::invalid_argument("distance_to_plane: dimension mismatch");
  const Vector v = x - L.base;
  return (v - L.frame * (L.frame.transpose() * v)).norm();
}

double deviation_D2(const Tuple& X, const AffinePlane& L) {
  double s = 0.0;
  for (const auto& x : X) {
    const double t = distance_to_plane(x, L);
    s += t * t;
  }
  return std::sqrt(s);
}

AffinePlane random_plane(int d, int D, const CounterRng& rng, std::uint64_t id) {
  const CounterRng r = rng.substream(id);
  Vector base(D);
  Eigen::MatrixXd dirs(D, d);
  std::uint64_t c = 0;
  for (int i = 0; i < D; ++i) base(i) = r.normal(c++);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < D; ++i) dirs(i, j) = r.normal(c++);
  return AffinePlane::from_span(std::move(base), dirs);
}

Eigen::MatrixXd canonical_frame(const Eigen::MatrixXd& V) {
  const Eigen::Index D = V.rows();
  // orthonormal basis of span(V) first, so the projector is exact
  Eigen::MatrixXd Q;
  {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V);
    Q = qr.householderQ() * Eigen::MatrixXd::Identity(D, qr.rank());
  }
  const Eigen::Index r = Q.cols();
  Eigen::MatrixXd out(D, r);
  Eigen::Index filled = 0;
  for (Eigen::Index e = 0; e < D && filled < r; ++e) {
    Vector v = Q * Q.row(e).transpose();  // projection of e_e
    for (Eigen::Index j = 0; j < filled; ++j) v -= out.col(j).dot(v) * out.col(j);
    const double n = v.norm();
    if (n > 1e-8) out.col(filled++) = v / n;
  }
  return out.leftCols(filled);
}

AffinePlane fit_plane(const WeightedPointCloud& cloud, const std::vector<Index>& indices, int d) {
  const Eigen::Index D = cloud.dim();
  if (d < 1 || d >= D) throw std::invalid_argument("fit_plane: need 1 <= d < D");
  if (indices.empty()) throw EmptyRestrictionError("fit_plane: empty restriction");

  double mass = 0.0;
  Vector centroid = Vector::Zero(D);
  for (Index i : indices) {
    mass += cloud.weight(i);
    centroid += cloud.weight(i) * cloud.points().col(i);
  }
  centroid /= mass;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(D, D);
  for (Index i : indices) {
    const Vector v = cloud.points().col(i) - centroid;
    cov.noalias() += cloud.weight(i) * v * v.transpose();
  }
  cov /= mass;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  const Vector& lam = es.eigenvalues();  // ascending
  const Eigen::MatrixXd& U = es.eigenvectors();
  const double tie = 1e-10 * std::max(lam(D - 1), 0.0) + 1e-300;

  // Boundary value: the d-th largest eigenvalue. Everything strictly above the
  // tie group is kept; the tie group contributes the remaining directions.
  const double cut = lam(D - d);
  std::vector<Eigen::Index> above, group;
  for (Eigen::Index k = 0; k < D; ++k) {
    if (lam(k) > cut + tie) above.push_back(k);
    else if (std::abs(lam(k) - cut) <= tie) group.push_back(k);
  }
  Eigen::MatrixXd frame(D, d);
  Eigen::Index col = 0;
  for (Eigen::Index k : above) frame.col(col++) = U.col(k);
  const Eigen::Index need = d - col;
  if (need > 0) {
    Eigen::MatrixXd G(D, static_cast<Eigen::Index>(group.size()));
    for (std::size_t g = 0; g < group.size(); ++g) G.col(static_cast<Eigen::Index>(g)) = U.col(group[g]);
    const Eigen::MatrixXd Gc = canonical_frame(G);
    frame.rightCols(need) = Gc.leftCols(need);
  }
  return AffinePlane(std::move(centroid), canonical_frame(frame));
}

AffinePlane fit_plane(const WeightedPointCloud& cloud, const Ball& B, int d) {
  return fit_plane(cloud, cloud.query_ball(B.center, B.radius), d);
}

namespace {

double beta2_sq_sum(const WeightedPointCloud& cloud, const std::vector<Index>& in_ball, const Ball& B,
                    const AffinePlane& L, double& mass) {
  const double diam = B.diameter();
  double s = 0.0;
  mass = 0.0;
  for (Index i : in_ball) {
    const double t = distance_to_plane(cloud.points().col(i), L) / diam;
    s += cloud.weight(i) * t * t;
    mass += cloud.weight(i);
  }
  return s;
}

}  // namespace

double beta2_with_plane(const WeightedPointCloud& cloud, const Ball& B, const AffinePlane& L) {
  const auto in_ball = cloud.query_ball(B.center, B.radius);
  double mass = 0.0;
  const double s = beta2_sq_sum(cloud, in_ball, B, L, mass);
  if (!(mass > 0.0)) return 0.0;
  return std::sqrt(s / mass);
}

Beta2Result beta2(const WeightedPointCloud& cloud, const Ball& B, const std::vector<Index>& in_ball, int d) {
  Beta2Result r;
  if (in_ball.empty()) {
    r.empty = true;
    r.plane = AffinePlane(B.center, Eigen::MatrixXd::Identity(cloud.dim(), d));
    return r;
  }
  r.plane = fit_plane(cloud, in_ball, d);
  const double s = beta2_sq_sum(cloud, in_ball, B, r.plane, r.mass);
  r.value = std::sqrt(s / r.mass);
  return r;
}

Beta2Result beta2(const WeightedPointCloud& cloud, const Ball& B, int d) {
  return beta2(cloud, B, cloud.query_ball(B.center, B.radius), d);
}

}  // namespace menger
