#include "menger/measure.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

namespace menger {

Ball::Ball(Vector c, double r) : center(std::move(c)), radius(r) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("Ball: radius must be positive");
  if (!center.allFinite()) throw std::invalid_argument("Ball: non-finite center");
}

// ---------------------------------------------------------------------------
// Static kd-tree over the columns of a point matrix.

namespace detail {

class KdTree {
 public:
  explicit KdTree(const Eigen::MatrixXd& pts) : perm_(static_cast<std::size_t>(pts.cols())) {
    std::iota(perm_.begin(), perm_.end(), Index{0});
    if (pts.cols() > 0) build(pts, 0, pts.cols());
  }

  void radius_query(const Eigen::MatrixXd& pts, const Vector& c, double r, std::vector<Index>& out) const {
    if (nodes_.empty()) return;
    const double r2 = r * r;
    std::vector<int> stack{0};
    while (!stack.empty()) {
      const Node& node = nodes_[static_cast<std::size_t>(stack.back())];
      stack.pop_back();
      if (box_dist2(node, c) > r2) continue;
      if (node.left < 0) {
        for (Index k = node.begin; k < node.end; ++k) {
          const Index i = perm_[static_cast<std::size_t>(k)];
          if ((pts.col(i) - c).norm() <= r) out.push_back(i);
        }
      } else {
        stack.push_back(node.left);
        stack.push_back(node.right);
      }
    }
  }

  /// Distance from point i to its nearest other point.
  double nearest_other(const Eigen::MatrixXd& pts, Index i) const {
    double best2 = std::numeric_limits<double>::infinity();
    const Vector c = pts.col(i);
    std::vector<int> stack{0};
    while (!stack.empty()) {
      const Node& node = nodes_[static_cast<std::size_t>(stack.back())];
      stack.pop_back();
      if (box_dist2(node, c) >= best2) continue;
      if (node.left < 0) {
        for (Index k = node.begin; k < node.end; ++k) {
          const Index j = perm_[static_cast<std::size_t>(k)];
          if (j == i) continue;
          best2 = std::min(best2, (pts.col(j) - c).squaredNorm());
        }
      } else {
        const Node& l = nodes_[static_cast<std::size_t>(node.left)];
        const Node& r = nodes_[static_cast<std::size_t>(node.right)];
        // visit the nearer child first
        if (box_dist2(l, c) < box_dist2(r, c)) {
          stack.push_back(node.right);
          stack.push_back(node.left);
        } else {
          stack.push_back(node.left);
          stack.push_back(node.right);
        }
      }
    }
    return std::sqrt(best2);
  }

 private:
  static constexpr Index kLeafSize = 16;

  struct Node {
    Index begin = 0, end = 0;
    int left = -1, right = -1;
    Vector lo, hi;
  };

  static double box_dist2(const Node& node, const Vector& c) {
    double s = 0.0;
    for (Index k = 0; k < c.size(); ++k) {
      const double v = c(k);
      double gap = 0.0;
      if (v < node.lo(k)) gap = node.lo(k) - v;
      else if (v > node.hi(k)) gap = v - node.hi(k);
      s += gap * gap;
    }
    return s;
  }

  int build(const Eigen::MatrixXd& pts, Index b, Index e) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    Vector lo = pts.col(perm_[static_cast<std::size_t>(b)]);
    Vector hi = lo;
    for (Index k = b + 1; k < e; ++k) {
      lo = lo.cwiseMin(pts.col(perm_[static_cast<std::size_t>(k)]));
      hi = hi.cwiseMax(pts.col(perm_[static_cast<std::size_t>(k)]));
    }
    int left = -1, right = -1;
    if (e - b > kLeafSize) {
      Index axis = 0;
      (hi - lo).maxCoeff(&axis);
      const Index mid = b + (e - b) / 2;
      std::nth_element(perm_.begin() + b, perm_.begin() + mid, perm_.begin() + e,
                       [&](Index x, Index y) { return pts(axis, x) < pts(axis, y); });
      left = build(pts, b, mid);
      right = build(pts, mid, e);
    }
    Node& node = nodes_[static_cast<std::size_t>(id)];
    node.begin = b;
    node.end = e;
    node.left = left;
    node.right = right;
    node.lo = std::move(lo);
    node.hi = std::move(hi);
    return id;
  }

  std::vector<Index> perm_;
  std::vector<Node> nodes_;
};

}  // namespace detail

// ---------------------------------------------------------------------------

WeightedPointCloud::WeightedPointCloud(Eigen::MatrixXd points, Eigen::VectorXd weights, int intrinsic_d)
    : points_(std::move(points)), weights_(std::move(weights)), intrinsic_d_(intrinsic_d) {
  if (points_.cols() != weights_.size()) throw std::invalid_argument("WeightedPointCloud: |points| != |weights|");
  if (points_.rows() < 1) throw std::invalid_argument("WeightedPointCloud: ambient dimension must be >= 1");
  if (!points_.allFinite()) throw std::invalid_argument("WeightedPointCloud: non-finite coordinate");
  for (Index i = 0; i < weights_.size(); ++i)
    if (!(weights_(i) > 0.0) || !std::isfinite(weights_(i)))
      throw std::invalid_argument("WeightedPointCloud: weights must be positive");
  build();
}

WeightedPointCloud::WeightedPointCloud(const WeightedPointCloud& other)
    : points_(other.points_),
      weights_(other.weights_),
      intrinsic_d_(other.intrinsic_d_),
      total_mass_(other.total_mass_),
      support_diameter_(other.support_diameter_),
      diameter_exact_(other.diameter_exact_),
      resolution_(other.resolution_),
      index_(std::make_unique<detail::KdTree>(*other.index_)) {}

WeightedPointCloud::WeightedPointCloud(WeightedPointCloud&&) noexcept = default;
WeightedPointCloud& WeightedPointCloud::operator=(WeightedPointCloud&&) noexcept = default;
WeightedPointCloud::~WeightedPointCloud() = default;

WeightedPointCloud& WeightedPointCloud::operator=(const WeightedPointCloud& other) {
  if (this != &other) {
    WeightedPointCloud tmp(other);
    *this = std::move(tmp);
  }
  return *this;
}

void WeightedPointCloud::build() {
  index_ = std::make_unique<detail::KdTree>(points_);
  total_mass_ = weights_.sum();
  const Index N = size();

  if (N <= kExactDiameterLimit) {
    double best = 0.0;
#pragma omp parallel for schedule(dynamic, 64) reduction(max : best)
    for (Index i = 0; i < N; ++i)
      for (Index j = i + 1; j < N; ++j) best = std::max(best, (points_.col(i) - points_.col(j)).norm());
    support_diameter_ = best;
    diameter_exact_ = true;
  } else {
    const Vector centroid = points_.rowwise().mean();
    double r = 0.0;
    for (Index i = 0; i < N; ++i) r = std::max(r, (points_.col(i) - centroid).norm());
    support_diameter_ = 2.0 * r;
    diameter_exact_ = false;
  }

  if (N < 2) {
    resolution_ = 0.0;
    return;
  }
  std::vector<double> nn(static_cast<std::size_t>(N));
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < N; ++i) nn[static_cast<std::size_t>(i)] = index_->nearest_other(points_, i);
  const auto mid = nn.begin() + static_cast<std::ptrdiff_t>(nn.size() / 2);
  std::nth_element(nn.begin(), mid, nn.end());
  resolution_ = *mid;
}

std::vector<Index> WeightedPointCloud::query_ball(const Vector& center, double radius) const {
  if (center.size() != dim()) throw std::invalid_argument("query_ball: dimension mismatch");
  std::vector<Index> out;
  index_->radius_query(points_, center, radius, out);
  std::sort(out.begin(), out.end());
  return out;
}

WeightedPointCloud WeightedPointCloud::transformed(const Eigen::MatrixXd& A, const Vector& b) const {
  Eigen::MatrixXd pts = A * points_;
  pts.colwise() += b;
  return WeightedPointCloud(std::move(pts), weights_, intrinsic_d_);
}

double ball_mass(const WeightedPointCloud& cloud, const Ball& B) {
  return mass_of(cloud, cloud.query_ball(B.center, B.radius));
}

std::vector<Index> points_in_ball(const WeightedPointCloud& cloud, const Ball& B) {
  return cloud.query_ball(B.center, B.radius);
}

double mass_of(const WeightedPointCloud& cloud, const std::vector<Index>& indices) {
  double m = 0.0;
  for (Index i : indices) m += cloud.weight(i);
  return m;
}

// ---------------------------------------------------------------------------

RegularityReport regularity_constant(const WeightedPointCloud& cloud, int d, const RegularityOptions& opts,
                                     const CounterRng& rng) {
  if (cloud.size() == 0) throw std::invalid_argument("regularity_constant: empty cloud");
  RegularityReport report;
  const double r_max = opts.r_max.value_or(cloud.support_diameter());
  const double r_min = opts.r_min.value_or(cloud.resolution());
  if (!(r_max > 0.0) || !(r_min > 0.0) || r_min > r_max) {
    report.degenerate = true;
    return report;
  }
  const Index n_centers = opts.all_centers ? cloud.size() : opts.n_centers;
  const double log_span = std::log(r_max / r_min);
  double worst = 1.0;
  for (Index c = 0; c < n_centers; ++c) {
    const Index center = opts.all_centers ? c : static_cast<Index>(rng.below(static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(cloud.size())));
    const CounterRng radii = rng.substream(static_cast<std::uint64_t>(c) + 1);
    for (int k = 0; k < opts.n_radii; ++k) {
      const double r = r_min * std::exp(log_span * radii.uniform(static_cast<std::uint64_t>(k)));
      const double mass = ball_mass(cloud, Ball(cloud.point(center), r));
      const double rd = std::pow(r, d);
      const double normalized = mass / rd;
      report.samples.push_back({center, r, normalized});
      worst = std::max({worst, normalized, 1.0 / normalized});
    }
  }
  report.estimated_Cmu = worst;
  return report;
}

// ---------------------------------------------------------------------------

std::pair<Vector, Eigen::MatrixXd> plane_patch_frame(int d, int D, std::uint64_t seed) {
  if (d < 1 || D <= d) throw std::invalid_argument("plane_patch_frame: need 1 <= d < D");
  const CounterRng rng = CounterRng(seed).substream(1);
  Eigen::MatrixXd G(D, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < D; ++i) G(i, j) = rng.normal(static_cast<std::uint64_t>(j * D + i));
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  Eigen::MatrixXd frame = qr.householderQ() * Eigen::MatrixXd::Identity(D, d);
  Vector base(D);
  for (int i = 0; i < D; ++i) base(i) = 0.25 * rng.normal(static_cast<std::uint64_t>(d * D + i));
  return {base, frame};
}

WeightedPointCloud gen_plane_patch(int d, int D, Index N, std::uint64_t seed) {
  if (N < 1) throw std::invalid_argument("gen_plane_patch: N must be positive");
  const auto [base, frame] = plane_patch_frame(d, D, seed);
  const CounterRng rng = CounterRng(seed).substream(2);
  Eigen::MatrixXd pts(D, N);
  for (Index i = 0; i < N; ++i) {
    Vector u(d);
    for (int k = 0; k < d; ++k) u(k) = rng.uniform(static_cast<std::uint64_t>(i * d + k));
    pts.col(i) = base + frame * u;
  }
  return WeightedPointCloud(std::move(pts), Eigen::VectorXd::Constant(N, 1.0 / static_cast<double>(N)), d);
}

WeightedPointCloud gen_sphere(int D, Index N, std::uint64_t seed) {
  if (D < 2 || N < 1) throw std::invalid_argument("gen_sphere: need D >= 2 and N >= 1");
  const CounterRng rng = CounterRng(seed).substream(3);
  Eigen::MatrixXd pts(D, N);
  for (Index i = 0; i < N; ++i) {
    Vector g(D);
    do {
      for (int k = 0; k < D; ++k) g(k) = rng.normal(static_cast<std::uint64_t>(i * D + k));
    } while (g.norm() == 0.0);
    pts.col(i) = g / g.norm();
  }
  return WeightedPointCloud(std::move(pts), Eigen::VectorXd::Constant(N, 1.0 / static_cast<double>(N)), D - 1);
}

WeightedPointCloud gen_lipschitz_graph(int d, int D, double lipschitz_const, Index N, std::uint64_t seed) {
  if (d < 1 || D <= d || N < 1 || !(lipschitz_const >= 0.0))
    throw std::invalid_argument("gen_lipschitz_graph: need 1 <= d < D, N >= 1, L >= 0");
  const CounterRng phases = CounterRng(seed).substream(4);
  const CounterRng rng = CounterRng(seed).substream(5);
  const int codim = D - d;
  // Each Jacobian entry is bounded by amp, so the Frobenius norm is <= L.
  const double amp = lipschitz_const / std::sqrt(static_cast<double>(d * codim));
  Eigen::MatrixXd phase(codim, d);
  for (int m = 0; m < codim; ++m)
    for (int k = 0; k < d; ++k) phase(m, k) = 2.0 * std::numbers::pi * phases.uniform(static_cast<std::uint64_t>(m * d + k));
  Eigen::MatrixXd pts(D, N);
  for (Index i = 0; i < N; ++i) {
    Vector u(d);
    for (int k = 0; k < d; ++k) u(k) = rng.uniform(static_cast<std::uint64_t>(i * d + k));
    pts.col(i).head(d) = u;
    for (int m = 0; m < codim; ++m) {
      double f = 0.0;
      for (int k = 0; k < d; ++k) f += std::sin(2.0 * std::numbers::pi * u(k) + phase(m, k));
      pts(d + m, i) = amp * f / (2.0 * std::numbers::pi);
    }
  }
  return WeightedPointCloud(std::move(pts), Eigen::VectorXd::Constant(N, 1.0 / static_cast<double>(N)), d);
}

WeightedPointCloud gen_four_corner_cantor(int level) {
  if (level < 0 || level > 10) throw std::invalid_argument("gen_four_corner_cantor: level must be in [0, 10]");
  std::vector<Eigen::Vector2d> centers{Eigen::Vector2d::Zero()};
  double side = 1.0;
  for (int l = 0; l < level; ++l) {
    std::vector<Eigen::Vector2d> next;
    next.reserve(centers.size() * 4);
    const double off = 3.0 * side / 8.0;
    for (const auto& c : centers)
      for (double sx : {-1.0, 1.0})
        for (double sy : {-1.0, 1.0}) next.emplace_back(c.x() + sx * off, c.y() + sy * off);
    centers = std::move(next);
    side /= 4.0;
  }
  const auto N = static_cast<Index>(centers.size());
  Eigen::MatrixXd pts(2, N);
  for (Index i = 0; i < N; ++i) pts.col(i) = centers[static_cast<std::size_t>(i)];
  return WeightedPointCloud(std::move(pts), Eigen::VectorXd::Constant(N, std::pow(0.25, level)), 1);
}

// ---------------------------------------------------------------------------

MassSampler::MassSampler(const WeightedPointCloud& cloud, const std::optional<Ball>& restriction) {
  if (restriction) {
    indices_ = cloud.query_ball(restriction->center, restriction->radius);
  } else {
    indices_.resize(static_cast<std::size_t>(cloud.size()));
    std::iota(indices_.begin(), indices_.end(), Index{0});
  }
  cumulative_.reserve(indices_.size());
  double acc = 0.0;
  for (Index i : indices_) {
    acc += cloud.weight(i);
    cumulative_.push_back(acc);
  }
}

Index MassSampler::draw(double u) const {
  if (indices_.empty()) throw EmptyRestrictionError("MassSampler: empty restriction");
  const double target = u * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  if (it == cumulative_.end()) --it;
  return indices_[static_cast<std::size_t>(it - cumulative_.begin())];
}

std::vector<Index> sample_indices(const MassSampler& sampler, int m, const CounterRng& rng, std::uint64_t sample_id) {
  std::vector<Index> out(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k)
    out[static_cast<std::size_t>(k)] = sampler.draw(rng.uniform(sample_id * static_cast<std::uint64_t>(m) + static_cast<std::uint64_t>(k)));
  return out;
}

Tuple tuple_from_indices(const WeightedPointCloud& cloud, const std::vector<Index>& indices) {
  std::vector<Vector> pts;
  pts.reserve(indices.size());
  for (Index i : indices) pts.push_back(cloud.point(i));
  return Tuple(std::move(pts));
}

Tuple sample_tuple(const WeightedPointCloud& cloud, const std::optional<Ball>& restriction, int m,
                   const CounterRng& rng, std::uint64_t sample_id) {
  const MassSampler sampler(cloud, restriction);
  if (!(sampler.mass() > 0.0)) throw EmptyRestrictionError("sample_tuple: restriction has no mass");
  return tuple_from_indices(cloud, sample_indices(sampler, m, rng, sample_id));
}

// ---------------------------------------------------------------------------

namespace {

double parse_double(const std::string& field, std::size_t line_no) {
  const char* begin = field.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
  if (end == begin || (end && *end != '\0') || errno == ERANGE || !std::isfinite(v))
    throw InputError("line " + std::to_string(line_no) + ": bad number '" + field + "'");
  return v;
}

}  // namespace

WeightedPointCloud read_cloud_csv(std::istream& in, int intrinsic_d) {
  std::string line;
  std::size_t line_no = 0;
  long D = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("dim=", 0) != 0) throw InputError("missing 'dim=D' header");
    char* end = nullptr;
    D = std::strtol(line.c_str() + 4, &end, 10);
    if (end == line.c_str() + 4 || *end != '\0' || D < 1) throw InputError("bad header '" + line + "'");
    break;
  }
  if (D < 1) throw InputError("empty point-cloud file");

  std::vector<double> coords;
  std::vector<double> weights;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (static_cast<long>(fields.size()) != D + 1)
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(D + 1) + " fields");
    for (long k = 0; k < D; ++k) coords.push_back(parse_double(fields[static_cast<std::size_t>(k)], line_no));
    const double w = parse_double(fields.back(), line_no);
    if (!(w > 0.0)) throw InputError("line " + std::to_string(line_no) + ": weight must be positive");
    weights.push_back(w);
  }
  if (weights.empty()) throw InputError("point-cloud file has no points");
  const auto N = static_cast<Index>(weights.size());
  Eigen::MatrixXd pts = Eigen::Map<Eigen::MatrixXd>(coords.data(), D, N);
  Eigen::VectorXd w = Eigen::Map<Eigen::VectorXd>(weights.data(), N);
  return WeightedPointCloud(std::move(pts), std::move(w), intrinsic_d);
}

WeightedPointCloud read_cloud_csv_file(const std::string& path, int intrinsic_d) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_cloud_csv(in, intrinsic_d);
}

void write_cloud_csv(std::ostream& out, const WeightedPointCloud& cloud) {
  out << "dim=" << cloud.dim() << '\n';
  out << std::setprecision(17);
  for (Index i = 0; i < cloud.size(); ++i) {
    for (Index k = 0; k < cloud.dim(); ++k) out << cloud.points()(k, i) << ',';
    out << cloud.weight(i) << '\n';
  }
}

void write_cloud_csv_file(const std::string& path, const WeightedPointCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_cloud_csv(out, cloud);
}

}  // namespace menger
