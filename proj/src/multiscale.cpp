#include "menger/multiscale.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "menger/kernels.hpp"

namespace menger {

double level_unit(double alpha0, int n) { return std::pow(alpha0, n); }

std::vector<Index> net_ordering(Index N, std::uint64_t seed) {
  std::vector<Index> order(static_cast<std::size_t>(N));
  std::iota(order.begin(), order.end(), Index{0});
  if (seed == 0) return order;
  const CounterRng rng(seed, 0x6e6574);
  for (Index i = N - 1; i > 0; --i) {
    const auto j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(i + 1)));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  return order;
}

namespace {

constexpr std::size_t kLinearScanLimit = 64;

// True iff some flagged point lies within distance r of x (closed).
bool flagged_within(const WeightedPointCloud& cloud, const std::vector<char>& flag, const std::vector<Index>& flagged,
                    const Vector& x, double r) {
  if (flagged.size() <= kLinearScanLimit) {
    for (Index j : flagged)
      if ((cloud.points().col(j) - x).norm() <= r) return true;
    return false;
  }
  for (Index j : cloud.query_ball(x, r))
    if (flag[static_cast<std::size_t>(j)]) return true;
  return false;
}

}  // namespace

std::vector<Index> build_net(const WeightedPointCloud& cloud, int n, double alpha0, const std::vector<Index>& ordering) {
  if (cloud.size() == 0) throw std::invalid_argument("build_net: empty cloud");
  if (static_cast<Index>(ordering.size()) != cloud.size()) throw std::invalid_argument("build_net: ordering size");
  const double r = level_unit(alpha0, n);
  std::vector<char> admitted(static_cast<std::size_t>(cloud.size()), 0);
  std::vector<Index> net;
  for (Index p : ordering) {
    if (flagged_within(cloud, admitted, net, cloud.point(p), r)) continue;
    admitted[static_cast<std::size_t>(p)] = 1;
    net.push_back(p);
  }
  return net;
}

std::vector<std::size_t> select_ball_family(const WeightedPointCloud& cloud, int n, double alpha0,
                                            const std::vector<Index>& net) {
  const double r = level_unit(alpha0, n);
  std::vector<char> kept_flag(static_cast<std::size_t>(cloud.size()), 0);
  std::vector<Index> kept_points;
  std::vector<std::size_t> kept;
  for (std::size_t a = 0; a < net.size(); ++a) {
    const Index p = net[a];
    // closed quarter-balls of radius r meet iff centers are within 2r
    if (flagged_within(cloud, kept_flag, kept_points, cloud.point(p), 2.0 * r)) continue;
    kept_flag[static_cast<std::size_t>(p)] = 1;
    kept_points.push_back(p);
    kept.push_back(a);
  }
  return kept;
}

std::vector<int> build_partition(const WeightedPointCloud& cloud, int n, double alpha0, const std::vector<Index>& ball_centers,
                                 const std::vector<Index>& leftover) {
  const double r = level_unit(alpha0, n);
  const auto N = static_cast<std::size_t>(cloud.size());
  std::vector<int> cell(N, -1);
  std::vector<int> j_of_point(N, -1);
  for (std::size_t j = 0; j < ball_centers.size(); ++j) j_of_point[static_cast<std::size_t>(ball_centers[j])] = static_cast<int>(j);

  for (std::size_t j = 0; j < ball_centers.size(); ++j)
    for (Index i : cloud.query_ball(cloud.point(ball_centers[j]), r))
      if (cell[static_cast<std::size_t>(i)] < 0) cell[static_cast<std::size_t>(i)] = static_cast<int>(j);

  for (Index c : leftover) {
    const Vector center = cloud.point(c);
    int g = -1;
    for (Index i : cloud.query_ball(center, 2.0 * r)) {
      const int j = j_of_point[static_cast<std::size_t>(i)];
      if (j >= 0 && (g < 0 || j < g)) g = j;
    }
    if (g < 0) throw std::logic_error("build_partition: leftover ball meets no kept quarter-ball");
    for (Index i : cloud.query_ball(center, r))
      if (cell[static_cast<std::size_t>(i)] < 0) cell[static_cast<std::size_t>(i)] = g;
  }
  for (int c : cell)
    if (c < 0) throw std::logic_error("build_partition: point left unassigned");
  return cell;
}

NetLevel build_level(const WeightedPointCloud& cloud, int n, double alpha0, const std::vector<Index>& ordering) {
  NetLevel L;
  L.n = n;
  L.unit = level_unit(alpha0, n);
  L.net = build_net(cloud, n, alpha0, ordering);
  const auto kept = select_ball_family(cloud, n, alpha0, L.net);
  std::vector<char> is_kept(L.net.size(), 0);
  for (std::size_t a : kept) {
    is_kept[a] = 1;
    L.ball_centers.push_back(L.net[a]);
    L.balls.emplace_back(cloud.point(L.net[a]), 4.0 * L.unit);
  }
  for (std::size_t a = 0; a < L.net.size(); ++a)
    if (!is_kept[a]) L.leftover.push_back(L.net[a]);
  L.partition = build_partition(cloud, n, alpha0, L.ball_centers, L.leftover);
  return L;
}

int m_of_diameter(double diameter, double alpha0) {
  if (!(diameter > 0.0)) throw std::invalid_argument("m_of_Q: diameter must be positive");
  if (!(alpha0 > 0.0 && alpha0 < 1.0)) throw std::invalid_argument("m_of_Q: alpha0 must lie in (0, 1)");
  int m = static_cast<int>(std::ceil(std::log(diameter) / std::log(alpha0)));
  while (level_unit(alpha0, m) > diameter) ++m;
  while (level_unit(alpha0, m - 1) <= diameter) --m;
  return m;
}

int m_of_Q(const Ball& Q, double alpha0) { return m_of_diameter(Q.diameter(), alpha0); }

int resolution_floor_level(const WeightedPointCloud& cloud, double alpha0) {
  double res = cloud.resolution();
  if (!(res > 0.0)) res = cloud.support_diameter() > 0.0 ? cloud.support_diameter() * 1e-6 : 1.0;
  int n = static_cast<int>(std::floor(std::log(res) / std::log(alpha0)));
  while (level_unit(alpha0, n) < res) --n;
  while (level_unit(alpha0, n + 1) >= res) ++n;
  return n;
}

MultiresolutionFamily MultiresolutionFamily::build(const WeightedPointCloud& cloud, double alpha0, int n_min, int n_max,
                                                   const std::vector<Index>& ordering) {
  if (!(alpha0 > 0.0 && alpha0 < 1.0)) throw std::invalid_argument("MultiresolutionFamily: alpha0 must lie in (0, 1)");
  MultiresolutionFamily F;
  F.alpha0_ = alpha0;
  F.n_min_ = n_min;
  F.n_max_ = n_max;
  for (int n = n_min; n <= n_max; ++n) F.levels_.emplace(n, build_level(cloud, n, alpha0, ordering));
  return F;
}

MultiresolutionFamily MultiresolutionFamily::build_for(const WeightedPointCloud& cloud, double alpha0, const Ball& Q,
                                                       std::uint64_t ordering_seed) {
  const int lo = m_of_Q(Q, alpha0);
  const int hi = std::max(lo, resolution_floor_level(cloud, alpha0));
  return build(cloud, alpha0, lo, hi, net_ordering(cloud.size(), ordering_seed));
}

std::vector<FamilyBall> local_family(const MultiresolutionFamily& F, const Ball& Q) {
  const int m = m_of_Q(Q, F.alpha0());
  std::vector<FamilyBall> out;
  for (const auto& [n, L] : F.levels()) {
    if (n < m) continue;
    for (std::size_t j = 0; j < L.balls.size(); ++j) {
      const Ball& B = L.balls[j];
      if ((B.center - Q.center).norm() <= B.radius + Q.radius) out.push_back({n, static_cast<int>(j), B});
    }
  }
  return out;
}

std::vector<int> partition_indices_meeting(const WeightedPointCloud& cloud, const NetLevel& L, const Ball& Q) {
  std::vector<int> js;
  for (Index i : cloud.query_ball(Q.center, Q.radius)) js.push_back(L.partition[static_cast<std::size_t>(i)]);
  std::sort(js.begin(), js.end());
  js.erase(std::unique(js.begin(), js.end()), js.end());
  return js;
}

FlatnessReport jones_flatness_discrete(const WeightedPointCloud& cloud, const Ball& Q, const MultiresolutionFamily& F,
                                       int d, bool parallel) {
  const auto family = local_family(F, Q);
  std::vector<Ball> balls;
  balls.reserve(family.size());
  for (const auto& fb : family) balls.push_back(fb.ball);
  const auto terms = parallel ? omp::beta2_terms(cloud, balls, d) : serial::beta2_terms(cloud, balls, d);
  FlatnessReport rep;
  rep.terms.reserve(family.size());
  for (std::size_t b = 0; b < family.size(); ++b) {
    rep.terms.push_back({family[b].level, family[b].j, family[b].ball.radius, terms[b].beta2sq, terms[b].mass});
    rep.total += terms[b].beta2sq * terms[b].mass;
  }
  return rep;
}

FlatnessReport jones_flatness_continuous(const WeightedPointCloud& cloud, const Ball& B, int d,
                                         const ContinuousFlatnessOptions& opts, bool parallel) {
  if (!(opts.rho > 0.0 && opts.rho < 1.0)) throw std::invalid_argument("jones_flatness_continuous: rho must lie in (0, 1)");
  std::vector<Index> xs = cloud.query_ball(B.center, B.radius);
  FlatnessReport rep;
  if (xs.empty()) return rep;
  const double mass_B = mass_of(cloud, xs);
  double rescale = 1.0;
  if (opts.max_points && static_cast<Index>(xs.size()) > *opts.max_points) {
    const auto perm = net_ordering(static_cast<Index>(xs.size()), opts.seed == 0 ? 1 : opts.seed);
    std::vector<Index> sub;
    for (Index k = 0; k < *opts.max_points; ++k) sub.push_back(xs[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])]);
    std::sort(sub.begin(), sub.end());
    xs = std::move(sub);
    rescale = mass_B / mass_of(cloud, xs);
  }
  const double floor = cloud.resolution();
  std::vector<double> ts;
  for (double t = B.diameter(); t >= floor && t > 0.0 && ts.size() < 200; t *= opts.rho) ts.push_back(t);
  const double dlog = std::log(1.0 / opts.rho);

  const std::size_t nx = xs.size();
  const auto values = map_indices(nx * ts.size(), parallel, [&](std::size_t k) {
    const std::size_t lvl = k / nx;
    const Index x = xs[k % nx];
    const Beta2Result r = beta2(cloud, Ball(cloud.point(x), ts[lvl]), d);
    return r.value * r.value;
  });
  for (std::size_t k = 0; k < values.size(); ++k) {
    const std::size_t lvl = k / nx;
    const Index x = xs[k % nx];
    const double w = cloud.weight(x) * rescale * dlog;
    rep.terms.push_back({static_cast<int>(lvl), static_cast<int>(x), ts[lvl], values[k], w});
    rep.total += values[k] * w;
  }
  return rep;
}

}  // namespace menger
