#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "menger/multiscale.hpp"

using namespace menger;

namespace {

WeightedPointCloud line_cloud(const std::vector<double>& xs) {
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(2, static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) P(0, static_cast<Eigen::Index>(i)) = xs[i];
  return WeightedPointCloud(P, Eigen::VectorXd::Ones(static_cast<Eigen::Index>(xs.size())));
}

// beta_2^2 of a planar cloud in a ball from the closed-form 2x2 eigenvalue.
std::pair<double, double> beta2sq_oracle(const WeightedPointCloud& c, const Ball& B) {
  double m = 0, sx = 0, sy = 0;
  for (Index i = 0; i < c.size(); ++i)
    if ((c.point(i) - B.center).norm() <= B.radius) {
      m += c.weight(i);
      sx += c.weight(i) * c.point(i)(0);
      sy += c.weight(i) * c.point(i)(1);
    }
  if (m == 0) return {0.0, 0.0};
  const double mx = sx / m, my = sy / m;
  double a = 0, b = 0, e = 0;
  for (Index i = 0; i < c.size(); ++i)
    if ((c.point(i) - B.center).norm() <= B.radius) {
      const double u = c.point(i)(0) - mx, v = c.point(i)(1) - my;
      a += c.weight(i) * u * u;
      b += c.weight(i) * u * v;
      e += c.weight(i) * v * v;
    }
  const double lmin = std::max(0.0, (a + e) / 2 - std::sqrt((a - e) * (a - e) / 4 + b * b));
  return {lmin / (m * 4 * B.radius * B.radius), m};
}

}  // namespace

TEST_CASE("level units and m(Q)") {
  CHECK(level_unit(0.25, 0) == 1.0);
  CHECK(level_unit(0.25, 3) == 1.0 / 64);
  CHECK(level_unit(0.25, -1) == 4.0);
  CHECK(m_of_diameter(0.25, 0.25) == 1);
  CHECK(m_of_diameter(0.2, 0.25) == 2);
  CHECK(m_of_diameter(0.26, 0.25) == 1);
  CHECK(m_of_diameter(1.0, 0.25) == 0);
  CHECK(m_of_diameter(2.0, 0.25) == 0);
  CHECK(m_of_diameter(4.0, 0.25) == -1);
  CHECK(m_of_Q(Ball(vec({0, 0}), 0.5), 0.5) == 0);
  for (int m = -3; m <= 8; ++m) CHECK(m_of_diameter(level_unit(0.3, m), 0.3) == m);
  CHECK_THROWS(m_of_diameter(0.0, 0.25));
  CHECK_THROWS(m_of_diameter(1.0, 1.0));
}

TEST_CASE("net ordering") {
  const auto id = net_ordering(10, 0);
  for (Index i = 0; i < 10; ++i) CHECK(id[static_cast<std::size_t>(i)] == i);
  auto p = net_ordering(10, 5);
  CHECK(p != id);
  std::sort(p.begin(), p.end());
  CHECK(p == id);
}

TEST_CASE("two-point keep and drop by hand") {
  // unit 1: 2.5 is within 1 of 1.5, so it is not admitted; 1.5 is within 2 of 0, so its ball is dropped
  const auto c = line_cloud({0.0, 1.5, 2.5});
  const NetLevel L = build_level(c, 0, 0.25, net_ordering(3, 0));
  CHECK(L.net == std::vector<Index>{0, 1});
  CHECK(L.ball_centers == std::vector<Index>{0});
  CHECK(L.leftover == std::vector<Index>{1});
  CHECK(L.partition == std::vector<int>{0, 0, 0});
  CHECK(L.balls[0].radius == 4.0);

  const auto far = line_cloud({0.0, 2.5, 5.0});
  const NetLevel F = build_level(far, 0, 0.25, net_ordering(3, 0));
  CHECK(F.ball_centers == std::vector<Index>{0, 1, 2});
  CHECK(F.leftover.empty());
  CHECK(F.partition == std::vector<int>{0, 1, 2});

  // exactly at distance 1 the point is covered, not admitted
  CHECK(build_net(line_cloud({0.0, 1.0}), 0, 0.25, net_ordering(2, 0)).size() == 1);
}

TEST_CASE("net and partition axioms") {
  const std::vector<WeightedPointCloud> clouds{gen_sphere(3, 1500, 2), gen_four_corner_cantor(4),
                                               gen_lipschitz_graph(1, 2, 1.0, 800, 3)};
  for (const auto& c : clouds)
    for (int n = 1; n <= 3; ++n) {
      const double alpha0 = 0.3, r = level_unit(alpha0, n);
      const NetLevel L = build_level(c, n, alpha0, net_ordering(c.size(), 11));
      for (std::size_t a = 0; a < L.net.size(); ++a)
        for (std::size_t b = a + 1; b < L.net.size(); ++b) CHECK((c.point(L.net[a]) - c.point(L.net[b])).norm() > r);
      for (std::size_t a = 0; a < L.ball_centers.size(); ++a)
        for (std::size_t b = a + 1; b < L.ball_centers.size(); ++b)
          CHECK((c.point(L.ball_centers[a]) - c.point(L.ball_centers[b])).norm() > 2 * r);
      for (Index i = 0; i < c.size(); ++i) {
        double nearest = INFINITY;
        for (Index p : L.net) nearest = std::min(nearest, (c.point(i) - c.point(p)).norm());
        CHECK(nearest <= r);
        const int j = L.partition[static_cast<std::size_t>(i)];
        REQUIRE(j >= 0);
        CHECK(L.balls[static_cast<std::size_t>(j)].contains(c.point(i)));
        for (std::size_t k = 0; k < L.ball_centers.size(); ++k)
          if ((c.point(i) - c.point(L.ball_centers[k])).norm() <= r) CHECK(static_cast<std::size_t>(j) == k);
      }
    }
}

TEST_CASE("local family uses the center-distance rule") {
  const auto c = gen_sphere(3, 600, 9);
  const Ball Q(c.point(0), 0.4);
  const auto F = MultiresolutionFamily::build_for(c, 0.25, Q, 4);
  CHECK(F.n_min() == m_of_Q(Q, 0.25));
  std::set<std::pair<int, int>> got;
  for (const auto& fb : local_family(F, Q)) got.insert({fb.level, fb.j});
  std::set<std::pair<int, int>> want;
  for (const auto& [n, L] : F.levels())
    for (std::size_t j = 0; j < L.balls.size(); ++j)
      if ((L.balls[j].center - Q.center).norm() <= L.balls[j].radius + Q.radius) want.insert({n, static_cast<int>(j)});
  CHECK(got == want);
  const auto js = partition_indices_meeting(c, F.level(F.n_min()), Q);
  CHECK(std::is_sorted(js.begin(), js.end()));
  CHECK(!js.empty());
}

TEST_CASE("discrete flatness resums to the closed-form oracle") {
  const auto c = gen_lipschitz_graph(1, 2, 1.0, 700, 5);
  const Ball Q(c.point(3), 0.3);
  const auto F = MultiresolutionFamily::build_for(c, 0.25, Q);
  const FlatnessReport rep = jones_flatness_discrete(c, Q, F, 1);
  double total = 0.0;
  const int m = m_of_Q(Q, 0.25);
  for (const auto& [n, L] : F.levels()) {
    if (n < m) continue;
    for (const Ball& B : L.balls)
      if ((B.center - Q.center).norm() <= B.radius + Q.radius) {
        const auto [b2, mass] = beta2sq_oracle(c, B);
        total += b2 * mass;
      }
  }
  CHECK(rep.total == doctest::Approx(total).epsilon(1e-9));
  CHECK(rep.total > 0.0);
  CHECK(jones_flatness_discrete(c, Q, F, 1, false).total == rep.total);
}

TEST_CASE("flat measures have zero flatness") {
  const auto c = gen_plane_patch(2, 3, 400, 8);
  const Ball Q(c.point(0), 0.5);
  const auto F = MultiresolutionFamily::build_for(c, 0.25, Q);
  CHECK(jones_flatness_discrete(c, Q, F, 2).total < 1e-20);
  ContinuousFlatnessOptions o;
  o.max_points = 50;
  CHECK(jones_flatness_continuous(c, Q, 2, o).total < 1e-20);
}

TEST_CASE("continuous flatness quadrature weights") {
  const auto c = gen_sphere(3, 500, 6);
  const Ball B(c.point(0), 0.6);
  ContinuousFlatnessOptions o;
  o.rho = 0.5;
  const FlatnessReport rep = jones_flatness_continuous(c, B, 2, o);
  int levels = 0;
  for (double t = B.diameter(); t >= c.resolution(); t *= 0.5) ++levels;
  double w = 0.0, total = 0.0;
  for (const auto& term : rep.terms) {
    w += term.mass;
    total += term.mass * term.beta2sq;
  }
  CHECK(w == doctest::Approx(ball_mass(c, B) * std::log(2.0) * levels).epsilon(1e-12));
  CHECK(total == doctest::Approx(rep.total).epsilon(1e-12));
  CHECK_THROWS(jones_flatness_continuous(c, B, 2, ContinuousFlatnessOptions{1.5, {}, 0}));
}
