#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "menger/planes.hpp"

using namespace menger;

namespace {

WeightedPointCloud cloud_of(const std::vector<Vector>& pts, std::vector<double> w = {}) {
  Eigen::MatrixXd P(pts.front().size(), static_cast<Eigen::Index>(pts.size()));
  Eigen::VectorXd W(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    P.col(static_cast<Eigen::Index>(i)) = pts[i];
    W(static_cast<Eigen::Index>(i)) = w.empty() ? 1.0 : w[i];
  }
  return WeightedPointCloud(P, W);
}

}  // namespace

TEST_CASE("plane validation") {
  Eigen::MatrixXd F(2, 1);
  F << 1, 0;
  CHECK_NOTHROW(AffinePlane(vec({0, 0}), F));
  F << 1, 1;
  CHECK_THROWS_AS(AffinePlane(vec({0, 0}), F), std::invalid_argument);
  CHECK_THROWS_AS(AffinePlane(vec({0, 0}), Eigen::MatrixXd::Identity(2, 2)), std::invalid_argument);
  Eigen::MatrixXd V(3, 2);
  V << 1, 1, 0, 1, 0, 0;
  const AffinePlane L = AffinePlane::from_span(vec({0, 0, 1}), V);
  CHECK(distance_to_plane(vec({5, -2, 4}), L) == doctest::Approx(3.0));
  CHECK((L.project(vec({5, -2, 4})) - vec({5, -2, 1})).norm() < 1e-14);
}

TEST_CASE("l2 deviation of a simplex") {
  Eigen::MatrixXd F(2, 1);
  F << 1, 0;
  const AffinePlane L(vec({0, 0}), F);
  const Tuple X{vec({0, 1}), vec({3, -2}), vec({-1, 2})};
  CHECK(deviation_D2(X, L) == doctest::Approx(3.0));
}

TEST_CASE("canonical frame does not depend on the spanning basis") {
  Eigen::MatrixXd A(3, 2), B(3, 2);
  A << 1, 0, 0, 1, 1, 1;
  B = A * (Eigen::Matrix2d() << 2, 1, -1, 3).finished();
  const Eigen::MatrixXd FA = canonical_frame(A), FB = canonical_frame(B);
  CHECK((FA - FB).norm() < 1e-12);
  CHECK((FA.transpose() * FA - Eigen::Matrix2d::Identity()).norm() < 1e-12);
}

TEST_CASE("beta_2 of collinear points is zero") {
  std::vector<Vector> pts;
  for (int i = 0; i < 20; ++i) pts.push_back(vec({0.1 * i, 0.3 * i - 1.0}));
  const auto cloud = cloud_of(pts);
  const Beta2Result r = beta2(cloud, Ball(vec({1, 2}), 5.0), 1);
  CHECK(r.value < 1e-14);
  CHECK(r.mass == doctest::Approx(20.0));
}

TEST_CASE("beta_2 of a cross by hand") {
  // (+-1, 0) and (0, +-h), h < 1: best line is the x-axis, residual mass 2 h^2
  const double h = 0.5;
  const auto cloud = cloud_of({vec({1, 0}), vec({-1, 0}), vec({0, h}), vec({0, -h})});
  const Ball B(vec({0, 0}), 2.0);
  const Beta2Result r = beta2(cloud, B, 1);
  const double expected = std::sqrt((2 * h * h) / (4.0 * 16.0));
  CHECK(r.value == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(r.plane.frame(1, 0)) < 1e-12);
}

TEST_CASE("beta_2 weights") {
  // heavy points on the y-axis make it the best line
  const auto cloud = cloud_of({vec({1, 0}), vec({-1, 0}), vec({0, 0.5}), vec({0, -0.5})}, {1, 1, 10, 10});
  const Beta2Result r = beta2(cloud, Ball(vec({0, 0}), 2.0), 1);
  CHECK(std::abs(r.plane.frame(0, 0)) < 1e-12);
  CHECK(r.value * r.value == doctest::Approx(2.0 / (22.0 * 16.0)).epsilon(1e-12));
}

TEST_CASE("tied spectrum resolves to the canonical frame") {
  const auto cloud = cloud_of({vec({1, 0}), vec({-1, 0}), vec({0, 1}), vec({0, -1})});
  const AffinePlane L = fit_plane(cloud, Ball(vec({0, 0}), 2.0), 1);
  CHECK(std::abs(std::abs(L.frame(0, 0)) - 1.0) < 1e-12);
}

TEST_CASE("empty ball") {
  const auto cloud = cloud_of({vec({0, 0}), vec({1, 0})});
  const Ball far(vec({10, 10}), 1.0);
  const Beta2Result r = beta2(cloud, far, 1);
  CHECK(r.empty);
  CHECK(r.value == 0.0);
  CHECK_THROWS_AS(fit_plane(cloud, far, 1), EmptyRestrictionError);
}

TEST_CASE("beta_2 is the minimum over planes") {
  std::vector<Vector> pts;
  const CounterRng rng(5);
  for (int i = 0; i < 60; ++i) pts.push_back(vec({rng.normal(2 * i), 0.3 * rng.normal(2 * i + 1)}));
  const auto cloud = cloud_of(pts);
  const Ball B(vec({0, 0}), 3.0);
  const double best = beta2(cloud, B, 1).value;
  for (int k = 0; k < 50; ++k) {
    const AffinePlane L = random_plane(1, 2, rng.substream(9), static_cast<std::uint64_t>(k));
    CHECK(best <= beta2_with_plane(cloud, B, L) + 1e-15);
  }
}
