#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "menger/estimators.hpp"
#include "menger/sequences.hpp"

using namespace menger;

using Labels = std::vector<std::string>;

namespace {

Labels labels(const std::string& p, int from, int to) {
  Labels out;
  for (int i = from; i <= to; ++i) out.push_back(p + std::to_string(i));
  return out;
}

Tuple planted(int d, int k, int n, double alpha0, std::uint64_t id) {
  const Vector x0 = Vector::Zero(d + 1);
  const Vector x1 = Vector::Unit(d + 1, 0);
  const auto X = sample_handled_simplex(x0, x1, d, k, 1, n, alpha0, shell_source(CounterRng(4, id)), id);
  REQUIRE(X.has_value());
  return *X;
}

}  // namespace

TEST_CASE("constants") {
  const Constants c1 = constants(1, 1.0);
  CHECK(c1.Cp == 1.0);
  CHECK(c1.alpha0 == 0.25);
  CHECK(constants(1, 2.0).alpha0 == 1.0 / 16);

  const Constants c2 = constants(2, 1.0);
  const double cp = std::sqrt(5.0) * std::numbers::pi * std::numbers::pi / (4.0 * std::asin(1.0 / 64.0));
  CHECK(c2.Cp == doctest::Approx(cp).epsilon(1e-14));
  CHECK(c2.Cp == doctest::Approx(353.08).epsilon(1e-4));
  CHECK(c2.alpha0 == doctest::Approx(1.0 / (2 * cp * cp)).epsilon(1e-14));
  CHECK(c2.min_resolves_as_stated);

  // asin(2^{-17/2}) for d = 3
  const double cp3 = std::sqrt(5.0) * std::numbers::pi * std::numbers::pi / (4.0 * std::asin(std::pow(2.0, -8.5)));
  CHECK(constants(3, 1.0).Cp == doctest::Approx(cp3).epsilon(1e-14));
  for (int d = 2; d <= 4; ++d) CHECK(constants(d, 1.5).Cp > constants(d, 1.0).Cp);
}

TEST_CASE("bar index") {
  const int want1[] = {2, 2, 2, 2};
  for (int a = 2; a <= 5; ++a) CHECK(bar_index(a, 1) == want1[a - 2]);
  const int want3[] = {2, 3, 4, 2, 3, 4, 2};
  for (int a = 2; a <= 8; ++a) CHECK(bar_index(a, 3) == want3[a - 2]);
  CHECK(bar_index(1, 3) == 4);
  CHECK(ceil_div(5, 2) == 3);
  CHECK(N_k(2, 3) == 11);
  CHECK(N_n(3) == 3);
  CHECK(M_n(3, 3) == 8);
}

TEST_CASE("well-scaled sequence d = 2, k = 1") {
  const Labels X = labels("x", 0, 3), Y = labels("y", 1, 2);
  const auto aux = auxiliary_sequence(X, Y, 1, 2);
  REQUIRE(aux.size() == 3);
  CHECK(aux[1] == Labels{"x0", "x1", "y1", "x3"});
  CHECK(aux[2] == Labels{"x0", "x1", "y1", "y2"});
  const auto seq = well_scaled_sequence(X, Y, 1, 2);
  REQUIRE(seq.size() == 3);
  CHECK(seq[0] == Labels{"x0", "y1", "x2", "x3"});
  CHECK(seq[1] == Labels{"x0", "y2", "y1", "x3"});
  CHECK(seq[2] == Labels{"x0", "x1", "y1", "y2"});
}

TEST_CASE("well-scaled sequence d = 1, k = 2") {
  const auto seq = well_scaled_sequence(labels("x", 0, 2), labels("y", 1, 2), 2, 1);
  REQUIRE(seq.size() == 3);
  CHECK(seq[0] == Labels{"x0", "y1", "x2"});
  CHECK(seq[1] == Labels{"x0", "y2", "y1"});
  CHECK(seq[2] == Labels{"x0", "x1", "y2"});
}

TEST_CASE("rake tree d = 3, n = 3") {
  const auto tree = rake_tree(labels("x", 0, 4), labels("z", 1, 3), 3, 3);
  REQUIRE(tree.size() == 3);
  CHECK(tree[1][0] == Labels{"x0", "x1", "x2", "z1", "x4"});
  CHECK(tree[1][1] == Labels{"x0", "x1", "x3", "z1", "x4"});
  const Labels want[] = {{"x0", "x1", "z2", "z1", "x4"},
                         {"x0", "x2", "z2", "z1", "x4"},
                         {"x0", "x1", "z3", "z1", "x4"},
                         {"x0", "x3", "z3", "z1", "x4"}};
  REQUIRE(tree[2].size() == 4);
  for (std::size_t s = 0; s < 4; ++s) CHECK(tree[2][s] == want[s]);
  CHECK(rake_sequence(labels("x", 0, 4), labels("z", 1, 3), 3, 3) == tree[2]);
}

TEST_CASE("rake tree d = 2, n = 2") {
  const auto leaves = rake_sequence(labels("x", 0, 3), labels("z", 1, 1), 2, 2);
  REQUIRE(leaves.size() == 2);
  CHECK(leaves[0] == Labels{"x0", "x1", "z1", "x3"});
  CHECK(leaves[1] == Labels{"x0", "x2", "z1", "x3"});
}

TEST_CASE("constructor arguments") {
  CHECK_THROWS(well_scaled_sequence(labels("x", 0, 2), labels("y", 1, 3), 2, 1));
  CHECK_THROWS(well_scaled_sequence(labels("x", 0, 3), labels("y", 1, 2), 2, 1));
  CHECK_THROWS(rake_tree(labels("x", 0, 3), labels("z", 1, 1), 3, 2));
  CHECK_THROWS(rake_tree(labels("x", 0, 4), labels("z", 1, 2), 3, 3));
}

TEST_CASE("annulus") {
  const Annulus A = annulus(vec({0, 0}), 2.0, 1, 0.5);
  CHECK(A.inner == 0.5);
  CHECK(A.outer == 1.0);
  CHECK(A.contains(vec({1, 0})));
  CHECK_FALSE(A.contains(vec({0.5, 0})));
  CHECK_FALSE(A.contains(vec({1.01, 0})));
}

TEST_CASE("planted simplices land in their class") {
  for (int d = 1; d <= 3; ++d) {
    const double a0 = constants(d, 1.0).alpha0;
    for (int n = 1; n <= d; ++n)
      for (int k = 3; k <= 5; ++k)
        for (std::uint64_t rep = 0; rep < 5; ++rep) {
          const Tuple X = planted(d, k, n, a0, 100 * k + rep);
          CHECK(in_scale_window(X, a0, k, 1));
          const ScaleClass c = classify_scale(X, a0, 1);
          CHECK(c.k == k);
          CHECK(c.handle_count() == static_cast<std::size_t>(n));
          CHECK(c.canonical());
        }
  }
}

TEST_CASE("sampled well-scaled pieces satisfy every constraint") {
  for (int d = 1; d <= 3; ++d) {
    const Constants C = constants(d, 1.0);
    for (int k = 1; k <= 3; ++k)
      for (std::uint64_t rep = 0; rep < 10; ++rep) {
        const std::uint64_t id = 1000 * d + 10 * k + rep;
        const Tuple X = planted(d, k, 1, C.alpha0, id);
        const PieceSample ps = sample_well_scaled_piece(X, k, d, C.Cp, C.alpha0, shell_source(CounterRng(5)), id);
        REQUIRE(ps.piece.has_value());
        const auto& Y = *ps.piece;
        CHECK(Y.size() == static_cast<std::size_t>(k * d));
        CHECK(check_piece_annuli(X, Y, k, d, C.alpha0).ok);
        CHECK(is_in_augmented_set(X, Y, C.Cp, k, d).ok);
        CHECK(check_well_scaled_bounds(well_scaled_sequence(X, Y, k, d), X, k, d, C.alpha0).ok);
        const InequalityResult q = multiscale_inequality_check(X, Y, C.Cp, k, d);
        CHECK(q.holds);
        CHECK(q.lhs <= q.rhs * (1 + 1e-12));
      }
  }
}

TEST_CASE("sampled short-scale pieces satisfy every constraint") {
  for (int d = 2; d <= 3; ++d) {
    const Constants C = constants(d, 1.0);
    for (int n = 2; n <= d; ++n)
      for (int k = 1; k <= 3; ++k)
        for (std::uint64_t rep = 0; rep < 10; ++rep) {
          const std::uint64_t id = 5000 + 1000 * d + 100 * n + 10 * k + rep;
          const Tuple X = planted(d, k, n, C.alpha0, id);
          const PieceSample ps = sample_short_scale_piece(X, k, n, d, C.Cp, C.alpha0, shell_source(CounterRng(6)), id);
          REQUIRE(ps.piece.has_value());
          const auto& Z = *ps.piece;
          CHECK(static_cast<long>(Z.size()) == N_n(n));
          CHECK(check_short_piece_annulus(X, Z, k, C.alpha0).ok);
          CHECK(is_in_overline_set(X, Z, C.Cp, n, d).ok);
          CHECK(check_rake_property(rake_sequence(X, Z, n, d), X, k, C.alpha0).ok);
          CHECK(rake_inequality_check(X, Z, C.Cp, n, d).holds);
        }
  }
}

TEST_CASE("checks report the failing position") {
  const Constants C = constants(2, 1.0);
  const Tuple X = planted(2, 2, 1, C.alpha0, 77);
  auto Y = *sample_well_scaled_piece(X, 2, 2, C.Cp, C.alpha0, shell_source(CounterRng(5)), 77).piece;
  Y[2] = X[0] + 2.0 * max_at0(X) * (Y[2] - X[0]).normalized();
  const CheckResult r = check_piece_annuli(X, Y, 2, 2, C.alpha0);
  CHECK_FALSE(r.ok);
  CHECK(r.index == 3);
  // y at x_0 kills both later simplices but not psin(X~_{q-1})
  auto W = *sample_well_scaled_piece(X, 2, 2, C.Cp, C.alpha0, shell_source(CounterRng(5)), 77).piece;
  W[0] = X[0];
  CHECK_FALSE(is_in_augmented_set(X, W, C.Cp, 2, 2).ok);
}

TEST_CASE("sampler draws are reproducible") {
  const Constants C = constants(2, 1.0);
  const Tuple X = planted(2, 2, 1, C.alpha0, 3);
  const auto a = sample_well_scaled_piece(X, 2, 2, C.Cp, C.alpha0, shell_source(CounterRng(9)), 3);
  const auto b = sample_well_scaled_piece(X, 2, 2, C.Cp, C.alpha0, shell_source(CounterRng(9)), 3);
  REQUIRE(a.piece.has_value());
  REQUIRE(b.piece.has_value());
  for (std::size_t q = 0; q < a.piece->size(); ++q) CHECK((*a.piece)[q] == (*b.piece)[q]);
  CHECK(a.attempts == b.attempts);
}

TEST_CASE("cloud source stays in the annulus") {
  const auto cloud = gen_sphere(2, 5000, 2);
  const auto src = cloud_source(cloud, CounterRng(3));
  const Annulus A = annulus(cloud.point(0), 1.0, 1, 0.5);
  for (std::uint64_t a = 0; a < 200; ++a) {
    const auto y = src(A, 0, 1, a);
    REQUIRE(y.has_value());
    CHECK(A.contains(*y));
  }
  CHECK_FALSE(src(annulus(vec({9, 9}), 1.0, 0, 0.5), 0, 1, 0).has_value());
}

TEST_CASE("annulus conditional mass") {
  const auto cloud = gen_sphere(2, 4000, 1);
  const Tuple X{cloud.point(0), cloud.point(1000), cloud.point(2000)};
  const double a0 = 0.25;
  const AnnulusMass m = annulus_conditional_mass(cloud, X, 1, 1, 1, 1.0, a0);
  CHECK(m.g <= m.annulus_mass);
  CHECK(m.annulus_mass <= m.ball_mass);
  double ball = 0.0;
  for (Index i = 0; i < cloud.size(); ++i)
    if ((cloud.point(i) - X[0]).norm() <= max_at0(X)) ball += cloud.weight(i);
  CHECK(m.ball_mass == doctest::Approx(ball));
}
