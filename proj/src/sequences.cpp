#include "menger/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "menger/estimators.hpp"

namespace menger {

Constants constants(int d, double Cmu) {
  if (d < 1) throw std::invalid_argument("constants: d must be >= 1");
  if (!(Cmu >= 1.0)) throw std::invalid_argument("constants: Cmu must be >= 1");
  Constants c;
  c.d = d;
  c.Cmu = Cmu;
  if (d == 1) {
    c.Cp = 1.0;
  } else {
    const double arg = std::pow(2.0, -(2.5 * d + 1.0)) / (Cmu * Cmu);
    c.Cp = std::sqrt(5.0) * std::numbers::pi * std::numbers::pi / (4.0 * std::asin(arg));
  }
  const double from_cp = 1.0 / (2.0 * c.Cp * c.Cp);
  const double from_cmu = std::pow(1.0 / (4.0 * Cmu * Cmu), 1.0 / d);
  c.alpha0 = std::min(from_cp, from_cmu);
  c.min_resolves_as_stated = d == 1 ? from_cmu <= from_cp : from_cp <= from_cmu;
  return c;
}

int bar_index(long a, int d) {
  if (d < 1) throw std::invalid_argument("bar_index: d must be >= 1");
  const long r = ((a - 2) % d + d) % d;
  return static_cast<int>(2 + r);
}

Annulus annulus(const Vector& x, double r, int m, double alpha0) {
  return {x, std::pow(alpha0, m + 1) * r, std::pow(alpha0, m) * r};
}

namespace {

std::vector<Vector> as_points(const Tuple& X) { return X.points(); }

std::vector<Tuple> as_tuples(const std::vector<std::vector<Vector>>& seqs) {
  std::vector<Tuple> out;
  out.reserve(seqs.size());
  for (const auto& s : seqs) out.emplace_back(s);
  return out;
}

double psin0(const Tuple& X) { return polar_sine(X, 0); }

// Multiplicative slack for inequalities that hold exactly in real arithmetic.
constexpr double kRoundoff = 1e-12;

}  // namespace

std::vector<Tuple> auxiliary_sequence(const Tuple& X, const std::vector<Vector>& Y, int k, int d) {
  return as_tuples(auxiliary_sequence(as_points(X), Y, k, d));
}

std::vector<Tuple> well_scaled_sequence(const Tuple& X, const std::vector<Vector>& Y, int k, int d) {
  return as_tuples(well_scaled_sequence(as_points(X), Y, k, d));
}

std::vector<std::vector<Tuple>> rake_tree(const Tuple& X, const std::vector<Vector>& Z, int n, int d) {
  std::vector<std::vector<Tuple>> out;
  for (const auto& level : rake_tree(as_points(X), Z, n, d)) out.push_back(as_tuples(level));
  return out;
}

std::vector<Tuple> rake_sequence(const Tuple& X, const std::vector<Vector>& Z, int n, int d) {
  return as_tuples(rake_sequence(as_points(X), Z, n, d));
}

// --- checks -----------------------------------------------------------------------------

CheckResult check_piece_annuli(const Tuple& X, const std::vector<Vector>& Y, int k, int d, double alpha0) {
  const double mx = max_at0(X);
  for (int q = 1; q <= static_cast<int>(Y.size()); ++q) {
    const Annulus A = annulus(X[0], mx, k - ceil_div(q, d), alpha0);
    if (!A.contains(Y[static_cast<std::size_t>(q - 1)]))
      return {false, q, -1, "y_" + std::to_string(q) + " outside its annulus"};
  }
  return {};
}

CheckResult check_well_scaled_bounds(const std::vector<Tuple>& seq, const Tuple& X, int k, int d, double alpha0) {
  const int kd = k * d;
  if (static_cast<int>(seq.size()) != kd + 1) return {false, -1, -1, "sequence length is not kd+1"};
  const double mx = max_at0(X);
  const double well = std::pow(alpha0, 3);
  for (int q = 1; q <= kd; ++q) {
    const Tuple& e = seq[static_cast<std::size_t>(q - 1)];
    const int m = k - ceil_div(q, d);
    const double v = max_at0(e);
    if (!(std::pow(alpha0, m + 1) * mx < v && v <= std::pow(alpha0, m) * mx))
      return {false, q, -1, "max_at0(X_" + std::to_string(q) + ") outside its scale bounds"};
    if (!(min_at0(e) / v > well)) return {false, q, -1, "X_" + std::to_string(q) + " is not well-scaled"};
  }
  const Tuple& last = seq.back();
  if (!(min_at0(last) > alpha0 * mx)) return {false, kd + 1, -1, "min_at0(X_{kd+1}) <= alpha0 max_at0(X)"};
  if (max_at0(last) != mx) return {false, kd + 1, -1, "max_at0(X_{kd+1}) != max_at0(X)"};
  return {};
}

CheckResult is_in_augmented_set(const Tuple& X, const std::vector<Vector>& Y, double Cp, int k, int d) {
  const auto aux = auxiliary_sequence(X, Y, k, d);
  const auto seq = well_scaled_sequence(X, Y, k, d);
  for (int q = 0; q < k * d; ++q) {
    const double lhs = psin0(aux[static_cast<std::size_t>(q)]);
    const double rhs = Cp * (psin0(seq[static_cast<std::size_t>(q)]) + psin0(aux[static_cast<std::size_t>(q + 1)]));
    if (!(lhs <= rhs)) return {false, q, -1, "two-term inequality fails at q=" + std::to_string(q)};
  }
  return {};
}

InequalityResult multiscale_inequality_check(const Tuple& X, const std::vector<Vector>& Y, double Cp, int k, int d) {
  const auto seq = well_scaled_sequence(X, Y, k, d);
  InequalityResult r;
  const double p = psin0(X);
  r.lhs = p * p;
  double s = 0.0;
  for (const auto& e : seq) {
    const double v = psin0(e);
    s += v * v;
  }
  r.rhs = static_cast<double>(k * d + 1) * std::pow(Cp, 2.0 * k * d) * s;
  r.holds = r.lhs <= r.rhs * (1.0 + kRoundoff);
  return r;
}

CheckResult check_rake_property(const std::vector<Tuple>& leaves, const Tuple& X, int k, double alpha0) {
  for (std::size_t s = 0; s < leaves.size(); ++s) {
    const Tuple& L = leaves[s];
    if (L[0] != X[0]) return {false, static_cast<int>(s), -1, "leaf does not share x_0"};
    if (has_coinciding_vertices(L)) return {false, static_cast<int>(s), -1, "leaf has coinciding vertices"};
    bool found = false;
    for (int kp = 0; kp <= k - 1 && !found; ++kp)
      found = in_scale_window(L, alpha0, kp, 2) && handle_indices(L, alpha0, kp).size() == 1;
    if (!found) return {false, static_cast<int>(s), -1, "leaf X^" + std::to_string(s + 1) + " is not a single-handled rake"};
  }
  return {};
}

CheckResult check_short_piece_annulus(const Tuple& X, const std::vector<Vector>& Z, int k, double alpha0) {
  const Annulus A = annulus(X[0], max_at0(X), k, alpha0);
  for (std::size_t s = 0; s < Z.size(); ++s)
    if (!A.contains(Z[s])) return {false, static_cast<int>(s) + 1, -1, "z_" + std::to_string(s + 1) + " outside A_k"};
  return {};
}

CheckResult is_in_overline_set(const Tuple& X, const std::vector<Vector>& Z, double Cp, int n, int d) {
  const auto tree = rake_tree(X, Z, n, d);
  for (int j = 0; j + 1 < n; ++j) {
    const auto& level = tree[static_cast<std::size_t>(j)];
    const auto& next = tree[static_cast<std::size_t>(j + 1)];
    for (std::size_t m = 1; m <= level.size(); ++m) {
      const double lhs = psin0(level[m - 1]);
      const double rhs = Cp * (psin0(next[2 * m - 2]) + psin0(next[2 * m - 1]));
      if (!(lhs <= rhs))
        return {false, j, static_cast<int>(m), "two-term inequality fails at j=" + std::to_string(j) + ", m=" + std::to_string(m)};
    }
  }
  return {};
}

InequalityResult rake_inequality_check(const Tuple& X, const std::vector<Vector>& Z, double Cp, int n, int d) {
  const auto leaves = rake_sequence(X, Z, n, d);
  InequalityResult r;
  const double p = psin0(X);
  r.lhs = p * p;
  double s = 0.0;
  for (const auto& e : leaves) {
    const double v = psin0(e);
    s += v * v;
  }
  r.rhs = std::pow(2.0, n - 1) * std::pow(Cp, 2.0 * (n - 1)) * s;
  r.holds = r.lhs <= r.rhs * (1.0 + kRoundoff);
  return r;
}

// --- samplers ---------------------------------------------------------------------------

CandidateSource cloud_source(const WeightedPointCloud& cloud, const CounterRng& rng) {
  return [&cloud, rng](const Annulus& A, std::uint64_t element, std::uint64_t coord,
                       std::uint64_t attempt) -> std::optional<Vector> {
    std::vector<Index> inside;
    std::vector<double> cum;
    double acc = 0.0;
    for (Index i : cloud.query_ball(A.center, A.outer))
      if (A.contains(cloud.point(i))) {
        inside.push_back(i);
        acc += cloud.weight(i);
        cum.push_back(acc);
      }
    if (inside.empty()) return std::nullopt;
    const double u = rng.substream(element).substream(coord).uniform(attempt) * acc;
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    if (it == cum.end()) --it;
    return cloud.point(inside[static_cast<std::size_t>(it - cum.begin())]);
  };
}

CandidateSource shell_source(const CounterRng& rng) {
  return [rng](const Annulus& A, std::uint64_t element, std::uint64_t coord,
               std::uint64_t attempt) -> std::optional<Vector> {
    if (!(A.outer > A.inner)) return std::nullopt;
    const CounterRng r = rng.substream(element).substream(coord).substream(attempt);
    const auto D = A.center.size();
    Vector g(D);
    std::uint64_t c = 0;
    do {
      for (Eigen::Index i = 0; i < D; ++i) g(i) = r.normal(c++);
    } while (g.norm() == 0.0);
    const double u = r.uniform(1u << 20);
    const double rad = A.inner > 0.0 ? A.outer * std::pow(A.inner / A.outer, u) : A.outer * (1.0 - u);
    return Vector(A.center + rad * g / g.norm());
  };
}

PieceSample sample_well_scaled_piece(const Tuple& X, int k, int d, double Cp, double alpha0, const CandidateSource& src,
                                     std::uint64_t element, int max_attempts) {
  PieceSample out;
  const double mx = max_at0(X);
  Tuple current = X;
  std::vector<Vector> Y;
  for (int q = 1; q <= k * d; ++q) {
    const Annulus A = annulus(X[0], mx, k - ceil_div(q, d), alpha0);
    const std::size_t slot = static_cast<std::size_t>(bar_index(q + 1, d));
    const double lhs = psin0(current);
    bool accepted = false;
    int a = 0;
    for (; a < max_attempts && !accepted; ++a) {
      const auto y = src(A, element, static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(a));
      if (!y) {
        out.failed_coord = q;
        out.diagnostic = "annulus for y_" + std::to_string(q) + " is empty";
        out.attempts.push_back(a + 1);
        return out;
      }
      if (!A.contains(*y)) continue;
      const Tuple next = replace_coordinate(current, *y, slot);
      if (lhs <= Cp * (psin0(replace_coordinate(current, *y, 1)) + psin0(next))) {
        accepted = true;
        Y.push_back(*y);
        current = next;
      }
    }
    out.attempts.push_back(a);
    if (!accepted) {
      out.failed_coord = q;
      out.diagnostic = "no admissible y_" + std::to_string(q) + " after " + std::to_string(max_attempts) + " attempts";
      return out;
    }
  }
  out.piece = std::move(Y);
  return out;
}

PieceSample sample_short_scale_piece(const Tuple& X, int k, int n, int d, double Cp, double alpha0,
                                     const CandidateSource& src, std::uint64_t element, int max_attempts) {
  if (n < 2 || n > d) throw std::invalid_argument("sample_short_scale_piece: need 1 < n <= d");
  PieceSample out;
  const Annulus A = annulus(X[0], max_at0(X), k, alpha0);
  std::vector<std::vector<Tuple>> tree{{X}};
  std::vector<Vector> Z;
  for (int j = 0; j < n - 1; ++j) {
    std::vector<Tuple> next;
    const auto lo = static_cast<std::size_t>(n - j - 1);
    const auto hi = static_cast<std::size_t>(n - j);
    for (int m = 1; m <= (1 << j); ++m) {
      const int s = (1 << j) + m - 1;
      const Tuple& parent = tree[static_cast<std::size_t>(j)][static_cast<std::size_t>(m - 1)];
      const double lhs = psin0(parent);
      bool accepted = false;
      int a = 0;
      for (; a < max_attempts && !accepted; ++a) {
        const auto z = src(A, element, static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(a));
        if (!z) {
          out.failed_coord = s;
          out.diagnostic = "annulus A_k is empty";
          out.attempts.push_back(a + 1);
          return out;
        }
        if (!A.contains(*z)) continue;
        const Tuple odd = replace_coordinate(parent, *z, hi);
        std::vector<Vector> ev = replace_coordinate(parent, *z, lo).points();
        std::swap(ev[lo], ev[hi]);
        const Tuple even(std::move(ev));
        if (lhs <= Cp * (psin0(odd) + psin0(even))) {
          accepted = true;
          Z.push_back(*z);
          next.push_back(odd);
          next.push_back(even);
        }
      }
      out.attempts.push_back(a);
      if (!accepted) {
        out.failed_coord = s;
        out.diagnostic = "no admissible z_" + std::to_string(s) + " after " + std::to_string(max_attempts) + " attempts";
        return out;
      }
    }
    tree.push_back(std::move(next));
  }
  out.piece = std::move(Z);
  return out;
}

std::optional<Tuple> sample_handled_simplex(const Vector& x0, const Vector& x1, int d, int k, int p, int n,
                                            double alpha0, const CandidateSource& src, std::uint64_t element,
                                            int max_attempts) {
  if (n < 1 || n > d) throw std::invalid_argument("sample_handled_simplex: need 1 <= n <= d");
  const double mx = (x1 - x0).norm();
  if (!(mx > 0.0)) return std::nullopt;
  const Annulus handle{x0, std::pow(alpha0, k) * mx, mx};
  const Annulus tine{x0, std::pow(alpha0, k + p) * mx, std::pow(alpha0, k) * mx};
  std::vector<Vector> pts{x0, x1};
  for (int i = 2; i <= d + 1; ++i) {
    const Annulus& A = i <= n ? handle : tine;
    bool placed = false;
    for (int a = 0; a < max_attempts && !placed; ++a) {
      const auto y = src(A, element, static_cast<std::uint64_t>(1000 + i), static_cast<std::uint64_t>(a));
      if (!y) return std::nullopt;
      if (!A.contains(*y)) continue;
      if (std::any_of(pts.begin(), pts.end(), [&](const Vector& v) { return v == *y; })) continue;
      pts.push_back(*y);
      placed = true;
    }
    if (!placed) return std::nullopt;
  }
  return Tuple(std::move(pts));
}

AnnulusMass annulus_conditional_mass(const WeightedPointCloud& cloud, const Tuple& X_tilde_prev, int q, int k, int d,
                                     double Cp, double alpha0) {
  AnnulusMass r;
  const Vector& x0 = X_tilde_prev[0];
  const Annulus A = annulus(x0, max_at0(X_tilde_prev), k - ceil_div(q, d), alpha0);
  const auto j = static_cast<std::size_t>(bar_index(q + 1, d));
  for (Index i : cloud.query_ball(x0, A.outer)) {
    const double w = cloud.weight(i);
    r.ball_mass += w;
    const Vector y = cloud.point(i);
    if (!A.contains(y)) continue;
    r.annulus_mass += w;
    if (concentration_set_member(X_tilde_prev, 1, j, y, Cp)) r.g += w;
  }
  return r;
}

}  // namespace menger
