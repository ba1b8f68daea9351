#pragma once

// Structural constants, well-scaled pieces and sequences, rake trees and
// rake sequences, the two-term membership predicates built on them, and
// samplers producing augmented elements.
//
// Sequence constructors are templates over the coordinate type so they can be
// checked on symbolic labels as well as on points.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "menger/geometry.hpp"
#include "menger/measure.hpp"

namespace menger {

struct Constants {
  int d = 1;
  double Cmu = 1.0;
  double Cp = 1.0;
  double alpha0 = 0.25;
  bool min_resolves_as_stated = true;  // which arm of the alpha0 minimum wins
};

/// d = 1: Cp = 1, alpha0 = 1/(4 Cmu^2).
/// d > 1: Cp = sqrt(5) pi^2 / (4 asin(2^{-(5d/2+1)} Cmu^{-2})), alpha0 = 1/(2 Cp^2).
Constants constants(int d, double Cmu);

/// Element of {2, ..., d+1} congruent to a mod d.
int bar_index(long a, int d);

/// ceil(q / d) for q >= 0, d >= 1.
constexpr int ceil_div(int q, int d) { return (q + d - 1) / d; }

/// Number of coordinates of a well-scaled augmented element: (k+1) d + 2.
constexpr long N_k(int k, int d) { return static_cast<long>(k + 1) * d + 2; }
/// Short-scale piece length: 2^{n-1} - 1.
constexpr long N_n(int n) { return (1L << (n - 1)) - 1; }
/// Rake-augmented element length: d + 1 + 2^{n-1}.
constexpr long M_n(int n, int d) { return d + 1 + (1L << (n - 1)); }

/// A_m(x, r) = B(x, alpha0^m r) minus B(x, alpha0^{m+1} r).
struct Annulus {
  Vector center;
  double inner = 0.0;
  double outer = 1.0;
  bool contains(const Vector& y) const {
    const double t = (y - center).norm();
    return inner < t && t <= outer;
  }
};

Annulus annulus(const Vector& x, double r, int m, double alpha0);

// --- generic constructors --------------------------------------------------------

template <class P>
using Seq = std::vector<P>;

/// X~_0 = X, X~_q = X~_{q-1} with coordinate bar(q+1) replaced by y_q,
/// q = 1..kd. Returns kd+1 tuples.
template <class P>
std::vector<Seq<P>> auxiliary_sequence(const Seq<P>& X, const Seq<P>& Y, int k, int d) {
  if (d < 1 || k < 1) throw std::invalid_argument("auxiliary_sequence: need d >= 1, k >= 1");
  if (X.size() != static_cast<std::size_t>(d + 2)) throw std::invalid_argument("auxiliary_sequence: |X| != d+2");
  if (Y.size() != static_cast<std::size_t>(k * d)) throw std::invalid_argument("auxiliary_sequence: |Y| != kd");
  std::vector<Seq<P>> out{X};
  for (int q = 1; q <= k * d; ++q) {
    Seq<P> next = out.back();
    next[static_cast<std::size_t>(bar_index(q + 1, d))] = Y[static_cast<std::size_t>(q - 1)];
    out.push_back(std::move(next));
  }
  return out;
}

/// X_q = X~_{q-1} with coordinate 1 replaced by y_q for q <= kd, and
/// X_{kd+1} = X~_{kd}. Element q is stored at position q-1.
template <class P>
std::vector<Seq<P>> well_scaled_sequence(const Seq<P>& X, const Seq<P>& Y, int k, int d) {
  const auto aux = auxiliary_sequence(X, Y, k, d);
  std::vector<Seq<P>> out;
  for (int q = 1; q <= k * d; ++q) {
    Seq<P> e = aux[static_cast<std::size_t>(q - 1)];
    e[1] = Y[static_cast<std::size_t>(q - 1)];
    out.push_back(std::move(e));
  }
  out.push_back(aux.back());
  return out;
}

/// tree[j][m-1] = Z^j_m for j = 0..n-1, m = 1..2^j.
template <class P>
std::vector<std::vector<Seq<P>>> rake_tree(const Seq<P>& X, const Seq<P>& Z, int n, int d) {
  if (n < 2 || n > d) throw std::invalid_argument("rake_tree: need 1 < n <= d");
  if (X.size() != static_cast<std::size_t>(d + 2)) throw std::invalid_argument("rake_tree: |X| != d+2");
  if (static_cast<long>(Z.size()) != N_n(n)) throw std::invalid_argument("rake_tree: |Z| != 2^{n-1} - 1");
  std::vector<std::vector<Seq<P>>> tree{{X}};
  for (int j = 0; j < n - 1; ++j) {
    std::vector<Seq<P>> next;
    const auto a = static_cast<std::size_t>(n - j - 1);
    const auto b = static_cast<std::size_t>(n - j);
    for (int m = 1; m <= (1 << j); ++m) {
      const P& z = Z[static_cast<std::size_t>((1 << j) + m - 2)];
      const Seq<P>& parent = tree[static_cast<std::size_t>(j)][static_cast<std::size_t>(m - 1)];
      Seq<P> odd = parent;
      odd[b] = z;
      Seq<P> even = parent;
      even[a] = z;
      std::swap(even[a], even[b]);
      next.push_back(std::move(odd));
      next.push_back(std::move(even));
    }
    tree.push_back(std::move(next));
  }
  return tree;
}

/// X^s = Z^{n-1}_s, s = 1..2^{n-1}.
template <class P>
std::vector<Seq<P>> rake_sequence(const Seq<P>& X, const Seq<P>& Z, int n, int d) {
  return rake_tree(X, Z, n, d).back();
}

// --- tuple overloads ----------------------------------------------------------------

std::vector<Tuple> auxiliary_sequence(const Tuple& X, const std::vector<Vector>& Y, int k, int d);
std::vector<Tuple> well_scaled_sequence(const Tuple& X, const std::vector<Vector>& Y, int k, int d);
std::vector<std::vector<Tuple>> rake_tree(const Tuple& X, const std::vector<Vector>& Z, int n, int d);
std::vector<Tuple> rake_sequence(const Tuple& X, const std::vector<Vector>& Z, int n, int d);

// --- checks -----------------------------------------------------------------------------

struct CheckResult {
  bool ok = true;
  int index = -1;  // failing q, leaf s, or tree level j
  int sub = -1;    // failing m within a tree level
  std::string message;
  explicit operator bool() const { return ok; }
};

/// y_q in A_{k - ceil(q/d)}(x_0, max_at0(X)) for every q.
CheckResult check_piece_annuli(const Tuple& X, const std::vector<Vector>& Y, int k, int d, double alpha0);

/// Scale bounds on every element of a well-scaled sequence; each element
/// must also be well-scaled at x_0.
CheckResult check_well_scaled_bounds(const std::vector<Tuple>& seq, const Tuple& X, int k, int d, double alpha0);

/// psin(X~_q) <= Cp (psin(X_{q+1}) + psin(X~_{q+1})) for 0 <= q < kd.
/// On failure index = q.
CheckResult is_in_augmented_set(const Tuple& X, const std::vector<Vector>& Y, double Cp, int k, int d);

struct InequalityResult {
  bool holds = true;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// psin^2(X) <= (kd+1) Cp^{2kd} sum_q psin^2(X_q).
InequalityResult multiscale_inequality_check(const Tuple& X, const std::vector<Vector>& Y, double Cp, int k, int d);

/// Each leaf lies in S^1_{k',2} for some 0 <= k' <= k-1. On failure index = s-1.
CheckResult check_rake_property(const std::vector<Tuple>& leaves, const Tuple& X, int k, double alpha0);

/// Every z in A_k(x_0, max_at0(X)).
CheckResult check_short_piece_annulus(const Tuple& X, const std::vector<Vector>& Z, int k, double alpha0);

/// psin(Z^j_m) <= Cp (psin(Z^{j+1}_{2m-1}) + psin(Z^{j+1}_{2m})) for all j < n-1.
/// On failure index = j, sub = m.
CheckResult is_in_overline_set(const Tuple& X, const std::vector<Vector>& Z, double Cp, int n, int d);

/// psin^2(X) <= 2^{n-1} Cp^{2(n-1)} sum_s psin^2(X^s).
InequalityResult rake_inequality_check(const Tuple& X, const std::vector<Vector>& Z, double Cp, int n, int d);

// --- samplers ---------------------------------------------------------------------------

/// Supplies candidate points in an annulus. `element` and `coord` key the
/// random stream, `attempt` counts retries. nullopt: the annulus is empty.
using CandidateSource =
    std::function<std::optional<Vector>(const Annulus&, std::uint64_t element, std::uint64_t coord, std::uint64_t attempt)>;

/// Cloud points in the annulus, chosen with probability proportional to weight.
CandidateSource cloud_source(const WeightedPointCloud& cloud, const CounterRng& rng);

/// Points of the annulus in R^D with uniform direction and log-uniform radius.
CandidateSource shell_source(const CounterRng& rng);

struct PieceSample {
  std::optional<std::vector<Vector>> piece;
  int failed_coord = -1;  // 1-based
  std::string diagnostic;
  std::vector<int> attempts;  // per coordinate
};

/// Draws y_1..y_kd sequentially from their annuli, accepting y_q iff the
/// q-th two-term inequality holds. Gives up after max_attempts per coordinate.
PieceSample sample_well_scaled_piece(const Tuple& X, int k, int d, double Cp, double alpha0, const CandidateSource& src,
                                     std::uint64_t element, int max_attempts = 64);

/// Draws z_1..z_{N_n} from A_k(x_0, max_at0(X)) in breadth-first tree order,
/// accepting each z iff the inequality at its tree node holds.
PieceSample sample_short_scale_piece(const Tuple& X, int k, int n, int d, double Cp, double alpha0,
                                     const CandidateSource& src, std::uint64_t element, int max_attempts = 64);

/// A simplex with handles exactly at 1..n: x_1 attains max_at0, x_2..x_n are
/// drawn from (alpha0^k, 1] max_at0 and the tines from (alpha0^{k+p}, alpha0^k] max_at0.
/// x0 and x1 are supplied; the rest come from `src`.
std::optional<Tuple> sample_handled_simplex(const Vector& x0, const Vector& x1, int d, int k, int p, int n,
                                            double alpha0, const CandidateSource& src, std::uint64_t element,
                                            int max_attempts = 64);

struct AnnulusMass {
  double g = 0.0;            // mu(U_Cp(X~_{q-1}, 1, bar(q+1)) cap annulus)
  double annulus_mass = 0.0;
  double ball_mass = 0.0;    // mu(B(x_0, alpha0^{k - ceil(q/d)} max_at0))
};

/// Exact weighted scan of the q-th conditional set. The annulus radius uses
/// max_at0(X~_{q-1}), which equals max_at0(X) along a valid sequence.
AnnulusMass annulus_conditional_mass(const WeightedPointCloud& cloud, const Tuple& X_tilde_prev, int q, int k, int d,
                                     double Cp, double alpha0);

}  // namespace menger
