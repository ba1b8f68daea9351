#pragma once

// Curvature integrals of empirical measures (exact sums or Monte Carlo),
// scale/handle classification of simplices, two-term polar-sine sets and
// the per-class decomposition of the curvature estimator.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "menger/geometry.hpp"
#include "menger/measure.hpp"

namespace menger {

// --- scale classification -----------------------------------------------------

struct ScaleClass {
  enum class Kind { WellScaled, Scaled };
  Kind kind = Kind::WellScaled;
  double scale = 1.0;
  int k = 0;
  int p = 1;
  std::vector<std::size_t> handles;  // ascending, subset of 1..d+1

  std::size_t handle_count() const { return handles.size(); }
  /// Handles sit exactly at coordinates 1..n.
  bool canonical() const;
};

/// Unique k with alpha0^{k+1} < s <= alpha0^k, for 0 < s <= 1.
int scale_index(double s, double alpha0);

/// alpha0^{k+p} < scale_at0(X) <= alpha0^k.
bool in_scale_window(const Tuple& X, double alpha0, int k, int p);

/// Vertices i >= 1 with |x_i - x_0| / max_at0 > alpha0^k. The first vertex
/// attaining max_at0 always counts, which only matters for k = 0.
std::vector<std::size_t> handle_indices(const Tuple& X, double alpha0, int k);

/// WellScaled iff scale > alpha0^3. Otherwise p = 1 gives the unique k of
/// scale_index; p = 2 gives the smallest admissible k. Throws
/// DegenerateSimplexError for coinciding vertices.
ScaleClass classify_scale(const Tuple& X, double alpha0, int p = 1);

// --- curvature integrals ------------------------------------------------------------

enum class EstimatorMode { Auto, Exact, MonteCarlo };

struct EstimatorOptions {
  int d = 1;
  std::int64_t n_samples = 100000;
  EstimatorMode mode = EstimatorMode::Auto;
  std::uint64_t seed = 1;
  double exact_limit = 1e7;  // Auto uses exact sums when |P|^{d+2} <= this
  bool parallel = true;
  Tolerances tol{};
};

struct MCEstimate {
  double estimate = 0.0;   // mean * mass_factor
  double mean = 0.0;       // E[c_d^2] under the normalized restriction
  double std_error = 0.0;  // of `estimate`; 0 in exact mode
  std::int64_t n_samples = 0;  // ordered tuples covered (exact) or drawn (MC)
  double mass_factor = 0.0;    // mu(Q)^{d+2}
  bool exact = false;
  bool empty = false;          // mu(Q) == 0
  double x0_form_mean = 0.0;   // mean of psin_{x0}^2 / diam^{d(d+1)}
  double max_identity_deviation = 0.0;  // polar-sine vs volume form, scaled by diam^{d(d+1)}; MC only
  bool identity_ok = true;
};

/// c_d^2(mu|_Q). Q = nullopt means the whole cloud.
MCEstimate continuous_curvature_sq(const WeightedPointCloud& cloud, const std::optional<Ball>& Q,
                                   const EstimatorOptions& opts);

/// Integral of c_d^2 over tuples in B^{d+2} with all pairwise distances
/// >= lambda * radius(B).
MCEstimate curvature_over_Ulambda(const WeightedPointCloud& cloud, const Ball& B, double lambda,
                                  const EstimatorOptions& opts);

struct Prop11Result {
  MCEstimate lhs;
  double beta2sq = 0.0;
  double mass = 0.0;
  double ratio = 0.0;
  bool zero_over_zero = false;  // both sides at round-off level (see prop11_ratio): ratio reported as 0
  bool infinite = false;        // beta2 <= tol.degeneracy_eps but lhs > 0
};

/// lhs / (beta_2^2(x, t) mu(B(x, t))), lhs = curvature_over_Ulambda(B(x, t)).
/// beta_2 <= tol.degeneracy_eps counts as zero, as does an lhs whose RMS
/// polar sine sqrt(mean (2t)^{d(d+1)}) is <= tol.degeneracy_eps.
Prop11Result prop11_ratio(const WeightedPointCloud& cloud, const Vector& x, double t, double lambda,
                          const EstimatorOptions& opts);

// --- two-term sets --------------------------------------------------------------------

/// psin_{x0}(X) <= C (psin_{x0}(X(y, i)) + psin_{x0}(X(y, j))), 1 <= i < j <= d+1.
bool concentration_set_member(const Tuple& X, std::size_t i, std::size_t j, const Vector& y, double C);

struct ConcentrationResult {
  double fraction = 0.0;
  double member_mass = 0.0;
  double ball_mass = 0.0;
};

/// mu(U_C(X, i, j) cap B(x0, r)) / mu(B(x0, r)) by a full weighted scan.
/// Throws EmptyRestrictionError when the ball has no mass.
ConcentrationResult concentration_fraction(const WeightedPointCloud& cloud, const Tuple& X, std::size_t i,
                                           std::size_t j, double r, double C, bool parallel = true);

/// Lower bound on the concentration fraction: 1 for d = 1, 0.75 otherwise.
double concentration_threshold(int d);

// --- decomposition by scale class --------------------------------------------------

struct DecompositionCell {
  double sum = 0.0;         // sum of per-sample psin_{x0}^2 / diam^{d(d+1)}
  double canonical_sum = 0.0;  // part with handles exactly at 1..n
  std::int64_t count = 0;
  std::int64_t canonical_count = 0;
};

struct DecompositionReport {
  int d = 1;
  double alpha0 = 0.25;
  int k_max = 8;
  std::int64_t n_samples = 0;
  double mass_factor = 0.0;
  double unrestricted = 0.0;      // estimate from all samples
  double class_total = 0.0;       // sum of all class estimates
  double canonical_weighted = 0.0;  // well + tail + sum C(d+1, n) * canonical cells
  DecompositionCell well_scaled;
  DecompositionCell tail;           // k > k_max
  DecompositionCell degenerate;     // coinciding vertices, contributes 0
  std::map<std::pair<int, int>, DecompositionCell> cells;  // (k, n)
  double max_abs_deviation = 0.0;   // |class_total - unrestricted|
  bool partition_ok = true;         // every sample in exactly one class
};

DecompositionReport decomposition_check(const WeightedPointCloud& cloud, const std::optional<Ball>& Q, int d,
                                        double alpha0, int k_max, std::int64_t n_samples, std::uint64_t seed,
                                        bool parallel = true);

}  // namespace menger
