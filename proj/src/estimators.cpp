#include "menger/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "menger/kernels.hpp"
#include "menger/planes.hpp"

namespace menger {

// --- scale classification -----------------------------------------------------

bool ScaleClass::canonical() const {
  for (std::size_t a = 0; a < handles.size(); ++a)
    if (handles[a] != a + 1) return false;
  return true;
}

int scale_index(double s, double alpha0) {
  if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("scale_index: scale must lie in (0, 1]");
  int k = static_cast<int>(std::floor(std::log(s) / std::log(alpha0)));
  while (k > 0 && s > std::pow(alpha0, k)) --k;
  while (s <= std::pow(alpha0, k + 1)) ++k;
  return k;
}

bool in_scale_window(const Tuple& X, double alpha0, int k, int p) {
  const double s = scale_at0(X);
  return std::pow(alpha0, k + p) < s && s <= std::pow(alpha0, k);
}

std::vector<std::size_t> handle_indices(const Tuple& X, double alpha0, int k) {
  const double mx = max_at0(X);
  if (!(mx > 0.0)) throw DegenerateSimplexError("handle_indices: all vertices coincide with x_0");
  const double cut = std::pow(alpha0, k);
  std::size_t argmax = 0;
  for (std::size_t i = 1; i < X.size(); ++i)
    if ((X[i] - X[0]).norm() == mx) {
      argmax = i;
      break;
    }
  std::vector<std::size_t> h;
  for (std::size_t i = 1; i < X.size(); ++i)
    if ((X[i] - X[0]).norm() / mx > cut || i == argmax) h.push_back(i);
  return h;
}

ScaleClass classify_scale(const Tuple& X, double alpha0, int p) {
  if (p != 1 && p != 2) throw std::invalid_argument("classify_scale: p must be 1 or 2");
  if (has_coinciding_vertices(X)) throw DegenerateSimplexError("classify_scale: coinciding vertices");
  ScaleClass c;
  c.p = p;
  c.scale = scale_at0(X);
  if (c.scale > std::pow(alpha0, 3)) return c;
  c.kind = ScaleClass::Kind::Scaled;
  const int k1 = scale_index(c.scale, alpha0);
  c.k = p == 1 ? k1 : std::max(k1 - 1, 0);
  c.handles = handle_indices(X, alpha0, c.k);
  return c;
}

// --- curvature integrals ------------------------------------------------------------

namespace {

struct TupleStats {
  double c2 = 0.0;        // canonical polar-sine form
  double x0_form = 0.0;   // psin_{x0}^2 / diam^{d(d+1)}
  double deviation = 0.0; // |polar-sine form - volume form| * diam^{d(d+1)}
};

TupleStats tuple_stats(const Tuple& X, int d) {
  TupleStats s;
  if (has_coinciding_vertices(X)) return s;
  const double dm = diam(X);
  if (!(dm > 0.0)) return s;
  const double scale = std::pow(dm, d * (d + 1));
  s.c2 = discrete_curvature_sq(X);
  const double p0 = polar_sine(X, 0);
  s.x0_form = p0 * p0 / scale;
  s.deviation = std::abs(s.c2 - discrete_curvature_sq_volume_form(X)) * scale;
  return s;
}

double min_pairwise(const Tuple& X) { return min_edge(X); }

struct Restriction {
  std::vector<Index> pool;
  double mass = 0.0;
};

Restriction restrict(const WeightedPointCloud& cloud, const std::optional<Ball>& Q) {
  Restriction r;
  if (Q) {
    r.pool = cloud.query_ball(Q->center, Q->radius);
  } else {
    r.pool.resize(static_cast<std::size_t>(cloud.size()));
    for (Index i = 0; i < cloud.size(); ++i) r.pool[static_cast<std::size_t>(i)] = i;
  }
  r.mass = mass_of(cloud, r.pool);
  return r;
}

bool use_exact(const EstimatorOptions& opts, std::size_t pool_size) {
  if (opts.mode == EstimatorMode::Exact) return true;
  if (opts.mode == EstimatorMode::MonteCarlo) return false;
  return std::pow(static_cast<double>(pool_size), opts.d + 2) <= opts.exact_limit;
}

double factorial(int m) {
  double f = 1.0;
  for (int k = 2; k <= m; ++k) f *= k;
  return f;
}

// Shared driver. `separation` filters tuples with min pairwise distance below it.
MCEstimate estimate_restricted(const WeightedPointCloud& cloud, const std::optional<Ball>& Q,
                               std::optional<double> separation, const EstimatorOptions& opts) {
  if (opts.d < 1) throw std::invalid_argument("estimator: d must be >= 1");
  const int m = opts.d + 2;
  const Restriction R = restrict(cloud, Q);
  MCEstimate est;
  if (R.pool.empty() || !(R.mass > 0.0)) {
    est.empty = true;
    return est;
  }
  est.mass_factor = std::pow(R.mass, m);
  const auto keep = [&](const Tuple& X) { return !separation || min_pairwise(X) >= *separation; };

  if (use_exact(opts, R.pool.size())) {
    // c_d^2 is symmetric, so the ordered-tuple sum is m! times the sum over
    // strictly increasing index sets; tuples repeating an index contribute 0.
    est.exact = true;
    est.n_samples = static_cast<std::int64_t>(std::llround(std::pow(static_cast<double>(R.pool.size()), m)));
    const double perm = factorial(m);
    const double inv_mass = 1.0 / R.mass;
    const CombinationFn f = [&](const std::vector<Index>& idx) {
      const Tuple X = tuple_from_indices(cloud, idx);
      if (!keep(X)) return 0.0;
      double w = perm;
      for (Index i : idx) w *= cloud.weight(i) * inv_mass;
      return w * tuple_stats(X, opts.d).c2;
    };
    const auto partials = opts.parallel ? omp::combination_partials(R.pool, m, f)
                                        : serial::combination_partials(R.pool, m, f);
    est.mean = ordered_sum(partials);
    est.x0_form_mean = est.mean;  // equal by symmetry of the full ordered sum
    est.estimate = est.mean * est.mass_factor;
    return est;
  }

  if (opts.n_samples < 2) throw std::invalid_argument("estimator: n_samples must be >= 2");
  const MassSampler sampler(cloud, Q);
  const CounterRng rng(opts.seed, 0x6375727665);
  const auto stats = map_items<TupleStats>(static_cast<std::size_t>(opts.n_samples), opts.parallel, [&](std::size_t s) {
    const Tuple X = tuple_from_indices(cloud, sample_indices(sampler, m, rng, s));
    if (!keep(X)) return TupleStats{};
    return tuple_stats(X, opts.d);
  });
  double sum = 0.0, sum_sq = 0.0, sum_x0 = 0.0, max_dev = 0.0;
  for (const auto& s : stats) {
    sum += s.c2;
    sum_sq += s.c2 * s.c2;
    sum_x0 += s.x0_form;
    max_dev = std::max(max_dev, s.deviation);
  }
  const double n = static_cast<double>(opts.n_samples);
  est.n_samples = opts.n_samples;
  est.mean = sum / n;
  est.x0_form_mean = sum_x0 / n;
  const double var = std::max(0.0, (sum_sq - n * est.mean * est.mean) / (n - 1.0));
  est.std_error = std::sqrt(var / n) * est.mass_factor;
  est.estimate = est.mean * est.mass_factor;
  est.max_identity_deviation = max_dev;
  est.identity_ok = max_dev <= opts.tol.identity_rtol;
  return est;
}

}  // namespace

MCEstimate continuous_curvature_sq(const WeightedPointCloud& cloud, const std::optional<Ball>& Q,
                                   const EstimatorOptions& opts) {
  return estimate_restricted(cloud, Q, std::nullopt, opts);
}

MCEstimate curvature_over_Ulambda(const WeightedPointCloud& cloud, const Ball& B, double lambda,
                                  const EstimatorOptions& opts) {
  if (!(lambda > 0.0)) throw std::invalid_argument("curvature_over_Ulambda: lambda must be positive");
  return estimate_restricted(cloud, B, lambda * B.radius, opts);
}

Prop11Result prop11_ratio(const WeightedPointCloud& cloud, const Vector& x, double t, double lambda,
                          const EstimatorOptions& opts) {
  const Ball B(x, t);
  Prop11Result r;
  r.lhs = curvature_over_Ulambda(cloud, B, lambda, opts);
  const Beta2Result b = beta2(cloud, B, opts.d);
  r.beta2sq = b.value * b.value;
  r.mass = b.mass;
  // beta_2 at round-off level counts as flat; so does an lhs whose RMS polar
  // sine, sqrt(mean * diam^{d(d+1)}) with diam <= 2t, is at round-off level.
  const double denom = b.value > opts.tol.degeneracy_eps ? r.beta2sq * r.mass : 0.0;
  const double lhs_rms = std::sqrt(r.lhs.mean * std::pow(2.0 * t, opts.d * (opts.d + 1)));
  if (denom > 0.0) {
    r.ratio = r.lhs.estimate / denom;
  } else if (r.lhs.estimate <= 0.0 || lhs_rms <= opts.tol.degeneracy_eps) {
    r.zero_over_zero = true;
  } else {
    r.infinite = true;
    r.ratio = std::numeric_limits<double>::infinity();
  }
  return r;
}

// --- two-term sets --------------------------------------------------------------------

bool concentration_set_member(const Tuple& X, std::size_t i, std::size_t j, const Vector& y, double C) {
  if (!(1 <= i && i < j && j <= X.order())) throw std::out_of_range("concentration_set_member: need 1 <= i < j <= d+1");
  const double lhs = polar_sine(X, 0);
  if (lhs == 0.0) return true;
  return lhs <= C * (polar_sine(replace_coordinate(X, y, i), 0) + polar_sine(replace_coordinate(X, y, j), 0));
}

ConcentrationResult concentration_fraction(const WeightedPointCloud& cloud, const Tuple& X, std::size_t i,
                                           std::size_t j, double r, double C, bool parallel) {
  const auto in_ball = cloud.query_ball(X[0], r);
  ConcentrationResult res;
  res.ball_mass = mass_of(cloud, in_ball);
  if (!(res.ball_mass > 0.0)) throw EmptyRestrictionError("concentration_fraction: empty ball");
  const auto member = map_indices(in_ball.size(), parallel, [&](std::size_t a) {
    const Index p = in_ball[a];
    return concentration_set_member(X, i, j, cloud.point(p), C) ? cloud.weight(p) : 0.0;
  });
  res.member_mass = ordered_sum(member);
  res.fraction = res.member_mass / res.ball_mass;
  return res;
}

double concentration_threshold(int d) { return d == 1 ? 1.0 : 0.75; }

// --- decomposition by scale class --------------------------------------------------

namespace {

struct SampleClass {
  double f = 0.0;
  int bucket = 0;  // 0 degenerate, 1 well-scaled, 2 cell, 3 tail
  int k = 0;
  int n = 0;
  bool canonical = false;
};

double binomial(int n, int r) {
  double b = 1.0;
  for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return b;
}

void add(DecompositionCell& c, const SampleClass& s) {
  c.sum += s.f;
  ++c.count;
  if (s.canonical) {
    c.canonical_sum += s.f;
    ++c.canonical_count;
  }
}

}  // namespace

DecompositionReport decomposition_check(const WeightedPointCloud& cloud, const std::optional<Ball>& Q, int d,
                                        double alpha0, int k_max, std::int64_t n_samples, std::uint64_t seed,
                                        bool parallel) {
  if (n_samples < 1) throw std::invalid_argument("decomposition_check: n_samples must be positive");
  DecompositionReport rep;
  rep.d = d;
  rep.alpha0 = alpha0;
  rep.k_max = k_max;
  rep.n_samples = n_samples;
  const MassSampler sampler(cloud, Q);
  if (!(sampler.mass() > 0.0)) throw EmptyRestrictionError("decomposition_check: empty restriction");
  rep.mass_factor = std::pow(sampler.mass(), d + 2);
  const CounterRng rng(seed, 0x6465636f6d70);
  const int m = d + 2;

  const auto samples = map_items<SampleClass>(static_cast<std::size_t>(n_samples), parallel, [&](std::size_t s) {
    const Tuple X = tuple_from_indices(cloud, sample_indices(sampler, m, rng, s));
    SampleClass c;
    if (has_coinciding_vertices(X)) return c;
    const double p0 = polar_sine(X, 0);
    c.f = p0 * p0 / std::pow(diam(X), d * (d + 1));
    const ScaleClass sc = classify_scale(X, alpha0, 1);
    if (sc.kind == ScaleClass::Kind::WellScaled) {
      c.bucket = 1;
    } else if (sc.k > k_max) {
      c.bucket = 3;
    } else {
      c.bucket = 2;
      c.k = sc.k;
      c.n = static_cast<int>(sc.handle_count());
      c.canonical = sc.canonical();
    }
    return c;
  });

  double total = 0.0;
  for (const auto& s : samples) {
    total += s.f;
    switch (s.bucket) {
      case 0: add(rep.degenerate, s); break;
      case 1: add(rep.well_scaled, s); break;
      case 2: add(rep.cells[{s.k, s.n}], s); break;
      default: add(rep.tail, s); break;
    }
  }
  const double scale = rep.mass_factor / static_cast<double>(n_samples);
  rep.unrestricted = total * scale;

  std::int64_t counted = rep.degenerate.count + rep.well_scaled.count + rep.tail.count;
  double class_sum = rep.degenerate.sum + rep.well_scaled.sum + rep.tail.sum;
  double canon = rep.well_scaled.sum + rep.tail.sum;
  for (const auto& [key, cell] : rep.cells) {
    counted += cell.count;
    class_sum += cell.sum;
    canon += binomial(d + 1, key.second) * cell.canonical_sum;
    if (key.second < 1 || key.second > d) rep.partition_ok = false;
  }
  if (counted != n_samples) rep.partition_ok = false;
  rep.class_total = class_sum * scale;
  rep.canonical_weighted = canon * scale;
  rep.max_abs_deviation = std::abs(rep.class_total - rep.unrestricted);
  return rep;
}

}  // namespace menger
