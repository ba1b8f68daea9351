#include "menger/kernels.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

#include "menger/planes.hpp"

namespace menger {

int worker_count() {
  if (const char* env = std::getenv("MENGER_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return omp_get_max_threads();
}

double ordered_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

namespace {

// All combinations of `pool` with first element pool[first].
double combinations_from(const std::vector<Index>& pool, int m, std::size_t first, const CombinationFn& f) {
  const std::size_t P = pool.size();
  std::vector<std::size_t> pos(static_cast<std::size_t>(m));
  std::vector<Index> idx(static_cast<std::size_t>(m));
  pos[0] = first;
  for (int k = 1; k < m; ++k) pos[static_cast<std::size_t>(k)] = first + static_cast<std::size_t>(k);
  if (pos.back() >= P) return 0.0;
  double s = 0.0;
  while (true) {
    for (int k = 0; k < m; ++k) idx[static_cast<std::size_t>(k)] = pool[pos[static_cast<std::size_t>(k)]];
    s += f(idx);
    // advance positions 1..m-1 like an odometer
    int k = m - 1;
    while (k >= 1 && pos[static_cast<std::size_t>(k)] == P - static_cast<std::size_t>(m - k)) --k;
    if (k < 1) break;
    ++pos[static_cast<std::size_t>(k)];
    for (int q = k + 1; q < m; ++q) pos[static_cast<std::size_t>(q)] = pos[static_cast<std::size_t>(q - 1)] + 1;
  }
  return s;
}

BallTerm ball_term(const WeightedPointCloud& cloud, const Ball& B, int d) {
  const auto in_ball = cloud.query_ball(B.center, B.radius);
  const Beta2Result r = beta2(cloud, B, in_ball, d);
  return {r.value * r.value, r.mass};
}

}  // namespace

namespace serial {

std::vector<double> combination_partials(const std::vector<Index>& pool, int m, const CombinationFn& f) {
  if (m == 1) return map_indices(pool.size(), [&](std::size_t i) { return f({pool[i]}); });
  return map_indices(pool.size(), [&](std::size_t i) { return combinations_from(pool, m, i, f); });
}

std::vector<BallTerm> beta2_terms(const WeightedPointCloud& cloud, const std::vector<Ball>& balls, int d) {
  std::vector<BallTerm> out(balls.size());
  for (std::size_t b = 0; b < balls.size(); ++b) out[b] = ball_term(cloud, balls[b], d);
  return out;
}

}  // namespace serial

namespace omp {

std::vector<double> combination_partials(const std::vector<Index>& pool, int m, const CombinationFn& f) {
  if (m == 1) return map_indices(pool.size(), [&](std::size_t i) { return f({pool[i]}); });
  return map_indices(pool.size(), [&](std::size_t i) { return combinations_from(pool, m, i, f); });
}

std::vector<BallTerm> beta2_terms(const WeightedPointCloud& cloud, const std::vector<Ball>& balls, int d) {
  std::vector<BallTerm> out(balls.size());
  std::exception_ptr err;
  const auto count = static_cast<long long>(balls.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(worker_count())
  for (long long b = 0; b < count; ++b) {
    try {
      out[static_cast<std::size_t>(b)] = ball_term(cloud, balls[static_cast<std::size_t>(b)], d);
    } catch (...) {
#pragma omp critical(menger_kernel_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

}  // namespace omp

}  // namespace menger
