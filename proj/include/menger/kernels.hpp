#pragma once

// Hot loops in two flavours: serial:: reference implementations and omp::
// OpenMP versions. Both produce bit-identical results: per-item values are
// computed independently and reduced serially in index order.

#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

#include "menger/measure.hpp"

namespace menger {

/// Worker cap: MENGER_THREADS if set and positive, else the OpenMP default.
int worker_count();

/// Left-to-right sum.
double ordered_sum(const std::vector<double>& v);

namespace serial {

template <class T, class F>
std::vector<T> map_items(std::size_t n, F&& f) {
  std::vector<T> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
  return out;
}

template <class F>
std::vector<double> map_indices(std::size_t n, F&& f) {
  return map_items<double>(n, std::forward<F>(f));
}

}  // namespace serial

namespace omp {

template <class T, class F>
std::vector<T> map_items(std::size_t n, F&& f) {
  std::vector<T> out(n);
  std::exception_ptr err;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 16) num_threads(worker_count())
  for (long long i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(menger_kernel_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

template <class F>
std::vector<double> map_indices(std::size_t n, F&& f) {
  return map_items<double>(n, std::forward<F>(f));
}

}  // namespace omp

template <class T, class F>
std::vector<T> map_items(std::size_t n, bool parallel, F&& f) {
  return parallel ? omp::map_items<T>(n, std::forward<F>(f)) : serial::map_items<T>(n, std::forward<F>(f));
}

template <class F>
std::vector<double> map_indices(std::size_t n, bool parallel, F&& f) {
  return map_items<double>(n, parallel, std::forward<F>(f));
}

/// Sum of f(i_0 < i_1 < ... < i_{m-1}) over strictly increasing index
/// combinations of `pool`. Returns the per-first-index partial sums; the
/// caller reduces them in order.
using CombinationFn = std::function<double(const std::vector<Index>&)>;

namespace serial {
std::vector<double> combination_partials(const std::vector<Index>& pool, int m, const CombinationFn& f);
}
namespace omp {
std::vector<double> combination_partials(const std::vector<Index>& pool, int m, const CombinationFn& f);
}

/// beta_2^2 and mass of each ball.
struct BallTerm {
  double beta2sq = 0.0;
  double mass = 0.0;
};

namespace serial {
std::vector<BallTerm> beta2_terms(const WeightedPointCloud& cloud, const std::vector<Ball>& balls, int d);
}
namespace omp {
std::vector<BallTerm> beta2_terms(const WeightedPointCloud& cloud, const std::vector<Ball>& balls, int d);
}

}  // namespace menger
