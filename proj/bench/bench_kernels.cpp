// Serial vs OpenMP timings of the hot kernels. Results of both variants are
// compared bit-for-bit; a mismatch exits with status 1.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "menger/estimators.hpp"
#include "menger/kernels.hpp"
#include "menger/multiscale.hpp"

using namespace menger;

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool report(const std::string& name, double serial_s, double omp_s, bool same) {
  std::printf("%-28s serial %8.3f s   omp %8.3f s   speedup %5.2fx   %s\n", name.c_str(), serial_s, omp_s,
              serial_s / omp_s, same ? "identical" : "MISMATCH");
  return same;
}

}  // namespace

int main() {
  std::printf("workers: %d\n", worker_count());
  bool ok = true;

  {
    const auto cloud = gen_sphere(3, 20000, 1);
    const auto F = MultiresolutionFamily::build_for(cloud, 0.25, Ball(cloud.point(0), 2.0), 0);
    std::vector<Ball> balls;
    for (const auto& fb : local_family(F, Ball(cloud.point(0), 2.0))) balls.push_back(fb.ball);
    std::vector<BallTerm> a, b;
    const double ts = seconds([&] { a = serial::beta2_terms(cloud, balls, 2); });
    const double to = seconds([&] { b = omp::beta2_terms(cloud, balls, 2); });
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i].beta2sq == b[i].beta2sq && a[i].mass == b[i].mass;
    ok &= report("beta2_terms (" + std::to_string(balls.size()) + " balls)", ts, to, same);
  }

  {
    const auto cloud = gen_four_corner_cantor(4);
    std::vector<Index> pool(static_cast<std::size_t>(cloud.size()));
    for (Index i = 0; i < cloud.size(); ++i) pool[static_cast<std::size_t>(i)] = i;
    const CombinationFn f = [&](const std::vector<Index>& idx) {
      return discrete_curvature_sq(tuple_from_indices(cloud, idx));
    };
    std::vector<double> a, b;
    const double ts = seconds([&] { a = serial::combination_partials(pool, 3, f); });
    const double to = seconds([&] { b = omp::combination_partials(pool, 3, f); });
    ok &= report("exact triple sum (256 pts)", ts, to, ordered_sum(a) == ordered_sum(b));
  }

  {
    const auto cloud = gen_lipschitz_graph(2, 3, 1.0, 20000, 2);
    EstimatorOptions o;
    o.d = 2;
    o.n_samples = 400000;
    o.mode = EstimatorMode::MonteCarlo;
    MCEstimate a, b;
    o.parallel = false;
    const double ts = seconds([&] { a = continuous_curvature_sq(cloud, std::nullopt, o); });
    o.parallel = true;
    const double to = seconds([&] { b = continuous_curvature_sq(cloud, std::nullopt, o); });
    ok &= report("Monte Carlo c_2^2 (4e5)", ts, to, a.estimate == b.estimate && a.std_error == b.std_error);
  }

  return ok ? 0 : 1;
}
