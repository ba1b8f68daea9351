#include "menger/experiments.hpp"

#include <algorithm>
#include <limits>

#include "menger/multiscale.hpp"
#include "menger/planes.hpp"

namespace menger {

Experiment parse_experiment(const std::string& name) {
  if (name == "thm12") return Experiment::Thm12;
  if (name == "thm13") return Experiment::Thm13;
  if (name == "prop11") return Experiment::Prop11;
  if (name == "prop43") return Experiment::Prop43;
  throw InputError("unknown experiment '" + name + "' (expected thm12, thm13, prop11 or prop43)");
}

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::Thm12: return "thm12";
    case Experiment::Thm13: return "thm13";
    case Experiment::Prop11: return "prop11";
    case Experiment::Prop43: return "prop43";
  }
  return "";
}

std::vector<Ball> experiment_balls(const WeightedPointCloud& cloud, int count, double lo, double hi, std::uint64_t seed) {
  if (cloud.size() == 0) throw EmptyRestrictionError("experiment_balls: empty cloud");
  if (!(lo > 0.0 && lo <= hi)) throw std::invalid_argument("experiment_balls: need 0 < lo <= hi");
  const CounterRng rng = CounterRng(seed).substream(0x62616c6c);
  const double diam = cloud.support_diameter();
  std::vector<Ball> out;
  for (int b = 0; b < count; ++b) {
    const auto i = static_cast<Index>(rng.below(2 * static_cast<std::uint64_t>(b), static_cast<std::uint64_t>(cloud.size())));
    const double u = rng.uniform(2 * static_cast<std::uint64_t>(b) + 1);
    out.emplace_back(cloud.point(i), (lo + (hi - lo) * u) * diam);
  }
  return out;
}

namespace {

double safe_ratio(double num, double den, bool& zero_over_zero, bool& infinite) {
  if (den > 0.0) return num / den;
  if (num > 0.0) {
    infinite = true;
    return std::numeric_limits<double>::infinity();
  }
  zero_over_zero = true;
  return 0.0;
}

}  // namespace

std::vector<RatioRow> ratio_table(const WeightedPointCloud& cloud, const RatioParams& P) {
  const auto balls = experiment_balls(cloud, P.n_balls, P.radius_lo, P.radius_hi, P.seed);
  EstimatorOptions eo = P.estimator;
  eo.d = P.d;
  std::vector<RatioRow> rows;

  std::optional<MultiresolutionFamily> F;
  if (P.experiment != Experiment::Prop11) {
    const Ball whole(cloud.point(0), std::max(cloud.support_diameter(), 1e-300));
    F = MultiresolutionFamily::build_for(cloud, P.alpha0, whole, P.seed);
  }

  for (std::size_t b = 0; b < balls.size(); ++b) {
    const Ball& B = balls[b];
    RatioRow base;
    base.ball = static_cast<int>(b);
    base.center = B.center;
    base.radius = B.radius;
    switch (P.experiment) {
      case Experiment::Thm12:
      case Experiment::Thm13: {
        RatioRow r = base;
        const MCEstimate c = continuous_curvature_sq(cloud, B, eo);
        r.lhs = c.estimate;
        r.lhs_std_error = c.std_error;
        r.lhs_exact = c.exact;
        r.flatness = jones_flatness_discrete(cloud, B, *F, P.d, eo.parallel).total;
        r.mass = ball_mass(cloud, B);
        r.rhs = P.experiment == Experiment::Thm12 ? r.flatness : r.mass;
        r.ratio = safe_ratio(r.lhs, r.rhs, r.zero_over_zero, r.infinite);
        bool z = false, inf = false;
        r.ratio_combined = safe_ratio(r.lhs, std::max(r.flatness, r.mass), z, inf);
        rows.push_back(r);
        break;
      }
      case Experiment::Prop11: {
        for (double lam : P.lambdas) {
          RatioRow r = base;
          r.lambda = lam;
          const Prop11Result p = prop11_ratio(cloud, B.center, B.radius, lam, eo);
          r.lhs = p.lhs.estimate;
          r.lhs_std_error = p.lhs.std_error;
          r.lhs_exact = p.lhs.exact;
          r.mass = p.mass;
          r.rhs = p.beta2sq * p.mass;
          r.ratio = p.ratio;
          r.zero_over_zero = p.zero_over_zero;
          r.infinite = p.infinite;
          rows.push_back(r);
        }
        break;
      }
      case Experiment::Prop43: {
        RatioRow r = base;
        r.lhs = jones_flatness_discrete(cloud, B, *F, P.d, eo.parallel).total;
        ContinuousFlatnessOptions co;
        co.rho = P.rho;
        co.seed = P.seed;
        co.max_points = 400;
        r.rhs = jones_flatness_continuous(cloud, B.blown_up(6.0), P.d, co, eo.parallel).total;
        r.mass = ball_mass(cloud, B);
        r.ratio = safe_ratio(r.lhs, r.rhs, r.zero_over_zero, r.infinite);
        rows.push_back(r);
        break;
      }
    }
  }
  return rows;
}

}  // namespace menger
