#include "menger/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "menger/estimators.hpp"
#include "menger/kernels.hpp"
#include "menger/multiscale.hpp"
#include "menger/planes.hpp"
#include "menger/sequences.hpp"

namespace menger {

bool VerifyReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass(); });
}

std::vector<std::string> VerifyReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.pass()) out.push_back(c.suite + "." + c.name);
  return out;
}

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> suites{"geometry", "sequences", "multiscale", "inequalities"};
  return suites;
}

namespace {

// Rounding slack for inequalities that hold exactly in real arithmetic.
constexpr double kSlack = 1e-12;

struct Check {
  CheckRecord rec;
  Check(std::string suite, std::string name, double threshold) {
    rec.suite = std::move(suite);
    rec.name = std::move(name);
    rec.threshold = threshold;
  }
  void observe(double v) {
    if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
    rec.worst = std::max(rec.worst, v);
  }
  void count(std::int64_t n = 1) { rec.cases += n; }
  void fail(const std::string& what) {
    if (rec.violations++ == 0) rec.detail = what;
  }
  /// One case whose statistic must not exceed the threshold.
  void bounded(double v, const std::string& where) {
    count();
    observe(v);
    if (!(v <= rec.threshold)) fail(where);
  }
  void require(bool ok, const std::string& where) {
    count();
    if (!ok) fail(where);
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string case_id(const char* what, std::int64_t i) { return std::string(what) + " #" + std::to_string(i); }

Vector gaussian(int D, const CounterRng& rng, std::uint64_t& ctr) {
  Vector v(D);
  for (int k = 0; k < D; ++k) v(k) = rng.normal(ctr++);
  return v;
}

Vector unit_vector(int D, const CounterRng& rng) {
  std::uint64_t ctr = 0;
  Vector v;
  do v = gaussian(D, rng, ctr);
  while (v.norm() == 0.0);
  return v / v.norm();
}

Tuple random_simplex(int d, int D, const CounterRng& rng) {
  std::uint64_t ctr = 0;
  std::vector<Vector> pts;
  for (int i = 0; i < d + 2; ++i) pts.push_back(gaussian(D, rng, ctr));
  return Tuple(std::move(pts));
}

// Simplex in S^n_{k,p} based at the origin with |x_1| = 1.
std::optional<Tuple> planted_simplex(int d, int k, int p, int n, double alpha0, const CounterRng& rng, std::uint64_t id) {
  const Vector x0 = Vector::Zero(d + 1);
  const Vector x1 = unit_vector(d + 1, rng.substream(id).substream(0));
  return sample_handled_simplex(x0, x1, d, k, p, n, alpha0, shell_source(rng.substream(1)), id);
}

// Piece satisfying only the annulus constraints.
std::vector<Vector> shell_piece(const Tuple& X, int k, int d, double alpha0, const CandidateSource& src, std::uint64_t id) {
  std::vector<Vector> Y;
  const double mx = max_at0(X);
  for (int q = 1; q <= k * d; ++q) {
    const Annulus A = annulus(X[0], mx, k - ceil_div(q, d), alpha0);
    for (std::uint64_t a = 0;; ++a) {
      auto y = src(A, id, static_cast<std::uint64_t>(q), a);
      if (y && A.contains(*y)) {
        Y.push_back(*y);
        break;
      }
    }
  }
  return Y;
}

std::vector<Vector> shell_short_piece(const Tuple& X, int k, int n, double alpha0, const CandidateSource& src,
                                      std::uint64_t id) {
  std::vector<Vector> Z;
  const Annulus A = annulus(X[0], max_at0(X), k, alpha0);
  for (long s = 1; s <= N_n(n); ++s)
    for (std::uint64_t a = 0;; ++a) {
      auto z = src(A, id, static_cast<std::uint64_t>(s), a);
      if (z && A.contains(*z)) {
        Z.push_back(*z);
        break;
      }
    }
  return Z;
}

using Labels = std::vector<std::string>;

std::string render(const Labels& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + t[i];
  return s + ")";
}

Labels labels(const std::string& p, int from, int to) {
  Labels out;
  for (int i = from; i <= to; ++i) out.push_back(p + std::to_string(i));
  return out;
}

// --- geometry ------------------------------------------------------------------------

void geometry_suite(const VerifyConfig& cfg, std::vector<CheckRecord>& out) {
  const CounterRng rng = CounterRng(cfg.seed).substream(0x67656f);
  const int n_cases = 2000;

  Check comparability("geometry", "menger_comparability", 1e-9);
  Check equilateral("geometry", "equilateral_upper_bound", 1e-12);
  for (int s = 0; s < n_cases; ++s) {
    const Tuple T = random_simplex(1, 2 + s % 2, rng.substream(1).substream(static_cast<std::uint64_t>(s)));
    const double c1 = discrete_curvature_sq(T);
    const double cm = menger_curvature_1d(T);
    const double cm2 = cm * cm;
    const double excess = std::max(cm2 / 12.0 - c1, c1 - cm2 / 4.0) / cm2;
    comparability.bounded(std::max(0.0, excess), case_id("triangle", s));
  }
  {
    const Tuple E{vec({0.0, 0.0}), vec({1.0, 0.0}), vec({0.5, std::sqrt(3.0) / 2.0})};
    const double cm = menger_curvature_1d(E);
    equilateral.bounded(std::abs(discrete_curvature_sq(E) - cm * cm / 4.0) / (cm * cm / 4.0), "equilateral");
  }

  Check product("geometry", "product_formula", 1e-9);
  Check range("geometry", "polar_sine_range", 1.0 + 1e-12);
  Check identity("geometry", "symmetrization_identity", 1e-9);
  for (int d = 1; d <= 3; ++d)
    for (int s = 0; s < n_cases; ++s) {
      const Tuple X = random_simplex(d, d + 1 + s % 2, rng.substream(2).substream(static_cast<std::uint64_t>(d * n_cases + s)));
      const double p0 = polar_sine(X, 0);
      for (std::size_t i = 0; i < X.size(); ++i) range.bounded(polar_sine(X, i), case_id("simplex", s));
      for (std::size_t i = 1; i <= static_cast<std::size_t>(d + 1); ++i) {
        double rhs = elevation_sine(X, i) * polar_sine(remove_coordinate(X, i), 0);
        if (cfg.plant_violation && d == 2 && s == 0 && i == 1) rhs *= 1.01;
        product.bounded(std::abs(p0 - rhs) / p0, "d=" + std::to_string(d) + " " + case_id("simplex", s) + " i=" + std::to_string(i));
      }
      const double c2 = discrete_curvature_sq(X);
      identity.bounded(std::abs(c2 - discrete_curvature_sq_volume_form(X)) / c2, case_id("simplex", s));
    }

  Check before("geometry", "height_bound", 1.0 + kSlack);
  Check height_dev("geometry", "height_deviation", 1.0 + kSlack);
  Check deviation("geometry", "deviation_bound", 1.0 + kSlack);
  for (int d = 1; d <= 3; ++d)
    for (int s = 0; s < n_cases; ++s) {
      const int D = d + 1 + s % 2;
      const CounterRng r = rng.substream(3).substream(static_cast<std::uint64_t>(d * n_cases + s));
      const AffinePlane L = random_plane(d, D, r, 0);
      Tuple X = random_simplex(d, D, r.substream(1));
      if (s % 2 == 0) {  // near-planar: project onto L and perturb slightly
        std::vector<Vector> pts;
        std::uint64_t ctr = 0;
        for (const auto& x : X) pts.push_back(L.project(x) + 1e-3 * gaussian(D, r.substream(2), ctr));
        X = Tuple(std::move(pts));
      }
      const double p0 = polar_sine(X, 0);
      const double sc = scale_at0(X), dm = diam(X), mh = min_height(X), D2 = deviation_D2(X, L);
      const std::string where = "d=" + std::to_string(d) + " " + case_id("pair", s);
      before.bounded(p0 / (2.0 * (d + 1) / sc * mh / dm), where);
      height_dev.bounded(mh / (std::sqrt(2.0) * ceil_div(d + 1, 2) * D2), where);
      deviation.bounded(p0 / (std::sqrt(2.0) * (d + 1) * (d + 2) * D2 / (sc * dm)), where);
    }

  Check similarity("geometry", "similarity_invariance", 1e-9);
  for (int s = 0; s < 500; ++s) {
    const int d = 1 + s % 3, D = d + 1;
    const CounterRng r = rng.substream(4).substream(static_cast<std::uint64_t>(s));
    const Tuple X = random_simplex(d, D, r);
    Eigen::MatrixXd G(D, D);
    std::uint64_t ctr = 0;
    for (int a = 0; a < D; ++a) G.col(a) = gaussian(D, r.substream(1), ctr);
    const Eigen::MatrixXd R = Eigen::HouseholderQR<Eigen::MatrixXd>(G).householderQ();
    const Vector t = gaussian(D, r.substream(2), ctr);
    std::vector<Vector> moved, scaled;
    for (const auto& x : X) {
      moved.push_back(R * x + t);
      scaled.push_back(2.0 * x);
    }
    const Tuple M(std::move(moved)), S(std::move(scaled));
    double err = std::abs(polar_sine(M, 0) - polar_sine(X, 0));
    err = std::max(err, std::abs(scale_at0(M) - scale_at0(X)));
    err = std::max(err, std::abs(polar_sine(S, 0) - polar_sine(X, 0)));
    const double c = discrete_curvature(X);
    err = std::max(err, std::abs(discrete_curvature(S) * std::pow(2.0, d * (d + 1) / 2.0) - c) / c);
    similarity.bounded(err, case_id("simplex", s));
  }

  for (auto* c : {&comparability, &equilateral, &product, &range, &identity, &before, &height_dev, &deviation, &similarity})
    out.push_back(c->rec);
}

// --- sequences -----------------------------------------------------------------------

void sequences_suite(const VerifyConfig& cfg, std::vector<CheckRecord>& out) {
  const CounterRng rng = CounterRng(cfg.seed).substream(0x736571);

  Check cst("sequences", "constants", 0.0);
  {
    const Constants c1 = constants(1, 1.0), c1b = constants(1, 3.0);
    cst.require(c1.Cp == 1.0 && c1.alpha0 == 0.25 && c1b.Cp == 1.0 && c1b.alpha0 == 1.0 / 36.0, "d=1");
    for (int d = 2; d <= 4; ++d) {
      const Constants c = constants(d, 1.0);
      cst.require(c.min_resolves_as_stated && std::abs(c.alpha0 - 1.0 / (2.0 * c.Cp * c.Cp)) <= 1e-15 * c.alpha0,
                  "d=" + std::to_string(d));
    }
    const Constants c2 = constants(2, 1.0);
    cst.require(c2.Cp > 353.0 && c2.Cp < 353.2, "d=2 Cp=" + fmt(c2.Cp));
  }

  Check bar("sequences", "bar_index", 0.0);
  bar.require(bar_index(4, 3) == 4 && bar_index(5, 3) == 2, "d=3");
  for (long a = -3; a <= 20; ++a) {
    bar.require(bar_index(a, 1) == 2, "d=1 a=" + std::to_string(a));
    for (int d = 2; d <= 5; ++d) {
      const int b = bar_index(a, d);
      bar.require(b >= 2 && b <= d + 1 && ((b - a) % d + d) % d == 0, "d=" + std::to_string(d) + " a=" + std::to_string(a));
    }
  }

  Check golden("sequences", "golden_lists", 0.0);
  {
    const Labels X = labels("x", 0, 4), Y = labels("y", 1, 6);
    const auto aux = auxiliary_sequence(X, Y, 2, 3);
    const auto main = well_scaled_sequence(X, Y, 2, 3);
    const std::vector<std::string> want_aux{
        "(x0,x1,x2,x3,x4)", "(x0,x1,y1,x3,x4)", "(x0,x1,y1,y2,x4)", "(x0,x1,y1,y2,y3)",
        "(x0,x1,y4,y2,y3)", "(x0,x1,y4,y5,y3)", "(x0,x1,y4,y5,y6)"};
    const std::vector<std::string> want_main{"(x0,y1,x2,x3,x4)", "(x0,y2,y1,x3,x4)", "(x0,y3,y1,y2,x4)",
                                             "(x0,y4,y1,y2,y3)", "(x0,y5,y4,y2,y3)", "(x0,y6,y4,y5,y3)",
                                             "(x0,x1,y4,y5,y6)"};
    for (std::size_t q = 0; q < want_aux.size(); ++q)
      golden.require(render(aux[q]) == want_aux[q], "auxiliary q=" + std::to_string(q));
    for (std::size_t q = 0; q < want_main.size(); ++q)
      golden.require(render(main[q]) == want_main[q], "well-scaled q=" + std::to_string(q + 1));

    const auto tree = rake_tree(X, labels("z", 1, 3), 3, 3);
    const std::vector<std::vector<std::string>> want_tree{
        {"(x0,x1,x2,x3,x4)"},
        {"(x0,x1,x2,z1,x4)", "(x0,x1,x3,z1,x4)"},
        {"(x0,x1,z2,z1,x4)", "(x0,x2,z2,z1,x4)", "(x0,x1,z3,z1,x4)", "(x0,x3,z3,z1,x4)"}};
    for (std::size_t j = 0; j < want_tree.size(); ++j)
      for (std::size_t m = 0; m < want_tree[j].size(); ++m)
        golden.require(render(tree[j][m]) == want_tree[j][m], "tree j=" + std::to_string(j) + " m=" + std::to_string(m + 1));

    const Labels X1 = labels("x", 0, 2), Y1 = labels("y", 1, 3);
    const auto main1 = well_scaled_sequence(X1, Y1, 3, 1);
    golden.require(render(main1[0]) == "(x0,y1,x2)" && render(main1[1]) == "(x0,y2,y1)" &&
                       render(main1[2]) == "(x0,y3,y2)" && render(main1[3]) == "(x0,x1,y3)",
                   "d=1 well-scaled");
  }

  Check lengths("sequences", "augmented_lengths", 0.0);
  for (int d = 1; d <= 4; ++d)
    for (int k = 1; k <= 5; ++k) {
      const Labels X = labels("x", 0, d + 1), Y = labels("y", 1, k * d);
      lengths.require(static_cast<long>(X.size() + Y.size()) == N_k(k, d), "N_k d=" + std::to_string(d));
      const auto seq = well_scaled_sequence(X, Y, k, d);
      lengths.require(static_cast<int>(seq.size()) == k * d + 1, "sequence length");
    }
  for (int d = 2; d <= 4; ++d)
    for (int n = 2; n <= d; ++n) {
      const Labels X = labels("x", 0, d + 1), Z = labels("z", 1, static_cast<int>(N_n(n)));
      lengths.require(static_cast<long>(X.size() + Z.size()) == M_n(n, d), "M_n");
      lengths.require(rake_sequence(X, Z, n, d).size() == (std::size_t{1} << (n - 1)), "leaf count");
    }

  Check bounds("sequences", "well_scaled_bounds", 0.0);
  Check rake("sequences", "rake_property", 0.0);
  Check classes("sequences", "planted_classification", 0.0);
  std::uint64_t id = 0;
  for (int d = 1; d <= 3; ++d) {
    const double a0 = constants(d, 1.0).alpha0;
    for (int k = 1; k <= 5; ++k)
      for (int p = 1; p <= 2; ++p)
        for (int rep = 0; rep < 10; ++rep, ++id) {
          const auto X = planted_simplex(d, k, p, 1, a0, rng.substream(1), id);
          if (!X) {
            bounds.require(false, "planted simplex unavailable");
            continue;
          }
          auto Y = shell_piece(*X, k, d, a0, shell_source(rng.substream(2)), id);
          if (cfg.plant_violation && id == 0) Y[0] *= 1.0 / a0;
          const std::string where = "d=" + std::to_string(d) + " k=" + std::to_string(k) + " p=" + std::to_string(p);
          const CheckResult r = check_well_scaled_bounds(well_scaled_sequence(*X, Y, k, d), *X, k, d, a0);
          bounds.require(r.ok, where + " " + r.message);
          if (k >= 3) {
            const ScaleClass c = classify_scale(*X, a0, p);
            classes.require(c.kind == ScaleClass::Kind::Scaled && c.handle_count() == 1 && c.canonical() &&
                                in_scale_window(*X, a0, k, p),
                            where);
          }
        }
  }
  for (int d = 2; d <= 3; ++d) {
    const double a0 = constants(d, 1.0).alpha0;
    for (int n = 2; n <= d; ++n)
      for (int k = 1; k <= 5; ++k)
        for (int rep = 0; rep < 10; ++rep, ++id) {
          const auto X = planted_simplex(d, k, 1, n, a0, rng.substream(3), id);
          if (!X) {
            rake.require(false, "planted simplex unavailable");
            continue;
          }
          const auto Z = shell_short_piece(*X, k, n, a0, shell_source(rng.substream(4)), id);
          const std::string where = "d=" + std::to_string(d) + " n=" + std::to_string(n) + " k=" + std::to_string(k);
          const CheckResult ra = check_short_piece_annulus(*X, Z, k, a0);
          const CheckResult rr = check_rake_property(rake_sequence(*X, Z, n, d), *X, k, a0);
          rake.require(ra.ok && rr.ok, where + " " + ra.message + rr.message);
          if (k >= 3) {
            const ScaleClass c = classify_scale(*X, a0, 1);
            classes.require(c.handle_count() == static_cast<std::size_t>(n) && c.canonical() && c.k == k, where);
          }
        }
  }

  for (auto* c : {&cst, &bar, &golden, &lengths, &bounds, &rake, &classes}) out.push_back(c->rec);
}

// --- multiscale ----------------------------------------------------------------------

void multiscale_suite(const VerifyConfig& cfg, std::vector<CheckRecord>& out) {
  const double a0 = 0.25;
  Check sep("multiscale", "net_separation", 0.0);
  Check cover("multiscale", "net_covering", 0.0);
  Check disjoint("multiscale", "quarter_disjointness", 0.0);
  Check family_cover("multiscale", "family_covering", 0.0);
  Check sandwich("multiscale", "partition_sandwich", 0.0);

  const std::vector<WeightedPointCloud> clouds{gen_plane_patch(2, 3, 400, cfg.seed), gen_sphere(2, 400, cfg.seed + 1),
                                               gen_lipschitz_graph(1, 2, 1.0, 400, cfg.seed + 2)};
  for (std::size_t c = 0; c < clouds.size(); ++c) {
    const auto& cloud = clouds[c];
    const Index N = cloud.size();
    const int m0 = m_of_diameter(cloud.support_diameter(), a0);
    const auto order = net_ordering(N, cfg.seed + c);
    for (int n = m0; n < m0 + 3; ++n) {
      NetLevel L = build_level(cloud, n, a0, order);
      if (cfg.plant_violation && c == 0 && n == m0 && L.net.size() > 1) L.net.push_back(L.net.front());
      const double u = L.unit;
      const std::string where = "cloud " + std::to_string(c) + " n=" + std::to_string(n);
      for (std::size_t a = 0; a < L.net.size(); ++a)
        for (std::size_t b = a + 1; b < L.net.size(); ++b)
          sep.require((cloud.point(L.net[a]) - cloud.point(L.net[b])).norm() > u, where);
      for (Index i = 0; i < N; ++i) {
        const Vector x = cloud.point(i);
        cover.require(std::any_of(L.net.begin(), L.net.end(), [&](Index e) { return (x - cloud.point(e)).norm() <= u; }), where);
        family_cover.require(std::any_of(L.balls.begin(), L.balls.end(), [&](const Ball& B) { return B.contains(x); }), where);
        const int j = L.partition[static_cast<std::size_t>(i)];
        bool ok = j >= 0 && j < static_cast<int>(L.balls.size());
        if (ok) {
          const Vector& cj = L.balls[static_cast<std::size_t>(j)].center;
          ok = (x - cj).norm() <= 3.0 * u;  // P_{n,j} inside 3/4 B_{n,j}
          for (std::size_t jj = 0; jj < L.balls.size() && ok; ++jj)
            if ((x - L.balls[jj].center).norm() <= u) ok = static_cast<int>(jj) == j;  // 1/4 B inside P
        }
        sandwich.require(ok, where + " point " + std::to_string(i));
      }
      for (std::size_t a = 0; a < L.balls.size(); ++a)
        for (std::size_t b = a + 1; b < L.balls.size(); ++b)
          disjoint.require((L.balls[a].center - L.balls[b].center).norm() > 2.0 * u, where);
    }
  }

  Check flat("multiscale", "flat_vanishing", 1e-10);
  {
    const auto cloud = gen_plane_patch(2, 3, 300, cfg.seed);
    const Ball Q(cloud.point(0), cloud.support_diameter());
    const auto F = MultiresolutionFamily::build_for(cloud, a0, Q, 0);
    const FlatnessReport J = jones_flatness_discrete(cloud, Q, F, 2);
    for (const auto& t : J.terms) flat.bounded(std::sqrt(t.beta2sq), "beta2 level " + std::to_string(t.level));
    flat.bounded(J.total, "discrete flatness");
    EstimatorOptions o;
    o.d = 2;
    o.n_samples = 4000;
    o.mode = EstimatorMode::MonteCarlo;
    o.seed = cfg.seed;
    flat.bounded(continuous_curvature_sq(cloud, std::nullopt, o).estimate, "curvature estimate");
  }

  Check decomp("multiscale", "class_decomposition", 1e-12);
  {
    const auto cloud = gen_sphere(2, 500, cfg.seed + 3);
    const auto r = decomposition_check(cloud, std::nullopt, 1, a0, 8, 4000, cfg.seed, true);
    decomp.bounded(r.max_abs_deviation / std::max(r.unrestricted, 1e-300), "relative deviation");
    decomp.require(r.partition_ok, "partition");
  }

  for (auto* c : {&sep, &cover, &disjoint, &family_cover, &sandwich, &flat, &decomp}) out.push_back(c->rec);
}

// --- inequalities --------------------------------------------------------------------

// x0 uniform from the cloud, x1 a cloud point at distance within [lo, hi].
std::optional<std::pair<Vector, Vector>> cloud_pair(const WeightedPointCloud& cloud, double lo, double hi,
                                                    const CounterRng& rng) {
  for (std::uint64_t a = 0; a < 32; ++a) {
    const Index i = static_cast<Index>(rng.below(2 * a, static_cast<std::uint64_t>(cloud.size())));
    const Vector x0 = cloud.point(i);
    std::vector<Index> cand;
    for (Index c : cloud.query_ball(x0, hi))
      if ((cloud.point(c) - x0).norm() >= lo) cand.push_back(c);
    if (cand.empty()) continue;
    std::sort(cand.begin(), cand.end());
    return std::make_pair(x0, Vector(cloud.point(cand[rng.below(2 * a + 1, cand.size())])));
  }
  return std::nullopt;
}

void inequalities_suite(const VerifyConfig& cfg, std::vector<CheckRecord>& out) {
  const CounterRng rng = CounterRng(cfg.seed).substream(0x696e65);
  Check member("inequalities", "sampler_membership", 0.0);
  Check ws("inequalities", "well_scaled_inequality", 1.0 + kSlack);
  Check rk("inequalities", "rake_inequality", 1.0 + kSlack);
  Check sampling("inequalities", "sampler_failure_rate", 1.0);
  std::int64_t sampler_failures = 0;

  struct Setting {
    int d;
    const WeightedPointCloud* cloud;  // nullptr: shell source around the origin
    double alpha0, Cp;
    int k_max;
  };
  const auto circle = gen_sphere(2, 20000, cfg.seed);
  const auto graph = gen_lipschitz_graph(2, 3, 1.0, 20000, cfg.seed);
  const Constants c1 = constants(1, 1.0), c2 = constants(2, 1.0), c3 = constants(3, 1.0);
  const std::vector<Setting> settings{{1, &circle, c1.alpha0, c1.Cp, 3},
                                      {2, &graph, 0.5, c2.Cp, 2},
                                      {2, nullptr, c2.alpha0, c2.Cp, 4},
                                      {3, nullptr, c3.alpha0, c3.Cp, 3}};
  std::uint64_t id = 0;
  for (std::size_t si = 0; si < settings.size(); ++si) {
    const Setting& S = settings[si];
    const CounterRng r = rng.substream(si);
    const CandidateSource src = S.cloud ? cloud_source(*S.cloud, r.substream(1)) : shell_source(r.substream(1));
    for (int k = 1; k <= S.k_max; ++k)
      for (int n = 1; n <= S.d; ++n)
        for (int rep = 0; rep < 20; ++rep, ++id) {
          const std::string where = "setting " + std::to_string(si) + " k=" + std::to_string(k) + " n=" + std::to_string(n);
          std::optional<Tuple> X;
          if (S.cloud) {
            const auto pr = cloud_pair(*S.cloud, 0.3, 0.6, r.substream(2).substream(id));
            if (pr) X = sample_handled_simplex(pr->first, pr->second, S.d, k, 1, n, S.alpha0, src, id);
          } else {
            X = planted_simplex(S.d, k, 1, n, S.alpha0, r.substream(3), id);
          }
          if (!X) {
            sampling.count();
            ++sampler_failures;
            continue;
          }
          if (n == 1) {
            const PieceSample ps = sample_well_scaled_piece(*X, k, S.d, S.Cp, S.alpha0, src, id);
            sampling.count();
            if (!ps.piece) {
              ++sampler_failures;
              continue;
            }
            auto Y = *ps.piece;
            if (cfg.plant_violation && id == 0) Y.back() = X->at(0) + 1e-300 * (Y.back() - X->at(0));
            const CheckResult m = is_in_augmented_set(*X, Y, S.Cp, k, S.d);
            const CheckResult a = check_piece_annuli(*X, Y, k, S.d, S.alpha0);
            member.require(m.ok && a.ok, where + " " + m.message + a.message);
            const InequalityResult q = multiscale_inequality_check(*X, Y, S.Cp, k, S.d);
            ws.bounded(q.rhs > 0.0 ? q.lhs / q.rhs : (q.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0), where);
          } else {
            const PieceSample ps = sample_short_scale_piece(*X, k, n, S.d, S.Cp, S.alpha0, src, id);
            sampling.count();
            if (!ps.piece) {
              ++sampler_failures;
              continue;
            }
            const auto& Z = *ps.piece;
            const CheckResult m = is_in_overline_set(*X, Z, S.Cp, n, S.d);
            const CheckResult a = check_short_piece_annulus(*X, Z, k, S.alpha0);
            member.require(m.ok && a.ok, where + " " + m.message + a.message);
            const InequalityResult q = rake_inequality_check(*X, Z, S.Cp, n, S.d);
            rk.bounded(q.rhs > 0.0 ? q.lhs / q.rhs : (q.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0), where);
          }
        }
  }
  // Exhausted attempts are surfaced as a rate, not as violations.
  sampling.rec.worst = sampling.rec.cases ? static_cast<double>(sampler_failures) / static_cast<double>(sampling.rec.cases) : 0.0;

  Check conc("inequalities", "concentration_d1", 0.0);
  {
    const auto cloud = gen_sphere(2, 2000, cfg.seed + 5);
    double worst_gap = 0.0;
    for (int s = 0; s < 20; ++s) {
      const CounterRng r = rng.substream(10).substream(static_cast<std::uint64_t>(s));
      std::vector<Vector> pts;
      for (int i = 0; i < 3; ++i) pts.push_back(cloud.point(static_cast<Index>(r.below(static_cast<std::uint64_t>(i), 2000))));
      const Tuple X(std::move(pts));
      const auto f = concentration_fraction(cloud, X, 1, 2, cloud.support_diameter(), 1.0);
      worst_gap = std::max(worst_gap, 1.0 - f.fraction);
      conc.require(f.fraction >= 0.99, case_id("configuration", s) + " fraction " + fmt(f.fraction));
    }
    conc.rec.worst = worst_gap;
  }

  Check mass("inequalities", "annulus_mass_upper", 0.0);
  {
    const auto cloud = gen_plane_patch(2, 3, 3000, cfg.seed + 6);
    const double a0 = 0.5;
    for (int s = 0; s < 10; ++s) {
      const CounterRng r = rng.substream(11).substream(static_cast<std::uint64_t>(s));
      const auto X = sample_handled_simplex(cloud.point(static_cast<Index>(r.below(0, 3000))),
                                            cloud.point(static_cast<Index>(r.below(1, 3000))), 2, 2, 1, 1, a0,
                                            cloud_source(cloud, r), static_cast<std::uint64_t>(s));
      if (!X) continue;
      const auto g = annulus_conditional_mass(cloud, *X, 1, 2, 2, c2.Cp, a0);
      mass.require(g.g <= g.annulus_mass && g.annulus_mass <= g.ball_mass, case_id("configuration", s));
    }
  }

  Check mono("inequalities", "ulambda_monotone", 0.0);
  Check planar("inequalities", "planar_prop11_zero", 0.0);
  {
    const auto cloud = gen_sphere(2, 1000, cfg.seed + 7);
    EstimatorOptions o;
    o.d = 1;
    o.n_samples = 5000;
    o.mode = EstimatorMode::MonteCarlo;
    o.seed = cfg.seed;
    const Ball B(cloud.point(0), 0.8);
    double prev = std::numeric_limits<double>::infinity();
    for (double lam : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6}) {
      const double v = curvature_over_Ulambda(cloud, B, lam, o).estimate;
      mono.require(v <= prev, "lambda " + fmt(lam));
      prev = v;
    }
    const auto flat = gen_plane_patch(1, 2, 500, cfg.seed + 8);
    const Prop11Result p = prop11_ratio(flat, flat.point(0), 0.3, 0.2, o);
    planar.require(p.lhs.estimate <= 1e-10 && p.zero_over_zero && !p.infinite, "planar lhs " + fmt(p.lhs.estimate));
  }

  for (auto* c : {&member, &ws, &rk, &sampling, &conc, &mass, &mono, &planar}) out.push_back(c->rec);
}

}  // namespace

VerifyReport run_verify(const std::string& suite, const VerifyConfig& cfg) {
  static const std::map<std::string, void (*)(const VerifyConfig&, std::vector<CheckRecord>&)> runners{
      {"geometry", geometry_suite},
      {"sequences", sequences_suite},
      {"multiscale", multiscale_suite},
      {"inequalities", inequalities_suite}};
  VerifyReport r;
  r.suite = suite;
  r.seed = cfg.seed;
  if (suite == "all") {
    for (const auto& s : verify_suites()) runners.at(s)(cfg, r.checks);
    return r;
  }
  const auto it = runners.find(suite);
  if (it == runners.end()) throw InputError("unknown verify suite '" + suite + "'");
  it->second(cfg, r.checks);
  return r;
}

Json verify_report_json(const VerifyReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"suite", c.suite},
                      {"name", c.name},
                      {"pass", c.pass()},
                      {"cases", c.cases},
                      {"violations", c.violations},
                      {"worst", c.worst},
                      {"threshold", c.threshold},
                      {"detail", c.detail}});
  Json failures = Json::array();
  for (const auto& f : r.failures()) failures.push_back(f);
  return Json{{"suite", r.suite}, {"seed", r.seed}, {"pass", r.pass()}, {"failures", failures}, {"checks", checks}};
}

}  // namespace menger
