#include "menger/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "menger/estimators.hpp"
#include "menger/experiments.hpp"
#include "menger/multiscale.hpp"
#include "menger/planes.hpp"
#include "menger/report_json.hpp"
#include "menger/sequences.hpp"
#include "menger/verify.hpp"

namespace menger {

Ball parse_ball(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) throw InputError("ball '" + text + "': expected cx,cy,...:r");
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != s.size() || !std::isfinite(v)) throw InputError("ball '" + text + "': bad number '" + s + "'");
    return v;
  };
  std::vector<double> c;
  std::stringstream ss(text.substr(0, colon));
  for (std::string tok; std::getline(ss, tok, ',');) c.push_back(number(tok));
  if (c.empty()) throw InputError("ball '" + text + "': missing center");
  const double r = number(text.substr(colon + 1));
  if (!(r > 0.0)) throw InputError("ball '" + text + "': radius must be positive");
  Vector center(static_cast<Eigen::Index>(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i) center(static_cast<Eigen::Index>(i)) = c[i];
  return Ball(center, r);
}

namespace {

struct Common {
  std::string input;
  std::string out = "-";
  std::string format = "json";
  std::string ball;
  std::uint64_t seed = 1;
  int d = 1;
};

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw InputError("cannot write '" + path + "'");
    }
    os_ = path == "-" ? &fallback : &file_;
  }
  std::ostream& os() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

EstimatorMode parse_mode(const std::string& m) {
  if (m == "auto") return EstimatorMode::Auto;
  if (m == "exact") return EstimatorMode::Exact;
  if (m == "mc") return EstimatorMode::MonteCarlo;
  throw InputError("unknown mode '" + m + "' (expected auto, exact or mc)");
}

WeightedPointCloud load(const Common& c) {
  if (c.input.empty()) throw InputError("--input is required");
  return read_cloud_csv_file(c.input, c.d);
}

std::optional<Ball> ball_of(const Common& c, const WeightedPointCloud& cloud) {
  if (c.ball.empty()) return std::nullopt;
  Ball B = parse_ball(c.ball);
  if (B.center.size() != cloud.dim())
    throw InputError("ball dimension " + std::to_string(B.center.size()) + " does not match input dimension " +
                     std::to_string(cloud.dim()));
  return B;
}

Json provenance(const std::string& command, const Common& c, Json config) {
  config["d"] = c.d;
  if (!c.ball.empty()) config["ball"] = c.ball;
  return Json{{"command", command}, {"seed", c.seed}, {"input", c.input}, {"config", std::move(config)}};
}

void emit_json(const Common& c, std::ostream& stdout_, const Json& j) {
  Sink s(c.out, stdout_);
  s.os() << j.dump(2) << '\n';
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
  os << '\n';
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string vec_text(const Vector& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? " " : "") + num(v(i));
  return s;
}

void add_common(CLI::App* app, Common& c, bool with_ball, bool with_format) {
  app->add_option("--input", c.input, "Input CSV (coordinates..., weight)");
  app->add_option("--out", c.out, "Output path, - for stdout")->capture_default_str();
  app->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app->add_option("--d", c.d, "Intrinsic dimension")->capture_default_str()->check(CLI::Range(1, 16));
  if (with_ball) app->add_option("--ball", c.ball, "Ball as cx,cy,...:r");
  if (with_format) app->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Menger-type curvature, beta numbers and multiscale flatness of weighted point clouds", "menger"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  int result = kExitPass;

  // generate
  Common gen;
  std::string kind;
  Index gen_n = 1000;
  int gen_D = 2, gen_level = 3;
  double lipschitz = 1.0;
  auto* g = app.add_subcommand("generate", "Write a synthetic weighted cloud as CSV");
  g->add_option("kind", kind, "plane, sphere, graph or cantor")->required()->check(CLI::IsMember({"plane", "sphere", "graph", "cantor"}));
  g->add_option("--out", gen.out, "Output path, - for stdout")->capture_default_str();
  g->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  g->add_option("--d", gen.d, "Intrinsic dimension")->capture_default_str();
  g->add_option("--D", gen_D, "Ambient dimension")->capture_default_str();
  g->add_option("--n", gen_n, "Number of points")->capture_default_str();
  g->add_option("--level", gen_level, "Cantor level")->capture_default_str();
  g->add_option("--lipschitz", lipschitz, "Lipschitz constant of the graph")->capture_default_str();
  g->callback([&] {
    WeightedPointCloud cloud = [&] {
      if (kind == "plane") return gen_plane_patch(gen.d, gen_D, gen_n, gen.seed);
      if (kind == "sphere") return gen_sphere(gen_D, gen_n, gen.seed);
      if (kind == "graph") return gen_lipschitz_graph(gen.d, gen_D, lipschitz, gen_n, gen.seed);
      return gen_four_corner_cantor(gen_level);
    }();
    Sink s(gen.out, out);
    write_cloud_csv(s.os(), cloud);
  });

  // beta
  Common bc;
  auto* b = app.add_subcommand("beta", "beta_2 number of a ball");
  add_common(b, bc, true, true);
  b->callback([&] {
    const auto cloud = load(bc);
    const auto B = ball_of(bc, cloud);
    if (!B) throw InputError("--ball is required");
    const Beta2Result r = beta2(cloud, *B, bc.d);
    if (bc.format == "csv") {
      Sink s(bc.out, out);
      write_csv_row(s.os(), {"beta2", "beta2sq", "mass", "empty"});
      write_csv_row(s.os(), {num(r.value), num(r.value * r.value), num(r.mass), r.empty ? "1" : "0"});
      return;
    }
    Json j = beta2_json(r);
    j["provenance"] = provenance("beta", bc, Json::object());
    emit_json(bc, out, j);
  });

  // flatness
  Common fc;
  std::string flat_mode = "discrete";
  double flat_alpha0 = 0.25, rho = 0.5;
  auto* f = app.add_subcommand("flatness", "Jones-type flatness of the cloud restricted to a ball");
  add_common(f, fc, true, true);
  f->add_option("--mode", flat_mode, "discrete or continuous")->check(CLI::IsMember({"discrete", "continuous"}))->capture_default_str();
  f->add_option("--alpha0", flat_alpha0, "Scale ratio of the multiresolution family")->capture_default_str()->check(CLI::Range(1e-12, 0.5));
  f->add_option("--rho", rho, "Geometric ratio of the continuous t grid")->capture_default_str();
  f->callback([&] {
    const auto cloud = load(fc);
    auto B = ball_of(fc, cloud);
    if (!B) B = Ball(cloud.point(0), std::max(cloud.support_diameter(), 1e-300));
    FlatnessReport rep;
    if (flat_mode == "discrete") {
      const Ball whole(cloud.point(0), std::max(cloud.support_diameter(), 1e-300));
      const auto F = MultiresolutionFamily::build_for(cloud, flat_alpha0, whole, fc.seed);
      rep = jones_flatness_discrete(cloud, *B, F, fc.d);
    } else {
      ContinuousFlatnessOptions o;
      o.rho = rho;
      o.seed = fc.seed;
      rep = jones_flatness_continuous(cloud, *B, fc.d, o);
    }
    if (fc.format == "csv") {
      Sink s(fc.out, out);
      write_csv_row(s.os(), {"level", "j", "t", "beta2sq", "mass"});
      for (const auto& t : rep.terms)
        write_csv_row(s.os(), {std::to_string(t.level), std::to_string(t.j), num(t.t), num(t.beta2sq), num(t.mass)});
      return;
    }
    Json j = flatness_json(rep);
    j["provenance"] = provenance("flatness", fc, Json{{"mode", flat_mode}, {"alpha0", flat_alpha0}, {"rho", rho}});
    emit_json(fc, out, j);
  });

  // curvature
  Common cc;
  std::int64_t samples = 100000;
  std::string mode = "auto";
  std::optional<double> lambda;
  bool breakdown = false;
  int k_max = 8;
  double curv_alpha0 = 0.25;
  auto* c = app.add_subcommand("curvature", "Continuous Menger-type curvature c_d^2 of the restricted cloud");
  add_common(c, cc, true, true);
  c->add_option("--samples", samples, "Monte Carlo sample count")->capture_default_str()->check(CLI::Range(std::int64_t{2}, std::int64_t{1} << 40));
  c->add_option("--mode", mode, "auto, exact or mc")->capture_default_str();
  c->add_option("--lambda", lambda, "Restrict to tuples with pairwise distances >= lambda * radius");
  c->add_flag("--breakdown", breakdown, "Add the per-class decomposition");
  c->add_option("--kmax", k_max, "Deepest classified scale index")->capture_default_str();
  c->add_option("--alpha0", curv_alpha0, "Scale ratio for the class decomposition")->capture_default_str();
  c->callback([&] {
    const auto cloud = load(cc);
    const auto B = ball_of(cc, cloud);
    EstimatorOptions o;
    o.d = cc.d;
    o.n_samples = samples;
    o.mode = parse_mode(mode);
    o.seed = cc.seed;
    MCEstimate e;
    if (lambda) {
      if (!B) throw InputError("--lambda requires --ball");
      if (!(*lambda > 0.0)) throw InputError("--lambda must be positive");
      e = curvature_over_Ulambda(cloud, *B, *lambda, o);
    } else {
      e = continuous_curvature_sq(cloud, B, o);
    }
    std::optional<DecompositionReport> dr;
    if (breakdown) dr = decomposition_check(cloud, B, cc.d, curv_alpha0, k_max, samples, cc.seed);
    if (cc.format == "csv") {
      Sink s(cc.out, out);
      write_csv_row(s.os(), {"estimate", "std_error", "n_samples", "exact"});
      write_csv_row(s.os(), {num(e.estimate), num(e.std_error), std::to_string(e.n_samples), e.exact ? "1" : "0"});
      return;
    }
    Json cfg{{"samples", samples}, {"mode", mode}};
    if (lambda) cfg["lambda"] = *lambda;
    if (breakdown) {
      cfg["kmax"] = k_max;
      cfg["alpha0"] = curv_alpha0;
    }
    Json j = estimate_json(e, dr);
    j["provenance"] = provenance("curvature", cc, cfg);
    emit_json(cc, out, j);
    if (!e.identity_ok) result = kExitInvariant;
  });

  // verify
  Common vc;
  vc.seed = 7;
  std::string suite = "all";
  bool plant = false;
  auto* v = app.add_subcommand("verify", "Run a verification suite and print a JSON report");
  v->add_option("suite", suite, "geometry, sequences, multiscale, inequalities or all")->capture_default_str();
  v->add_option("--seed", vc.seed, "Random seed")->capture_default_str();
  v->add_option("--out", vc.out, "Output path, - for stdout")->capture_default_str();
  v->add_flag("--plant-violation", plant, "Corrupt one input per suite; the run must fail");
  v->callback([&] {
    VerifyConfig cfg;
    cfg.seed = vc.seed;
    cfg.plant_violation = plant;
    const VerifyReport r = run_verify(suite, cfg);
    emit_json(vc, out, verify_report_json(r));
    if (!r.pass()) {
      for (const auto& name : r.failures()) err << "FAILED " << name << '\n';
      result = kExitInvariant;
    }
  });

  // ratio
  Common rc;
  rc.format = "csv";
  std::string experiment;
  RatioParams rp;
  std::int64_t ratio_samples = 100000;
  std::string ratio_mode = "auto";
  std::vector<double> lambdas{0.2, 0.4, 0.8};
  auto* r = app.add_subcommand("ratio", "Tables of lhs/rhs ratios over a seeded grid of balls");
  add_common(r, rc, false, true);
  r->add_option("experiment", experiment, "thm12, thm13, prop11 or prop43")->required();
  r->add_option("--samples", ratio_samples, "Monte Carlo sample count")->capture_default_str();
  r->add_option("--mode", ratio_mode, "auto, exact or mc")->capture_default_str();
  r->add_option("--balls", rp.n_balls, "Number of balls")->capture_default_str()->check(CLI::Range(1, 100000));
  r->add_option("--lambda", lambdas, "Separation parameters (prop11)")->delimiter(',');
  r->add_option("--alpha0", rp.alpha0, "Scale ratio of the multiresolution family")->capture_default_str()->check(CLI::Range(1e-12, 0.5));
  r->add_option("--rho", rp.rho, "Geometric ratio of the continuous t grid")->capture_default_str();
  r->callback([&] {
    const auto cloud = load(rc);
    rp.experiment = parse_experiment(experiment);
    rp.d = rc.d;
    rp.seed = rc.seed;
    rp.lambdas = lambdas;
    rp.estimator.n_samples = ratio_samples;
    rp.estimator.mode = parse_mode(ratio_mode);
    rp.estimator.seed = rc.seed;
    const auto rows = ratio_table(cloud, rp);
    if (rc.format == "csv") {
      Sink s(rc.out, out);
      write_csv_row(s.os(), {"ball", "center", "radius", "lambda", "lhs", "rhs", "ratio", "lhs_std_error", "flatness",
                             "mass", "ratio_combined", "flag"});
      for (const auto& row : rows)
        write_csv_row(s.os(), {std::to_string(row.ball), vec_text(row.center), num(row.radius), num(row.lambda),
                               num(row.lhs), num(row.rhs), num(row.ratio), num(row.lhs_std_error), num(row.flatness),
                               num(row.mass), num(row.ratio_combined),
                               row.infinite ? "infinite" : (row.zero_over_zero ? "zero_over_zero" : "")});
      return;
    }
    Json arr = Json::array();
    for (const auto& row : rows)
      arr.push_back({{"ball", row.ball}, {"center", vector_json(row.center)}, {"radius", row.radius},
                     {"lambda", row.lambda}, {"lhs", row.lhs}, {"rhs", row.rhs},
                     {"ratio", row.infinite ? Json("inf") : Json(row.ratio)}, {"lhs_std_error", row.lhs_std_error},
                     {"lhs_exact", row.lhs_exact}, {"flatness", row.flatness}, {"mass", row.mass},
                     {"ratio_combined", row.ratio_combined}, {"zero_over_zero", row.zero_over_zero},
                     {"infinite", row.infinite}});
    Json cfg{{"experiment", experiment}, {"samples", ratio_samples}, {"mode", ratio_mode}, {"balls", rp.n_balls},
             {"alpha0", rp.alpha0}, {"rho", rp.rho}};
    if (rp.experiment == Experiment::Prop11) cfg["lambda"] = lambdas;
    emit_json(rc, out, Json{{"rows", arr}, {"provenance", provenance("ratio", rc, cfg)}});
  });

  // constants
  int kd = 1;
  double cmu = 1.0;
  auto* k = app.add_subcommand("constants", "Print C_p and alpha_0 for a dimension and regularity constant");
  k->add_option("--d", kd, "Intrinsic dimension")->capture_default_str()->check(CLI::Range(1, 64));
  k->add_option("--cmu", cmu, "Regularity constant C_mu >= 1")->capture_default_str();
  k->callback([&] { out << constants_json(constants(kd, cmu)).dump(2) << '\n'; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInput;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const EmptyRestrictionError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::domain_error& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  }
  return result;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace menger
