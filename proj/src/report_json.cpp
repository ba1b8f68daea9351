#include "menger/report_json.hpp"

#include <stdexcept>

namespace menger {

Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("expected a coordinate array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

Json tuple_json(const Tuple& X) {
  Json a = Json::array();
  for (const auto& p : X) a.push_back(vector_json(p));
  return a;
}

Tuple tuple_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("expected an array of points");
  std::vector<Vector> pts;
  for (const auto& p : j) pts.push_back(vector_from_json(p));
  return Tuple(std::move(pts));
}

Json ball_json(const Ball& B) { return Json{{"center", vector_json(B.center)}, {"radius", B.radius}}; }

Json plane_json(const AffinePlane& L) {
  Json frame = Json::array();
  for (Eigen::Index c = 0; c < L.frame.cols(); ++c) frame.push_back(vector_json(L.frame.col(c)));
  return Json{{"base", vector_json(L.base)}, {"frame", frame}};
}

Json beta2_json(const Beta2Result& r) {
  Json j{{"beta2", r.value}, {"beta2sq", r.value * r.value}, {"mass", r.mass}, {"empty", r.empty}};
  j["plane"] = r.empty ? Json(nullptr) : plane_json(r.plane);
  return j;
}

Json flatness_json(const FlatnessReport& r) {
  Json terms = Json::array();
  for (const auto& t : r.terms)
    terms.push_back({{"level", t.level}, {"j", t.j}, {"t", t.t}, {"beta2sq", t.beta2sq}, {"mass", t.mass}});
  return Json{{"total", r.total}, {"terms", terms}};
}

FlatnessReport flatness_from_json(const Json& j) {
  FlatnessReport r;
  r.total = j.at("total").get<double>();
  for (const auto& t : j.at("terms"))
    r.terms.push_back({t.at("level").get<int>(), t.at("j").get<int>(), t.at("t").get<double>(),
                       t.at("beta2sq").get<double>(), t.at("mass").get<double>()});
  return r;
}

namespace {

Json cell_json(const DecompositionCell& c) {
  return Json{{"sum", c.sum}, {"count", c.count}, {"canonical_sum", c.canonical_sum}, {"canonical_count", c.canonical_count}};
}

}  // namespace

Json decomposition_json(const DecompositionReport& r) {
  Json cells = Json::array();
  for (const auto& [key, c] : r.cells) {
    Json e = cell_json(c);
    e["k"] = key.first;
    e["n"] = key.second;
    cells.push_back(std::move(e));
  }
  return Json{{"d", r.d},
              {"alpha0", r.alpha0},
              {"k_max", r.k_max},
              {"n_samples", r.n_samples},
              {"mass_factor", r.mass_factor},
              {"unrestricted", r.unrestricted},
              {"class_total", r.class_total},
              {"canonical_weighted", r.canonical_weighted},
              {"max_abs_deviation", r.max_abs_deviation},
              {"partition_ok", r.partition_ok},
              {"well_scaled", cell_json(r.well_scaled)},
              {"tail", cell_json(r.tail)},
              {"degenerate", cell_json(r.degenerate)},
              {"cells", cells}};
}

Json estimate_json(const MCEstimate& e, const std::optional<DecompositionReport>& breakdown) {
  return Json{{"estimate", e.estimate},
              {"std_error", e.std_error},
              {"n_samples", e.n_samples},
              {"exact", e.exact},
              {"class_breakdown", breakdown ? decomposition_json(*breakdown) : Json(nullptr)},
              {"mean", e.mean},
              {"mass_factor", e.mass_factor},
              {"empty", e.empty},
              {"x0_form_mean", e.x0_form_mean},
              {"max_identity_deviation", e.max_identity_deviation},
              {"identity_ok", e.identity_ok}};
}

MCEstimate estimate_from_json(const Json& j) {
  MCEstimate e;
  e.estimate = j.at("estimate").get<double>();
  e.std_error = j.at("std_error").get<double>();
  e.n_samples = j.at("n_samples").get<std::int64_t>();
  e.exact = j.at("exact").get<bool>();
  e.mean = j.value("mean", 0.0);
  e.mass_factor = j.value("mass_factor", 0.0);
  e.empty = j.value("empty", false);
  e.x0_form_mean = j.value("x0_form_mean", 0.0);
  e.max_identity_deviation = j.value("max_identity_deviation", 0.0);
  e.identity_ok = j.value("identity_ok", true);
  return e;
}

Json constants_json(const Constants& c) {
  return Json{{"d", c.d}, {"Cmu", c.Cmu}, {"Cp", c.Cp}, {"alpha0", c.alpha0},
              {"min_resolves_as_stated", c.min_resolves_as_stated}};
}

Json well_scaled_bundle_json(const Tuple& X, const std::vector<Vector>& Y, int k, int d) {
  Json aux = Json::array(), main = Json::array();
  for (const auto& t : auxiliary_sequence(X, Y, k, d)) aux.push_back(tuple_json(t));
  for (const auto& t : well_scaled_sequence(X, Y, k, d)) main.push_back(tuple_json(t));
  return Json{{"kind", "well_scaled"}, {"k", k}, {"d", d}, {"auxiliary", aux}, {"main", main}};
}

Json rake_bundle_json(const Tuple& X, const std::vector<Vector>& Z, int n, int d) {
  Json aux = Json::array(), main = Json::array();
  const auto tree = rake_tree(X, Z, n, d);
  for (const auto& level : tree) {
    Json l = Json::array();
    for (const auto& t : level) l.push_back(tuple_json(t));
    aux.push_back(std::move(l));
  }
  for (const auto& t : tree.back()) main.push_back(tuple_json(t));
  return Json{{"kind", "rake"}, {"n", n}, {"d", d}, {"auxiliary", aux}, {"main", main}};
}

}  // namespace menger
