#pragma once

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>

#include "nhbell/detection.hpp"
#include "nhbell/lhv.hpp"
#include "nhbell/optimize.hpp"
#include "nhbell/polynomial.hpp"
#include "nhbell/probability.hpp"

namespace nhbell {

// ordered_json keeps emission order under our control, which together with
// the canonical term order makes every serialized artifact byte-stable for a
// given seed.
using Json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline int selector_field(const Json& term, const char* site) {
  if (!term.contains(site) || !term[site].is_number_integer())
    throw ParseError(std::string("term is missing integer field '") + site +
                     "'");
  int v = term[site].get<int>();
  if (v < 0 || v > 2)
    throw ParseError(std::string("field '") + site + "' must be 0, 1 or 2");
  return v;
}

inline Rational rational_field(const Json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_string())
    throw ParseError(std::string("missing rational string field '") + key +
                     "'");
  try {
    return parse_rational(obj[key].get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace detail

inline Json to_json(const BellPolynomial& p) {
  Json terms = Json::array();
  for (const auto& [m, c] : p.terms()) {
    terms.push_back({{"A", static_cast<int>(m.at(Site::A))},
                     {"B", static_cast<int>(m.at(Site::B))},
                     {"C", static_cast<int>(m.at(Site::C))},
                     {"coeff", to_string(c)}});
  }
  Json out{{"arity", p.arity()}, {"terms", std::move(terms)}};
  if (p.bound()) out["bound"] = to_string(*p.bound());
  return out;
}

inline BellPolynomial polynomial_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("arity") || !j.contains("terms"))
    throw ParseError("polynomial JSON needs 'arity' and 'terms'");
  int arity = j["arity"].is_number_integer() ? j["arity"].get<int>() : -1;
  if (arity != 2 && arity != 3) throw ParseError("'arity' must be 2 or 3");
  BellPolynomial p(arity);
  if (!j["terms"].is_array()) throw ParseError("'terms' must be an array");
  for (const Json& term : j["terms"]) {
    SitedMonomial m;
    m.set(Site::A, static_cast<Selector>(detail::selector_field(term, "A")));
    m.set(Site::B, static_cast<Selector>(detail::selector_field(term, "B")));
    m.set(Site::C, static_cast<Selector>(detail::selector_field(term, "C")));
    if (arity == 2 && m.uses(Site::C))
      throw ParseError("arity-2 polynomial references site C");
    p.add_term(m, detail::rational_field(term, "coeff"));
  }
  if (j.contains("bound")) p = p.with_bound(detail::rational_field(j, "bound"));
  return p;
}

inline Json to_json(const ProbabilityForm& q,
                    const std::optional<std::string>& name = std::nullopt) {
  Json terms = Json::array();
  for (const auto& [key, c] : q.terms()) {
    terms.push_back({{"A", key.at(Site::A)},
                     {"B", key.at(Site::B)},
                     {"C", key.at(Site::C)},
                     {"coeff", to_string(c)}});
  }
  Json out;
  if (name) out["name"] = *name;
  out["arity"] = q.arity();
  out["terms"] = std::move(terms);
  out["K"] = to_string(q.bound());
  return out;
}

inline ProbabilityForm probability_form_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("arity") || !j.contains("terms") ||
      !j.contains("K"))
    throw ParseError("probability-form JSON needs 'arity', 'terms' and 'K'");
  int arity = j["arity"].is_number_integer() ? j["arity"].get<int>() : -1;
  if (arity != 2 && arity != 3) throw ParseError("'arity' must be 2 or 3");
  ProbabilityForm q(arity, detail::rational_field(j, "K"));
  if (!j["terms"].is_array()) throw ParseError("'terms' must be an array");
  for (const Json& term : j["terms"]) {
    ProbabilityKey key;
    key.set(Site::A, detail::selector_field(term, "A"));
    key.set(Site::B, detail::selector_field(term, "B"));
    key.set(Site::C, detail::selector_field(term, "C"));
    if (key.empty()) throw ParseError("probability term has no sites");
    if (arity == 2 && key.at(Site::C))
      throw ParseError("arity-2 form references site C");
    q.add_term(key, detail::rational_field(term, "coeff"));
  }
  return q;
}

inline Json to_json(const LhvBoundResult& r) {
  Json witness = Json::object();
  for (int i = 0; i < 6; ++i) {
    if (!r.witness.referenced[i]) continue;
    std::string key{static_cast<char>('a' + i / 2),
                    static_cast<char>('1' + i % 2)};
    witness[key] = r.witness.value[i];
  }
  return Json{{"max", to_string(r.maximum)},
              {"witness", std::move(witness)},
              {"vertices", r.vertices_examined}};
}

inline Json to_json(const MeasurementSettings& m) {
  Json out = Json::object();
  for (int s = 0; s < m.arity; ++s) {
    Json pair = Json::array();
    for (int k = 1; k <= 2; ++k) {
      const BlochVector& n = m.at(static_cast<Site>(s), k);
      pair.push_back({n.nx, n.ny, n.nz});
    }
    out[std::string(1, site_letter(static_cast<Site>(s)))] = std::move(pair);
  }
  return out;
}

inline Json to_json(const ViolationResult& v) {
  return Json{{"value", v.value},
              {"factor", v.factor},
              {"restarts", v.restarts},
              {"best_restart", v.best_restart},
              {"settings", to_json(v.settings)}};
}

inline Json to_json(const ThresholdReport& r) {
  Json out{{"scenario", scenario_name(r.scenario)},
           {"threshold", r.threshold},
           {"tol", r.tol},
           {"lambda_margin", r.at_threshold.lambda},
           {"angles",
            {r.at_threshold.theta[0], r.at_threshold.theta[1],
             r.at_threshold.theta[2]}},
           {"bisection_iterations", r.bisection_iterations},
           {"predicate_above", r.predicate_above},
           {"predicate_below", r.predicate_below}};
  if (!r.frontier.empty()) {
    Json pts = Json::array();
    for (const auto& pt : r.frontier) {
      Json row{{"eta2", pt.eta2}};
      if (pt.eta3_min)
        row["eta3_min"] = *pt.eta3_min;
      else
        row["eta3_min"] = nullptr;
      pts.push_back(std::move(row));
    }
    out["frontier"] = std::move(pts);
    if (r.frontier_eta2_at_zero)
      out["eta2_threshold_at_eta3_zero"] = *r.frontier_eta2_at_zero;
  }
  return out;
}

}  // namespace nhbell
