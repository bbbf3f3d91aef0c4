#pragma once

#include <fstream>
#include <istream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "codebook.hpp"
#include "dispersion.hpp"
#include "gas.hpp"
#include "harness.hpp"
#include "objective.hpp"

namespace gasd {

using Json = nlohmann::json;

// Objective: {"n": 2, "terms": [{"vars": [0, 1], "coeff": 1.0}], "constant": 3.0}

inline Json objective_to_json(const PolynomialObjective& obj) {
  Json terms = Json::array();
  for (const auto& t : obj.terms()) terms.push_back({{"vars", t.vars}, {"coeff", t.coefficient}});
  return {{"n", obj.n()}, {"terms", terms}, {"constant", obj.constant()}};
}

inline PolynomialObjective objective_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n")) throw std::invalid_argument("objective JSON needs an 'n' field");
  PolynomialObjective obj(j.at("n").get<int>(), j.value("constant", 0.0));
  if (j.contains("terms")) {
    for (const auto& t : j.at("terms")) obj.add_term(t.at("vars").get<std::vector<int>>(), t.at("coeff").get<double>());
  }
  return obj;
}

// Instance: {"n": 4, "distances": [d01, d02, d03, d12, d13, d23]}

inline Json instance_to_json(const DistanceMatrix& D) {
  return {{"n", D.n()}, {"distances", D.upper_triangular()}};
}

inline DistanceMatrix instance_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("distances")) {
    throw std::invalid_argument("instance JSON needs 'n' and 'distances'");
  }
  return DistanceMatrix::from_upper_triangular(j.at("n").get<int>(), j.at("distances").get<std::vector<double>>());
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

/// JSON instance, or a square CSV matrix when the path ends in ".csv".
inline DistanceMatrix load_instance(const std::string& path) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_distance_csv(in);
  }
  return instance_from_json(read_json_file(path));
}

inline ExperimentConfig config_from_json(const Json& j) {
  static const std::set<std::string> known{"n", "k", "trials", "distance_range", "problem", "methods", "lambda2", "delta",
                                           "lambda_growth", "seed", "backend", "max_quantum_queries",
                                           "max_classical_queries", "grid_points", "workers", "preset"};
  if (!j.is_object()) throw std::invalid_argument("experiment config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw std::invalid_argument("unknown experiment config key '" + key + "'");
  }
  ExperimentConfig c;
  if (j.contains("problem")) c.problem = parse_problem(j.at("problem").get<std::string>());
  if (j.contains("k")) c.k = j.at("k").get<int>();
  // "preset": "reference" starts from the reference penalty and compression settings.
  if (j.value("preset", std::string{}) == "reference") {
    c = ExperimentConfig::reference(c.problem, c.k);
  } else if (j.contains("preset")) {
    throw std::invalid_argument("unknown preset '" + j.at("preset").get<std::string>() + "'");
  }
  if (j.contains("n")) c.n = j.at("n").get<int>();
  if (j.contains("trials")) c.trials = j.at("trials").get<int>();
  if (j.contains("distance_range")) {
    const auto r = j.at("distance_range").get<std::vector<int>>();
    if (r.size() != 2) throw std::invalid_argument("distance_range must be [lo, hi]");
    c.lo = r[0];
    c.hi = r[1];
  }
  if (j.contains("methods")) {
    c.methods.clear();
    for (const auto& m : j.at("methods")) c.methods.push_back(parse_method(m.get<std::string>()));
  }
  if (j.contains("lambda2")) {
    if (j.at("lambda2").is_null()) {
      c.lambda2.reset();
    } else {
      c.lambda2 = j.at("lambda2").get<double>();
    }
  }
  if (j.contains("delta")) c.delta = j.at("delta").get<double>();
  if (j.contains("lambda_growth")) c.lambda_growth = j.at("lambda_growth").get<double>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("backend")) c.backend = parse_backend(j.at("backend").get<std::string>());
  if (j.contains("max_quantum_queries")) c.max_quantum_queries = j.at("max_quantum_queries").get<std::uint64_t>();
  if (j.contains("max_classical_queries")) c.max_classical_queries = j.at("max_classical_queries").get<std::uint64_t>();
  if (j.contains("grid_points")) c.grid_points = j.at("grid_points").get<int>();
  if (j.contains("workers")) c.workers = j.at("workers").get<int>();
  c.validate();
  return c;
}

inline Json config_to_json(const ExperimentConfig& c) {
  Json methods = Json::array();
  for (Method m : c.methods) methods.push_back(method_name(m));
  Json j{{"n", c.n},
         {"k", c.k},
         {"trials", c.trials},
         {"distance_range", {c.lo, c.hi}},
         {"problem", problem_name(c.problem)},
         {"methods", methods},
         {"delta", c.delta},
         {"lambda_growth", c.lambda_growth},
         {"seed", c.seed},
         {"backend", backend_name(c.backend)},
         {"max_quantum_queries", c.max_quantum_queries},
         {"max_classical_queries", c.max_classical_queries},
         {"grid_points", c.grid_points},
         {"workers", c.workers}};
  j["lambda2"] = c.lambda2 ? Json(*c.lambda2) : Json(nullptr);
  return j;
}

inline Json codebook_to_json(const Codebook& cb, const CodeSpace& space, const std::string& solver) {
  Json j{{"length", cb.length},
         {"im_mode", space.im_mode},
         {"K", cb.codewords.size()},
         {"solver", solver},
         {"codewords", cb.strings()},
         {"min_distance", cb.min_distance}};
  j["weight"] = space.weight ? Json(*space.weight) : Json(nullptr);
  return j;
}

inline Json gas_result_to_json(const GasResult& r, int n) {
  return {{"best", to_bitstring(r.best, n)},
          {"best_value", r.best_value},
          {"qd", r.counters.qd},
          {"cd", r.counters.cd},
          {"reached_target", r.reached_target},
          {"stop_reason", r.stop_reason},
          {"events", r.trace.events.size()}};
}

}  // namespace gasd
