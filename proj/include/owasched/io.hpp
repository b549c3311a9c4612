#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "owasched/errors.hpp"
#include "owasched/model.hpp"
#include "owasched/owa.hpp"
#include "owasched/rational.hpp"

// JSON round-tripping for instances, schedules, and OWA weight vectors.
// Numbers are accepted as JSON integers or as strings ("3/4", "2.25") parsed
// exactly; floating-point literals are rejected because they already lost
// exactness on the way in. Job indices are 1-based on disk, 0-based in memory.

namespace owasched {

namespace iodetail {

inline nlohmann::json parse_json(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

inline Rational to_rational(const nlohmann::json& v, const std::string& where) {
  if (v.is_number_unsigned()) {
    auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
      throw SchemaError(where + ": integer too large");
    return Rational(static_cast<std::int64_t>(u));
  }
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (v.is_string()) {
    try {
      return Rational::parse(v.get<std::string>());
    } catch (const std::exception& e) {
      throw SchemaError(where + ": " + e.what());
    }
  }
  if (v.is_number_float())
    throw SchemaError(where + ": floating-point literal, pass an exact string instead");
  throw SchemaError(where + ": expected an integer or an exact numeric string");
}

inline nlohmann::json from_rational(const Rational& r) {
  if (r.is_integer()) return r.num();
  return r.str();
}

inline int to_int(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number_integer())
    throw SchemaError(where + ": expected an integer");
  auto raw = v.get<std::int64_t>();
  if (raw < std::numeric_limits<int>::min() || raw > std::numeric_limits<int>::max())
    throw SchemaError(where + ": integer out of range");
  return static_cast<int>(raw);
}

inline const nlohmann::json& field(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw SchemaError(std::string("missing key \"") + key + "\"");
  return doc.at(key);
}

inline std::vector<std::vector<Rational>> to_matrix(const nlohmann::json& doc, const char* key) {
  const auto& m = field(doc, key);
  if (!m.is_array()) throw SchemaError(std::string("\"") + key + "\": expected an array of rows");
  std::vector<std::vector<Rational>> out;
  out.reserve(m.size());
  for (std::size_t j = 0; j < m.size(); ++j) {
    const auto& row = m[j];
    if (!row.is_array())
      throw SchemaError(std::string("\"") + key + "\" row " + std::to_string(j + 1) +
                        ": expected an array");
    std::vector<Rational> vals;
    vals.reserve(row.size());
    for (std::size_t i = 0; i < row.size(); ++i)
      vals.push_back(to_rational(row[i], std::string("\"") + key + "\"[" +
                                             std::to_string(j + 1) + "][" +
                                             std::to_string(i + 1) + "]"));
    out.push_back(std::move(vals));
  }
  return out;
}

}  // namespace iodetail

inline Instance parse_instance(const std::string& text) {
  using iodetail::field;
  nlohmann::json doc = iodetail::parse_json(text);
  if (!doc.is_object()) throw SchemaError("instance: expected a JSON object");

  Instance inst;
  inst.n = iodetail::to_int(field(doc, "n"), "\"n\"");
  inst.K = iodetail::to_int(field(doc, "k"), "\"k\"");

  const auto& obj = field(doc, "objective");
  if (!obj.is_string()) throw SchemaError("\"objective\": expected a string");
  std::string tag = obj.get<std::string>();
  if (tag == "max_wt")
    inst.objective = Objective::MaxWeightedTardiness;
  else if (tag == "sum_wc")
    inst.objective = Objective::WeightedCompletionSum;
  else
    throw SchemaError("\"objective\": unknown value \"" + tag + "\"");

  inst.proc = iodetail::to_matrix(doc, "proc");
  inst.due = iodetail::to_matrix(doc, "due");
  inst.weight = iodetail::to_matrix(doc, "weight");

  const auto& prec = field(doc, "prec");
  if (!prec.is_array()) throw SchemaError("\"prec\": expected an array of pairs");
  for (std::size_t e = 0; e < prec.size(); ++e) {
    const auto& pair = prec[e];
    if (!pair.is_array() || pair.size() != 2)
      throw SchemaError("\"prec\" entry " + std::to_string(e + 1) + ": expected [int, int]");
    int a = iodetail::to_int(pair[0], "\"prec\" entry " + std::to_string(e + 1));
    int b = iodetail::to_int(pair[1], "\"prec\" entry " + std::to_string(e + 1));
    inst.prec.emplace_back(a - 1, b - 1);
  }

  ValidationReport report = validate_instance(inst);
  if (!report.ok()) throw ValidationError("instance validation failed", report.violations);
  return inst;
}

inline std::string serialize_instance(const Instance& inst) {
  nlohmann::json doc;
  doc["n"] = inst.n;
  doc["k"] = inst.K;
  doc["objective"] = objective_name(inst.objective);
  auto matrix = [](const std::vector<std::vector<Rational>>& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : m) {
      nlohmann::json vals = nlohmann::json::array();
      for (const auto& v : row) vals.push_back(iodetail::from_rational(v));
      rows.push_back(std::move(vals));
    }
    return rows;
  };
  doc["proc"] = matrix(inst.proc);
  doc["due"] = matrix(inst.due);
  doc["weight"] = matrix(inst.weight);
  nlohmann::json prec = nlohmann::json::array();
  for (const auto& [a, b] : inst.prec) prec.push_back({a + 1, b + 1});
  doc["prec"] = std::move(prec);
  return doc.dump(2);
}

inline Schedule parse_schedule(const std::string& text) {
  nlohmann::json doc = iodetail::parse_json(text);
  if (!doc.is_object()) throw SchemaError("schedule: expected a JSON object");
  const auto& order = iodetail::field(doc, "order");
  if (!order.is_array()) throw SchemaError("\"order\": expected an array of job indices");
  Schedule sched;
  sched.order.reserve(order.size());
  for (std::size_t r = 0; r < order.size(); ++r)
    sched.order.push_back(iodetail::to_int(order[r], "\"order\"[" + std::to_string(r + 1) + "]") -
                          1);
  return sched;
}

inline std::string serialize_schedule(const Schedule& sched) {
  nlohmann::json doc;
  nlohmann::json order = nlohmann::json::array();
  for (int j : sched.order) order.push_back(j + 1);
  doc["order"] = std::move(order);
  return doc.dump();
}

// Accepts either an explicit weight vector {"v": [...]} (length must match K)
// or a named preset, e.g. {"preset": "quantile", "k": 2}.
inline OwaWeights parse_owa_weights(const std::string& text, int K) {
  nlohmann::json doc = iodetail::parse_json(text);
  if (!doc.is_object()) throw SchemaError("owa weights: expected a JSON object");

  if (doc.contains("v")) {
    const auto& arr = doc.at("v");
    if (!arr.is_array()) throw SchemaError("\"v\": expected an array");
    std::vector<Rational> v;
    v.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i)
      v.push_back(iodetail::to_rational(arr[i], "\"v\"[" + std::to_string(i + 1) + "]"));
    if (static_cast<int>(v.size()) != K)
      throw ValidationError("owa weights validation failed",
                            {"expected " + std::to_string(K) + " weights, got " +
                             std::to_string(v.size())});
    try {
      return OwaWeights(std::move(v));
    } catch (const PreconditionError& e) {
      throw ValidationError("owa weights validation failed", {e.what()});
    }
  }

  if (doc.contains("preset")) {
    const auto& p = doc.at("preset");
    if (!p.is_string()) throw SchemaError("\"preset\": expected a string");
    std::string kind = p.get<std::string>();
    try {
      if (kind == "maximum") return preset_maximum(K);
      if (kind == "minimum") return preset_minimum(K);
      if (kind == "average") return preset_average(K);
      if (kind == "median") return preset_median(K);
      if (kind == "quantile")
        return preset_quantile(K, iodetail::to_int(iodetail::field(doc, "k"), "\"k\""));
      if (kind == "hurwicz")
        return preset_hurwicz(K, iodetail::to_rational(iodetail::field(doc, "alpha"), "\"alpha\""));
    } catch (const PreconditionError& e) {
      throw ValidationError("owa weights validation failed", {e.what()});
    }
    throw SchemaError("\"preset\": unknown value \"" + kind + "\"");
  }

  throw SchemaError("owa weights: need either \"v\" or \"preset\"");
}

inline std::string serialize_owa_weights(const OwaWeights& w) {
  nlohmann::json doc;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& x : w.v) arr.push_back(iodetail::from_rational(x));
  doc["v"] = std::move(arr);
  return doc.dump();
}

}  // namespace owasched
