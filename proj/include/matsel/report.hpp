#pragma once

#include "matsel/bayes.hpp"
#include "matsel/error.hpp"
#include "matsel/pipeline.hpp"
#include "matsel/record.hpp"
#include "matsel/similarity.hpp"
#include "matsel/strings.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

namespace matsel::report {

using nlohmann::json;

/// Reported floats: 10 significant digits, non-finite as null.
inline json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return text::report_round(v);
}

inline json number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

/// The single canonical rendering of every JSON document we emit.
inline std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

// --- requests -------------------------------------------------------------

/// `{"categorical": {attr: level}, "numeric": {attr: number}}`; both fields
/// optional. Other top-level keys are ignored. Shape problems throw
/// BadRequirement; schema checks are left to validate_requirement.
inline DesignRequirement requirement_from_json(const json& doc) {
  if (!doc.is_object()) detail::fail("core-model", "BadRequirement", "requirement must be a JSON object");
  DesignRequirement req;
  if (auto it = doc.find("categorical"); it != doc.end() && !it->is_null()) {
    if (!it->is_object()) detail::fail("core-model", "BadRequirement", "'categorical' must be an object");
    for (const auto& [k, v] : it->items()) {
      if (!v.is_string()) detail::fail("core-model", "BadRequirement", "categorical value for '" + k + "' must be a string");
      req.categorical.emplace(k, v.get<std::string>());
    }
  }
  if (auto it = doc.find("numeric"); it != doc.end() && !it->is_null()) {
    if (!it->is_object()) detail::fail("core-model", "BadRequirement", "'numeric' must be an object");
    for (const auto& [k, v] : it->items()) {
      if (!v.is_number()) detail::fail("core-model", "BadRequirement", "numeric value for '" + k + "' must be a number");
      req.numeric.emplace(k, v.get<double>());
    }
  }
  return req;
}

inline DesignRequirement parse_requirement(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    detail::fail("core-model", "BadRequirement", std::string("malformed JSON: ") + e.what());
  }
  return requirement_from_json(doc);
}

/// Overrides `defaults` with whatever of threshold/min_overlap/top_k/normalize
/// the object carries.
inline similarity::SelectionParams params_from_json(const json& doc, similarity::SelectionParams defaults) {
  if (doc.is_null()) return defaults;
  if (!doc.is_object()) detail::fail("similarity", "InvalidParams", "'params' must be an object");
  try {
    if (auto it = doc.find("threshold"); it != doc.end()) defaults.threshold = it->get<double>();
    if (auto it = doc.find("min_overlap"); it != doc.end()) defaults.min_overlap = it->get<std::size_t>();
    if (auto it = doc.find("top_k"); it != doc.end())
      defaults.top_k = it->is_null() ? std::nullopt : std::optional<std::size_t>(it->get<std::size_t>());
    if (auto it = doc.find("normalize"); it != doc.end()) defaults.normalize = it->get<bool>();
  } catch (const json::exception& e) {
    detail::fail("similarity", "InvalidParams", e.what());
  }
  similarity::validate_params(defaults);
  return defaults;
}

// --- results --------------------------------------------------------------

inline json to_json(const bayes::ClassPrediction& p) {
  json log_scores = json::object();
  json posteriors = json::object();
  for (const auto& [label, s] : p.log_scores) log_scores[label] = number(s);
  for (const auto& [label, v] : p.posteriors) posteriors[label] = number(v);
  return {{"predicted", p.predicted}, {"log_scores", log_scores}, {"posteriors", posteriors}};
}

inline json to_json(const similarity::SelectionResult& r) {
  return {{"material_id", r.material_id},
          {"r", number(r.r)},
          {"status", similarity::to_string(r.status)},
          {"rank", r.rank ? json(*r.rank) : json(nullptr)}};
}

inline json to_json(const std::vector<similarity::SelectionResult>& results) {
  json out = json::array();
  for (const auto& r : results) out.push_back(to_json(r));
  return out;
}

inline json to_json(const similarity::SelectionParams& p) {
  return {{"threshold", p.threshold},
          {"min_overlap", p.min_overlap},
          {"top_k", p.top_k ? json(*p.top_k) : json(nullptr)},
          {"normalize", p.normalize}};
}

inline json to_json(const pipeline::PipelineResult& r) {
  json comparison = nullptr;
  if (r.comparison) {
    comparison = json::array();
    for (const auto& row : *r.comparison)
      comparison.push_back(
          {{"attribute", row.attribute}, {"unit", row.unit}, {"requirement", row.requirement}, {"material", row.material}});
  }
  return {{"prediction", to_json(r.prediction)},
          {"class_member_count", r.class_member_count},
          {"results", to_json(r.results)},
          {"optimal", r.optimal ? json(*r.optimal) : json(nullptr)},
          {"comparison", comparison},
          {"params", to_json(r.params)}};
}

// --- tables ---------------------------------------------------------------

inline std::string fmt(double v) {
  if (!std::isfinite(v)) return v < 0 ? "-inf" : "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", text::report_round(v));
  return buf;
}

inline std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : "-"; }

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

inline std::string render_table(const bayes::ClassPrediction& p) {
  std::ostringstream os;
  os << "predicted class: " << p.predicted << "\n\n";
  os << pad("class", 8) << pad("log_score", 18) << "posterior\n";
  for (const auto& [label, s] : p.log_scores)
    os << pad(label, 8) << pad(fmt(s), 18) << fmt(p.posteriors.at(label)) << '\n';
  return os.str();
}

inline std::string render_table(const std::vector<similarity::SelectionResult>& results) {
  std::ostringstream os;
  os << pad("rank", 6) << pad("id", 14) << pad("r", 16) << "status\n";
  for (const auto& r : results)
    os << pad(r.rank ? std::to_string(*r.rank) : "-", 6) << pad(r.material_id, 14) << pad(fmt(r.r), 16)
       << similarity::to_string(r.status) << '\n';
  return os.str();
}

inline std::string render_table(const pipeline::PipelineResult& r) {
  std::ostringstream os;
  os << render_table(r.prediction) << '\n';
  os << "candidates in class " << r.prediction.predicted << ": " << r.class_member_count << "\n\n";
  os << render_table(r.results) << '\n';
  os << "optimal: " << r.optimal.value_or("none") << '\n';
  if (r.comparison) {
    os << '\n' << pad("attribute", 22) << pad("unit", 8) << pad("requirement", 14) << "material\n";
    for (const auto& row : *r.comparison)
      os << pad(row.attribute, 22) << pad(row.unit, 8) << pad(text::format_double(row.requirement), 14)
         << text::format_double(row.material) << '\n';
  }
  return os.str();
}

}  // namespace matsel::report
