#pragma once

#include "matsel/bayes.hpp"
#include "matsel/error.hpp"
#include "matsel/schema.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace matsel {

inline constexpr std::string_view model_format_name = "matselect-model";
inline constexpr int model_format_version = 1;

inline nlohmann::json schema_to_json(const Schema& schema) {
  nlohmann::json categorical = nlohmann::json::array();
  for (const auto& a : schema.categorical()) categorical.push_back({{"name", a.name}, {"levels", a.vocabulary}});
  nlohmann::json numeric = nlohmann::json::array();
  for (const auto& a : schema.numeric()) numeric.push_back({{"name", a.name}, {"unit", a.unit}});
  return {{"classes", schema.class_labels()}, {"categorical", categorical}, {"numeric", numeric}};
}

inline Schema schema_from_json(const nlohmann::json& j) {
  try {
    std::vector<CategoricalAttribute> categorical;
    for (const auto& a : j.at("categorical"))
      categorical.push_back({a.at("name").get<std::string>(), a.at("levels").get<std::vector<std::string>>()});
    std::vector<NumericAttribute> numeric;
    for (const auto& a : j.at("numeric"))
      numeric.push_back({a.at("name").get<std::string>(), a.at("unit").get<std::string>()});
    return Schema(std::move(categorical), std::move(numeric), j.at("classes").get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    detail::fail("core-model", "InvalidSchema", e.what());
  }
}

/// Versioned model document. It stores integer counts only; probabilities
/// are recomputed from them with whatever alpha is in effect at load time.
inline nlohmann::json model_to_json(const bayes::TrainedModel& model) {
  const auto& schema = model.schema();
  nlohmann::json class_counts = nlohmann::json::object();
  nlohmann::json cond = nlohmann::json::object();
  for (std::size_t c = 0; c < schema.class_labels().size(); ++c) {
    const auto& label = schema.class_labels()[c];
    class_counts[label] = model.class_count(c);
    nlohmann::json per_attr = nlohmann::json::object();
    for (std::size_t a = 0; a < schema.categorical().size(); ++a) {
      const auto& attr = schema.categorical()[a];
      nlohmann::json per_level = nlohmann::json::object();
      for (std::size_t l = 0; l < attr.vocabulary.size(); ++l) per_level[attr.vocabulary[l]] = model.cond_count(c, a, l);
      per_attr[attr.name] = per_level;
    }
    cond[label] = per_attr;
  }
  return {
      {"format", model_format_name},
      {"version", model_format_version},
      {"schema", schema_to_json(schema)},
      {"schema_fingerprint", schema.fingerprint()},
      {"alpha", model.alpha()},
      {"trained_on", model.trained_on()},
      {"total_count", model.total_count()},
      {"class_counts", class_counts},
      {"cond_counts", cond},
  };
}

inline bayes::TrainedModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != model_format_name)
      detail::fail("bayes", "BadModel", "not a " + std::string(model_format_name) + " document");
    if (const int v = j.at("version").get<int>(); v != model_format_version)
      detail::fail("bayes", "BadModel", "unsupported model version " + std::to_string(v));
    auto schema = schema_from_json(j.at("schema"));
    if (j.at("schema_fingerprint").get<std::string>() != schema.fingerprint())
      detail::fail("bayes", "BadModel", "schema fingerprint does not match the embedded schema");

    std::vector<std::uint64_t> class_counts;
    bayes::CountTable cond;
    for (const auto& label : schema.class_labels()) {
      class_counts.push_back(j.at("class_counts").at(label).get<std::uint64_t>());
      auto& per_class = cond.emplace_back();
      for (const auto& attr : schema.categorical()) {
        auto& per_attr = per_class.emplace_back();
        for (const auto& level : attr.vocabulary)
          per_attr.push_back(j.at("cond_counts").at(label).at(attr.name).at(level).get<std::uint64_t>());
      }
    }
    bayes::TrainedModel model(std::move(schema), j.at("alpha").get<double>(), std::move(class_counts), std::move(cond),
                              j.at("trained_on").get<std::string>());
    if (model.total_count() != j.at("total_count").get<std::uint64_t>())
      detail::fail("bayes", "BadModel", "total_count does not equal the sum of class counts");
    return model;
  } catch (const nlohmann::json::exception& e) {
    detail::fail("bayes", "BadModel", e.what());
  }
}

inline bayes::TrainedModel parse_model(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    detail::fail("bayes", "BadModel", e.what());
  }
  return model_from_json(j);
}

}  // namespace matsel
