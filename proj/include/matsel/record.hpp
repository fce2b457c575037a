#pragma once

#include "matsel/error.hpp"
#include "matsel/schema.hpp"

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace matsel {

/// One material. Absent map entries are missing values.
struct MaterialRecord {
  std::string id;
  std::string name;
  std::optional<std::string> class_label;
  std::map<std::string, std::string> categorical;
  std::map<std::string, double> numeric;

  friend bool operator==(const MaterialRecord&, const MaterialRecord&) = default;
};

/// A design engineer's query. Either map may be partial.
struct DesignRequirement {
  std::map<std::string, std::string> categorical;
  std::map<std::string, double> numeric;

  friend bool operator==(const DesignRequirement&, const DesignRequirement&) = default;
};

namespace detail {

inline std::string canonical_level_or_throw(const Schema& schema, const std::string& attr,
                                            const std::string& value, const std::string& where) {
  const auto idx = schema.categorical_index(attr);
  if (!idx) fail("core-model", "UnknownAttribute", where + "categorical attribute '" + attr + "' is not in the schema");
  const auto level = schema.level_index(*idx, value);
  if (!level) fail("core-model", "BadLevel", where + "attribute " + attr + ": value \"" + value + "\" is not a declared level");
  return schema.categorical()[*idx].vocabulary[*level];
}

}  // namespace detail

/// A schema plus its records, validated at construction and immutable after.
class Dataset {
 public:
  Dataset(Schema schema, std::vector<MaterialRecord> records)
      : schema_(std::move(schema)), records_(std::move(records)) {
    std::set<std::string> ids;
    for (auto& r : records_) {
      if (r.id.empty()) detail::fail("core-model", "BadRow", "record with empty id");
      if (!ids.insert(r.id).second) detail::fail("core-model", "DuplicateId", r.id);
      const std::string where = "record " + r.id + ": ";
      for (auto& [attr, value] : r.categorical) value = detail::canonical_level_or_throw(schema_, attr, value, where);
      for (const auto& [attr, value] : r.numeric) {
        if (!schema_.numeric_index(attr))
          detail::fail("core-model", "UnknownAttribute", where + "numeric attribute '" + attr + "' is not in the schema");
        if (!std::isfinite(value)) detail::fail("core-model", "BadNumber", where + "attribute " + attr + " is not finite");
      }
      if (r.class_label) {
        const auto c = schema_.canonical_class(*r.class_label);
        if (!c) detail::fail("core-model", "BadLevel", where + "class \"" + *r.class_label + "\" is not a declared label");
        r.class_label = *c;
      }
    }
  }

  [[nodiscard]] const Schema& schema() const noexcept { return schema_; }
  [[nodiscard]] const std::vector<MaterialRecord>& records() const noexcept { return records_; }
  [[nodiscard]] std::size_t size() const noexcept { return records_.size(); }

  [[nodiscard]] const MaterialRecord* find(const std::string& id) const {
    for (const auto& r : records_)
      if (r.id == id) return &r;
    return nullptr;
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  Schema schema_;
  std::vector<MaterialRecord> records_;
};

enum class RequirementUse { any, classification };

/// Checks a requirement against the schema and canonicalizes its levels.
/// Idempotent. With `RequirementUse::classification` at least one
/// categorical entry is required.
inline DesignRequirement validate_requirement(const DesignRequirement& req, const Schema& schema,
                                              RequirementUse use = RequirementUse::any) {
  DesignRequirement out;
  for (const auto& [attr, value] : req.categorical)
    out.categorical.emplace(attr, detail::canonical_level_or_throw(schema, attr, value, ""));
  for (const auto& [attr, value] : req.numeric) {
    if (!schema.numeric_index(attr))
      detail::fail("core-model", "UnknownAttribute", "numeric attribute '" + attr + "' is not in the schema");
    if (!std::isfinite(value)) detail::fail("core-model", "BadNumber", "attribute " + attr + " is not finite");
    out.numeric.emplace(attr, value);
  }
  if (use == RequirementUse::classification && out.categorical.empty())
    detail::fail("core-model", "EmptyCategorical", "classification needs at least one categorical requirement");
  return out;
}

}  // namespace matsel
