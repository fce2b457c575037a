#pragma once

#include "matsel/error.hpp"
#include "matsel/strings.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace matsel {

struct CategoricalAttribute {
  std::string name;
  std::vector<std::string> vocabulary;  // ordinal, lowest first

  friend bool operator==(const CategoricalAttribute&, const CategoricalAttribute&) = default;
};

struct NumericAttribute {
  std::string name;
  std::string unit;

  /// CSV column name: `<name>_<unit>`.
  [[nodiscard]] std::string column() const { return unit.empty() ? name : name + "_" + unit; }

  friend bool operator==(const NumericAttribute&, const NumericAttribute&) = default;
};

inline const std::vector<std::string>& default_vocabulary() {
  static const std::vector<std::string> levels{"NIL", "Poor", "Fair", "Good", "Very Good", "Excellent"};
  return levels;
}

/// Declared attributes, their vocabularies and the class labels. Immutable
/// once constructed; the constructor enforces every invariant.
class Schema {
 public:
  Schema(std::vector<CategoricalAttribute> categorical, std::vector<NumericAttribute> numeric,
         std::vector<std::string> class_labels)
      : categorical_(std::move(categorical)),
        numeric_(std::move(numeric)),
        classes_(std::move(class_labels)) {
    std::set<std::string> names;
    for (const auto& a : categorical_) {
      if (a.name.empty()) detail::fail("core-model", "InvalidSchema", "empty categorical attribute name");
      if (!names.insert(a.name).second)
        detail::fail("core-model", "InvalidSchema", "duplicate attribute '" + a.name + "'");
      if (a.vocabulary.empty())
        detail::fail("core-model", "InvalidSchema", "attribute '" + a.name + "' has an empty vocabulary");
      std::set<std::string> seen;
      for (const auto& level : a.vocabulary) {
        if (level.empty() || !seen.insert(lower(level)).second)
          detail::fail("core-model", "InvalidSchema",
                       "attribute '" + a.name + "' has an empty or duplicate level '" + level + "'");
      }
    }
    for (const auto& a : numeric_) {
      if (a.name.empty()) detail::fail("core-model", "InvalidSchema", "empty numeric attribute name");
      if (!names.insert(a.name).second)
        detail::fail("core-model", "InvalidSchema", "duplicate attribute '" + a.name + "'");
    }
    if (classes_.empty()) detail::fail("core-model", "InvalidSchema", "no class labels declared");
    std::set<std::string> seen;
    for (const auto& c : classes_) {
      if (c.empty() || !seen.insert(lower(c)).second)
        detail::fail("core-model", "InvalidSchema", "empty or duplicate class label '" + c + "'");
    }
  }

  [[nodiscard]] const std::vector<CategoricalAttribute>& categorical() const noexcept { return categorical_; }
  [[nodiscard]] const std::vector<NumericAttribute>& numeric() const noexcept { return numeric_; }
  [[nodiscard]] const std::vector<std::string>& class_labels() const noexcept { return classes_; }

  [[nodiscard]] std::optional<std::size_t> categorical_index(std::string_view name) const {
    for (std::size_t i = 0; i < categorical_.size(); ++i)
      if (categorical_[i].name == name) return i;
    return std::nullopt;
  }

  [[nodiscard]] std::optional<std::size_t> numeric_index(std::string_view name) const {
    for (std::size_t i = 0; i < numeric_.size(); ++i)
      if (numeric_[i].name == name) return i;
    return std::nullopt;
  }

  [[nodiscard]] std::optional<std::size_t> class_index(std::string_view label) const {
    for (std::size_t i = 0; i < classes_.size(); ++i)
      if (classes_[i] == label) return i;
    return std::nullopt;
  }

  /// Index of `value` in the attribute's vocabulary, matched case-insensitively.
  [[nodiscard]] std::optional<std::size_t> level_index(std::size_t attr, std::string_view value) const {
    const auto& vocab = categorical_.at(attr).vocabulary;
    value = text::trim(value);
    for (std::size_t i = 0; i < vocab.size(); ++i)
      if (text::iequals(vocab[i], value)) return i;
    return std::nullopt;
  }

  [[nodiscard]] std::optional<std::string> canonical_class(std::string_view value) const {
    value = text::trim(value);
    for (const auto& c : classes_)
      if (text::iequals(c, value)) return c;
    return std::nullopt;
  }

  /// Stable hash of the canonical config text; two schemas with the same
  /// fingerprint accept exactly the same data.
  [[nodiscard]] std::string fingerprint() const { return text::fnv1a_hex(to_config()); }

  /// Canonical config text, parseable by `parse_schema_config`.
  [[nodiscard]] std::string to_config() const {
    std::ostringstream os;
    os << "classes = " << join(classes_) << '\n';
    os << "categorical = ";
    for (std::size_t i = 0; i < categorical_.size(); ++i) os << (i ? ", " : "") << categorical_[i].name;
    os << '\n';
    for (const auto& a : categorical_) os << "levels." << a.name << " = " << join(a.vocabulary) << '\n';
    os << "numeric = ";
    for (std::size_t i = 0; i < numeric_.size(); ++i)
      os << (i ? ", " : "") << numeric_[i].name << ':' << numeric_[i].unit;
    os << '\n';
    return os.str();
  }

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  static std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  }

  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
    return out;
  }

  std::vector<CategoricalAttribute> categorical_;
  std::vector<NumericAttribute> numeric_;
  std::vector<std::string> classes_;
};

/// Parses the declarative schema config:
///
///     classes = P, C, M
///     levels = NIL, Poor, Fair, Good, Very Good, Excellent
///     categorical = CR, CH, CE
///     levels.CE = Low, High          # per-attribute override
///     numeric = density:g_cm3, tensile_strength:MPa
///
/// `#` starts a comment. `levels` is the default vocabulary and falls back to
/// the built-in ordinal scale when absent.
inline Schema parse_schema_config(std::string_view text_in) {
  std::map<std::string, std::vector<std::string>> entries;
  std::istringstream in{std::string(text_in)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      detail::fail("core-model", "InvalidSchema", "line " + std::to_string(line_no) + ": expected key = value");
    std::string key(text::trim(line.substr(0, eq)));
    if (key.empty()) detail::fail("core-model", "InvalidSchema", "line " + std::to_string(line_no) + ": empty key");
    std::vector<std::string> values;
    if (const auto rest = text::trim(line.substr(eq + 1)); !rest.empty()) {
      for (auto& v : text::split(rest, ','))
        if (!v.empty()) values.push_back(std::move(v));
    }
    if (!entries.emplace(key, std::move(values)).second)
      detail::fail("core-model", "InvalidSchema", "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
  }

  const auto take = [&](const std::string& key) -> std::optional<std::vector<std::string>> {
    auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    auto v = std::move(it->second);
    entries.erase(it);
    return v;
  };

  auto classes = take("classes");
  if (!classes) detail::fail("core-model", "InvalidSchema", "missing 'classes'");
  const auto levels = take("levels").value_or(default_vocabulary());
  const auto cat_names = take("categorical").value_or(std::vector<std::string>{});
  const auto num_specs = take("numeric").value_or(std::vector<std::string>{});

  std::vector<CategoricalAttribute> categorical;
  for (const auto& name : cat_names) categorical.push_back({name, take("levels." + name).value_or(levels)});

  std::vector<NumericAttribute> numeric;
  for (const auto& spec : num_specs) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
      numeric.push_back({spec, ""});
    } else {
      numeric.push_back({std::string(text::trim(std::string_view(spec).substr(0, colon))),
                         std::string(text::trim(std::string_view(spec).substr(colon + 1)))});
    }
  }

  if (!entries.empty()) detail::fail("core-model", "InvalidSchema", "unknown key '" + entries.begin()->first + "'");
  return Schema(std::move(categorical), std::move(numeric), std::move(*classes));
}

/// The classification table's schema: eleven categorical attributes on the
/// six-level ordinal scale, classes P/C/M, and the demo numeric attributes.
/// The numeric set is a representative choice, not taken from any source.
inline const Schema& default_schema() {
  static const Schema schema = [] {
    std::vector<CategoricalAttribute> categorical;
    for (const char* name : {"CR", "CH", "CE", "SM", "CAST", "EXTRN", "MANFT", "CS", "MACHN", "FS", "WA"})
      categorical.push_back({name, default_vocabulary()});
    std::vector<NumericAttribute> numeric{
        {"density", "g_cm3"},          {"tensile_strength", "MPa"},    {"elastic_modulus", "GPa"},
        {"elongation", "pct"},         {"melting_point", "C"},         {"thermal_conductivity", "W_mK"},
        {"max_service_temp", "C"},
    };
    return Schema(std::move(categorical), std::move(numeric), {"P", "C", "M"});
  }();
  return schema;
}

}  // namespace matsel
