#pragma once

#include "matsel/csv.hpp"
#include "matsel/record.hpp"
#include "matsel/schema.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fixtures {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string data_path(const std::string& name) { return std::string(MATSEL_DATA_DIR) + "/" + name; }
inline std::string golden_path(const std::string& name) { return std::string(MATSEL_GOLDEN_DIR) + "/" + name; }

inline matsel::Schema bundled_schema() { return matsel::parse_schema_config(slurp(data_path("schema.conf"))); }

inline matsel::Dataset bundled_dataset() {
  return matsel::parse_materials_csv(slurp(data_path("materials.csv")), bundled_schema());
}

/// Categorical vector of the first bundled record (P1).
inline matsel::DesignRequirement bundled_row1() {
  return {{{"CR", "Excellent"}, {"CH", "Poor"}, {"CE", "NIL"}, {"SM", "Good"}, {"CAST", "Fair"}, {"EXTRN", "Good"},
           {"MANFT", "Excellent"}, {"CS", "Poor"}, {"MACHN", "Good"}, {"FS", "Poor"}, {"WA", "Poor"}},
          {}};
}

/// Random labeled corpus: 1..max_records records, 1..max_attrs categorical
/// attributes with vocabularies of 2..6 levels, 2..4 classes. Every record
/// carries every attribute.
inline matsel::Dataset random_corpus(std::mt19937_64& rng, int max_records = 25, int max_attrs = 12) {
  std::uniform_int_distribution<int> n_attrs(1, max_attrs), n_vocab(2, 6), n_classes(2, 4), n_records(1, max_records);
  std::vector<matsel::CategoricalAttribute> attrs;
  const int a_count = n_attrs(rng);
  for (int a = 0; a < a_count; ++a) {
    matsel::CategoricalAttribute attr{"A" + std::to_string(a), {}};
    const int v = n_vocab(rng);
    for (int l = 0; l < v; ++l) attr.vocabulary.push_back("L" + std::to_string(l));
    attrs.push_back(std::move(attr));
  }
  std::vector<std::string> classes;
  const int c_count = n_classes(rng);
  for (int c = 0; c < c_count; ++c) classes.push_back("K" + std::to_string(c));
  matsel::Schema schema(attrs, {}, classes);

  // Skewed level choice so counts are not uniform.
  std::vector<matsel::MaterialRecord> records;
  const int r_count = n_records(rng);
  for (int r = 0; r < r_count; ++r) {
    matsel::MaterialRecord rec;
    rec.id = "R" + std::to_string(r);
    const int c = std::uniform_int_distribution<int>(0, c_count - 1)(rng);
    rec.class_label = classes[c];
    for (const auto& attr : attrs) {
      const int v = static_cast<int>(attr.vocabulary.size());
      std::geometric_distribution<int> skew(0.5);
      const int l = (std::min(skew(rng), v - 1) + c) % v;
      rec.categorical.emplace(attr.name, attr.vocabulary[l]);
    }
    records.push_back(std::move(rec));
  }
  return matsel::Dataset(schema, std::move(records));
}

/// A random query over a random subset (at least one) of the attributes.
inline std::map<std::string, std::string> random_query(std::mt19937_64& rng, const matsel::Schema& schema) {
  std::map<std::string, std::string> q;
  std::bernoulli_distribution keep(0.6);
  for (const auto& attr : schema.categorical()) {
    if (!keep(rng)) continue;
    q.emplace(attr.name,
              attr.vocabulary[std::uniform_int_distribution<std::size_t>(0, attr.vocabulary.size() - 1)(rng)]);
  }
  if (q.empty()) {
    const auto& attr = schema.categorical().front();
    q.emplace(attr.name, attr.vocabulary.front());
  }
  return q;
}

}  // namespace fixtures
