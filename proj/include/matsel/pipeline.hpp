#pragma once

#include "matsel/bayes.hpp"
#include "matsel/error.hpp"
#include "matsel/record.hpp"
#include "matsel/schema.hpp"
#include "matsel/similarity.hpp"

#include <optional>
#include <string>
#include <vector>

namespace matsel::pipeline {

struct ComparisonRow {
  std::string attribute;
  std::string unit;
  double requirement = 0.0;
  double material = 0.0;

  friend bool operator==(const ComparisonRow&, const ComparisonRow&) = default;
};

struct PipelineResult {
  bayes::ClassPrediction prediction;
  std::size_t class_member_count = 0;
  std::vector<similarity::SelectionResult> results;
  std::optional<std::string> optimal;
  std::optional<std::vector<ComparisonRow>> comparison;  // present iff optimal
  similarity::SelectionParams params;

  friend bool operator==(const PipelineResult&, const PipelineResult&) = default;
};

/// Requirement vs material over their shared numeric attributes, schema order.
inline std::vector<ComparisonRow> compare(const DesignRequirement& req, const MaterialRecord& material,
                                          const Schema& schema) {
  const auto pair = similarity::align(req, material, schema);
  std::vector<ComparisonRow> rows;
  rows.reserve(pair.n());
  for (std::size_t i = 0; i < pair.n(); ++i) {
    const auto& attr = schema.numeric()[*schema.numeric_index(pair.attrs[i])];
    rows.push_back({attr.name, attr.unit, pair.x[i], pair.y[i]});
  }
  return rows;
}

/// Records labeled `label`, in dataset order. Unlabeled records never match.
inline std::vector<MaterialRecord> members_of(const Dataset& data, const std::string& label) {
  std::vector<MaterialRecord> out;
  for (const auto& r : data.records())
    if (r.class_label && *r.class_label == label) out.push_back(r);
  return out;
}

/// Classify the requirement, restrict the database to the predicted class,
/// rank that class by correlation and report the optimal material with its
/// attribute comparison.
inline PipelineResult discover(const bayes::TrainedModel& model, const Dataset& data, const DesignRequirement& req,
                               const similarity::SelectionParams& params) {
  if (model.schema().fingerprint() != data.schema().fingerprint())
    detail::fail("pipeline", "SchemaMismatch",
                 "model schema " + model.schema().fingerprint() + " vs dataset schema " + data.schema().fingerprint());
  const auto valid = validate_requirement(req, data.schema(), RequirementUse::classification);

  PipelineResult out;
  out.params = params;
  out.prediction = bayes::predict(model, valid);
  const auto candidates = members_of(data, out.prediction.predicted);
  out.class_member_count = candidates.size();
  out.results = similarity::rank(valid, candidates, params, data.schema());
  out.optimal = similarity::select_optimal(out.results);
  if (out.optimal) out.comparison = compare(valid, *data.find(*out.optimal), data.schema());
  return out;
}

}  // namespace matsel::pipeline
