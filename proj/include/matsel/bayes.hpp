#pragma once

#include "matsel/csv.hpp"
#include "matsel/error.hpp"
#include "matsel/record.hpp"
#include "matsel/schema.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace matsel::bayes {

/// Counts per [class][attribute][level], indices in schema order.
using CountTable = std::vector<std::vector<std::vector<std::uint64_t>>>;

/// Raw training counts plus the smoothing pseudo-count. Probabilities are
/// derived on demand, so a model can be re-smoothed without retraining.
class TrainedModel {
 public:
  TrainedModel(Schema schema, double alpha, std::vector<std::uint64_t> class_counts, CountTable cond_counts,
               std::string trained_on)
      : schema_(std::move(schema)),
        alpha_(alpha),
        class_counts_(std::move(class_counts)),
        cond_counts_(std::move(cond_counts)),
        trained_on_(std::move(trained_on)) {
    if (!(alpha_ >= 0.0) || !std::isfinite(alpha_))
      detail::fail("bayes", "InvalidAlpha", "alpha must be finite and >= 0, got " + text::format_double(alpha_));
    const auto& classes = schema_.class_labels();
    const auto& attrs = schema_.categorical();
    if (class_counts_.size() != classes.size() || cond_counts_.size() != classes.size())
      detail::fail("bayes", "BadModel", "count tables do not match the schema's class list");
    total_ = std::accumulate(class_counts_.begin(), class_counts_.end(), std::uint64_t{0});
    for (std::size_t c = 0; c < classes.size(); ++c) {
      if (cond_counts_[c].size() != attrs.size())
        detail::fail("bayes", "BadModel", "count table for class " + classes[c] + " does not match the attributes");
      for (std::size_t a = 0; a < attrs.size(); ++a) {
        const auto& levels = cond_counts_[c][a];
        if (levels.size() != attrs[a].vocabulary.size())
          detail::fail("bayes", "BadModel", "count table for " + classes[c] + "/" + attrs[a].name + " has wrong size");
        if (std::accumulate(levels.begin(), levels.end(), std::uint64_t{0}) != class_counts_[c])
          detail::fail("bayes", "BadModel",
                       "counts for " + classes[c] + "/" + attrs[a].name + " do not sum to the class count");
      }
    }
  }

  [[nodiscard]] const Schema& schema() const noexcept { return schema_; }
  [[nodiscard]] double alpha() const noexcept { return alpha_; }
  [[nodiscard]] std::uint64_t total_count() const noexcept { return total_; }
  [[nodiscard]] const std::vector<std::uint64_t>& class_counts() const noexcept { return class_counts_; }
  [[nodiscard]] const CountTable& cond_counts() const noexcept { return cond_counts_; }
  [[nodiscard]] const std::string& trained_on() const noexcept { return trained_on_; }

  [[nodiscard]] std::uint64_t class_count(std::size_t c) const { return class_counts_.at(c); }
  [[nodiscard]] std::uint64_t cond_count(std::size_t c, std::size_t a, std::size_t l) const {
    return cond_counts_.at(c).at(a).at(l);
  }

  /// |C_i,D| / |D|, unsmoothed.
  [[nodiscard]] double prior(std::size_t c) const {
    return static_cast<double>(class_counts_.at(c)) / static_cast<double>(total_);
  }

  /// (count + alpha) / (class count + alpha * V). A class with no training
  /// records at alpha = 0 gets the uniform 1/V.
  [[nodiscard]] double likelihood(std::size_t c, std::size_t a, std::size_t l) const {
    const auto n_c = static_cast<double>(class_counts_.at(c));
    const auto vocab = static_cast<double>(schema_.categorical().at(a).vocabulary.size());
    const double denom = n_c + alpha_ * vocab;
    if (denom == 0.0) return 1.0 / vocab;
    return (static_cast<double>(cond_count(c, a, l)) + alpha_) / denom;
  }

  [[nodiscard]] TrainedModel with_alpha(double alpha) const {
    return TrainedModel(schema_, alpha, class_counts_, cond_counts_, trained_on_);
  }

  friend bool operator==(const TrainedModel&, const TrainedModel&) = default;

 private:
  Schema schema_;
  double alpha_;
  std::vector<std::uint64_t> class_counts_;
  CountTable cond_counts_;
  std::string trained_on_;
  std::uint64_t total_ = 0;
};

/// Tabulates class and class-conditional counts. Every record needs a class
/// label and a value for every categorical attribute.
inline TrainedModel train(const Dataset& data, double alpha = 1.0) {
  const auto& schema = data.schema();
  if (data.size() == 0) detail::fail("bayes", "EmptyDataset", "cannot train on zero records");
  const auto& attrs = schema.categorical();
  std::vector<std::uint64_t> class_counts(schema.class_labels().size(), 0);
  CountTable cond(schema.class_labels().size());
  for (auto& per_class : cond) {
    per_class.resize(attrs.size());
    for (std::size_t a = 0; a < attrs.size(); ++a) per_class[a].assign(attrs[a].vocabulary.size(), 0);
  }
  for (const auto& rec : data.records()) {
    if (!rec.class_label) detail::fail("bayes", "UnlabeledRecord", rec.id);
    const auto c = *schema.class_index(*rec.class_label);
    ++class_counts[c];
    for (std::size_t a = 0; a < attrs.size(); ++a) {
      const auto it = rec.categorical.find(attrs[a].name);
      if (it == rec.categorical.end())
        detail::fail("bayes", "IncompleteRecord", rec.id + " has no value for " + attrs[a].name);
      ++cond[c][a][*schema.level_index(a, it->second)];
    }
  }
  return TrainedModel(schema, alpha, std::move(class_counts), std::move(cond), dataset_fingerprint(data));
}

/// Smoothed P(level | class) for one attribute, by name.
inline double likelihood(const TrainedModel& model, const std::string& label, const std::string& attr,
                         const std::string& level) {
  const auto& schema = model.schema();
  const auto canonical = schema.canonical_class(label);
  const auto c = canonical ? schema.class_index(*canonical) : std::nullopt;
  if (!c) detail::fail("bayes", "UnknownClass", label);
  const auto a = schema.categorical_index(attr);
  if (!a) detail::fail("bayes", "UnknownAttribute", attr);
  const auto l = schema.level_index(*a, level);
  if (!l) detail::fail("bayes", "BadLevel", attr + ": \"" + level + "\"");
  return model.likelihood(*c, *a, *l);
}

namespace impl {

inline std::vector<double> log_scores(const TrainedModel& model, const DesignRequirement& req) {
  const auto& schema = model.schema();
  const auto valid = validate_requirement(req, schema, RequirementUse::classification);
  std::vector<double> scores(schema.class_labels().size());
  for (std::size_t c = 0; c < scores.size(); ++c) {
    double s = std::log(model.prior(c));
    for (std::size_t a = 0; a < schema.categorical().size(); ++a) {
      const auto it = valid.categorical.find(schema.categorical()[a].name);
      if (it == valid.categorical.end()) continue;
      s += std::log(model.likelihood(c, a, *schema.level_index(a, it->second)));
    }
    scores[c] = s;
  }
  return scores;
}

}  // namespace impl

/// log P(C_i) + sum over the requirement's categorical entries of
/// log P(x_k | C_i). Attributes the requirement omits do not contribute.
inline std::map<std::string, double> score(const TrainedModel& model, const DesignRequirement& req) {
  const auto scores = impl::log_scores(model, req);
  std::map<std::string, double> out;
  for (std::size_t c = 0; c < scores.size(); ++c) out.emplace(model.schema().class_labels()[c], scores[c]);
  return out;
}

struct ClassPrediction {
  std::string predicted;
  std::map<std::string, double> log_scores;
  std::map<std::string, double> posteriors;

  friend bool operator==(const ClassPrediction&, const ClassPrediction&) = default;
};

/// Scores closer than this in log space count as tied.
inline constexpr double tie_tolerance = 1e-9;

/// Maximum a posteriori class. Ties go to the larger prior, then to the
/// earlier class in schema order. Throws NoPrediction when every class has
/// zero probability (possible only at alpha = 0).
inline ClassPrediction predict(const TrainedModel& model, const DesignRequirement& req) {
  const auto scores = impl::log_scores(model, req);
  const auto& labels = model.schema().class_labels();

  std::optional<std::size_t> best;
  for (std::size_t c = 0; c < scores.size(); ++c) {
    if (!std::isfinite(scores[c])) continue;
    if (!best || scores[c] > scores[*best] + tie_tolerance) {
      best = c;
    } else if (scores[c] >= scores[*best] - tie_tolerance && model.class_count(c) > model.class_count(*best)) {
      best = c;
    }
  }
  if (!best)
    matsel::detail::fail("bayes", "NoPrediction", "every class has zero probability for this requirement");

  const double top = scores[*best];
  double z = 0.0;
  for (double s : scores) z += std::isfinite(s) ? std::exp(s - top) : 0.0;

  ClassPrediction out;
  out.predicted = labels[*best];
  for (std::size_t c = 0; c < scores.size(); ++c) {
    out.log_scores.emplace(labels[c], scores[c]);
    out.posteriors.emplace(labels[c], std::isfinite(scores[c]) ? std::exp(scores[c] - top) / z : 0.0);
  }
  return out;
}

}  // namespace matsel::bayes
