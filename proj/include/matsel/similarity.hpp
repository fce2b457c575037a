#pragma once

#include "matsel/error.hpp"
#include "matsel/record.hpp"
#include "matsel/schema.hpp"
#include "matsel/strings.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace matsel::similarity {

/// Variance terms at or below this make r undefined.
inline constexpr double variance_epsilon = 1e-12;

/// Pearson's r in the one-pass sums form
///
///   r = (Sxy - Sx*Sy/n) / sqrt((Sxx - Sx^2/n) * (Syy - Sy^2/n))
///
/// Sums accumulate in long double. Returns nullopt when either vector is
/// constant. The result is clamped to [-1, 1].
inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    detail::fail("similarity", "LengthMismatch",
                 std::to_string(x.size()) + " vs " + std::to_string(y.size()) + " values");
  if (x.size() < 2) detail::fail("similarity", "TooShort", "need at least 2 paired values");

  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  bool x_const = true, y_const = true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) detail::fail("similarity", "NonFinite", "at index " + std::to_string(i));
    const long double a = x[i], b = y[i];
    sx += a;
    sy += b;
    sxx += a * a;
    syy += b * b;
    sxy += a * b;
    x_const = x_const && x[i] == x[0];
    y_const = y_const && y[i] == y[0];
  }
  if (x_const || y_const) return std::nullopt;

  const auto n = static_cast<long double>(x.size());
  const long double vx = sxx - sx * sx / n;
  const long double vy = syy - sy * sy / n;
  if (vx <= variance_epsilon || vy <= variance_epsilon) return std::nullopt;
  const long double r = (sxy - sx * sy / n) / std::sqrt(vx * vy);
  return std::clamp(static_cast<double>(r), -1.0, 1.0);
}

/// Requirement and material values over the attributes both carry.
struct AlignedPair {
  std::vector<std::string> attrs;  // schema order
  std::vector<double> x;           // requirement
  std::vector<double> y;           // material
  [[nodiscard]] std::size_t n() const noexcept { return attrs.size(); }

  friend bool operator==(const AlignedPair&, const AlignedPair&) = default;
};

inline AlignedPair align(const DesignRequirement& req, const MaterialRecord& material, const Schema& schema) {
  AlignedPair out;
  for (const auto& attr : schema.numeric()) {
    const auto q = req.numeric.find(attr.name);
    const auto m = material.numeric.find(attr.name);
    if (q == req.numeric.end() || m == material.numeric.end()) continue;
    out.attrs.push_back(attr.name);
    out.x.push_back(q->second);
    out.y.push_back(m->second);
  }
  return out;
}

enum class Status { Ranked, BelowThreshold, UndefinedCorrelation, InsufficientOverlap };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::Ranked: return "Ranked";
    case Status::BelowThreshold: return "BelowThreshold";
    case Status::UndefinedCorrelation: return "UndefinedCorrelation";
    case Status::InsufficientOverlap: return "InsufficientOverlap";
  }
  return "?";
}

struct SelectionResult {
  std::string material_id;
  std::optional<double> r;
  Status status = Status::BelowThreshold;
  std::optional<std::size_t> rank;  // 1-based, present iff Ranked

  friend bool operator==(const SelectionResult&, const SelectionResult&) = default;
};

struct SelectionParams {
  double threshold = 0.997;
  std::size_t min_overlap = 3;
  std::optional<std::size_t> top_k;
  /// z-score each attribute over the candidate set before correlating.
  bool normalize = false;

  friend bool operator==(const SelectionParams&, const SelectionParams&) = default;
};

inline void validate_params(const SelectionParams& p) {
  if (!(p.threshold >= -1.0 && p.threshold <= 1.0))
    detail::fail("similarity", "InvalidParams", "threshold must lie in [-1, 1], got " + text::format_double(p.threshold));
  if (p.min_overlap < 3) detail::fail("similarity", "InvalidParams", "min_overlap must be at least 3");
  if (p.top_k && *p.top_k == 0) detail::fail("similarity", "InvalidParams", "top_k must be positive");
}

namespace impl {

struct Scale {
  double mean = 0.0;
  double sd = 1.0;
};

/// Per-attribute mean and sample standard deviation over the candidates
/// carrying the attribute. Degenerate attributes are only centered.
inline std::map<std::string, Scale> fit_scales(std::span<const MaterialRecord> candidates, const Schema& schema) {
  std::map<std::string, Scale> scales;
  for (const auto& attr : schema.numeric()) {
    std::vector<double> values;
    for (const auto& c : candidates)
      if (auto it = c.numeric.find(attr.name); it != c.numeric.end()) values.push_back(it->second);
    Scale s;
    if (!values.empty()) {
      double sum = 0.0;
      for (double v : values) sum += v;
      s.mean = sum / static_cast<double>(values.size());
    }
    if (values.size() >= 2) {
      double ss = 0.0;
      for (double v : values) ss += (v - s.mean) * (v - s.mean);
      const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
      if (sd > 0.0) s.sd = sd;
    }
    scales.emplace(attr.name, s);
  }
  return scales;
}

inline void apply(AlignedPair& pair, const std::map<std::string, Scale>& scales) {
  for (std::size_t i = 0; i < pair.n(); ++i) {
    const auto& s = scales.at(pair.attrs[i]);
    pair.x[i] = (pair.x[i] - s.mean) / s.sd;
    pair.y[i] = (pair.y[i] - s.mean) / s.sd;
  }
}

}  // namespace impl

/// Correlates the requirement against every candidate and ranks those with
/// r >= threshold. Ranked results come first (r descending, id ascending on
/// ties), then every other candidate in input order. `top_k` drops Ranked
/// results past the k-th; everything else is always reported.
inline std::vector<SelectionResult> rank(const DesignRequirement& req, std::span<const MaterialRecord> candidates,
                                         const SelectionParams& params, const Schema& schema) {
  validate_params(params);
  const auto valid = validate_requirement(req, schema);
  if (valid.numeric.size() < params.min_overlap)
    detail::fail("similarity", "TooFewQueryAttrs",
                 "requirement has " + std::to_string(valid.numeric.size()) + " numeric values, need at least " +
                     std::to_string(params.min_overlap));

  std::map<std::string, impl::Scale> scales;
  if (params.normalize) scales = impl::fit_scales(candidates, schema);

  std::vector<SelectionResult> ranked;
  std::vector<SelectionResult> rest;
  for (const auto& material : candidates) {
    SelectionResult res{material.id, std::nullopt, Status::BelowThreshold, std::nullopt};
    auto pair = align(valid, material, schema);
    if (pair.n() < params.min_overlap) {
      res.status = Status::InsufficientOverlap;
      rest.push_back(std::move(res));
      continue;
    }
    if (params.normalize) impl::apply(pair, scales);
    res.r = pearson(pair.x, pair.y);
    if (!res.r) {
      res.status = Status::UndefinedCorrelation;
      rest.push_back(std::move(res));
    } else if (*res.r >= params.threshold) {
      res.status = Status::Ranked;
      ranked.push_back(std::move(res));
    } else {
      rest.push_back(std::move(res));
    }
  }

  std::sort(ranked.begin(), ranked.end(), [](const SelectionResult& a, const SelectionResult& b) {
    if (*a.r != *b.r) return *a.r > *b.r;
    return a.material_id < b.material_id;
  });
  if (params.top_k && ranked.size() > *params.top_k) ranked.resize(*params.top_k);
  for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i].rank = i + 1;

  ranked.insert(ranked.end(), std::make_move_iterator(rest.begin()), std::make_move_iterator(rest.end()));
  return ranked;
}

/// Highest-r Ranked material (smaller id on ties), or nullopt if none ranked.
inline std::optional<std::string> select_optimal(std::span<const SelectionResult> results) {
  const SelectionResult* best = nullptr;
  for (const auto& r : results) {
    if (r.status != Status::Ranked || !r.r) continue;
    if (!best || *r.r > *best->r || (*r.r == *best->r && r.material_id < best->material_id)) best = &r;
  }
  if (!best) return std::nullopt;
  return best->material_id;
}

}  // namespace matsel::similarity
