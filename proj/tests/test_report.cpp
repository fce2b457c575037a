#include "matsel/report.hpp"

#include <gtest/gtest.h>

#include <limits>

using matsel::report::json;

namespace {

std::string error_name(const std::function<void()>& f) {
  try {
    f();
  } catch (const matsel::error& e) {
    return e.name();
  }
  return "no error";
}

}  // namespace

TEST(Report, requirement_document_shape) {
  const auto req = matsel::report::parse_requirement(R"({"categorical": {"CR": "Good"}, "numeric": {"density": 2}})");
  EXPECT_EQ(req.categorical.at("CR"), "Good");
  EXPECT_EQ(req.numeric.at("density"), 2.0);
  EXPECT_TRUE(matsel::report::parse_requirement("{}").categorical.empty());
  EXPECT_EQ(error_name([] { matsel::report::parse_requirement("{"); }), "BadRequirement");
  EXPECT_EQ(error_name([] { matsel::report::parse_requirement("[]"); }), "BadRequirement");
  EXPECT_EQ(error_name([] { matsel::report::parse_requirement(R"({"categorical": {"CR": 3}})"); }), "BadRequirement");
  EXPECT_EQ(error_name([] { matsel::report::parse_requirement(R"({"numeric": {"density": "2"}})"); }),
            "BadRequirement");
}

TEST(Report, params_override_defaults) {
  const auto p = matsel::report::params_from_json(json{{"threshold", 0.9}, {"top_k", 2}}, {});
  EXPECT_EQ(p.threshold, 0.9);
  EXPECT_EQ(p.top_k, 2u);
  EXPECT_EQ(p.min_overlap, 3u);
  EXPECT_EQ(matsel::report::params_from_json(nullptr, {}), matsel::similarity::SelectionParams{});
  EXPECT_EQ(error_name([] { matsel::report::params_from_json(json{{"threshold", 2.0}}, {}); }), "InvalidParams");
  EXPECT_EQ(error_name([] { matsel::report::params_from_json(json{{"threshold", "x"}}, {}); }), "InvalidParams");
}

TEST(Report, undefined_and_infinite_values_become_null) {
  const matsel::similarity::SelectionResult r{"x", std::nullopt, matsel::similarity::Status::UndefinedCorrelation, {}};
  const auto j = matsel::report::to_json(r);
  EXPECT_TRUE(j.at("r").is_null());
  EXPECT_TRUE(j.at("rank").is_null());
  EXPECT_EQ(j.at("status"), "UndefinedCorrelation");
  matsel::bayes::ClassPrediction p{"P", {{"P", -1.0}, {"C", -std::numeric_limits<double>::infinity()}}, {{"P", 1.0}, {"C", 0.0}}};
  EXPECT_TRUE(matsel::report::to_json(p).at("log_scores").at("C").is_null());
}

TEST(Report, numbers_are_rounded_to_ten_significant_digits) {
  EXPECT_EQ(matsel::report::number(0.99848709694321).get<double>(), 0.9984870969);
  EXPECT_EQ(matsel::report::number(1.0).dump(), "1.0");
  EXPECT_EQ(matsel::report::number(8.390332721234e-08).dump(), "8.390332721e-08");
}

TEST(Report, dump_is_stable_under_reparse) {
  const json doc{{"b", 0.1}, {"a", {1, 2, nullptr}}, {"c", {{"z", "q"}}}};
  const auto once = matsel::report::dump(doc);
  EXPECT_EQ(matsel::report::dump(json::parse(once)), once);
  EXPECT_EQ(once.back(), '\n');
}
