#pragma once

#include "matsel/bayes.hpp"
#include "matsel/error.hpp"
#include "matsel/pipeline.hpp"
#include "matsel/record.hpp"
#include "matsel/report.hpp"
#include "matsel/similarity.hpp"

#include "httplib.h"
#include "json.hpp"

#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace matsel::service {

/// Everything a request can see. Built once before serving, never mutated.
struct ServiceState {
  bayes::TrainedModel model;
  Dataset data;
  similarity::SelectionParams defaults;
};

struct Response {
  int status = 200;
  std::string body;
};

inline Response error_response(int status, std::string_view name, std::string_view detail) {
  return {status, report::dump({{"error", name}, {"detail", detail}})};
}

namespace impl {

inline int status_for(const error& e) {
  if (e.name() == "EmptyCategorical" || e.name() == "NoPrediction") return 422;
  return 400;
}

template <typename F>
Response guarded(F&& body) {
  try {
    return body();
  } catch (const error& e) {
    return error_response(status_for(e), e.name(), e.detail());
  } catch (const std::exception& e) {
    return error_response(500, "InternalError", e.what());
  }
}

inline nlohmann::json parse_body(std::string_view body) {
  try {
    return nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    detail::fail("api-service", "BadRequirement", std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace impl

/// POST /api/classify: requirement document -> {predicted, posteriors, log_scores}.
inline Response handle_classify(const ServiceState& state, std::string_view body) {
  return impl::guarded([&] {
    const auto req = report::requirement_from_json(impl::parse_body(body));
    const auto valid = validate_requirement(req, state.model.schema(), RequirementUse::classification);
    return Response{200, report::dump(report::to_json(bayes::predict(state.model, valid)))};
  });
}

/// POST /api/pipeline: requirement document plus optional "params" object.
inline Response handle_pipeline(const ServiceState& state, std::string_view body) {
  return impl::guarded([&] {
    const auto doc = impl::parse_body(body);
    const auto req = report::requirement_from_json(doc);
    const auto params = report::params_from_json(doc.value("params", nlohmann::json()), state.defaults);
    return Response{200, report::dump(report::to_json(pipeline::discover(state.model, state.data, req, params)))};
  });
}

/// GET /api/materials[?class=C]
inline Response handle_materials(const ServiceState& state, const std::optional<std::string>& class_filter) {
  return impl::guarded([&] {
    std::optional<std::string> label;
    if (class_filter) {
      label = state.data.schema().canonical_class(*class_filter);
      if (!label) detail::fail("api-service", "UnknownClass", "class \"" + *class_filter + "\" is not declared");
    }
    nlohmann::json items = nlohmann::json::array();
    for (const auto& r : state.data.records()) {
      if (label && r.class_label != label) continue;
      nlohmann::json numeric = nlohmann::json::array();
      for (const auto& attr : state.data.schema().numeric())
        if (r.numeric.contains(attr.name)) numeric.push_back(attr.name);
      items.push_back({{"id", r.id},
                       {"name", r.name},
                       {"class", r.class_label ? nlohmann::json(*r.class_label) : nlohmann::json(nullptr)},
                       {"numeric_attributes", numeric}});
    }
    return Response{200, report::dump(items)};
  });
}

/// GET /api/health
inline Response handle_health(const ServiceState& state) {
  return {200, report::dump({{"status", "ok"},
                             {"records", state.data.size()},
                             {"classes", state.data.schema().class_labels()}})};
}

/// Registers the routes on `server`. `state` must outlive the server. When
/// `static_dir` exists it is served at `/` for the web console.
inline void mount(httplib::Server& server, const ServiceState& state,
                  const std::optional<std::filesystem::path>& static_dir = std::nullopt) {
  const auto send = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server.Post("/api/classify", [&state, send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_classify(state, req.body));
  });
  server.Post("/api/pipeline", [&state, send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_pipeline(state, req.body));
  });
  server.Get("/api/materials", [&state, send](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::string> filter;
    if (req.has_param("class")) filter = req.get_param_value("class");
    send(res, handle_materials(state, filter));
  });
  server.Get("/api/health", [&state, send](const httplib::Request&, httplib::Response& res) {
    send(res, handle_health(state));
  });
  if (static_dir && std::filesystem::is_directory(*static_dir)) server.set_mount_point("/", static_dir->string());
}

}  // namespace matsel::service
