#pragma once

#include "matsel/bayes.hpp"
#include "matsel/csv.hpp"
#include "matsel/error.hpp"
#include "matsel/model_io.hpp"
#include "matsel/pipeline.hpp"
#include "matsel/report.hpp"
#include "matsel/schema.hpp"
#include "matsel/service.hpp"
#include "matsel/similarity.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace matsel::cli {

enum class OutputFormat { table, json };

struct CliConfig {
  std::string data_path;
  std::string schema_path;
  std::string model_path;
  std::string req_path;
  std::string out_path;
  std::optional<double> alpha;
  double threshold = 0.997;
  std::size_t min_overlap = 3;
  std::optional<std::size_t> top_k;
  bool normalize = false;
  std::string output = "json";
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;
  std::optional<std::string> class_filter;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) detail::fail("cli", "IoError", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << content)) detail::fail("cli", "IoError", "cannot write " + path);
}

/// --schema, else $MATSELECT_SCHEMA, else `fallback`.
inline Schema resolve_schema(const CliConfig& cfg, const Schema& fallback) {
  std::string path = cfg.schema_path;
  if (path.empty())
    if (const char* env = std::getenv("MATSELECT_SCHEMA"); env && *env) path = env;
  if (path.empty()) return fallback;
  return parse_schema_config(read_file(path));
}

inline similarity::SelectionParams selection_params(const CliConfig& cfg) {
  similarity::SelectionParams p{cfg.threshold, cfg.min_overlap, cfg.top_k, cfg.normalize};
  similarity::validate_params(p);
  return p;
}

inline bayes::TrainedModel load_model(const CliConfig& cfg) {
  auto model = parse_model(read_file(cfg.model_path));
  return cfg.alpha ? model.with_alpha(*cfg.alpha) : model;
}

/// Blocks serving the API until the server is stopped. `on_ready` receives
/// the bound port (useful with port 0).
inline void serve(const service::ServiceState& state, const std::string& host, int port,
                  const std::optional<std::filesystem::path>& static_dir, std::ostream& err,
                  const std::function<void(httplib::Server&, int)>& on_ready = {}) {
  httplib::Server server;
  service::mount(server, state, static_dir);
  const int bound = port == 0 ? server.bind_to_any_port(host) : (server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) detail::fail("cli", "IoError", "cannot bind " + host + ":" + std::to_string(port));
  err << "matselect: serving " << state.data.size() << " records on http://" << host << ':' << bound << std::endl;
  if (on_ready) on_ready(server, bound);
  server.listen_after_bind();
}

/// Entry point shared by the executable and the tests. Exit codes: 0 ok,
/// 1 domain error, 2 usage error.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Material class prediction and similarity-based material selection", "matselect"};
  app.require_subcommand(1);

  const auto add_output = [&](CLI::App* sub) {
    sub->add_option("--output", cfg.output, "Output format")->check(CLI::IsMember({"table", "json"}));
  };
  const auto add_selection = [&](CLI::App* sub) {
    sub->add_option("--threshold", cfg.threshold, "Minimum Pearson r for a candidate to be ranked")
        ->check(CLI::Range(-1.0, 1.0));
    sub->add_option("--min-overlap", cfg.min_overlap, "Minimum shared numeric attributes")->check(CLI::Range(3, 1000000));
    sub->add_option("--top-k", cfg.top_k, "Keep at most K ranked candidates")->check(CLI::PositiveNumber);
    sub->add_flag("--normalize", cfg.normalize, "z-score attributes over the candidate set first");
  };
  const auto add_alpha = [&](CLI::App* sub, const char* help) {
    sub->add_option("--alpha", cfg.alpha, help)->check(CLI::NonNegativeNumber);
  };

  auto* train_cmd = app.add_subcommand("train", "Count a labeled materials table into a model file");
  train_cmd->add_option("--data", cfg.data_path, "Materials CSV")->required();
  train_cmd->add_option("--schema", cfg.schema_path, "Schema config (default: $MATSELECT_SCHEMA or built-in)");
  add_alpha(train_cmd, "Laplace pseudo-count (default 1; 0 = raw frequencies)");
  train_cmd->add_option("--out", cfg.out_path, "Model file to write")->required();
  add_output(train_cmd);

  auto* classify_cmd = app.add_subcommand("classify", "Predict the material class of a requirement");
  classify_cmd->add_option("--model", cfg.model_path, "Model file")->required();
  classify_cmd->add_option("--req", cfg.req_path, "Requirement JSON")->required();
  add_alpha(classify_cmd, "Override the model's pseudo-count");
  add_output(classify_cmd);

  auto* select_cmd = app.add_subcommand("select", "Rank materials by correlation with a requirement");
  select_cmd->add_option("--data", cfg.data_path, "Materials CSV")->required();
  select_cmd->add_option("--req", cfg.req_path, "Requirement JSON")->required();
  select_cmd->add_option("--schema", cfg.schema_path, "Schema config");
  select_cmd->add_option("--class", cfg.class_filter, "Only rank materials of this class");
  add_selection(select_cmd);
  add_output(select_cmd);

  auto* pipeline_cmd = app.add_subcommand("pipeline", "Classify, then select the optimal material in that class");
  pipeline_cmd->add_option("--model", cfg.model_path, "Model file")->required();
  pipeline_cmd->add_option("--data", cfg.data_path, "Materials CSV")->required();
  pipeline_cmd->add_option("--req", cfg.req_path, "Requirement JSON")->required();
  pipeline_cmd->add_option("--schema", cfg.schema_path, "Schema config (default: the model's)");
  add_alpha(pipeline_cmd, "Override the model's pseudo-count");
  add_selection(pipeline_cmd);
  add_output(pipeline_cmd);

  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP/JSON API");
  serve_cmd->add_option("--model", cfg.model_path, "Model file")->required();
  serve_cmd->add_option("--data", cfg.data_path, "Materials CSV")->required();
  serve_cmd->add_option("--schema", cfg.schema_path, "Schema config (default: the model's)");
  serve_cmd->add_option("--host", cfg.host, "Bind address");
  serve_cmd->add_option("--port", cfg.port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--static", cfg.static_dir, "Directory served at /");
  add_alpha(serve_cmd, "Override the model's pseudo-count");
  add_selection(serve_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "matselect: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  const bool as_json = cfg.output == "json";
  try {
    if (train_cmd->parsed()) {
      const auto schema = resolve_schema(cfg, default_schema());
      const auto data = parse_materials_csv(read_file(cfg.data_path), schema);
      const auto model = bayes::train(data, cfg.alpha.value_or(1.0));
      write_file(cfg.out_path, model_to_json(model).dump(2) + "\n");
      nlohmann::json counts = nlohmann::json::object();
      nlohmann::json priors = nlohmann::json::object();
      for (std::size_t c = 0; c < schema.class_labels().size(); ++c) {
        counts[schema.class_labels()[c]] = model.class_count(c);
        priors[schema.class_labels()[c]] = report::number(model.prior(c));
      }
      const nlohmann::json summary{{"model", cfg.out_path},        {"records", model.total_count()},
                                   {"alpha", model.alpha()},        {"class_counts", counts},
                                   {"priors", priors},              {"trained_on", model.trained_on()}};
      if (as_json) {
        out << report::dump(summary);
      } else {
        out << "trained " << model.total_count() << " records (alpha " << text::format_double(model.alpha())
            << ") -> " << cfg.out_path << '\n';
        for (std::size_t c = 0; c < schema.class_labels().size(); ++c)
          out << report::pad(schema.class_labels()[c], 8) << report::pad(std::to_string(model.class_count(c)), 6)
              << report::fmt(model.prior(c)) << '\n';
      }
    } else if (classify_cmd->parsed()) {
      const auto model = load_model(cfg);
      const auto req = report::parse_requirement(read_file(cfg.req_path));
      const auto prediction = bayes::predict(model, validate_requirement(req, model.schema(), RequirementUse::classification));
      out << (as_json ? report::dump(report::to_json(prediction)) : report::render_table(prediction));
    } else if (select_cmd->parsed()) {
      const auto schema = resolve_schema(cfg, default_schema());
      const auto data = parse_materials_csv(read_file(cfg.data_path), schema);
      const auto req = validate_requirement(report::parse_requirement(read_file(cfg.req_path)), schema);
      const auto params = selection_params(cfg);
      std::vector<MaterialRecord> candidates = data.records();
      if (cfg.class_filter) {
        const auto label = schema.canonical_class(*cfg.class_filter);
        if (!label) detail::fail("cli", "UnknownClass", *cfg.class_filter);
        candidates = pipeline::members_of(data, *label);
      }
      const auto results = similarity::rank(req, candidates, params, schema);
      const auto optimal = similarity::select_optimal(results);
      if (as_json) {
        out << report::dump({{"results", report::to_json(results)},
                             {"optimal", optimal ? nlohmann::json(*optimal) : nlohmann::json(nullptr)},
                             {"params", report::to_json(params)}});
      } else {
        out << report::render_table(results) << "\noptimal: " << optimal.value_or("none") << '\n';
      }
    } else if (pipeline_cmd->parsed()) {
      const auto model = load_model(cfg);
      const auto data = parse_materials_csv(read_file(cfg.data_path), resolve_schema(cfg, model.schema()));
      const auto req = report::parse_requirement(read_file(cfg.req_path));
      const auto result = pipeline::discover(model, data, req, selection_params(cfg));
      out << (as_json ? report::dump(report::to_json(result)) : report::render_table(result));
    } else if (serve_cmd->parsed()) {
      auto model = load_model(cfg);
      auto data = parse_materials_csv(read_file(cfg.data_path), resolve_schema(cfg, model.schema()));
      if (model.schema().fingerprint() != data.schema().fingerprint())
        detail::fail("pipeline", "SchemaMismatch", "model and dataset schemas differ");
      const service::ServiceState state{std::move(model), std::move(data), selection_params(cfg)};
      std::optional<std::filesystem::path> static_dir;
      if (!cfg.static_dir.empty()) static_dir = cfg.static_dir;
      serve(state, cfg.host, cfg.port, static_dir, err);
    }
  } catch (const error& e) {
    err << "matselect: " << e.module() << '/' << e.name() << ": " << e.detail() << '\n';
    return 1;
  }
  return 0;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"matselect"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace matsel::cli
