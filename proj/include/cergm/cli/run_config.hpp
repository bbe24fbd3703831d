#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cergm/mcmc.hpp"
#include "cergm/model.hpp"
#include "cergm/motif_poly.hpp"
#include "cergm/variational.hpp"

namespace cergm::cli {

using Json = nlohmann::json;

// Swept parameter: "e", "t", or "zetaI" with I the 1-based motif index.
struct ScanSpec {
  std::string parameter;
  std::vector<double> values;
};

struct RunConfig {
  std::string command;
  ModelSpec model;
  double kappa = 10.0;
  bool envelope = true;
  EnvelopeConstants envelope_constants;
  CoveringConstants covering;
  ChainConfig chain;
  int nodes = 16;
  double delta = 0.1;
  double epsilon = 1.0;
  std::optional<ScanSpec> scan;
  std::optional<int> exact_max_n;
  std::string output_path;
  std::string format = "json";
  int threads = 1;
  bool timing = false;
  // The document after overrides, echoed into every result.
  Json resolved;
};

const std::vector<std::string>& command_names();

// Throws ConfigError on unreadable files or malformed JSON.
Json read_config_file(const std::string& path);

/// Applies "a.b.c=value" to the document, creating objects on the way. The
/// value is parsed as JSON when possible and kept as a string otherwise.
void apply_override(Json& doc, std::string_view assignment);

// Throws ConfigError (or a model validation error) on invalid input.
RunConfig parse_run_config(const Json& doc);

ModelSpec parse_model(const Json& model);
Json model_to_json(const ModelSpec& model);

}  // namespace cergm::cli
