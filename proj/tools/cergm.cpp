#include <CLI11.hpp>
#include <iostream>

#include "cergm/cli/dispatch.hpp"
#include "cergm/cli/run_config.hpp"

int main(int argc, char** argv) {
  using namespace cergm::cli;

  CLI::App app{"Conditional exponential random graph normalization constants"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string output;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool timing = false;

  for (const auto& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--set", overrides, "Override a config key, e.g. --set model.N=7")->take_all();
    sub->add_option("--output", output, "Write the result here instead of stdout");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", seed, "Chain seed");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--timing", timing, "Add runtime_ms to JSON results");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalidConfig;
  }

  RunConfig config;
  try {
    Json doc = read_config_file(config_path);
    doc["command"] = app.get_subcommands().front()->get_name();
    for (const auto& o : overrides) apply_override(doc, o);
    if (!output.empty()) doc["output"]["path"] = output;
    if (!format.empty()) doc["output"]["format"] = format;
    if (seed) doc["chain"]["seed"] = *seed;
    if (threads) doc["threads"] = *threads;
    if (timing) doc["timing"] = true;
    config = parse_run_config(doc);
  } catch (const std::exception& e) {
    std::cerr << "cergm: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return dispatch(config, std::cout, std::cerr);
}
