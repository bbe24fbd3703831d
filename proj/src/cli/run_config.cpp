#include "cergm/cli/run_config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "cergm/errors.hpp"

namespace cergm::cli {

namespace {

void expect_object(const Json& j, std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
}

void expect_keys(const Json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  expect_object(j, where);
  for (const auto& [key, value] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown key '" + key + "' in " + std::string(where));
}

double number(const Json& j, std::string_view name) {
  if (!j.is_number()) throw ConfigError(std::string(name) + " must be a number");
  return j.get<double>();
}

long integer(const Json& j, std::string_view name) {
  if (!j.is_number_integer()) throw ConfigError(std::string(name) + " must be an integer");
  return j.get<long>();
}

template <typename T>
void read_number(const Json& obj, const char* key, T& out, std::string_view where) {
  if (!obj.contains(key)) return;
  const std::string name = std::string(where) + "." + key;
  if constexpr (std::is_floating_point_v<T>)
    out = number(obj.at(key), name);
  else
    out = static_cast<T>(integer(obj.at(key), name));
}

GraphMotif parse_motif(const Json& j) {
  if (j.is_string()) return GraphMotif::from_name(j.get<std::string>());
  if (!j.is_array() || j.empty()) throw ConfigError("a motif is a name or a non-empty list of [u, v] edges");
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw ConfigError("motif edges are [u, v] pairs of 1-based vertex indices");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return GraphMotif::from_one_indexed(edges);
}

std::vector<double> parse_scan_values(const Json& scan) {
  if (scan.contains("values")) {
    const Json& v = scan.at("values");
    if (!v.is_array() || v.empty()) throw ConfigError("scan.values must be a non-empty array");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(number(x, "scan.values[]"));
    return out;
  }
  if (!scan.contains("from") || !scan.contains("to") || !scan.contains("steps"))
    throw ConfigError("scan needs either values or from, to and steps");
  const double from = number(scan.at("from"), "scan.from");
  const double to = number(scan.at("to"), "scan.to");
  const long steps = integer(scan.at("steps"), "scan.steps");
  if (steps < 1) throw ConfigError("scan.steps must be >= 1");
  std::vector<double> out;
  for (long i = 0; i <= steps; ++i) out.push_back(from + (to - from) * static_cast<double>(i) / steps);
  return out;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"exact", "variational", "bounds", "sample",
                                              "integrate", "compare", "scan"};
  return names;
}

Json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
}

void apply_override(Json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) throw ConfigError("override must look like key=value");
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  Json value;
  try {
    value = Json::parse(raw);
  } catch (const Json::exception&) {
    value = raw;
  }

  Json* node = &doc;
  std::stringstream parts(key);
  std::string part;
  std::vector<std::string> path;
  while (std::getline(parts, part, '.')) {
    if (part.empty()) throw ConfigError("empty component in override key " + key);
    path.push_back(part);
  }
  for (std::size_t i = 0; i < path.size(); ++i) {
    const bool last = i + 1 == path.size();
    if (node->is_array()) {
      std::size_t index = 0;
      try {
        index = std::stoul(path[i]);
      } catch (const std::exception&) {
        throw ConfigError("override key " + key + " indexes an array with '" + path[i] + "'");
      }
      if (index >= node->size()) throw ConfigError("override key " + key + " is out of range");
      node = &(*node)[index];
    } else {
      if (node->is_null()) *node = Json::object();
      if (!node->is_object()) throw ConfigError("override key " + key + " descends into a scalar");
      node = &(*node)[path[i]];
    }
    if (last) *node = value;
  }
}

ModelSpec parse_model(const Json& m) {
  expect_keys(m, {"N", "motifs", "zetas", "constraint"}, "model");
  if (!m.contains("N") || !m.contains("zetas")) throw ConfigError("model needs N and zetas");
  ModelSpec spec;
  spec.vertex_count = static_cast<int>(integer(m.at("N"), "model.N"));
  if (spec.vertex_count < 2) throw ConfigError("model.N must be >= 2");
  if (m.contains("motifs")) {
    if (!m.at("motifs").is_array() || m.at("motifs").empty()) throw ConfigError("model.motifs must be a non-empty array");
    for (const auto& h : m.at("motifs")) spec.motifs.push_back(parse_motif(h));
  } else {
    spec.motifs.push_back(GraphMotif::edge());
  }
  if (!m.at("zetas").is_array()) throw ConfigError("model.zetas must be an array");
  for (const auto& z : m.at("zetas")) spec.zetas.push_back(number(z, "model.zetas[]"));
  if (spec.zetas.size() != spec.motifs.size()) throw ConfigError("model.zetas needs one entry per motif");
  if (spec.motifs.front().kind() != MotifKind::Edge) throw ConfigError("the first motif must be the single edge");
  if (m.contains("constraint") && !m.at("constraint").is_null()) {
    const Json& c = m.at("constraint");
    expect_keys(c, {"e", "t"}, "model.constraint");
    if (!c.contains("e") || !c.contains("t")) throw ConfigError("model.constraint needs e and t");
    ConstraintSpec cs{number(c.at("e"), "model.constraint.e"), number(c.at("t"), "model.constraint.t")};
    try {
      cs.validate();
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    spec.constraint = cs;
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

Json model_to_json(const ModelSpec& model) {
  Json m;
  m["N"] = model.vertex_count;
  Json motifs = Json::array();
  for (const auto& h : model.motifs) {
    if (!h.name().empty())
      motifs.push_back(h.name());
    else
      motifs.push_back(h.one_indexed_edges());
  }
  m["motifs"] = motifs;
  m["zetas"] = model.zetas;
  if (model.constraint)
    m["constraint"] = {{"e", model.constraint->e}, {"t", model.constraint->t}};
  else
    m["constraint"] = nullptr;
  return m;
}

RunConfig parse_run_config(const Json& doc) {
  expect_keys(doc,
              {"command", "model", "kappa", "envelope", "constants", "chain", "nodes", "bounds", "scan", "exact",
               "output", "threads", "timing"},
              "config");
  RunConfig cfg;
  if (!doc.contains("command") || !doc.at("command").is_string()) throw ConfigError("config needs a command");
  cfg.command = doc.at("command").get<std::string>();
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), cfg.command) == names.end())
    throw ConfigError("unknown command '" + cfg.command + "'");
  if (!doc.contains("model")) throw ConfigError("config needs a model");
  cfg.model = parse_model(doc.at("model"));

  read_number(doc, "kappa", cfg.kappa, "config");
  if (doc.contains("envelope")) {
    if (!doc.at("envelope").is_boolean()) throw ConfigError("envelope must be a boolean");
    cfg.envelope = doc.at("envelope").get<bool>();
  }
  if (doc.contains("constants")) {
    const Json& c = doc.at("constants");
    expect_keys(c, {"c", "C", "covering_c", "covering_C"}, "constants");
    read_number(c, "c", cfg.envelope_constants.c, "constants");
    read_number(c, "C", cfg.envelope_constants.C, "constants");
    read_number(c, "covering_c", cfg.covering.c, "constants");
    read_number(c, "covering_C", cfg.covering.C, "constants");
    if (!(cfg.envelope_constants.c > 0.0 && cfg.envelope_constants.C > 0.0 && cfg.covering.c > 0.0 &&
          cfg.covering.C > 0.0))
      throw ConfigError("constants must be positive");
  }
  if (doc.contains("chain")) {
    const Json& c = doc.at("chain");
    expect_keys(c, {"seed", "stream", "sweeps", "burn_in", "thin", "move_mix", "audit_interval"}, "chain");
    if (c.contains("seed")) {
      if (!c.at("seed").is_number_unsigned() && !(c.at("seed").is_number_integer() && c.at("seed").get<long>() >= 0))
        throw ConfigError("chain.seed must be a non-negative integer");
      cfg.chain.seed = c.at("seed").get<std::uint64_t>();
    }
    read_number(c, "stream", cfg.chain.stream, "chain");
    read_number(c, "sweeps", cfg.chain.sweeps, "chain");
    read_number(c, "burn_in", cfg.chain.burn_in, "chain");
    read_number(c, "thin", cfg.chain.thin, "chain");
    read_number(c, "move_mix", cfg.chain.move_mix, "chain");
    read_number(c, "audit_interval", cfg.chain.audit_interval, "chain");
  }
  cfg.chain.validate();
  read_number(doc, "nodes", cfg.nodes, "config");
  if (cfg.nodes < 2) throw ConfigError("nodes must be >= 2");
  if (doc.contains("bounds")) {
    const Json& b = doc.at("bounds");
    expect_keys(b, {"delta", "epsilon"}, "bounds");
    read_number(b, "delta", cfg.delta, "bounds");
    read_number(b, "epsilon", cfg.epsilon, "bounds");
  }
  if (!(cfg.delta > 0.0) || !(cfg.epsilon > 0.0)) throw ConfigError("bounds.delta and bounds.epsilon must be positive");
  if (doc.contains("scan")) {
    const Json& s = doc.at("scan");
    expect_keys(s, {"parameter", "values", "from", "to", "steps"}, "scan");
    if (!s.contains("parameter") || !s.at("parameter").is_string()) throw ConfigError("scan needs a parameter");
    ScanSpec scan{s.at("parameter").get<std::string>(), parse_scan_values(s)};
    const std::string& p = scan.parameter;
    if (p != "e" && p != "t") {
      if (p.rfind("zeta", 0) != 0) throw ConfigError("scan.parameter must be e, t or zetaI");
      int index = 0;
      try {
        index = std::stoi(p.substr(4));
      } catch (const std::exception&) {
        throw ConfigError("scan.parameter must be e, t or zetaI");
      }
      if (index < 1 || static_cast<std::size_t>(index) > cfg.model.motifs.size())
        throw ConfigError("scan.parameter names a motif the model does not have");
    }
    cfg.scan = scan;
  }
  if (doc.contains("exact")) {
    const Json& e = doc.at("exact");
    expect_keys(e, {"max_n"}, "exact");
    if (e.contains("max_n")) cfg.exact_max_n = static_cast<int>(integer(e.at("max_n"), "exact.max_n"));
  }
  if (doc.contains("output")) {
    const Json& o = doc.at("output");
    expect_keys(o, {"path", "format"}, "output");
    if (o.contains("path")) cfg.output_path = o.at("path").get<std::string>();
    if (o.contains("format")) cfg.format = o.at("format").get<std::string>();
  }
  if (cfg.format != "json" && cfg.format != "csv") throw ConfigError("output.format must be json or csv");
  read_number(doc, "threads", cfg.threads, "config");
  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
  if (doc.contains("timing")) cfg.timing = doc.at("timing").get<bool>();

  const bool needs_window = cfg.command != "exact" && cfg.command != "scan";
  if (needs_window && !cfg.model.constraint) throw ConfigError("command '" + cfg.command + "' needs model.constraint");
  const bool uses_envelope = cfg.command == "variational" || cfg.command == "compare";
  if (uses_envelope && cfg.envelope && !(cfg.kappa > 8.0))
    throw ConfigError("kappa must exceed 8 when envelopes are requested");
  if (cfg.command == "scan" && !cfg.scan) throw ConfigError("command 'scan' needs a scan block");
  if (cfg.command == "scan" && (cfg.scan->parameter == "e" || cfg.scan->parameter == "t") && !cfg.model.constraint)
    throw ConfigError("scanning e or t needs model.constraint");
  cfg.resolved = doc;
  return cfg;
}

}  // namespace cergm::cli
