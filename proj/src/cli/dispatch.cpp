#include "cergm/cli/dispatch.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "cergm/ergm_exact.hpp"
#include "cergm/errors.hpp"
#include "cergm/mcmc.hpp"
#include "cergm/nld_bounds.hpp"
#include "cergm/variational.hpp"

namespace cergm::cli {

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }
};

std::string cell(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
std::string cell(long long x) { return std::to_string(x); }
std::string cell(std::uint64_t x) { return std::to_string(x); }
std::string cell(int x) { return std::to_string(x); }
std::string cell(long x) { return std::to_string(x); }
std::string cell(bool x) { return x ? "true" : "false"; }
std::string cell(const std::optional<double>& x) { return x ? cell(*x) : std::string(); }

Json opt(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

// The result of one command in both output shapes.
struct Result {
  Json json;
  Table table;
};

ExactOptions exact_options(const RunConfig& cfg) {
  ExactOptions o;
  if (cfg.exact_max_n) o.max_vertices = *cfg.exact_max_n;
  if (std::getenv("CERGM_MAX_N")) o.max_vertices = ExactOptions::from_environment().max_vertices;
  o.threads = cfg.threads;
  return o;
}

bool exact_feasible(const RunConfig& cfg) {
  return cfg.model.vertex_count <= std::min(exact_options(cfg).max_vertices, kHardExactMaxVertices);
}

Json window_json(const Window& w) { return {{"lo", w.lo}, {"hi", w.hi}}; }

Json solution_json(const VariationalSolution& s) {
  return {{"argmax", s.argmax}, {"value", s.value}, {"boundary_active", s.boundary_active},
          {"window", window_json(s.window)}};
}

bool extra_zetas_nonnegative(const ModelSpec& m) {
  for (std::size_t i = 1; i < m.zetas.size(); ++i)
    if (m.zetas[i] < 0.0) return false;
  return true;
}

// Envelope around the scalar sup; null when the model is outside its scope.
Json envelope_json(const RunConfig& cfg, double sup) {
  if (!cfg.envelope) return nullptr;
  if (!extra_zetas_nonnegative(cfg.model))
    return {{"note", "envelope needs zeta_i >= 0 for every motif after the edge"}};
  const Interval iv =
      special_envelope(sup, cfg.model.B(), cfg.model.vertex_count, cfg.kappa, cfg.envelope_constants);
  return {{"lower", iv.lower}, {"upper", iv.upper}, {"kappa", cfg.kappa}, {"B", cfg.model.B()}};
}

Json window_sups_json(const RunConfig& cfg) {
  try {
    const WindowSups w = general_window_sups(cfg.model, cfg.kappa, cfg.envelope_constants.c);
    return {{"shrunken", w.shrunken},
            {"enlarged", w.enlarged},
            {"shrunken_half_width", w.shrunken_half_width},
            {"enlarged_half_width", w.enlarged_half_width},
            {"shrunken_argmax", w.shrunken_solution.argmax},
            {"enlarged_argmax", w.enlarged_solution.argmax}};
  } catch (const UnsupportedModelError& e) {
    return {{"note", e.what()}};
  } catch (const InfeasibleError& e) {
    return {{"note", e.what()}};
  }
}

Result run_exact(const RunConfig& cfg) {
  const ModelSpec& m = cfg.model;
  const ExactOptions o = exact_options(cfg);
  if (m.vertex_count > std::min(o.max_vertices, kHardExactMaxVertices))
    throw ConfigError("exact enumeration is limited to N <= " +
                      std::to_string(std::min(o.max_vertices, kHardExactMaxVertices)) +
                      "; raise exact.max_n or CERGM_MAX_N (at most 8)");
  std::optional<std::pair<int, int>> range;
  if (m.constraint) range = window_edge_range(*m.constraint, m.vertex_count);
  const CountHistogram hist = enumerate_counts(m.vertex_count, m.motifs, o);
  const double psi = hist.psi(m.zetas, std::nullopt);
  std::optional<double> psi_cond;
  if (m.constraint) psi_cond = hist.psi(m.zetas, m.constraint);

  Result r;
  r.json["psi"] = psi;
  r.json["psi_cond"] = opt(psi_cond);
  r.json["counts"] = {
      {"graphs_total", hist.total_graphs()},
      {"graphs_in_window", m.constraint ? Json(hist.graphs_in_window(m.constraint)) : Json(nullptr)},
      {"distinct_count_vectors", hist.entries().size()}};
  if (range)
    r.json["window"] = {{"e", m.constraint->e}, {"t", m.constraint->t}, {"edge_lo", range->first},
                        {"edge_hi", range->second}};
  else
    r.json["window"] = nullptr;
  r.table.header = {"N", "psi", "psi_cond", "graphs_total", "graphs_in_window"};
  r.table.rows.push_back({cell(m.vertex_count), cell(psi), cell(psi_cond), cell(hist.total_graphs()),
                          m.constraint ? cell(hist.graphs_in_window(m.constraint)) : std::string()});
  return r;
}

Result run_variational(const RunConfig& cfg) {
  const ModelSpec& m = cfg.model;
  const VariationalSolution s = solve_constrained_scalar(ScalarObjective::from_model(m), *m.constraint);
  Result r;
  r.json["solution"] = solution_json(s);
  const Json env = envelope_json(cfg, s.value);
  r.json["envelope"] = env;
  r.json["window_sups"] = cfg.envelope ? window_sups_json(cfg) : Json(nullptr);
  r.table.header = {"argmax", "value", "boundary_active", "envelope_lower", "envelope_upper"};
  const bool has_env = env.is_object() && env.contains("lower");
  r.table.rows.push_back({cell(s.argmax), cell(s.value), cell(s.boundary_active),
                          has_env ? cell(env["lower"].get<double>()) : std::string(),
                          has_env ? cell(env["upper"].get<double>()) : std::string()});
  return r;
}

Result run_bounds(const RunConfig& cfg) {
  const ModelSpec& m = cfg.model;
  const int N = m.vertex_count;
  const PairClassProfile profile = ergm_profile(m);
  const double t_prime = m.constraint->t_prime(N);

  // Covering of grad f from covers of each zeta_i grad T_i at radius eps / (s |zeta_i|);
  // grad h = grad T_1 uses the edge cover at radius eps.
  const double s = static_cast<double>(m.motifs.size());
  double log_card_f = 0.0;
  Json derivative = Json::array();
  for (std::size_t i = 0; i < m.motifs.size(); ++i) {
    const TDerivativeBounds b = t_derivative_bounds(m.motifs[i], N, cfg.covering);
    if (m.zetas[i] != 0.0) log_card_f += b.covering_log_cardinality(cfg.epsilon / (s * std::abs(m.zetas[i])));
    derivative.push_back({{"motif", model_to_json(m)["motifs"][i]},
                          {"vertices", b.motif_vertices},
                          {"edges", b.motif_edges},
                          {"sup_T", b.sup_T},
                          {"sup_grad", b.sup_grad},
                          {"sup_hess_overlap", b.sup_hess_overlap},
                          {"sup_hess_disjoint", b.sup_hess_disjoint},
                          {"covering_log_cardinality", b.covering_log_cardinality(cfg.epsilon)}});
  }
  const double log_card_h = t_derivative_bounds(GraphMotif::edge(), N, cfg.covering).covering_log_cardinality(cfg.epsilon);
  const Main1Report rep = main1_terms(profile, t_prime, cfg.delta, cfg.epsilon, log_card_f, log_card_h);
  const double nn = static_cast<double>(N) * N;

  Json main1 = {{"n", rep.n},
                {"t_prime", rep.t},
                {"delta", rep.delta},
                {"eps", rep.eps},
                {"K", rep.K},
                {"l", rep.l},
                {"m", rep.pair_terms->m},
                {"n_same", rep.pair_terms->n_same},
                {"n_shared", rep.pair_terms->n_shared},
                {"n_disjoint", rep.pair_terms->n_disjoint},
                {"log_card_f", rep.log_card_f},
                {"log_card_h", rep.log_card_h},
                {"complexity_term", rep.complexity_term},
                {"smoothness_term", rep.smoothness_term},
                {"upper_slack", rep.upper_slack()},
                {"upper_slack_per_N2", rep.upper_slack() / nn},
                {"delta0", rep.delta0},
                {"eps0", rep.eps0},
                {"eta0", rep.eta0},
                {"lower_slack", rep.lower_slack()},
                {"lower_slack_per_N2", rep.lower_slack() / nn},
                {"upper_window", rep.upper_window},
                {"lower_window", rep.lower_window}};
  Result r;
  r.json["main1"] = main1;
  r.json["profile"] = {{"a", profile.a},
                       {"b", profile.b},
                       {"c_same", profile.c_same},
                       {"c_shared", profile.c_shared},
                       {"c_disjoint", profile.c_disjoint},
                       {"alpha", profile.alpha},
                       {"beta", profile.beta},
                       {"gamma_same", profile.gamma_same},
                       {"gamma_shared", profile.gamma_shared},
                       {"gamma_disjoint", profile.gamma_disjoint}};
  r.json["derivative_bounds"] = derivative;
  r.table.header = {"n", "t_prime", "delta", "eps", "complexity_term", "smoothness_term", "delta0",
                    "eps0", "eta0", "upper_slack", "lower_slack"};
  r.table.rows.push_back({cell(static_cast<long long>(rep.n)), cell(rep.t), cell(rep.delta), cell(rep.eps),
                          cell(rep.complexity_term), cell(rep.smoothness_term), cell(rep.delta0), cell(rep.eps0),
                          cell(rep.eta0), cell(rep.upper_slack()), cell(rep.lower_slack())});
  return r;
}

Json estimate_json(const MotifEstimate& e) { return {{"mean", e.mean}, {"std_error", e.std_error}}; }

Result run_sample(const RunConfig& cfg) {
  ChainConfig chain = cfg.chain;
  chain.record_trace = cfg.format == "csv";
  const ChainStats st = run_chain(cfg.model, chain);
  Result r;
  const Json names = model_to_json(cfg.model)["motifs"];
  Json motifs = Json::array();
  for (std::size_t i = 0; i < st.motifs.size(); ++i) {
    Json e = estimate_json(st.motifs[i]);
    e["motif"] = names[i];
    motifs.push_back(e);
  }
  r.json["motifs"] = motifs;
  r.json["energy_density"] = estimate_json(st.energy_density);
  r.json["edge_histogram"] = st.edge_histogram;
  r.json["chain"] = {{"samples", st.samples},
                     {"moves", st.moves},
                     {"accept_rate", st.accept_rate},
                     {"window_reject_rate", st.window_reject_rate},
                     {"null_move_rate", st.null_move_rate},
                     {"rhat_edge_density", st.rhat_edge_density},
                     {"audited_moves", st.audited_moves}};
  r.table.header = {"sweep", "edge_count"};
  for (std::size_t i = 0; i < cfg.model.motifs.size(); ++i) r.table.header.push_back("t_H" + std::to_string(i + 1));
  r.table.header.push_back("accept_rate");
  r.table.header.push_back("window_reject_rate");
  for (const auto& row : st.trace) {
    std::vector<std::string> cells{cell(row.sweep), cell(row.edge_count)};
    for (double d : row.densities) cells.push_back(cell(d));
    cells.push_back(cell(row.accept_rate));
    cells.push_back(cell(row.window_reject_rate));
    r.table.rows.push_back(std::move(cells));
  }
  return r;
}

Json ti_json(const TIEstimate& ti) {
  Json nodes = Json::array();
  for (const auto& n : ti.nodes)
    nodes.push_back({{"u", n.u},
                     {"weight", n.weight},
                     {"integrand", n.integrand},
                     {"std_error", n.std_error},
                     {"accept_rate", n.accept_rate}});
  return {{"psi_estimate", ti.psi_estimate},
          {"zero_point", ti.zero_point},
          {"quadrature_nodes", ti.quadrature_nodes},
          {"std_error", ti.std_error},
          {"nodes", nodes}};
}

Result run_integrate(const RunConfig& cfg) {
  const TIEstimate ti = thermo_integrate(cfg.model, cfg.chain, cfg.nodes, cfg.threads);
  Result r;
  r.json["estimate"] = ti_json(ti);
  r.table.header = {"u", "weight", "integrand", "std_error", "accept_rate"};
  for (const auto& n : ti.nodes)
    r.table.rows.push_back({cell(n.u), cell(n.weight), cell(n.integrand), cell(n.std_error), cell(n.accept_rate)});
  return r;
}

Result run_compare(const RunConfig& cfg) {
  const ModelSpec& m = cfg.model;
  std::optional<double> exact;
  if (exact_feasible(cfg)) exact = psi_cond_exact(m, exact_options(cfg));
  const VariationalSolution s = solve_constrained_scalar(ScalarObjective::from_model(m), *m.constraint);
  const TIEstimate ti = thermo_integrate(m, cfg.chain, cfg.nodes, cfg.threads);
  std::optional<double> gap_var, gap_ti;
  if (exact) {
    gap_var = s.value - *exact;
    gap_ti = ti.psi_estimate - *exact;
  }
  Result r;
  r.json["exact"] = opt(exact);
  r.json["variational"] = s.value;
  r.json["variational_solution"] = solution_json(s);
  r.json["ti"] = ti.psi_estimate;
  r.json["ti_std_error"] = ti.std_error;
  r.json["gap_variational_minus_exact"] = opt(gap_var);
  r.json["gap_ti_minus_exact"] = opt(gap_ti);
  r.json["envelope"] = envelope_json(cfg, s.value);
  r.table.header = {"N", "e", "t", "exact", "variational", "ti", "ti_std_error", "gap_variational_exact",
                    "gap_ti_exact"};
  r.table.rows.push_back({cell(m.vertex_count), cell(m.constraint->e), cell(m.constraint->t), cell(exact),
                          cell(s.value), cell(ti.psi_estimate), cell(ti.std_error), cell(gap_var), cell(gap_ti)});
  return r;
}

struct ScanRow {
  double value = 0.0;
  std::optional<double> psi, psi_cond, variational, argmax;
  std::string status = "ok";
};

Result run_scan(const RunConfig& cfg) {
  const ModelSpec& base = cfg.model;
  const ScanSpec& scan = *cfg.scan;
  std::optional<CountHistogram> hist;
  if (exact_feasible(cfg)) hist = enumerate_counts(base.vertex_count, base.motifs, exact_options(cfg));

  std::vector<ScanRow> rows(scan.values.size());
  auto point = [&](std::size_t i) {
    ScanRow& row = rows[i];
    row.value = scan.values[i];
    ModelSpec m = base;
    if (scan.parameter == "e")
      m.constraint->e = row.value;
    else if (scan.parameter == "t")
      m.constraint->t = row.value;
    else
      m.zetas[static_cast<std::size_t>(std::stoi(scan.parameter.substr(4)) - 1)] = row.value;
    try {
      if (m.constraint) m.constraint->validate();
      if (hist) {
        row.psi = hist->psi(m.zetas, std::nullopt);
        if (m.constraint) row.psi_cond = hist->psi(m.zetas, m.constraint);
      }
      // Without a window the scalar problem runs over all of [0, 1].
      const ConstraintSpec window = m.constraint.value_or(ConstraintSpec{0.5, 0.5});
      const VariationalSolution s = solve_constrained_scalar(ScalarObjective::from_model(m), window);
      row.variational = s.value;
      row.argmax = s.argmax;
    } catch (const InfeasibleError&) {
      row.status = "infeasible";
    } catch (const DomainError&) {
      row.status = "invalid";
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) point(i);
  };
  const int workers = std::clamp<int>(cfg.threads, 1, static_cast<int>(rows.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  Result r;
  r.json["parameter"] = scan.parameter;
  Json out = Json::array();
  r.table.header = {"parameter", "value", "psi", "psi_cond", "variational", "argmax", "status"};
  for (const auto& row : rows) {
    out.push_back({{"value", row.value},
                   {"psi", opt(row.psi)},
                   {"psi_cond", opt(row.psi_cond)},
                   {"variational", opt(row.variational)},
                   {"argmax", opt(row.argmax)},
                   {"status", row.status}});
    r.table.rows.push_back({scan.parameter, cell(row.value), cell(row.psi), cell(row.psi_cond),
                            cell(row.variational), cell(row.argmax), row.status});
  }
  r.json["rows"] = out;
  return r;
}

}  // namespace

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const InfeasibleError*>(&error)) return kExitInfeasible;
  if (dynamic_cast<const NumericalError*>(&error)) return kExitNumerical;
  if (dynamic_cast<const Error*>(&error)) return kExitInvalidConfig;
  if (dynamic_cast<const Json::exception*>(&error)) return kExitInvalidConfig;
  if (dynamic_cast<const std::overflow_error*>(&error)) return kExitNumerical;
  return kExitNumerical;
}

std::string render(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Result r;
  if (cfg.command == "exact")
    r = run_exact(cfg);
  else if (cfg.command == "variational")
    r = run_variational(cfg);
  else if (cfg.command == "bounds")
    r = run_bounds(cfg);
  else if (cfg.command == "sample")
    r = run_sample(cfg);
  else if (cfg.command == "integrate")
    r = run_integrate(cfg);
  else if (cfg.command == "compare")
    r = run_compare(cfg);
  else if (cfg.command == "scan")
    r = run_scan(cfg);
  else
    throw ConfigError("unknown command '" + cfg.command + "'");

  if (cfg.format == "csv") return r.table.str();

  Json doc;
  doc["command"] = cfg.command;
  doc["model"] = model_to_json(cfg.model);
  doc["result"] = r.json;
  doc["config"] = cfg.resolved;
  if (cfg.timing)
    doc["runtime_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return doc.dump(2) + "\n";
}

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::string text;
  try {
    text = render(cfg);
  } catch (const std::exception& e) {
    err << "cergm: " << e.what() << "\n";
    return exit_code_for(e);
  }
  if (cfg.output_path.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream file(cfg.output_path, std::ios::binary);
  if (!file) {
    err << "cergm: cannot write " << cfg.output_path << "\n";
    return kExitInvalidConfig;
  }
  file << text;
  return kExitOk;
}

}  // namespace cergm::cli
