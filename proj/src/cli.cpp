#include "qnet/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qnet/dynamics.hpp"
#include "qnet/netlist.hpp"
#include "qnet/reduction.hpp"
#include "qnet/report.hpp"
#include "json_fmt.hpp"

namespace qnet {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitParse = 2;
constexpr int kExitSingular = 3;

struct Loaded {
  NetlistDocument doc;
  Network net;
  double tol = 1e-10;
};

std::optional<double> env_tol(std::ostream& err) {
  const char* raw = std::getenv("QNET_TOL");
  if (!raw || !*raw) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(v > 0)) {
    err << "warning: ignoring invalid QNET_TOL='" << raw << "'\n";
    return std::nullopt;
  }
  return v;
}

int load(const std::string& path, std::optional<double> tol_flag, std::ostream& err,
         Loaded& loaded) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "error: cannot open '" << path << "'\n";
    return kExitParse;
  }
  std::ostringstream buf;
  buf << in.rdbuf();

  const ParseResult parsed = parse_netlist(buf.str());
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors)
      err << path << (e.path.empty() ? "" : e.path) << ": " << e.message << '\n';
    return kExitParse;
  }
  loaded.doc = *parsed.doc;

  try {
    loaded.net = to_network(loaded.doc);
  } catch (const std::exception& e) {
    err << path << ": " << e.what() << '\n';
    return kExitParse;
  }
  const auto violations = validate(loaded.net);
  if (!violations.empty()) {
    for (const auto& v : violations) err << path << ": " << v << '\n';
    return kExitParse;
  }

  loaded.tol = loaded.doc.tol;
  if (const auto env = env_tol(err)) loaded.tol = *env;
  if (tol_flag) loaded.tol = *tol_flag;

  for (const auto& e : loaded.doc.edges)
    if (e.delay)
      err << "warning: edge " << e.source << " -> " << e.range << " declares delay "
          << *e.delay << "; delays are ignored in the zero-delay reduction\n";
  return kExitOk;
}

int emit(const std::string& text, const std::string& out_path, std::ostream& out,
         std::ostream& err) {
  if (out_path.empty()) {
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
    return kExitOk;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    err << "error: cannot write '" << out_path << "'\n";
    return kExitParse;
  }
  f << text;
  return kExitOk;
}

struct Reduction {
  SLHTriple reduced;
  ReductionReport report;
};

// Full reduction pipeline: parameter-level route plus the block-matrix route
// for the cross-check residual, and the path-series residual when the loop
// series happens to converge.
Reduction run_reduction(const Loaded& loaded) {
  const ModelMatrix v = build_network_V(loaded.net);
  const AdjacencyMatrix eta = adjacency(loaded.net);
  const SLHTriple t_net = extract_slh(v);

  InverseDiagnostics diag;
  Reduction r;
  r.reduced = reduced_params(t_net, eta, loaded.tol, &diag);
  const ModelMatrix vred = eliminate_all(v, eta, loaded.tol);

  r.report.reduced = r.reduced;
  r.report.residuals = triple_residuals(r.reduced);
  r.report.residuals.push_back(
      {"param_vs_matrix", (build_V(r.reduced).mat - vred.mat).max_abs()});
  r.report.eliminated_edges = loaded.net.internal_edges;
  if (!eta.out_ports.empty()) {
    r.report.loop_sigma_min = diag.sigma_min;
    try {
      const PathSumResult ps = path_sum_reduce(loaded.net, 1000, loaded.tol);
      r.report.path_residual = std::max({(ps.triple.S - r.reduced.S).max_abs(),
                                         (ps.triple.L - r.reduced.L).max_abs(),
                                         (ps.triple.H - r.reduced.H).max_abs()});
    } catch (const DivergentPathSum&) {
    } catch (const NonConvergent&) {
    }
  }
  r.report.tol = loaded.tol;
  return r;
}

int cmd_reduce(const Loaded& loaded, const std::string& format, const std::string& out_path,
               std::ostream& out, std::ostream& err) {
  const Reduction r = run_reduction(loaded);
  const auto mode = format == "json" ? ReportMode::json : ReportMode::text;
  const int rc = emit(serialize_report(r.report, mode), out_path, out, err);
  if (rc != kExitOk) return rc;
  return r.report.all_pass() ? kExitOk : kExitInvariant;
}

int cmd_check(const Loaded& loaded, std::ostream& out) {
  bool ok = true;
  auto line = [&](const std::string& name, double value) {
    const bool pass = value <= loaded.tol;
    ok = ok && pass;
    out << "  " << name;
    for (size_t i = name.size(); i < 36; ++i) out << ' ';
    out << detail::fmt_double(value) << "  " << (pass ? "PASS" : "FAIL") << '\n';
  };

  out << "components:\n";
  for (const auto& c : loaded.net.components) {
    const auto violations = validate_triple(c.triple, loaded.tol);
    if (violations.empty()) {
      out << "  " << c.name << ": valid triple  PASS\n";
    } else {
      ok = false;
      for (const auto& v : violations) out << "  " << c.name << ": " << v << "  FAIL\n";
    }
  }

  try {
    const ModelMatrix v = build_network_V(loaded.net);
    const SLHTriple t_net = extract_slh(v);
    out << "network invariants:\n";
    for (const auto& [name, value] : triple_residuals(t_net)) line(name, value);
    line("galilean_pi", galilean_pi_residual(build_M(t_net)));

    const AdjacencyMatrix eta = adjacency(loaded.net);
    if (!eta.out_ports.empty()) {
      line("adjacency_unitarity", unitarity_residual(eta.mat));
      const Reduction r = run_reduction(loaded);
      out << "reduced invariants:\n";
      for (const auto& [name, value] : r.report.residuals) line(name, value);
      if (r.report.loop_sigma_min)
        out << "  loop sigma_min = " << detail::fmt_double(*r.report.loop_sigma_min) << '\n';
    }
  } catch (const DimensionMismatch& e) {
    ok = false;
    out << "network invariants unavailable: " << e.what() << '\n';
  }
  out << (ok ? "all checks passed\n" : "checks FAILED\n");
  return ok ? kExitOk : kExitInvariant;
}

int single_component_triple(const Loaded& loaded, const std::string& path, std::ostream& err,
                            SLHTriple& t) {
  if (loaded.net.components.size() != 1 || !loaded.net.internal_edges.empty()) {
    err << path << ": series expects a single-component document with no edges\n";
    return kExitParse;
  }
  t = loaded.net.components.front().triple;
  return kExitOk;
}

int cmd_series(const Loaded& a, const Loaded& b, const std::string& path_a,
               const std::string& path_b, const std::string& format,
               const std::string& out_path, std::ostream& out, std::ostream& err) {
  SLHTriple ta, tb;
  if (int rc = single_component_triple(a, path_a, err, ta)) return rc;
  if (int rc = single_component_triple(b, path_b, err, tb)) return rc;
  SLHTriple composed;
  try {
    composed = series(tb, ta);  // signal flows a -> b
  } catch (const DimensionMismatch& e) {
    err << "error: documents are not series-composable: " << e.what() << '\n';
    return kExitParse;
  }
  ReductionReport rep;
  rep.reduced = composed;
  rep.residuals = triple_residuals(composed);
  rep.tol = a.tol;
  const auto mode = format == "json" ? ReportMode::json : ReportMode::text;
  const int rc = emit(serialize_report(rep, mode), out_path, out, err);
  if (rc != kExitOk) return rc;
  return rep.all_pass() ? kExitOk : kExitInvariant;
}

int cmd_lindblad(const Loaded& loaded, const std::string& out_path, std::ostream& out,
                 std::ostream& err) {
  const Reduction r = run_reduction(loaded);
  const Superoperator sup = lindblad(r.reduced);
  std::ostringstream os;
  os << "{\"dim_h\":" << sup.dim_h << ",\"lindblad\":";
  detail::write_matrix(os, sup.matrix);
  os << ",\"residuals\":{";
  auto sorted = r.report.residuals;
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 0; i < sorted.size(); ++i) {
    if (i) os << ',';
    detail::write_json_string(os, sorted[i].first);
    os << ':' << detail::fmt_double(sorted[i].second);
  }
  os << "},\"tol\":" << detail::fmt_double(loaded.tol) << '}';
  const int rc = emit(os.str(), out_path, out, err);
  if (rc != kExitOk) return rc;
  return r.report.all_pass() ? kExitOk : kExitInvariant;
}

int cmd_paths(const Loaded& loaded, int max_len, const std::string& format,
              const std::string& out_path, std::ostream& out, std::ostream& err) {
  const PathSumResult res = path_sum_reduce(loaded.net, max_len, loaded.tol);
  const ModelMatrix v = build_network_V(loaded.net);
  const SLHTriple exact = reduced_params(extract_slh(v), adjacency(loaded.net), loaded.tol);

  const double residual = std::max({(res.triple.S - exact.S).max_abs(),
                                    (res.triple.L - exact.L).max_abs(),
                                    (res.triple.H - exact.H).max_abs()});
  const double bound = std::max(loaded.tol * 10, 1e-8);
  const auto paths = enumerate_paths(loaded.net, std::min(max_len, 6));

  std::ostringstream os;
  if (format == "json") {
    os << "{\"loop_radius\":" << detail::fmt_double(res.loop_radius)
       << ",\"path_residual\":" << detail::fmt_double(residual) << ",\"paths\":[";
    for (size_t i = 0; i < paths.size(); ++i) {
      if (i) os << ',';
      os << "{\"from\":";
      detail::write_json_string(os, paths[i].from);
      os << ",\"length\":" << paths[i].length << ",\"ports\":[";
      for (size_t k = 0; k < paths[i].ports.size(); ++k) {
        if (k) os << ',';
        detail::write_json_string(os, paths[i].ports[k]);
      }
      os << "],\"to\":";
      detail::write_json_string(os, paths[i].to);
      os << '}';
    }
    os << "],\"terms\":" << res.terms << ",\"tol\":" << detail::fmt_double(loaded.tol) << '}';
  } else {
    os << "scattering paths (up to length " << std::min(max_len, 6) << "):\n";
    for (const auto& p : paths) {
      os << "  " << p.from << " -> " << p.to << " via";
      for (const auto& port : p.ports) os << ' ' << port;
      os << " (length " << p.length << ")\n";
    }
    os << "series terms accumulated: " << res.terms << '\n';
    os << "loop spectral radius: " << detail::fmt_double(res.loop_radius) << '\n';
    os << "comparison residual vs exact reduction: " << detail::fmt_double(residual) << "  "
       << (residual <= bound ? "PASS" : "FAIL") << '\n';
  }
  const int rc = emit(os.str(), out_path, out, err);
  if (rc != kExitOk) return rc;
  return residual <= bound ? kExitOk : kExitInvariant;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"compose quantum Markov input-output components and eliminate internal channels"};
  app.name("qnet");
  app.require_subcommand(1);

  std::string file_a, file_b, out_path;
  std::string format = "text";
  double tol_value = 0;
  int max_len = 1000;

  auto add_common = [&](CLI::App* cmd, bool with_format) {
    cmd->add_option("--tol", tol_value, "tolerance override (beats QNET_TOL and options.tol)");
    cmd->add_option("--out", out_path, "write the report to this file");
    if (with_format)
      cmd->add_option("--format", format, "report format")
          ->check(CLI::IsMember({"json", "text"}));
  };

  auto* reduce = app.add_subcommand(
      "reduce", "eliminate all internal channels and report the reduced model");
  reduce->add_option("netlist", file_a, "netlist JSON file")->required();
  add_common(reduce, true);

  auto* series_cmd =
      app.add_subcommand("series", "series product of two single-component documents");
  series_cmd->add_option("netlist-a", file_a, "upstream component document")->required();
  series_cmd->add_option("netlist-b", file_b, "downstream component document")->required();
  add_common(series_cmd, true);

  auto* check = app.add_subcommand("check", "validate a netlist and run every invariant suite");
  check->add_option("netlist", file_a, "netlist JSON file")->required();
  check->add_option("--tol", tol_value, "tolerance override");

  auto* lind = app.add_subcommand(
      "lindblad", "reduce and emit the Lindblad superoperator of the reduced model");
  lind->add_option("netlist", file_a, "netlist JSON file")->required();
  add_common(lind, false);

  auto* paths = app.add_subcommand(
      "paths", "reduce via the topological path series and compare with the exact reduction");
  paths->add_option("netlist", file_a, "netlist JSON file")->required();
  paths->add_option("--max-len", max_len, "maximum path length before giving up");
  add_common(paths, true);

  std::vector<const char*> argv{"qnet"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }

  std::optional<double> tol_flag;
  if (reduce->count("--tol") || series_cmd->count("--tol") || check->count("--tol") ||
      lind->count("--tol") || paths->count("--tol"))
    tol_flag = tol_value;

  try {
    Loaded a;
    if (int rc = load(file_a, tol_flag, err, a)) return rc;

    if (series_cmd->parsed()) {
      Loaded b;
      if (int rc = load(file_b, tol_flag, err, b)) return rc;
      return cmd_series(a, b, file_a, file_b, format, out_path, out, err);
    }
    if (reduce->parsed()) return cmd_reduce(a, format, out_path, out, err);
    if (check->parsed()) return cmd_check(a, out);
    if (lind->parsed()) return cmd_lindblad(a, out_path, out, err);
    if (paths->parsed()) return cmd_paths(a, max_len, format, out_path, out, err);
  } catch (const SingularLoop& e) {
    err << "singular loop: " << e.what() << " (sigma_min=" << e.sigma_min << ")\n";
    return kExitSingular;
  } catch (const DivergentPathSum& e) {
    err << "divergent path sum: " << e.what() << '\n';
    return kExitSingular;
  } catch (const NonConvergent& e) {
    err << "path series not converged: " << e.what() << '\n';
    return kExitSingular;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }
  return kExitParse;
}

}  // namespace qnet
