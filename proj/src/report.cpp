#include "qnet/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "json_fmt.hpp"

namespace qnet {

bool ReductionReport::all_pass() const {
  return std::all_of(residuals.begin(), residuals.end(),
                     [this](const auto& r) { return r.second <= tol; });
}

std::vector<std::pair<std::string, double>> triple_residuals(const SLHTriple& t) {
  const auto ito = check_ito(build_G(t), 0.0);
  const auto model = model_invariant_residuals(build_V(t));
  return {
      {"h_hermiticity", hermiticity_residual(t.H)},
      {"ito_coisometry", ito.coisometry},
      {"ito_isometry", ito.isometry},
      {"model_identity_00", model.identity_00},
      {"model_identity_0r", model.identity_0r},
      {"s_unitarity", t.S.square() ? unitarity_residual(t.S) : 1.0},
  };
}

namespace {

void write_port_list(std::ostream& os, const std::vector<PortSpec>& ports) {
  os << '[';
  for (size_t i = 0; i < ports.size(); ++i) {
    if (i) os << ',';
    os << "{\"label\":";
    detail::write_json_string(os, ports[i].label);
    os << ",\"mult\":" << ports[i].mult << '}';
  }
  os << ']';
}

std::string to_json(const ReductionReport& r) {
  std::ostringstream os;
  os << "{\"diagnostics\":{";
  bool first = true;
  if (r.loop_sigma_min) {
    os << "\"loop_sigma_min\":" << detail::fmt_double(*r.loop_sigma_min);
    first = false;
  }
  if (r.path_residual) {
    if (!first) os << ',';
    os << "\"path_residual\":" << detail::fmt_double(*r.path_residual);
  }
  os << "},\"eliminated_edges\":[";
  for (size_t i = 0; i < r.eliminated_edges.size(); ++i) {
    if (i) os << ',';
    os << "{\"from\":";
    detail::write_json_string(os, r.eliminated_edges[i].source);
    os << ",\"to\":";
    detail::write_json_string(os, r.eliminated_edges[i].range);
    os << '}';
  }
  os << "],\"reduced\":{\"H\":";
  detail::write_matrix(os, r.reduced.H);
  os << ",\"L\":";
  detail::write_matrix(os, r.reduced.L);
  os << ",\"S\":";
  detail::write_matrix(os, r.reduced.S);
  os << ",\"dim_h\":" << r.reduced.dim_h << ",\"in_ports\":";
  write_port_list(os, r.reduced.in_ports);
  os << ",\"out_ports\":";
  write_port_list(os, r.reduced.out_ports);
  os << "},\"residuals\":{";
  auto sorted = r.residuals;
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 0; i < sorted.size(); ++i) {
    if (i) os << ',';
    detail::write_json_string(os, sorted[i].first);
    os << ':' << detail::fmt_double(sorted[i].second);
  }
  os << "},\"tol\":" << detail::fmt_double(r.tol) << '}';
  return os.str();
}

void print_matrix(std::ostream& os, const char* name, const Op& m) {
  os << name << " (" << m.rows() << "x" << m.cols() << "):\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << "  ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const Complex z = m(i, j);
      os << std::setw(24);
      std::ostringstream cell;
      cell << std::setprecision(10) << z.real() << (z.imag() < 0 ? "-" : "+")
           << std::abs(z.imag()) << "i";
      os << cell.str();
    }
    os << '\n';
  }
}

std::string to_text(const ReductionReport& r) {
  std::ostringstream os;
  os << "reduced model: dim_h=" << r.reduced.dim_h << ", " << r.reduced.in_ports.size()
     << " input port(s), " << r.reduced.out_ports.size() << " output port(s)\n";
  os << "inputs: ";
  for (size_t i = 0; i < r.reduced.in_ports.size(); ++i)
    os << (i ? ", " : "") << r.reduced.in_ports[i].label;
  os << "\noutputs: ";
  for (size_t i = 0; i < r.reduced.out_ports.size(); ++i)
    os << (i ? ", " : "") << r.reduced.out_ports[i].label;
  os << '\n';
  print_matrix(os, "S", r.reduced.S);
  print_matrix(os, "L", r.reduced.L);
  print_matrix(os, "H", r.reduced.H);
  os << "residuals (tol=" << detail::fmt_double(r.tol) << "):\n";
  auto sorted = r.residuals;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [name, value] : sorted)
    os << "  " << std::left << std::setw(24) << name << detail::fmt_double(value) << "  "
       << (value <= r.tol ? "PASS" : "FAIL") << '\n';
  if (!r.eliminated_edges.empty()) {
    os << "eliminated edges:";
    for (const auto& e : r.eliminated_edges) os << ' ' << e.source << "->" << e.range;
    os << '\n';
  }
  if (r.loop_sigma_min)
    os << "loop conditioning: smallest singular value of (eta - S_ii) = "
       << detail::fmt_double(*r.loop_sigma_min) << '\n';
  if (r.path_residual)
    os << "path-sum comparison residual: " << detail::fmt_double(*r.path_residual) << '\n';
  return os.str();
}

}  // namespace

std::string serialize_report(const ReductionReport& r, ReportMode mode) {
  return mode == ReportMode::json ? to_json(r) : to_text(r);
}

}  // namespace qnet
