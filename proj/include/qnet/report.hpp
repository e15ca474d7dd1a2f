#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qnet/network.hpp"
#include "qnet/slh.hpp"

namespace qnet {

// Outcome of a reduction: the reduced triple, every invariant residual in
// the norm of the producing module, the eliminated edges in order, and the
// loop-conditioning diagnostics.
struct ReductionReport {
  SLHTriple reduced;
  std::vector<std::pair<std::string, double>> residuals;
  std::vector<EdgeSpec> eliminated_edges;
  std::optional<double> loop_sigma_min;
  std::optional<double> path_residual;
  double tol = 1e-10;

  bool all_pass() const;
};

enum class ReportMode { json, text };

// json mode is byte-stable for identical inputs (sorted keys, fixed
// 17-significant-digit floats); text mode prints a PASS/FAIL residual table.
std::string serialize_report(const ReductionReport& r, ReportMode mode);

// Standard residual set for a reduced triple: scattering unitarity,
// Hamiltonian hermiticity, both Ito conditions and the two model-matrix
// identities.
std::vector<std::pair<std::string, double>> triple_residuals(const SLHTriple& t);

}  // namespace qnet
