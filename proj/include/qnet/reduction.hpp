#pragma once

#include <string>
#include <vector>

#include "qnet/network.hpp"
#include "qnet/slh.hpp"

namespace qnet {

// An ill-posed zero-delay limit: the loop operator 1 - V_sr X (or eta - V_ii)
// is numerically singular. Carries the smallest singular value found.
struct SingularLoop : std::runtime_error {
  double sigma_min;
  SingularLoop(const std::string& what, double smin)
      : std::runtime_error(what), sigma_min(smin) {}
};

// The path series cannot converge: spectral radius of the loop gain >= 1.
struct DivergentPathSum : std::runtime_error {
  double radius;
  DivergentPathSum(const std::string& what, double r)
      : std::runtime_error(what), radius(r) {}
};

// max_path_len reached before the series increment fell below tolerance.
struct NonConvergent : std::runtime_error {
  int max_len;
  double last_increment;
  NonConvergent(const std::string& what, int len, double inc)
      : std::runtime_error(what), max_len(len), last_increment(inc) {}
};

// One internal channel, by its port labels.
struct EdgeRef {
  std::string source;  // output port s0
  std::string range;   // input port r0
};

// Gain inserted into a feedback loop, on the edge space h (x) K_e.
struct Gain {
  Op x;
};

// Single-edge elimination in the zero-delay limit:
// V_red[a,b] = V[a,b] + V[a,r0] (1 - V[s0,r0])^{-1} V[s0,b],
// over the ports minus {r0, s0}. Throws SingularLoop when 1 - V[s0,r0]
// fails the conditioning check.
ModelMatrix eliminate_edge(const ModelMatrix& v, const EdgeRef& e, double tol = 1e-10);

// Feedback reduction with gain X through the edge e:
// V[a,b] + V[a,r] X (1 - V[s,r] X)^{-1} V[s,b].
// Unit gain reproduces eliminate_edge.
ModelMatrix feedback_reduce(const ModelMatrix& v, const EdgeRef& e, const Gain& x,
                            double tol = 1e-10);

// Simultaneous elimination of every internal channel listed in eta:
// V[a,b] + V[a,i] (eta - V[i,i])^{-1} V[i,b] over external ports only.
// Equals any sequential composition of eliminate_edge over the edges.
ModelMatrix eliminate_all(const ModelMatrix& v, const AdjacencyMatrix& eta, double tol = 1e-10,
                          InverseDiagnostics* diag = nullptr);

// Parameter-level form of the same reduction:
//   S_red = S_ee + S_ei (eta - S_ii)^{-1} S_ie
//   L_red = L_e  + S_ei (eta - S_ii)^{-1} L_i
//   H_red = H + sum_j Im L_j† S_ji (eta - S_ii)^{-1} L_i
// Kept independent of eliminate_all so the two routes can be cross-checked.
SLHTriple reduced_params(const SLHTriple& t, const AdjacencyMatrix& eta, double tol = 1e-10,
                         InverseDiagnostics* diag = nullptr);

// Redheffer star product of two 2-in/2-out components wired in the crossed
// feedback pattern (A.out2 -> B.in1, B.out1 -> A.in2), via the closed-form
// reduced operators. Operators of A are assumed to commute with those of B
// (components on distinct tensor factors of the common space).
SLHTriple redheffer_star(const SLHTriple& a, const SLHTriple& b, double tol = 1e-10);

// Mobius transformation Phi_S(X) = D + C X (1 - A X)^{-1} B, blocks split at
// x.rows() rows/cols of s.
Op mobius(const Op& s, const Op& x, double tol = 1e-10);

struct SiegelResiduals {
  double isometry = 0;    // Phi(X)†Phi(Y) identity
  double coisometry = 0;  // Phi(X)Phi(Y)† identity
};

// Residuals of the two Siegel identities for unitary S and contractions X, Y:
//   Phi(X)†Phi(Y) - 1 = B† (1-X†A†)^{-1} (X†Y-1) (1-AY)^{-1} B
//   Phi(X)Phi(Y)† - 1 = C  (1-XA)^{-1}  (XY†-1) (1-A†Y†)^{-1} C†
SiegelResiduals siegel_check(const Op& s, const Op& x, const Op& y, double tol = 1e-10);

// One scattering path through the network, for reporting.
struct PathEntry {
  std::string from;                // external input port
  std::string to;                  // external output port
  std::vector<std::string> ports;  // alternating in/out port labels traversed
  int length = 0;                  // number of component traversals
};

struct PathSumResult {
  SLHTriple triple;
  int terms = 0;              // Neumann terms accumulated (max path length used)
  double last_increment = 0;  // norm of the final series term
  double loop_radius = 0;     // spectral radius of S_ii eta^{-1}
};

// Reduced parameters via the topological path series: the loop inverse is
// expanded as eta^{-1} sum_k (S_ii eta^{-1})^k and truncated once the
// increment drops below tol. No matrix inverse is taken. Throws
// DivergentPathSum when the loop spectral radius reaches 1 - tol, and
// NonConvergent when max_path_len terms do not reach tolerance.
PathSumResult path_sum_reduce(const Network& net, int max_path_len, double tol = 1e-10);

// Explicit port-to-port scattering paths up to the given number of
// component traversals, for human-readable reports.
std::vector<PathEntry> enumerate_paths(const Network& net, int max_len);

}  // namespace qnet
