#pragma once

#include <vector>

#include "qnet/slh.hpp"

namespace qnet {

// Column-stacking vectorization: vec(A X B) = (B^T kron A) vec(X).
Op vec_col(const Op& x);
Op unvec_col(const Op& v, Eigen::Index d);

// Linear map on system operators, stored as a d^2 x d^2 matrix acting on
// column-vectorized operators.
struct Superoperator {
  int dim_h = 0;
  Op matrix;

  Op apply(const Op& x) const;
};

// Heisenberg-picture Lindblad generator of the averaged dynamics:
//   L(X) = 1/2 sum_i Li†[X,Li] + 1/2 sum_i [Li†,X]Li - i[X,H].
Superoperator lindblad(const SLHTriple& t);

// Channel-resolved Evans-Hudson maps: L_ab(X) is the (a,b) channel block of
// X G + G† X + G† Π X Π G with X ampliated block-diagonally. L_00 is the
// Lindblad generator; the other blocks are the QSDE coefficients of the flow.
class EvansHudsonFamily {
 public:
  explicit EvansHudsonFamily(const ItoGeneratorMatrix& g);

  int dim_h() const { return d_; }
  Eigen::Index channels() const { return k_; }

  // Full (1+K)-block matrix X G + G† X + G† Π X Π G for ampliated X.
  Op full(const Op& x) const;

  // Channel block (alpha, beta), each in 0..channels(); block 0 is time.
  Op apply(Eigen::Index alpha, Eigen::Index beta, const Op& x) const;

  // The same map as a d^2 x d^2 matrix (built by applying to matrix units).
  Superoperator matrix(Eigen::Index alpha, Eigen::Index beta) const;

 private:
  int d_ = 0;
  Eigen::Index k_ = 0;
  Op g_;
};

EvansHudsonFamily evans_hudson(const ItoGeneratorMatrix& g);

// The pre-Heisenberg coefficients of the output differential
// dA~_i = j_t(S_ij) dA_j + j_t(L_i) dt, with their port labels.
struct OutputCoeffs {
  Op scatter;
  Op drift;
  std::vector<PortSpec> out_ports;
  std::vector<PortSpec> in_ports;
};

OutputCoeffs output_coeffs(const SLHTriple& t);

// Coefficients M_{alpha mu}† M_{beta nu} of the transformed fundamental
// processes dA~^{ab} = j_t(M†_{a mu} M_{b nu}) dA^{mu nu}, channel-indexed.
class GalileanOutputMap {
 public:
  explicit GalileanOutputMap(const GalileanMatrix& m);

  Eigen::Index channels() const { return k_; }
  int dim_h() const { return d_; }

  Op coeff(Eigen::Index alpha, Eigen::Index beta, Eigen::Index mu, Eigen::Index nu) const;

 private:
  int d_ = 0;
  Eigen::Index k_ = 0;
  Op m_;
};

GalileanOutputMap galilean_output_map(const GalileanMatrix& m);

// Residual of the series-composition identity for Evans-Hudson maps
//   L_ab(x) = L1_ab(x) + (M1_{mu a})† L2_{mu nu}(x) M1_{nu b}
// between the cascade t1 -> t2 and the right-hand composition, maximized
// over the channel indices.
double check_eh_series(const SLHTriple& t1, const SLHTriple& t2, const Op& x, double tol);

}  // namespace qnet
