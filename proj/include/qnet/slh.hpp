#pragma once

#include <string>
#include <vector>

#include "qnet/op.hpp"

namespace qnet {

// One field port: a label and the dimension of its multiplicity space
// (the number of distinguishable channels it carries).
struct PortSpec {
  std::string label;
  Eigen::Index mult = 1;
};

// System parameters (S, L, H) of a Markov input-output component, with the
// port structure that partitions S and L into blocks.
//
// Layout is port-major, then channel-within-port, then system basis: the
// rows of S and L for output port k occupy a contiguous dim_h*mult slice,
// so the two-channel beam splitter has S = kron(T, I_d).
struct SLHTriple {
  int dim_h = 0;
  std::vector<PortSpec> in_ports;
  std::vector<PortSpec> out_ports;
  Op S;  // (dim_h * out_mult) x (dim_h * in_mult)
  Op L;  // (dim_h * out_mult) x dim_h, stacked per output port
  Op H;  // dim_h x dim_h

  Eigen::Index in_mult() const;
  Eigen::Index out_mult() const;

  BlockShape in_shape() const;   // per input port, dim_h * mult
  BlockShape out_shape() const;  // per output port

  Op s_block(Eigen::Index out_idx, Eigen::Index in_idx) const;
  Op l_block(Eigen::Index out_idx) const;

  Eigen::Index out_index(const std::string& label) const;  // throws if absent
  Eigen::Index in_index(const std::string& label) const;
};

// Structural consistency (dimensions vs ports); throws DimensionMismatch.
void check_triple_structure(const SLHTriple& t);

// Full invariant check at tolerance: multiplicity balance, S unitary,
// H self-adjoint, finite entries. Returns human-readable violations,
// empty when the triple is a valid model.
std::vector<std::string> validate_triple(const SLHTriple& t, double tol);

// Square operator matrix over h (+) (h (x) K) with one block row per output
// port and one block column per input port; block index 0 is the time slot.
struct BlockMatrix {
  int dim_h = 0;
  std::vector<PortSpec> out_ports;  // block rows 1..n
  std::vector<PortSpec> in_ports;   // block cols 1..n
  Op mat;

  Eigen::Index n_out() const { return static_cast<Eigen::Index>(out_ports.size()); }
  Eigen::Index n_in() const { return static_cast<Eigen::Index>(in_ports.size()); }

  BlockShape row_shape() const;  // [d, d*m1, d*m2, ...]
  BlockShape col_shape() const;

  Op block(Eigen::Index a, Eigen::Index b) const;

  // Submatrix over the listed block rows/columns (indices into 0..n).
  Op gather(const std::vector<Eigen::Index>& rows,
            const std::vector<Eigen::Index>& cols) const;

  Eigen::Index out_index(const std::string& label) const;  // 1-based; throws
  Eigen::Index in_index(const std::string& label) const;
};

// The Ito generator matrix G: coefficients of the QSDE, satisfying
// G + G† + G†ΠG = 0 = G + G† + GΠG†.
struct ItoGeneratorMatrix : BlockMatrix {};

// The model matrix V = G + Π encoding a component's boundary conditions.
struct ModelMatrix : BlockMatrix {};

// The Galilean transformation M = 1 + ΠG = [[1,0],[L,S]].
struct GalileanMatrix : BlockMatrix {};

ItoGeneratorMatrix build_G(const SLHTriple& t);
ModelMatrix build_V(const SLHTriple& t);
GalileanMatrix build_M(const SLHTriple& t);

// Inverse of build_V: recovers (S, L, H) with H = -im_op(V00), which is
// Hermitian by construction even for slightly perturbed inputs.
SLHTriple extract_slh(const ModelMatrix& v);

// Π applied by block masking (zeroing the time block) instead of a stored
// projector, so idempotence is exact.
Op pi_rows(const Op& x, int dim_h);  // Π x
Op pi_cols(const Op& x, int dim_h);  // x Π
Op pi_matrix(int dim_h, Eigen::Index total);

struct ItoReport {
  double isometry = 0;    // ||G + G† + G†ΠG||
  double coisometry = 0;  // ||G + G† + GΠG†||
  bool passed = false;
};
ItoReport check_ito(const ItoGeneratorMatrix& g, double tol);

// Group laws: (L1,S1)(L2,S2) = (L1 + S1 L2, S1 S2); inverse (-S†L, S†).
GalileanMatrix galilean_mul(const GalileanMatrix& m1, const GalileanMatrix& m2);
GalileanMatrix galilean_inv(const GalileanMatrix& m);

// ||MΠM† − Π||, zero for every Galilean transformation.
double galilean_pi_residual(const GalileanMatrix& m);

// N†GN; preserves the Ito conditions.
ItoGeneratorMatrix conjugate_G(const ItoGeneratorMatrix& g, const GalileanMatrix& n);

// Concatenation of model matrices: summed time block, block-diagonal
// scattering, stacked couplings, no cross terms.
ModelMatrix concat(const ModelMatrix& v1, const ModelMatrix& v2);

// Series product t2 ◁ t1 (signal flows t1 -> t2):
// (S2 S1, L2 + S2 L1, H1 + H2 + Im{L2† S2 L1}).
SLHTriple series(const SLHTriple& t2, const SLHTriple& t1);

// Belavkin's (1+n+1)-square augmented matrix; the series product becomes an
// ordinary matrix product of these.
struct AugmentedMatrix {
  int dim_h = 0;
  std::vector<PortSpec> out_ports;
  std::vector<PortSpec> in_ports;
  Op mat;  // block dims [d, d*K, d]
};

AugmentedMatrix augmented(const SLHTriple& t);

// The ⋆-involution X -> ζX†ζ with ζ the block anti-diagonal permutation.
AugmentedMatrix star(const AugmentedMatrix& x);

AugmentedMatrix aug_mul(const AugmentedMatrix& a, const AugmentedMatrix& b);

// ||X⋆X − 1|| and ||XX⋆ − 1|| combined; zero on the class built from triples.
double star_unitarity_residual(const AugmentedMatrix& x);

struct ModelResiduals {
  double identity_00 = 0;   // ||V00 + V00† + Σ Vs0†Vs0||
  double identity_0r = 0;   // ||V0r + Σ Vs0†Vsr||
  double s_unitarity = 0;   // scattering block unitarity
  double worst() const;
};
ModelResiduals model_invariant_residuals(const ModelMatrix& v);

}  // namespace qnet
