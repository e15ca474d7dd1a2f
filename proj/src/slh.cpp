#include "qnet/slh.hpp"

#include <algorithm>

namespace qnet {

namespace {

Eigen::Index total_mult(const std::vector<PortSpec>& ports) {
  Eigen::Index m = 0;
  for (const auto& p : ports) m += p.mult;
  return m;
}

BlockShape port_shape(int dim_h, const std::vector<PortSpec>& ports, bool with_time) {
  std::vector<Eigen::Index> dims;
  if (with_time) dims.push_back(dim_h);
  for (const auto& p : ports) dims.push_back(dim_h * p.mult);
  return BlockShape(std::move(dims));
}

Eigen::Index find_port(const std::vector<PortSpec>& ports, const std::string& label,
                       const char* side) {
  for (size_t i = 0; i < ports.size(); ++i)
    if (ports[i].label == label) return static_cast<Eigen::Index>(i);
  throw std::invalid_argument(std::string("no ") + side + " port labelled '" + label + "'");
}

}  // namespace

Eigen::Index SLHTriple::in_mult() const { return total_mult(in_ports); }
Eigen::Index SLHTriple::out_mult() const { return total_mult(out_ports); }

BlockShape SLHTriple::in_shape() const { return port_shape(dim_h, in_ports, false); }
BlockShape SLHTriple::out_shape() const { return port_shape(dim_h, out_ports, false); }

Op SLHTriple::s_block(Eigen::Index out_idx, Eigen::Index in_idx) const {
  return block_of(S, out_shape(), in_shape(), out_idx, in_idx);
}

Op SLHTriple::l_block(Eigen::Index out_idx) const {
  const auto rows = out_shape();
  return L.block(rows.offset(out_idx), 0, rows.dim(out_idx), dim_h);
}

Eigen::Index SLHTriple::out_index(const std::string& label) const {
  return find_port(out_ports, label, "output");
}

Eigen::Index SLHTriple::in_index(const std::string& label) const {
  return find_port(in_ports, label, "input");
}

void check_triple_structure(const SLHTriple& t) {
  if (t.dim_h <= 0) throw DimensionMismatch("dim_h must be positive");
  if (t.in_ports.empty() || t.out_ports.empty())
    throw DimensionMismatch("a component needs at least one input and one output port");
  for (const auto& p : t.in_ports)
    if (p.mult <= 0) throw DimensionMismatch("port multiplicity must be positive");
  for (const auto& p : t.out_ports)
    if (p.mult <= 0) throw DimensionMismatch("port multiplicity must be positive");
  const Eigen::Index d = t.dim_h;
  if (t.S.rows() != d * t.out_mult() || t.S.cols() != d * t.in_mult())
    throw DimensionMismatch("S has shape " + std::to_string(t.S.rows()) + "x" +
                            std::to_string(t.S.cols()) + ", ports require " +
                            std::to_string(d * t.out_mult()) + "x" +
                            std::to_string(d * t.in_mult()));
  if (t.L.rows() != d * t.out_mult() || t.L.cols() != d)
    throw DimensionMismatch("L must be (dim_h*out_mult) x dim_h");
  if (t.H.rows() != d || t.H.cols() != d)
    throw DimensionMismatch("H must be dim_h x dim_h");
}

std::vector<std::string> validate_triple(const SLHTriple& t, double tol) {
  std::vector<std::string> out;
  try {
    check_triple_structure(t);
  } catch (const std::exception& e) {
    out.push_back(std::string("structure: ") + e.what());
    return out;
  }
  auto unique_labels = [&out](const std::vector<PortSpec>& ports, const char* side) {
    for (size_t i = 0; i < ports.size(); ++i)
      for (size_t j = i + 1; j < ports.size(); ++j)
        if (ports[i].label == ports[j].label)
          out.push_back(std::string(side) + " port label '" + ports[i].label + "' repeated");
  };
  unique_labels(t.in_ports, "input");
  unique_labels(t.out_ports, "output");
  if (t.in_mult() != t.out_mult())
    out.push_back("total input multiplicity " + std::to_string(t.in_mult()) +
                  " != total output multiplicity " + std::to_string(t.out_mult()));
  if (!t.S.all_finite() || !t.L.all_finite() || !t.H.all_finite())
    out.push_back("non-finite entries in S, L or H");
  if (t.S.square() && !is_unitary(t.S, tol))
    out.push_back("S is not unitary (residual " + std::to_string(unitarity_residual(t.S)) + ")");
  if (!is_hermitian(t.H, tol))
    out.push_back("H is not self-adjoint (residual " + std::to_string(hermiticity_residual(t.H)) + ")");
  return out;
}

BlockShape BlockMatrix::row_shape() const { return port_shape(dim_h, out_ports, true); }
BlockShape BlockMatrix::col_shape() const { return port_shape(dim_h, in_ports, true); }

Op BlockMatrix::block(Eigen::Index a, Eigen::Index b) const {
  return block_of(mat, row_shape(), col_shape(), a, b);
}

Op BlockMatrix::gather(const std::vector<Eigen::Index>& rows,
                       const std::vector<Eigen::Index>& cols) const {
  const auto rs = row_shape();
  const auto cs = col_shape();
  Eigen::Index nr = 0, nc = 0;
  for (auto r : rows) nr += rs.dim(r);
  for (auto c : cols) nc += cs.dim(c);
  Op out(nr, nc);
  Eigen::Index ro = 0;
  for (auto r : rows) {
    Eigen::Index co = 0;
    for (auto c : cols) {
      out.set_block(ro, co, mat.block(rs.offset(r), cs.offset(c), rs.dim(r), cs.dim(c)));
      co += cs.dim(c);
    }
    ro += rs.dim(r);
  }
  return out;
}

Eigen::Index BlockMatrix::out_index(const std::string& label) const {
  return 1 + find_port(out_ports, label, "output");
}

Eigen::Index BlockMatrix::in_index(const std::string& label) const {
  return 1 + find_port(in_ports, label, "input");
}

namespace {

// Shared skeleton of G/V/M: fills ports, dim and an all-zero square matrix.
template <class M>
M make_block_matrix(const SLHTriple& t) {
  check_triple_structure(t);
  if (t.in_mult() != t.out_mult())
    throw DimensionMismatch("input and output multiplicities must agree");
  M m;
  m.dim_h = t.dim_h;
  m.out_ports = t.out_ports;
  m.in_ports = t.in_ports;
  const Eigen::Index n = t.dim_h * (1 + t.in_mult());
  m.mat = Op(n, n);
  return m;
}

}  // namespace

ItoGeneratorMatrix build_G(const SLHTriple& t) {
  auto g = make_block_matrix<ItoGeneratorMatrix>(t);
  const Eigen::Index d = t.dim_h;
  const Eigen::Index k = d * t.in_mult();
  g.mat.set_block(0, 0, dagger(t.L) * t.L * Complex(-0.5, 0) + t.H * Complex(0, -1));
  g.mat.set_block(0, d, -(dagger(t.L) * t.S));
  g.mat.set_block(d, 0, t.L);
  g.mat.set_block(d, d, t.S - Op::identity(k));
  return g;
}

ModelMatrix build_V(const SLHTriple& t) {
  auto v = make_block_matrix<ModelMatrix>(t);
  const Eigen::Index d = t.dim_h;
  v.mat.set_block(0, 0, dagger(t.L) * t.L * Complex(-0.5, 0) + t.H * Complex(0, -1));
  v.mat.set_block(0, d, -(dagger(t.L) * t.S));
  v.mat.set_block(d, 0, t.L);
  v.mat.set_block(d, d, t.S);
  return v;
}

GalileanMatrix build_M(const SLHTriple& t) {
  auto m = make_block_matrix<GalileanMatrix>(t);
  const Eigen::Index d = t.dim_h;
  m.mat.set_block(0, 0, Op::identity(d));
  m.mat.set_block(d, 0, t.L);
  m.mat.set_block(d, d, t.S);
  return m;
}

SLHTriple extract_slh(const ModelMatrix& v) {
  const Eigen::Index d = v.dim_h;
  SLHTriple t;
  t.dim_h = v.dim_h;
  t.in_ports = v.in_ports;
  t.out_ports = v.out_ports;
  const Eigen::Index kout = v.mat.rows() - d;
  const Eigen::Index kin = v.mat.cols() - d;
  t.S = v.mat.block(d, d, kout, kin);
  t.L = v.mat.block(d, 0, kout, d);
  t.H = -im_op(v.mat.block(0, 0, d, d));
  return t;
}

Op pi_rows(const Op& x, int dim_h) {
  Op out = x;
  out.set_block(0, 0, Op::zero(dim_h, x.cols()));
  return out;
}

Op pi_cols(const Op& x, int dim_h) {
  Op out = x;
  out.set_block(0, 0, Op::zero(x.rows(), dim_h));
  return out;
}

Op pi_matrix(int dim_h, Eigen::Index total) {
  Op p = Op::identity(total);
  p.set_block(0, 0, Op::zero(dim_h, dim_h));
  return p;
}

ItoReport check_ito(const ItoGeneratorMatrix& g, double tol) {
  const Op gd = dagger(g.mat);
  const Op sum = g.mat + gd;
  ItoReport r;
  r.isometry = (sum + gd * pi_rows(g.mat, g.dim_h)).max_abs();
  r.coisometry = (sum + g.mat * pi_rows(gd, g.dim_h)).max_abs();
  r.passed = r.isometry <= tol && r.coisometry <= tol;
  return r;
}

GalileanMatrix galilean_mul(const GalileanMatrix& m1, const GalileanMatrix& m2) {
  if (m1.dim_h != m2.dim_h || m1.mat.cols() != m2.mat.rows())
    throw DimensionMismatch("galilean product: shape mismatch");
  GalileanMatrix m;
  m.dim_h = m1.dim_h;
  m.out_ports = m1.out_ports;
  m.in_ports = m2.in_ports;
  m.mat = m1.mat * m2.mat;
  return m;
}

GalileanMatrix galilean_inv(const GalileanMatrix& m) {
  const Eigen::Index d = m.dim_h;
  const Eigen::Index kout = m.mat.rows() - d;
  const Eigen::Index kin = m.mat.cols() - d;
  const Op s = m.mat.block(d, d, kout, kin);
  const Op l = m.mat.block(d, 0, kout, d);
  GalileanMatrix inv;
  inv.dim_h = m.dim_h;
  inv.out_ports = m.in_ports;
  inv.in_ports = m.out_ports;
  inv.mat = Op(m.mat.cols(), m.mat.rows());
  inv.mat.set_block(0, 0, Op::identity(d));
  inv.mat.set_block(d, 0, -(dagger(s) * l));
  inv.mat.set_block(d, d, dagger(s));
  return inv;
}

double galilean_pi_residual(const GalileanMatrix& m) {
  const Op pi = pi_matrix(m.dim_h, m.mat.cols());
  return (pi_cols(m.mat, m.dim_h) * pi_rows(dagger(m.mat), m.dim_h) - pi).max_abs();
}

ItoGeneratorMatrix conjugate_G(const ItoGeneratorMatrix& g, const GalileanMatrix& n) {
  if (g.mat.rows() != n.mat.rows() || g.mat.cols() != n.mat.cols() || g.dim_h != n.dim_h)
    throw DimensionMismatch("conjugate_G: shape mismatch");
  ItoGeneratorMatrix out;
  out.dim_h = g.dim_h;
  out.out_ports = n.in_ports;
  out.in_ports = n.in_ports;
  out.mat = dagger(n.mat) * g.mat * n.mat;
  return out;
}

ModelMatrix concat(const ModelMatrix& v1, const ModelMatrix& v2) {
  if (v1.dim_h != v2.dim_h)
    throw DimensionMismatch("concatenation requires a common system space");
  ModelMatrix v;
  v.dim_h = v1.dim_h;
  v.out_ports = v1.out_ports;
  v.out_ports.insert(v.out_ports.end(), v2.out_ports.begin(), v2.out_ports.end());
  v.in_ports = v1.in_ports;
  v.in_ports.insert(v.in_ports.end(), v2.in_ports.begin(), v2.in_ports.end());

  const Eigen::Index d = v.dim_h;
  const Eigen::Index k1o = v1.mat.rows() - d, k1i = v1.mat.cols() - d;
  const Eigen::Index k2o = v2.mat.rows() - d, k2i = v2.mat.cols() - d;
  v.mat = Op(d + k1o + k2o, d + k1i + k2i);
  v.mat.set_block(0, 0, v1.mat.block(0, 0, d, d) + v2.mat.block(0, 0, d, d));
  v.mat.set_block(0, d, v1.mat.block(0, d, d, k1i));
  v.mat.set_block(0, d + k1i, v2.mat.block(0, d, d, k2i));
  v.mat.set_block(d, 0, v1.mat.block(d, 0, k1o, d));
  v.mat.set_block(d + k1o, 0, v2.mat.block(d, 0, k2o, d));
  v.mat.set_block(d, d, v1.mat.block(d, d, k1o, k1i));
  v.mat.set_block(d + k1o, d + k1i, v2.mat.block(d, d, k2o, k2i));
  return v;
}

SLHTriple series(const SLHTriple& t2, const SLHTriple& t1) {
  check_triple_structure(t1);
  check_triple_structure(t2);
  if (t1.dim_h != t2.dim_h)
    throw DimensionMismatch("series product requires a common system space");
  if (t1.out_mult() != t2.in_mult())
    throw DimensionMismatch("series product: upstream output multiplicity " +
                            std::to_string(t1.out_mult()) + " != downstream input multiplicity " +
                            std::to_string(t2.in_mult()));
  SLHTriple t;
  t.dim_h = t1.dim_h;
  t.in_ports = t1.in_ports;
  t.out_ports = t2.out_ports;
  t.S = t2.S * t1.S;
  t.L = t2.L + t2.S * t1.L;
  t.H = t1.H + t2.H + im_op(dagger(t2.L) * t2.S * t1.L);
  return t;
}

AugmentedMatrix augmented(const SLHTriple& t) {
  check_triple_structure(t);
  AugmentedMatrix a;
  a.dim_h = t.dim_h;
  a.out_ports = t.out_ports;
  a.in_ports = t.in_ports;
  const Eigen::Index d = t.dim_h;
  const Eigen::Index k = d * t.in_mult();
  a.mat = Op(2 * d + k, 2 * d + k);
  a.mat.set_block(0, 0, Op::identity(d));
  a.mat.set_block(0, d, -(dagger(t.L) * t.S));
  a.mat.set_block(0, d + k, dagger(t.L) * t.L * Complex(-0.5, 0) + t.H * Complex(0, -1));
  a.mat.set_block(d, d, t.S);
  a.mat.set_block(d, d + k, t.L);
  a.mat.set_block(d + k, d + k, Op::identity(d));
  return a;
}

namespace {

Op zeta(int dim_h, Eigen::Index k) {
  const Eigen::Index d = dim_h;
  Op z(2 * d + k, 2 * d + k);
  z.set_block(0, d + k, Op::identity(d));
  z.set_block(d, d, Op::identity(k));
  z.set_block(d + k, 0, Op::identity(d));
  return z;
}

}  // namespace

AugmentedMatrix star(const AugmentedMatrix& x) {
  const Eigen::Index k = x.mat.rows() - 2 * x.dim_h;
  const Op z = zeta(x.dim_h, k);
  AugmentedMatrix out;
  out.dim_h = x.dim_h;
  out.out_ports = x.in_ports;
  out.in_ports = x.out_ports;
  out.mat = z * dagger(x.mat) * z;
  return out;
}

AugmentedMatrix aug_mul(const AugmentedMatrix& a, const AugmentedMatrix& b) {
  if (a.dim_h != b.dim_h || a.mat.cols() != b.mat.rows())
    throw DimensionMismatch("augmented product: shape mismatch");
  AugmentedMatrix out;
  out.dim_h = a.dim_h;
  out.out_ports = a.out_ports;
  out.in_ports = b.in_ports;
  out.mat = a.mat * b.mat;
  return out;
}

double star_unitarity_residual(const AugmentedMatrix& x) {
  const Op id = Op::identity(x.mat.rows());
  const Op xs = star(x).mat;
  return std::max((xs * x.mat - id).max_abs(), (x.mat * xs - id).max_abs());
}

double ModelResiduals::worst() const {
  return std::max(identity_00, std::max(identity_0r, s_unitarity));
}

ModelResiduals model_invariant_residuals(const ModelMatrix& v) {
  const Eigen::Index d = v.dim_h;
  const Eigen::Index kout = v.mat.rows() - d;
  const Eigen::Index kin = v.mat.cols() - d;
  const Op v00 = v.mat.block(0, 0, d, d);
  const Op v0r = v.mat.block(0, d, d, kin);
  const Op l = v.mat.block(d, 0, kout, d);
  const Op s = v.mat.block(d, d, kout, kin);
  ModelResiduals r;
  r.identity_00 = (v00 + dagger(v00) + dagger(l) * l).max_abs();
  r.identity_0r = (v0r + dagger(l) * s).max_abs();
  r.s_unitarity = s.square() ? unitarity_residual(s) : 1.0;
  return r;
}

}  // namespace qnet
