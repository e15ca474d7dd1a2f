#include "qnet/dynamics.hpp"

namespace qnet {

Op vec_col(const Op& x) {
  Op v(x.rows() * x.cols(), 1);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) v(k++, 0) = x(i, j);
  return v;
}

Op unvec_col(const Op& v, Eigen::Index d) {
  if (v.cols() != 1 || v.rows() != d * d)
    throw DimensionMismatch("unvec: expected a d^2 column vector");
  Op x(d, d);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) x(i, j) = v(k++, 0);
  return x;
}

Op Superoperator::apply(const Op& x) const {
  if (x.rows() != dim_h || x.cols() != dim_h)
    throw DimensionMismatch("superoperator argument must be dim_h x dim_h");
  return unvec_col(matrix * vec_col(x), dim_h);
}

Superoperator lindblad(const SLHTriple& t) {
  check_triple_structure(t);
  const Eigen::Index d = t.dim_h;
  const Op id = Op::identity(d);
  const Op ldl = dagger(t.L) * t.L;

  Op m = kron(transpose_op(ldl), id) * Complex(-0.5, 0) +
         kron(id, ldl) * Complex(-0.5, 0) +
         kron(id, t.H) * Complex(0, 1) + kron(transpose_op(t.H), id) * Complex(0, -1);
  // sum_i (Li^T kron Li†) over the flattened channels
  const Eigen::Index channels = t.out_mult();
  for (Eigen::Index c = 0; c < channels; ++c) {
    const Op li = t.L.block(c * d, 0, d, d);
    m = m + kron(transpose_op(li), dagger(li));
  }
  Superoperator s;
  s.dim_h = t.dim_h;
  s.matrix = std::move(m);
  return s;
}

EvansHudsonFamily::EvansHudsonFamily(const ItoGeneratorMatrix& g)
    : d_(g.dim_h), g_(g.mat) {
  k_ = g.mat.rows() / g.dim_h - 1;
}

Op EvansHudsonFamily::full(const Op& x) const {
  if (x.rows() != d_ || x.cols() != d_)
    throw DimensionMismatch("Evans-Hudson argument must be dim_h x dim_h");
  const Op xa = kron(Op::identity(1 + k_), x);  // ampliation, block diagonal
  const Op gd = dagger(g_);
  return xa * g_ + gd * xa + gd * pi_rows(pi_cols(xa, d_), d_) * g_;
}

Op EvansHudsonFamily::apply(Eigen::Index alpha, Eigen::Index beta, const Op& x) const {
  if (alpha < 0 || alpha > k_ || beta < 0 || beta > k_)
    throw DimensionMismatch("channel index out of range");
  return full(x).block(alpha * d_, beta * d_, d_, d_);
}

Superoperator EvansHudsonFamily::matrix(Eigen::Index alpha, Eigen::Index beta) const {
  Superoperator s;
  s.dim_h = d_;
  s.matrix = Op(d_ * d_, d_ * d_);
  for (Eigen::Index j = 0; j < d_; ++j)
    for (Eigen::Index i = 0; i < d_; ++i) {
      Op unit(d_, d_);
      unit(i, j) = Complex(1, 0);
      s.matrix.set_block(0, j * d_ + i, vec_col(apply(alpha, beta, unit)));
    }
  return s;
}

EvansHudsonFamily evans_hudson(const ItoGeneratorMatrix& g) { return EvansHudsonFamily(g); }

OutputCoeffs output_coeffs(const SLHTriple& t) {
  check_triple_structure(t);
  return OutputCoeffs{t.S, t.L, t.out_ports, t.in_ports};
}

GalileanOutputMap::GalileanOutputMap(const GalileanMatrix& m) : d_(m.dim_h), m_(m.mat) {
  k_ = m.mat.rows() / m.dim_h - 1;
}

Op GalileanOutputMap::coeff(Eigen::Index alpha, Eigen::Index beta, Eigen::Index mu,
                            Eigen::Index nu) const {
  for (auto i : {alpha, beta, mu, nu})
    if (i < 0 || i > k_) throw DimensionMismatch("channel index out of range");
  const Op m_am = m_.block(alpha * d_, mu * d_, d_, d_);
  const Op m_bn = m_.block(beta * d_, nu * d_, d_, d_);
  return dagger(m_am) * m_bn;
}

GalileanOutputMap galilean_output_map(const GalileanMatrix& m) { return GalileanOutputMap(m); }

double check_eh_series(const SLHTriple& t1, const SLHTriple& t2, const Op& x, double /*tol*/) {
  const SLHTriple cascade = series(t2, t1);
  EvansHudsonFamily ehs(build_G(cascade));
  EvansHudsonFamily eh1(build_G(t1));
  EvansHudsonFamily eh2(build_G(t2));
  const GalileanMatrix m1 = build_M(t1);
  const Op rhs = eh1.full(x) + dagger(m1.mat) * eh2.full(x) * m1.mat;
  return (ehs.full(x) - rhs).max_abs();
}

}  // namespace qnet
