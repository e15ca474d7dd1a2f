#include "qnet/op.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qnet {

Op Op::from_rows(const std::vector<std::vector<Complex>>& rows) {
  const Eigen::Index nr = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index nc = nr > 0 ? static_cast<Eigen::Index>(rows[0].size()) : 0;
  Op out(nr, nc);
  for (Eigen::Index i = 0; i < nr; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != nc)
      throw DimensionMismatch("ragged rows in matrix literal");
    for (Eigen::Index j = 0; j < nc; ++j) out.m_(i, j) = rows[i][j];
  }
  if (!out.all_finite()) throw std::invalid_argument("non-finite matrix entry");
  return out;
}

Complex Op::at(Eigen::Index i, Eigen::Index j) const {
  if (i < 0 || i >= rows() || j < 0 || j >= cols())
    throw DimensionMismatch("index (" + std::to_string(i) + "," + std::to_string(j) +
                            ") outside " + std::to_string(rows()) + "x" + std::to_string(cols()));
  return m_(i, j);
}

std::vector<Complex> Op::row_major() const {
  std::vector<Complex> out;
  out.reserve(static_cast<size_t>(m_.size()));
  for (Eigen::Index i = 0; i < rows(); ++i)
    for (Eigen::Index j = 0; j < cols(); ++j) out.push_back(m_(i, j));
  return out;
}

Op Op::block(Eigen::Index i0, Eigen::Index j0, Eigen::Index nr, Eigen::Index nc) const {
  if (i0 < 0 || j0 < 0 || i0 + nr > rows() || j0 + nc > cols())
    throw DimensionMismatch("block outside matrix bounds");
  return Op(CMatrix(m_.block(i0, j0, nr, nc)));
}

void Op::set_block(Eigen::Index i0, Eigen::Index j0, const Op& b) {
  if (i0 < 0 || j0 < 0 || i0 + b.rows() > rows() || j0 + b.cols() > cols())
    throw DimensionMismatch("block outside matrix bounds");
  m_.block(i0, j0, b.rows(), b.cols()) = b.m_;
}

Op Op::operator+(const Op& o) const {
  if (rows() != o.rows() || cols() != o.cols())
    throw DimensionMismatch("add: " + std::to_string(rows()) + "x" + std::to_string(cols()) +
                            " vs " + std::to_string(o.rows()) + "x" + std::to_string(o.cols()));
  return Op(CMatrix(m_ + o.m_));
}

Op Op::operator-(const Op& o) const {
  if (rows() != o.rows() || cols() != o.cols())
    throw DimensionMismatch("sub: shape mismatch");
  return Op(CMatrix(m_ - o.m_));
}

Op Op::operator*(const Op& o) const {
  if (cols() != o.rows())
    throw DimensionMismatch("matmul: " + std::to_string(rows()) + "x" + std::to_string(cols()) +
                            " times " + std::to_string(o.rows()) + "x" + std::to_string(o.cols()));
  return Op(CMatrix(m_ * o.m_));
}

bool Op::all_finite() const {
  for (Eigen::Index j = 0; j < cols(); ++j)
    for (Eigen::Index i = 0; i < rows(); ++i)
      if (!std::isfinite(m_(i, j).real()) || !std::isfinite(m_(i, j).imag())) return false;
  return true;
}

double Op::max_abs() const {
  double m = 0.0;
  for (Eigen::Index j = 0; j < cols(); ++j)
    for (Eigen::Index i = 0; i < rows(); ++i) m = std::max(m, std::abs(m_(i, j)));
  return m;
}

Op dagger(const Op& a) { return Op(CMatrix(a.raw().adjoint())); }
Op transpose_op(const Op& a) { return Op(CMatrix(a.raw().transpose())); }
Op conj_op(const Op& a) { return Op(CMatrix(a.raw().conjugate())); }

Op kron(const Op& a, const Op& b) {
  Op out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.set_block(i * b.rows(), j * b.cols(), a(i, j) * b);
  return out;
}

Op annihilator(int d) {
  if (d < 2) throw std::invalid_argument("annihilator: need dimension >= 2");
  Op a(d, d);
  for (int k = 0; k + 1 < d; ++k) a(k, k + 1) = std::sqrt(double(k + 1));
  return a;
}

double unitarity_residual(const Op& a) {
  if (!a.square()) throw DimensionMismatch("unitarity check needs a square matrix");
  const Op id = Op::identity(a.rows());
  return std::max((dagger(a) * a - id).max_abs(), (a * dagger(a) - id).max_abs());
}

double hermiticity_residual(const Op& a) {
  if (!a.square()) throw DimensionMismatch("hermiticity check needs a square matrix");
  return (a - dagger(a)).max_abs();
}

bool is_unitary(const Op& a, double tol) { return unitarity_residual(a) <= tol; }
bool is_hermitian(const Op& a, double tol) { return hermiticity_residual(a) <= tol; }

Op re_op(const Op& a) {
  if (!a.square()) throw DimensionMismatch("re_op needs a square matrix");
  return (a + dagger(a)) * Complex(0.5, 0.0);
}

Op im_op(const Op& a) {
  if (!a.square()) throw DimensionMismatch("im_op needs a square matrix");
  return (a - dagger(a)) * (Complex(1.0, 0.0) / Complex(0.0, 2.0));
}

Op inv_checked(const Op& a, double tol, InverseDiagnostics* diag) {
  if (!a.square()) throw DimensionMismatch("inverse needs a square matrix");
  if (a.rows() == 0) return a;
  Eigen::JacobiSVD<CMatrix> svd(a.raw(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (diag) {
    diag->sigma_min = smin;
    diag->sigma_max = smax;
    diag->condition = smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
  }
  if (!(smin > tol * smax) || smax == 0.0)
    throw SingularMatrix("matrix numerically singular (sigma_min=" + std::to_string(smin) +
                             ", sigma_max=" + std::to_string(smax) + ")",
                         smin, smax);
  CMatrix inv = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
  return Op(std::move(inv));
}

double spectral_radius(const Op& a) {
  if (!a.square()) throw DimensionMismatch("spectral radius needs a square matrix");
  const Eigen::Index n = a.rows();
  if (n == 0) return 0.0;

  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) += Complex(0.0, 0.3 * double(i + 1) / double(n));
  v.normalize();
  double lambda = 0.0;
  bool converged = false;
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXcd w = a.raw() * v;
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;  // hit the kernel; nilpotent directions only
    w /= nw;
    if (it > 0 && std::abs(nw - lambda) <= 1e-8 * std::max(1.0, nw)) {
      lambda = nw;
      converged = true;
      break;
    }
    lambda = nw;
    v = w;
  }
  if (converged || n > 64) return lambda;
  Eigen::ComplexEigenSolver<CMatrix> es(a.raw(), /*computeEigenvectors=*/false);
  double r = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) r = std::max(r, std::abs(es.eigenvalues()(i)));
  return r;
}

BlockShape::BlockShape(std::vector<Eigen::Index> d) : dims(std::move(d)) {
  for (auto x : dims)
    if (x <= 0) throw std::invalid_argument("block dimensions must be positive");
}

Eigen::Index BlockShape::offset(Eigen::Index k) const {
  Eigen::Index off = 0;
  for (Eigen::Index i = 0; i < k; ++i) off += dims[static_cast<size_t>(i)];
  return off;
}

Eigen::Index BlockShape::dim(Eigen::Index k) const { return dims[static_cast<size_t>(k)]; }

Eigen::Index BlockShape::total() const { return offset(count()); }

Op block_of(const Op& a, const BlockShape& rows, const BlockShape& cols,
            Eigen::Index i, Eigen::Index j) {
  if (rows.total() != a.rows() || cols.total() != a.cols())
    throw DimensionMismatch("block shape does not cover the matrix");
  return a.block(rows.offset(i), cols.offset(j), rows.dim(i), cols.dim(j));
}

}  // namespace qnet
