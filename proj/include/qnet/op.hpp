#pragma once

#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qnet {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised by inv_checked when the smallest singular value falls below
// tol times the largest. Carries both extreme singular values so callers
// can report how close to singular the loop operator was.
struct SingularMatrix : std::runtime_error {
  double sigma_min;
  double sigma_max;
  SingularMatrix(const std::string& what, double smin, double smax)
      : std::runtime_error(what), sigma_min(smin), sigma_max(smax) {}
};

// Dense complex matrix with explicit row/column dimensions; the carrier for
// every operator in the library. Value semantics: no operation mutates its
// arguments, so instances are safe to share read-only across threads.
class Op {
 public:
  Op() : m_(0, 0) {}
  Op(Eigen::Index rows, Eigen::Index cols) : m_(CMatrix::Zero(rows, cols)) {}
  explicit Op(CMatrix m) : m_(std::move(m)) {}

  static Op zero(Eigen::Index rows, Eigen::Index cols) { return Op(rows, cols); }
  static Op identity(Eigen::Index n) { return Op(CMatrix::Identity(n, n)); }
  static Op scalar(Complex z) {
    Op o(1, 1);
    o.m_(0, 0) = z;
    return o;
  }
  // Row-major nested-list constructor, mirroring the serialized form.
  static Op from_rows(const std::vector<std::vector<Complex>>& rows);

  Eigen::Index rows() const { return m_.rows(); }
  Eigen::Index cols() const { return m_.cols(); }
  bool empty() const { return m_.size() == 0; }
  bool square() const { return m_.rows() == m_.cols(); }

  Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  Complex& operator()(Eigen::Index i, Eigen::Index j) { return m_(i, j); }
  Complex at(Eigen::Index i, Eigen::Index j) const;

  const CMatrix& raw() const { return m_; }

  // Entries in row-major order (the serialization layout).
  std::vector<Complex> row_major() const;

  Op block(Eigen::Index i0, Eigen::Index j0, Eigen::Index nr, Eigen::Index nc) const;
  void set_block(Eigen::Index i0, Eigen::Index j0, const Op& b);

  Op operator+(const Op& o) const;
  Op operator-(const Op& o) const;
  Op operator-() const { return Op(-m_); }
  Op operator*(const Op& o) const;
  Op operator*(Complex z) const { return Op(m_ * z); }
  friend Op operator*(Complex z, const Op& a) { return Op(z * a.m_); }

  bool all_finite() const;

  // Entrywise max-abs norm; the norm behind every tolerance check.
  double max_abs() const;

 private:
  CMatrix m_;
};

inline Op matmul(const Op& a, const Op& b) { return a * b; }

Op dagger(const Op& a);
Op transpose_op(const Op& a);
Op conj_op(const Op& a);

// Kronecker product, dimensions (a.rows*b.rows, a.cols*b.cols).
Op kron(const Op& a, const Op& b);

// Truncated bosonic lowering operator: (a)_{k,k+1} = sqrt(k+1), k = 0..d-2.
Op annihilator(int d);

bool is_unitary(const Op& a, double tol);
bool is_hermitian(const Op& a, double tol);
double unitarity_residual(const Op& a);
double hermiticity_residual(const Op& a);

// Operator real/imaginary parts: a = re_op(a) + i*im_op(a), both Hermitian.
Op re_op(const Op& a);
Op im_op(const Op& a);

struct InverseDiagnostics {
  double sigma_min = 0;
  double sigma_max = 0;
  double condition = 0;
};

// SVD-backed inverse. Throws SingularMatrix when sigma_min < tol * sigma_max;
// silent pseudo-inverses are never returned because invertibility of the
// loop operator is a model-validity condition, not a numerical detail.
Op inv_checked(const Op& a, double tol = 1e-10, InverseDiagnostics* diag = nullptr);

// Largest eigenvalue modulus. Power iteration (50 steps, tol 1e-8) with a
// full eigenvalue solve as fallback for dimensions <= 64.
double spectral_radius(const Op& a);

// Ordered block dimensions partitioning one axis of a matrix.
struct BlockShape {
  std::vector<Eigen::Index> dims;

  BlockShape() = default;
  explicit BlockShape(std::vector<Eigen::Index> d);

  Eigen::Index count() const { return static_cast<Eigen::Index>(dims.size()); }
  Eigen::Index offset(Eigen::Index k) const;
  Eigen::Index dim(Eigen::Index k) const;
  Eigen::Index total() const;
};

// Block (i,j) of a matrix partitioned by row/column block shapes.
Op block_of(const Op& a, const BlockShape& rows, const BlockShape& cols,
            Eigen::Index i, Eigen::Index j);

}  // namespace qnet
