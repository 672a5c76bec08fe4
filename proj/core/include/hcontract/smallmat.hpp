#pragma once

// Dense kernels for the small (n <= ~6) matrices that appear everywhere in
// this library: embedding representations of matrix groups, frame
// linearizations and Gram matrices.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hcontract {

using Vector = std::vector<double>;

/// Thrown when a computation meets NaN/Inf input or produces a non-finite value.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Row-major dense real matrix. Entries are checked finite on construction.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
  static Matrix diagonal(std::span<const double> d);
  /// Single column matrix holding v.
  static Matrix column(std::span<const double> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  Matrix transpose() const;
  double trace() const;
  /// Largest absolute entry.
  double max_abs() const;
  double frobenius_norm() const;
  /// Maximum absolute column sum (induced 1-norm).
  double norm1() const;
  bool all_finite() const;

  Vector col(std::size_t c) const;
  Vector row(std::size_t r) const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator-(Matrix a);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> v);

/// (M + M^T) / 2.
Matrix symmetric_part(const Matrix& m);
/// Matrix commutator ab - ba.
Matrix commutator(const Matrix& a, const Matrix& b);
/// Frobenius inner product sum_ij a_ij b_ij.
double frobenius_inner(const Matrix& a, const Matrix& b);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);

struct SymmetricEigenResult {
  double lambda_max = 0.0;
  Vector witness;  ///< unit eigenvector for lambda_max
};

/// Largest eigenvalue of (M + M^T)/2 and a unit eigenvector, by cyclic Jacobi
/// rotations with a fixed sweep order.
SymmetricEigenResult sym_eig_max(const Matrix& m);

/// All eigenvalues of (M + M^T)/2 in ascending order (same Jacobi kernel).
Vector sym_eigenvalues(const Matrix& m);

/// Matrix exponential. 3x3 skew-symmetric input uses the Rodrigues formula,
/// everything else scaling-and-squaring with a 20-term Taylor series.
Matrix expm(const Matrix& a);

/// True when a is 3x3 with a == -a^T exactly.
bool is_skew3(const Matrix& a);

struct RotationLog {
  Matrix theta;        ///< skew-symmetric, expm(theta) == R
  double angle = 0.0;  ///< in [0, pi]
  bool cut_locus = false;  ///< angle within 1e-7 of pi; axis sign is a convention
};

/// Principal logarithm of a 3x3 rotation. Throws std::invalid_argument when
/// R^T R != I or det R != 1 (tolerance 1e-9).
RotationLog logm_rotation(const Matrix& r);

/// Packs a 3-vector into the skew matrix [w]_x.
Matrix hat3(std::span<const double> w);
/// Inverse of hat3 (reads the skew part).
Vector vee3(const Matrix& w);

double determinant(const Matrix& m);

/// Lower-triangular Cholesky factor; throws std::invalid_argument when the
/// matrix is not symmetric positive definite.
Matrix cholesky(const Matrix& spd);

/// Solves spd * x = b through its Cholesky factor.
Vector cholesky_solve(const Matrix& spd, std::span<const double> b);

/// u^T G v with G checked SPD.
double gram_inner(std::span<const double> u, std::span<const double> v, const Matrix& gram);

/// Solves a x = b by partial-pivot Gaussian elimination (square a).
Vector solve(const Matrix& a, std::span<const double> b);

std::string to_string(const Matrix& m);

}  // namespace hcontract
