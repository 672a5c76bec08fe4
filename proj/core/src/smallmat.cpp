#include "hcontract/smallmat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace hcontract {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

void require_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) throw NumericalError("matrix entry is not finite");
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (!std::isfinite(fill)) throw NumericalError("matrix entry is not finite");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  require(data_.size() == rows_ * cols_, "matrix entry count does not match shape");
  require_finite(data_);
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    require(r.size() == cols_, "ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  require_finite(data_);
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  require_finite(m.data_);
  return m;
}

Matrix Matrix::column(std::span<const double> v) {
  return Matrix(v.size(), 1, std::vector<double>(v.begin(), v.end()));
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

double Matrix::trace() const {
  require(square(), "trace of non-square matrix");
  double s = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, i);
  return s;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

double Matrix::norm1() const {
  double best = 0.0;
  for (std::size_t c = 0; c < cols_; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) s += std::abs((*this)(r, c));
    best = std::max(best, s);
  }
  return best;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

Vector Matrix::col(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

Vector Matrix::row(std::size_t r) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Matrix& Matrix::operator+=(const Matrix& o) {
  require(rows_ == o.rows_ && cols_ == o.cols_, "matrix dimension mismatch in +");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  require(rows_ == o.rows_ && cols_ == o.cols_, "matrix dimension mismatch in -");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator-(Matrix a) { return a *= -1.0; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "matrix dimension mismatch in *");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

Vector operator*(const Matrix& a, std::span<const double> v) {
  require(a.cols() == v.size(), "matrix-vector dimension mismatch");
  Vector out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) out[i] += a(i, k) * v[k];
  return out;
}

Matrix symmetric_part(const Matrix& m) {
  require(m.square(), "symmetric part of non-square matrix");
  Matrix s(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s(i, j) = (m(i, j) + m(j, i)) / 2.0;
  return s;
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

double frobenius_inner(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "dimension mismatch in inner product");
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) s += a.data()[i] * b.data()[i];
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "vector dimension mismatch in dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

namespace {

struct JacobiResult {
  Matrix diag;  // converged, nearly diagonal
  Matrix vecs;  // columns are eigenvectors
};

JacobiResult jacobi(const Matrix& m) {
  if (!m.square()) throw std::invalid_argument("eigenvalues of non-square matrix");
  if (!m.all_finite()) throw NumericalError("eigenvalues of non-finite matrix");
  const std::size_t n = m.rows();
  Matrix a = symmetric_part(m);
  Matrix v = Matrix::identity(n);
  const double scale = std::max(a.max_abs(), 1e-300);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= 1e-17 * scale) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  return {std::move(a), std::move(v)};
}

}  // namespace

SymmetricEigenResult sym_eig_max(const Matrix& m) {
  auto [a, v] = jacobi(m);
  const std::size_t n = a.rows();
  if (n == 0) throw std::invalid_argument("eigenvalues of empty matrix");
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (a(i, i) > a(best, best)) best = i;
  Vector w = v.col(best);
  const double nw = norm2(w);
  for (double& x : w) x /= nw;
  // Deterministic sign: largest-magnitude component positive.
  std::size_t big = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(w[i]) > std::abs(w[big])) big = i;
  if (w[big] < 0)
    for (double& x : w) x = -x;
  // Rayleigh quotient of the normalized witness is a tighter estimate than the
  // raw diagonal entry after rotation round-off.
  const Matrix s = symmetric_part(m);
  const double rq = dot(w, s * std::span<const double>(w));
  return {rq, std::move(w)};
}

Vector sym_eigenvalues(const Matrix& m) {
  auto [a, v] = jacobi(m);
  Vector ev(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

bool is_skew3(const Matrix& a) {
  if (a.rows() != 3 || a.cols() != 3) return false;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i; j < 3; ++j)
      if (a(i, j) != -a(j, i)) return false;
  return true;
}

Matrix hat3(std::span<const double> w) {
  require(w.size() == 3, "hat3 expects a 3-vector");
  return Matrix{{0.0, -w[2], w[1]}, {w[2], 0.0, -w[0]}, {-w[1], w[0], 0.0}};
}

Vector vee3(const Matrix& w) {
  require(w.rows() == 3 && w.cols() == 3, "vee3 expects a 3x3 matrix");
  return {(w(2, 1) - w(1, 2)) / 2.0, (w(0, 2) - w(2, 0)) / 2.0, (w(1, 0) - w(0, 1)) / 2.0};
}

namespace {

Matrix rodrigues(const Matrix& a) {
  const Vector w = vee3(a);
  const double th2 = dot(w, w);
  const double th = std::sqrt(th2);
  double sa, sb;  // sin(th)/th, (1 - cos th)/th^2
  if (th < 1e-4) {
    sa = 1.0 - th2 / 6.0 + th2 * th2 / 120.0;
    sb = 0.5 - th2 / 24.0 + th2 * th2 / 720.0;
  } else {
    const double h = std::sin(th / 2.0);
    sa = std::sin(th) / th;
    sb = 2.0 * h * h / th2;
  }
  Matrix out = Matrix::identity(3);
  out += sa * a;
  out += sb * (a * a);
  return out;
}

}  // namespace

Matrix expm(const Matrix& a) {
  require(a.square(), "expm of non-square matrix");
  if (!a.all_finite()) throw NumericalError("expm of non-finite matrix");
  if (is_skew3(a)) return rodrigues(a);

  const std::size_t n = a.rows();
  const double norm = a.norm1();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix scaled = a * std::ldexp(1.0, -squarings);

  Matrix result = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  for (int k = 1; k <= 20; ++k) {
    term = term * scaled;
    term *= 1.0 / k;
    result += term;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

double determinant(const Matrix& m) {
  require(m.square(), "determinant of non-square matrix");
  const std::size_t n = m.rows();
  Matrix a = m;
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (a(piv, c) == 0.0) return 0.0;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(c, k), a(piv, k));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      for (std::size_t k = c; k < n; ++k) a(r, k) -= f * a(c, k);
    }
  }
  return det;
}

RotationLog logm_rotation(const Matrix& r) {
  require(r.rows() == 3 && r.cols() == 3, "logm_rotation expects a 3x3 matrix");
  if (!r.all_finite()) throw NumericalError("logm_rotation of non-finite matrix");
  if ((r.transpose() * r - Matrix::identity(3)).max_abs() > 1e-9 ||
      std::abs(determinant(r) - 1.0) > 1e-9)
    throw std::invalid_argument("logm_rotation: input is not a rotation matrix");

  const Vector w = vee3(r);  // sin(angle) * axis
  const double s = norm2(w);
  const double c = (r.trace() - 1.0) / 2.0;
  const double angle = std::atan2(s, c);

  RotationLog out;
  out.angle = angle;
  out.cut_locus = std::numbers::pi - angle <= 1e-7;

  if (c > -0.9) {
    const double f = s > 0.0 ? angle / s : 1.0;
    out.theta = hat3(w) * f;
    return out;
  }

  // Near pi the skew part vanishes; recover the axis from the symmetric part
  // (R + R^T)/2 - cos(angle) I = (1 - cos(angle)) a a^T.
  Matrix b = symmetric_part(r);
  for (std::size_t i = 0; i < 3; ++i) b(i, i) -= c;
  std::size_t k = 0;
  for (std::size_t i = 1; i < 3; ++i)
    if (b(i, i) > b(k, k)) k = i;
  Vector axis = b.col(k);
  const double na = norm2(axis);
  for (double& x : axis) x /= na;
  const double sgn = dot(axis, w);
  if (s > 1e-12 && sgn != 0.0) {
    if (sgn < 0)
      for (double& x : axis) x = -x;
  } else {
    std::size_t big = 0;
    for (std::size_t i = 1; i < 3; ++i)
      if (std::abs(axis[i]) > std::abs(axis[big])) big = i;
    if (axis[big] < 0)
      for (double& x : axis) x = -x;
  }
  out.theta = hat3(axis) * angle;
  return out;
}

Matrix cholesky(const Matrix& spd) {
  require(spd.square(), "cholesky of non-square matrix");
  const std::size_t n = spd.rows();
  const double tol = 1e-12 * std::max(1.0, spd.max_abs());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(spd(i, j) - spd(j, i)) > tol)
        throw std::invalid_argument("Gram matrix is not symmetric");
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = spd(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) throw std::invalid_argument("Gram matrix is not positive definite");
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = spd(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

Vector cholesky_solve(const Matrix& spd, std::span<const double> b) {
  const Matrix l = cholesky(spd);
  const std::size_t n = l.rows();
  require(b.size() == n, "dimension mismatch in cholesky_solve");
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = y[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * x[k];
    x[i] = s / l(i, i);
  }
  return x;
}

double gram_inner(std::span<const double> u, std::span<const double> v, const Matrix& gram) {
  require(gram.square() && gram.rows() == u.size() && u.size() == v.size(),
          "dimension mismatch in gram_inner");
  (void)cholesky(gram);
  return dot(u, gram * v);
}

Vector solve(const Matrix& a, std::span<const double> b) {
  require(a.square() && a.rows() == b.size(), "dimension mismatch in solve");
  const std::size_t n = a.rows();
  Matrix m = a;
  Vector x(b.begin(), b.end());
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
    if (std::abs(m(piv, c)) < 1e-300) throw NumericalError("singular linear system");
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m(c, k), m(piv, k));
      std::swap(x[c], x[piv]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = m(r, c) / m(c, c);
      for (std::size_t k = c; k < n; ++k) m(r, k) -= f * m(c, k);
      x[r] -= f * x[c];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= m(i, k) * x[k];
    x[i] = s / m(i, i);
  }
  return x;
}

std::string to_string(const Matrix& m) {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << (r ? ", [" : "[");
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? ", " : "") << m(r, c);
    os << ']';
  }
  os << ']';
  return os.str();
}

}  // namespace hcontract
