#include "refrob/linalg.hpp"

#include <utility>

namespace refrob {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_) throw LinalgError("ragged rows in Matrix::from_rows");
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool Matrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      const auto& e = (*this)(i, j);
      if (i == j ? !e.is_one() : !e.is_zero()) return false;
    }
  return true;
}

bool Matrix::is_zero() const {
  for (const auto& e : data_)
    if (!e.is_zero()) return false;
  return true;
}

std::size_t Matrix::hash() const {
  std::size_t h = rows_ * 31 + cols_;
  for (const auto& e : data_) h ^= e.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw LinalgError("matrix product dimension mismatch");
  Matrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const auto& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        if (!b(k, j).is_zero()) c(i, j) += aik * b(k, j);
      }
    }
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw LinalgError("matrix sum dimension mismatch");
  Matrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw LinalgError("matrix difference dimension mismatch");
  Matrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
  return c;
}

Matrix operator*(const CycScalar& s, const Matrix& m) {
  Matrix c = m;
  for (auto& e : c.data_) e = s * e;
  return c;
}

Vector operator*(const Matrix& m, std::span<const CycScalar> v) {
  if (v.size() != m.cols_) throw LinalgError("matrix-vector dimension mismatch");
  Vector out(m.rows_);
  for (std::size_t i = 0; i < m.rows_; ++i)
    for (std::size_t j = 0; j < m.cols_; ++j)
      if (!m(i, j).is_zero() && !v[j].is_zero()) out[i] += m(i, j) * v[j];
  return out;
}

Vector left_multiply(std::span<const CycScalar> v, const Matrix& m) {
  if (v.size() != m.rows()) throw LinalgError("vector-matrix dimension mismatch");
  Vector out(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (v[i].is_zero()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) out[j] += v[i] * m(i, j);
  }
  return out;
}

CycScalar dot(std::span<const CycScalar> a, std::span<const CycScalar> b) {
  if (a.size() != b.size()) throw LinalgError("dot product dimension mismatch");
  CycScalar s;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
  return s;
}

Matrix power(const Matrix& m, long exponent) {
  if (m.rows() != m.cols()) throw LinalgError("power of a non-square matrix");
  Matrix base = exponent < 0 ? inverse(m) : m;
  unsigned long e = exponent < 0 ? static_cast<unsigned long>(-exponent) : static_cast<unsigned long>(exponent);
  Matrix result = Matrix::identity(m.rows());
  while (e > 0) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

namespace {

// In-place Gauss-Jordan on `m`; returns the pivot columns. When `det` is given
// it accumulates the determinant of the leading square block.
std::vector<std::size_t> gauss_jordan(Matrix& m, std::size_t pivot_cols, CycScalar* det = nullptr) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  if (det) *det = 1;
  for (std::size_t c = 0; c < pivot_cols && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) {
      if (det) *det = 0;
      continue;
    }
    if (p != r) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
      if (det) *det = -*det;
    }
    const CycScalar pivot = m(r, c);
    if (det) *det *= pivot;
    const CycScalar inv = pivot.inverse();
    for (std::size_t j = c; j < m.cols(); ++j)
      if (!m(r, j).is_zero()) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const CycScalar f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

Matrix inverse(const Matrix& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw LinalgError("inverse of a non-square matrix");
  Matrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  if (gauss_jordan(aug, n).size() != n) throw LinalgError("matrix is singular");
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

CycScalar determinant(const Matrix& m) {
  if (m.rows() != m.cols()) throw LinalgError("determinant of a non-square matrix");
  Matrix work = m;
  CycScalar det;
  const auto pivots = gauss_jordan(work, m.cols(), &det);
  if (pivots.size() != m.rows()) return 0;
  return det;
}

std::size_t rank(const Matrix& m) {
  Matrix work = m;
  return gauss_jordan(work, m.cols()).size();
}

Matrix rref(const Matrix& m) {
  Matrix work = m;
  gauss_jordan(work, m.cols());
  return work;
}

std::vector<Vector> nullspace(const Matrix& m) {
  Matrix work = m;
  const auto pivots = gauss_jordan(work, m.cols());
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector v(m.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -work(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vector> solve(const Matrix& a, std::span<const CycScalar> b) {
  if (b.size() != a.rows()) throw LinalgError("solve: right-hand side dimension mismatch");
  Matrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  const auto pivots = gauss_jordan(aug, a.cols());
  for (std::size_t i = pivots.size(); i < a.rows(); ++i)
    if (!aug(i, a.cols()).is_zero()) return std::nullopt;
  if (pivots.size() != a.cols()) throw LinalgError("solve: solution is not unique");
  Vector x(a.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, a.cols());
  return x;
}

Vector charpoly(const Matrix& m) {
  // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k.
  const std::size_t n = m.rows();
  if (n != m.cols()) throw LinalgError("characteristic polynomial of a non-square matrix");
  Vector coeffs(n + 1);
  coeffs[n] = 1;
  Matrix mk(n, n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    mk = m * mk;
    for (std::size_t i = 0; i < n; ++i) mk(i, i) += coeffs[n - k + 1];
    const Matrix am = m * mk;
    CycScalar trace;
    for (std::size_t i = 0; i < n; ++i) trace += am(i, i);
    coeffs[n - k] = -trace * CycScalar(Rational(1, static_cast<long>(k)));
  }
  return coeffs;
}

}  // namespace refrob
