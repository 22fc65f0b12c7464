#pragma once

// Dense exact linear algebra over cyclotomic fields. Matrices here are small
// (group ranks, weight-block dimensions), so everything is plain Gauss-Jordan.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "refrob/scalar.hpp"

namespace refrob {

using Vector = std::vector<CycScalar>;

class LinalgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vector>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  CycScalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const CycScalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const CycScalar> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  Vector column(std::size_t j) const;

  Matrix transpose() const;
  bool is_identity() const;
  bool is_zero() const;
  std::size_t hash() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const CycScalar& s, const Matrix& m);
  friend Vector operator*(const Matrix& m, std::span<const CycScalar> v);
  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<CycScalar> data_;
};

struct MatrixHash {
  std::size_t operator()(const Matrix& m) const { return m.hash(); }
};

/// Row vector times matrix: (v^T M)^T.
Vector left_multiply(std::span<const CycScalar> v, const Matrix& m);
CycScalar dot(std::span<const CycScalar> a, std::span<const CycScalar> b);

Matrix power(const Matrix& m, long exponent);
Matrix inverse(const Matrix& m);
CycScalar determinant(const Matrix& m);
std::size_t rank(const Matrix& m);

/// Reduced row echelon form; pivot columns are chosen left to right.
Matrix rref(const Matrix& m);

/// Basis of {v : M v = 0}, one vector per free column, with that free
/// coordinate set to 1.
std::vector<Vector> nullspace(const Matrix& m);

/// Unique solution of A x = b. nullopt when the system is inconsistent;
/// throws LinalgError when the solution is not unique.
std::optional<Vector> solve(const Matrix& a, std::span<const CycScalar> b);

/// Characteristic polynomial det(t I - M), constant term first (monic).
Vector charpoly(const Matrix& m);

}  // namespace refrob
