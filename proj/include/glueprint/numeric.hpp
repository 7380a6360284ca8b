#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace glueprint {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;

/// Parses "p", "-p" or "p/q" into a canonicalized rational.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" text ("p" when the denominator is one).
std::string to_string(const Rational& value);
std::string to_string(const Integer& value);

Integer floor_of(const Rational& value);
Integer ceil_of(const Rational& value);

/// Smallest integer k >= 0 with k*k >= value (value >= 0).
Integer ceil_sqrt(const Rational& value);

/// Largest integer k >= 0 with k*k <= value (value >= 0).
Integer floor_sqrt(const Rational& value);

Rational power(const Rational& base, unsigned long exponent);

/// Dense row-major matrix over Integer or Rational.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<T>> rows);

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class T>
Matrix<T>::Matrix(std::initializer_list<std::initializer_list<T>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows)
    for (const auto& x : r) data_.push_back(x);
}

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

RatMatrix to_rational(const IntMatrix& m);
RatMatrix multiply(const RatMatrix& a, const RatMatrix& b);
RatMatrix add(const RatMatrix& a, const RatMatrix& b);
RatMatrix subtract(const RatMatrix& a, const RatMatrix& b);

/// Exact determinant by fraction-free-style Gaussian elimination over Q.
Rational determinant(const RatMatrix& m);

/// Determinant of the empty matrix is 1.
Integer determinant(const IntMatrix& m);

/// Block-diagonal direct sum.
RatMatrix direct_sum(const std::vector<RatMatrix>& blocks);

}  // namespace glueprint
