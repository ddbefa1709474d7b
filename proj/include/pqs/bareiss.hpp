#pragma once

// Fraction-free Gaussian elimination (Bareiss) over the integers.

#include <cstddef>
#include <utility>
#include <vector>

#include "pqs/bigint.hpp"
#include "pqs/error.hpp"

namespace pqs {

template <class Int>
using Matrix = std::vector<std::vector<Int>>;

template <class Int, class Rational>
struct LinearSolution {
  Int determinant;
  std::vector<Rational> solution;  ///< empty when the matrix is singular
};

namespace detail {

template <class Int>
void check_square(const Matrix<Int>& a, std::size_t rhs_size) {
  for (const auto& row : a) {
    if (row.size() != a.size()) throw DomainError("matrix is not square");
  }
  if (rhs_size != a.size()) throw DomainError("right-hand side has the wrong length");
}

// Eliminates m (n rows, n + extra columns) in place. Every intermediate entry
// is a minor of the input, so divisions are exact. Returns det of the leading
// n x n block; rows may be swapped.
template <class Int>
Int bareiss_eliminate(Matrix<Int>& m) {
  const std::size_t n = m.size();
  const std::size_t width = n == 0 ? 0 : m[0].size();
  Int previous = 1;
  bool negate = false;
  for (std::size_t k = 0; k < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return Int(0);
      std::swap(m[k], m[swap_row]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < width; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / previous;
      }
      m[i][k] = 0;
    }
    previous = m[k][k];
  }
  return negate ? Int(-previous) : previous;
}

}  // namespace detail

template <class Int>
Int determinant(Matrix<Int> a) {
  detail::check_square(a, a.size());
  if (a.empty()) return Int(1);
  return detail::bareiss_eliminate(a);
}

/// Solves a x = b exactly. Returns det(a) and x, or det 0 and no solution.
template <class Int, class Rational>
LinearSolution<Int, Rational> solve_exact(const Matrix<Int>& a, const std::vector<Int>& b) {
  detail::check_square(a, b.size());
  const std::size_t n = a.size();
  Matrix<Int> m = a;
  for (std::size_t i = 0; i < n; ++i) m[i].push_back(b[i]);
  const Int det = n == 0 ? Int(1) : detail::bareiss_eliminate(m);
  if (det == 0) return {Int(0), {}};

  std::vector<Rational> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rational acc(m[i][n]);
    for (std::size_t j = i + 1; j < n; ++j) acc -= Rational(m[i][j]) * x[j];
    x[i] = acc / Rational(m[i][i]);
  }
  return {det, std::move(x)};
}

inline LinearSolution<BigInt, BigRational> solve_exact(const Matrix<BigInt>& a, const std::vector<BigInt>& b) {
  return solve_exact<BigInt, BigRational>(a, b);
}

}  // namespace pqs
