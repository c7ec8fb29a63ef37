#pragma once

// Small dense matrices over exact rings (boost cpp_int / cpp_rational) and the
// rank computations needed for Jordan structure of nilpotent maps.

#include "liouv/core.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <map>
#include <type_traits>
#include <utility>
#include <vector>

namespace liouv::exact {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool is_zero() const {
    for (const auto& x : data_) {
      if (x != 0) return false;
    }
    return true;
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
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "exact matrix product shape");
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

template <class T>
Matrix<T> operator+(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

template <class T>
Matrix<T> power(const Matrix<T>& a, int p) {
  Matrix<T> r = Matrix<T>::identity(a.rows());
  for (int i = 0; i < p; ++i) r = r * a;
  return r;
}

template <class T>
Matrix<T> kron(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) c(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return c;
}

/// Rank by fraction-free (Bareiss) elimination. Every division is exact in the
/// integers; this is asserted so a wrong pivot sequence cannot go unnoticed.
template <class T>
std::size_t rank(Matrix<T> a) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  std::size_t r = 0;
  T prev(1);
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a(piv, c) == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(a(r, j), a(piv, j));
    }
    const T p = a(r, c);
    for (std::size_t i = r + 1; i < rows; ++i) {
      const T f = a(i, c);
      for (std::size_t j = c + 1; j < cols; ++j) {
        T num = p * a(i, j) - f * a(r, j);
        if constexpr (std::is_same_v<T, BigInt>) {
          if (num % prev != 0) throw Error(ErrorKind::IdentityViolated, "Bareiss division not exact");
        }
        a(i, j) = num / prev;
      }
      a(i, c) = 0;
    }
    prev = p;
    ++r;
  }
  return r;
}

/// Jordan block multiset as size -> count.
using BlockMultiset = std::map<int, long long>;

/// Block multiset of a nilpotent map from its rank staircase r_k = rank N^k
/// (r_0 = dimension). Blocks of size >= k number r_{k-1} - r_k.
inline BlockMultiset blocks_from_ranks(const std::vector<long long>& ranks) {
  BlockMultiset out;
  for (std::size_t k = 1; k < ranks.size(); ++k) {
    const long long ge_k = ranks[k - 1] - ranks[k];
    const long long ge_k1 = (k + 1 < ranks.size()) ? ranks[k] - ranks[k + 1] : 0;
    if (ge_k - ge_k1 > 0) out[static_cast<int>(k)] = ge_k - ge_k1;
  }
  return out;
}

/// Rank staircase of a nilpotent matrix, continued until the power vanishes.
template <class T>
std::vector<long long> nilpotent_rank_staircase(const Matrix<T>& n) {
  std::vector<long long> ranks{static_cast<long long>(n.rows())};
  Matrix<T> p = Matrix<T>::identity(n.rows());
  while (ranks.back() > 0) {
    p = p * n;
    const long long r = static_cast<long long>(rank(p));
    if (r >= ranks.back()) throw Error(ErrorKind::IdentityViolated, "matrix is not nilpotent");
    ranks.push_back(r);
  }
  return ranks;
}

template <class T>
BlockMultiset nilpotent_blocks_exact(const Matrix<T>& n) {
  return blocks_from_ranks(nilpotent_rank_staircase(n));
}

/// Jordan structure at eigenvalue beta of a rational matrix: block multiset of the
/// nilpotent part, from exact ranks of (X - beta)^k until they stabilize.
inline BlockMultiset jordan_blocks_at(const Matrix<Rational>& x, const Rational& beta) {
  Matrix<Rational> nmat = x;
  for (std::size_t i = 0; i < x.rows(); ++i) nmat(i, i) -= beta;
  std::vector<long long> ranks{static_cast<long long>(x.rows())};
  Matrix<Rational> p = Matrix<Rational>::identity(x.rows());
  for (;;) {
    p = p * nmat;
    const long long r = static_cast<long long>(rank(p));
    if (r == ranks.back()) break;
    ranks.push_back(r);
  }
  // Stabilized rank is the dimension outside the generalized eigenspace.
  const long long floor_rank = ranks.back();
  for (auto& r : ranks) r -= floor_rank;
  return blocks_from_ranks(ranks);
}

}  // namespace liouv::exact
