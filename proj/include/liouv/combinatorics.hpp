#pragma once

// Exact combinatorics of nilpotent tensor sums and the fermionic hopping map
// on an l-level Jordan chain.

#include "liouv/exact.hpp"

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

namespace liouv::comb {

using exact::BigInt;
using exact::BlockMultiset;
using IntMatrix = exact::Matrix<BigInt>;

struct Limits {
  long long max_dense_dim = 4096;    // dense map on the m-particle space
  long long max_graded_dim = 70000;  // graded rank computations
};

inline BigInt binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (long long i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

/// Memoized restricted binomials (l m)_r. One table per thread of use.
class RestrictedBinomialTable {
 public:
  BigInt operator()(int l, int m, long long r) {
    if (l < 0 || m < 0 || m > l || r < 0 || r > static_cast<long long>(m) * (l - m)) return 0;
    if (l == 0) return (m == 0 && r == 0) ? 1 : 0;
    const auto key = std::make_tuple(l, m, r);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    BigInt v = (*this)(l - 1, m, r) + (*this)(l - 1, m - 1, r - l + m);
    memo_.emplace(key, v);
    return v;
  }

  std::vector<BigInt> row(int l, int m) {
    std::vector<BigInt> out;
    if (m < 0 || m > l) return out;
    for (long long r = 0; r <= static_cast<long long>(m) * (l - m); ++r) out.push_back((*this)(l, m, r));
    return out;
  }

 private:
  std::map<std::tuple<int, int, long long>, BigInt> memo_;
};

inline BigInt restricted_binomial(int l, int m, long long r) {
  thread_local RestrictedBinomialTable table;
  return table(l, m, r);
}

inline std::vector<BigInt> restricted_binomial_row(int l, int m) {
  thread_local RestrictedBinomialTable table;
  return table.row(l, m);
}

/// Nilpotent part of the Jordan block: e_i -> e_{i-1} (ones on the superdiagonal).
inline IntMatrix shift_block(int size) {
  IntMatrix d(size, size);
  for (int i = 0; i + 1 < size; ++i) d(i, i + 1) = 1;
  return d;
}

/// Nilpotent part of Delta_k (x) 1 + 1 (x) Delta_l; basis |i,j> at index (i-1)*l + (j-1).
inline IntMatrix tensor_sum_matrix(int k, int l) {
  return exact::kron(shift_block(k), IntMatrix::identity(l)) + exact::kron(IntMatrix::identity(k), shift_block(l));
}

/// Block sizes k+l-1, k+l-3, ..., |k-l|+1.
inline BlockMultiset tensor_sum_blocks(int k, int l) {
  if (k < 1 || l < 1) throw Error(ErrorKind::DimensionMismatch, "tensor_sum_blocks needs k, l >= 1");
  BlockMultiset out;
  for (int r = 1; r <= std::min(k, l); ++r) out[k + l - 2 * r + 1] += 1;
  return out;
}

struct SeedCoefficients {
  std::vector<BigInt> c;                    // c_q, q = 1..r
  std::vector<BigInt> homogeneous_sums;     // j = 1..r-1, all zero
  std::vector<BigInt> nonvanishing_sums;    // j = 1..r, at least one nonzero
};

/// Seed of the r-th chain of the tensor sum, sum_q c_q |k-q+1, l-r+q>.
inline SeedCoefficients seed_coefficients(int k, int l, int r) {
  if (r < 1 || r > std::min(k, l)) {
    throw Error(ErrorKind::DimensionMismatch, "seed_coefficients needs 1 <= r <= min(k, l)");
  }
  const long long kp = k - r;
  const long long lp = l - r;
  SeedCoefficients s;
  for (long long q = 1; q <= r; ++q) {
    BigInt v = binomial(kp + r - q, r - q) * binomial(lp + q - 1, q - 1);
    if ((r - q) % 2 != 0) v = -v;
    s.c.push_back(v);
  }
  for (long long j = 1; j <= r; ++j) {
    BigInt h = 0;
    BigInt nv = 0;
    for (long long q = 1; q <= r; ++q) {
      h += binomial(kp + lp + 1, lp - j + q) * s.c[q - 1];
      nv += binomial(kp + lp, lp - j + q) * s.c[q - 1];
    }
    if (j < r) s.homogeneous_sums.push_back(h);
    s.nonvanishing_sums.push_back(nv);
  }
  for (std::size_t j = 0; j < s.homogeneous_sums.size(); ++j) {
    if (s.homogeneous_sums[j] != 0) {
      throw Error(ErrorKind::IdentityViolated, "seed homogeneous identity fails at j=" + std::to_string(j + 1));
    }
  }
  if (std::all_of(s.nonvanishing_sums.begin(), s.nonvanishing_sums.end(), [](const BigInt& v) { return v == 0; })) {
    throw Error(ErrorKind::IdentityViolated, "seed chain is shorter than k+l-2r+1");
  }
  return s;
}

/// The seed as a vector in the |i,j> basis of tensor_sum_matrix.
inline IntMatrix seed_vector(int k, int l, int r) {
  const auto s = seed_coefficients(k, l, r);
  IntMatrix v(static_cast<std::size_t>(k) * l, 1);
  for (int q = 1; q <= r; ++q) {
    const int i = k - q + 1;
    const int j = l - r + q;
    v(static_cast<std::size_t>(i - 1) * l + (j - 1), 0) = s.c[q - 1];
  }
  return v;
}

// ---------------------------------------------------------------------------
// Hopping map on m particles in l ordered levels.

using Occupation = std::vector<int>;  // nu_1..nu_l in {0,1}

inline long long weight(const Occupation& nu) {
  long long w = 0;
  long long m = 0;
  for (std::size_t k = 0; k < nu.size(); ++k) {
    w += static_cast<long long>(k + 1) * nu[k];
    m += nu[k];
  }
  return w - m * (m + 1) / 2;
}

/// m-particle occupations ordered by weight, then lexicographically.
inline std::vector<Occupation> occupation_basis(int l, int m) {
  std::vector<Occupation> out;
  if (m < 0 || m > l) return out;
  Occupation nu(l, 0);
  std::fill(nu.end() - m, nu.end(), 1);
  do {
    out.push_back(nu);
  } while (std::next_permutation(nu.begin(), nu.end()));
  std::stable_sort(out.begin(), out.end(), [](const Occupation& a, const Occupation& b) {
    const auto wa = weight(a);
    const auto wb = weight(b);
    return wa != wb ? wa < wb : a < b;
  });
  return out;
}

/// Basis of the weight-r level, lexicographic.
inline std::vector<Occupation> weight_level(int l, int m, long long r) {
  std::vector<Occupation> out;
  for (auto& nu : occupation_basis(l, m)) {
    if (weight(nu) == r) out.push_back(nu);
  }
  return out;
}

namespace detail {

inline void check_size(const BigInt& dim, long long limit, const std::string& what) {
  if (dim > limit) {
    throw Error(ErrorKind::TooLarge, what + " dimension " + dim.str() + " exceeds limit " + std::to_string(limit));
  }
}

/// Hop images of nu: nu with one particle moved k -> k+1 (coefficient +1).
inline std::vector<Occupation> hops(const Occupation& nu) {
  std::vector<Occupation> out;
  for (std::size_t k = 0; k + 1 < nu.size(); ++k) {
    if (nu[k] == 1 && nu[k + 1] == 0) {
      Occupation t = nu;
      t[k] = 0;
      t[k + 1] = 1;
      out.push_back(t);
    }
  }
  return out;
}

/// Matrix of the hopping map from `from` to `to` (columns index `from`).
inline IntMatrix hop_block(const std::vector<Occupation>& from, const std::vector<Occupation>& to) {
  std::map<Occupation, std::size_t> index;
  for (std::size_t i = 0; i < to.size(); ++i) index[to[i]] = i;
  IntMatrix b(to.size(), from.size());
  for (std::size_t c = 0; c < from.size(); ++c) {
    for (const auto& t : hops(from[c])) {
      auto it = index.find(t);
      if (it != index.end()) b(it->second, c) += 1;
    }
  }
  return b;
}

}  // namespace detail

/// Matrix of sum_k b'_{k+1} b_k on the m-particle space in occupation_basis order.
/// Adjacent hops pass no other occupied level, so every entry is +1 or 0.
inline IntMatrix nilpotent_map_matrix(int l, int m, const Limits& lim = {}) {
  if (l < 0 || m < 0 || m > l) throw Error(ErrorKind::DimensionMismatch, "need 0 <= m <= l");
  detail::check_size(binomial(l, m), lim.max_dense_dim, "nilpotent map");
  const auto basis = occupation_basis(l, m);
  return detail::hop_block(basis, basis);
}

/// Per-level blocks B_r: V_r -> V_{r+1}, r = 0..(l-m)m-1.
inline std::vector<IntMatrix> graded_blocks(int l, int m) {
  const long long top = static_cast<long long>(l - m) * m;
  std::vector<std::vector<Occupation>> levels(top + 1);
  for (auto& nu : occupation_basis(l, m)) levels[weight(nu)].push_back(nu);
  std::vector<IntMatrix> out;
  for (long long r = 0; r < top; ++r) out.push_back(detail::hop_block(levels[r], levels[r + 1]));
  return out;
}

/// rank M^k = sum_r rank(B_{r+k-1} ... B_r), for k = 0 .. (l-m)m+1.
inline std::vector<long long> graded_rank_staircase(int l, int m, const Limits& lim = {}) {
  if (l < 0 || m < 0 || m > l) throw Error(ErrorKind::DimensionMismatch, "need 0 <= m <= l");
  detail::check_size(binomial(l, m), lim.max_graded_dim, "graded nilpotent map");
  const auto blocks = graded_blocks(l, m);
  const long long top = static_cast<long long>(l - m) * m;
  std::vector<long long> ranks(top + 2, 0);
  ranks[0] = static_cast<long long>(binomial(l, m));
  for (long long r = 0; r < top; ++r) {
    IntMatrix prod = blocks[r];
    for (long long k = 1; r + k <= top; ++k) {
      if (k > 1) prod = blocks[r + k - 1] * prod;
      ranks[k] += static_cast<long long>(exact::rank(prod));
    }
  }
  while (ranks.size() > 1 && ranks.back() == 0 && ranks[ranks.size() - 2] == 0) ranks.pop_back();
  return ranks;
}

struct NilpotentBlocksResult {
  BlockMultiset staircase;   // ground truth from exact ranks
  BlockMultiset conjectured; // from restricted binomial differences
  bool agree = false;
  int largest_block = 0;
};

inline BlockMultiset conjectured_blocks(int l, int m) {
  BlockMultiset out;
  const long long top = static_cast<long long>(l - m) * m;
  for (long long r = 0; r <= top / 2; ++r) {
    const BigInt cnt = restricted_binomial(l, m, r) - restricted_binomial(l, m, r - 1);
    if (cnt != 0) out[static_cast<int>(top + 1 - 2 * r)] = static_cast<long long>(cnt);
  }
  return out;
}

inline NilpotentBlocksResult nilpotent_blocks(int l, int m, const Limits& lim = {}) {
  NilpotentBlocksResult res;
  res.staircase = exact::blocks_from_ranks(graded_rank_staircase(l, m, lim));
  res.conjectured = conjectured_blocks(l, m);
  res.agree = res.staircase == res.conjectured;
  res.largest_block = res.staircase.empty() ? 0 : res.staircase.rbegin()->first;
  return res;
}

struct LevelCheck {
  int m = 0;
  long long r = 0;
  long long dim_from = 0;
  long long dim_to = 0;
  long long rank = 0;
  bool injective_required = false;
  bool surjective_required = false;
  bool pass = true;
};

struct ConjectureReport {
  int l = 0;
  std::vector<LevelCheck> levels;
  std::vector<std::pair<int, bool>> monotone;  // per m
  bool all_pass = true;
};

inline long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline ConjectureReport verify_conjecture(int l, const Limits& lim = {}) {
  if (l < 0) throw Error(ErrorKind::DimensionMismatch, "l must be nonnegative");
  ConjectureReport rep;
  rep.l = l;
  for (int m = 0; m <= l; ++m) {
    detail::check_size(binomial(l, m), lim.max_graded_dim, "graded nilpotent map");
    const long long top = static_cast<long long>(l - m) * m;
    const long long inj_hi = floor_div(top - 1, 2);
    const long long surj_lo = floor_div(top, 2);
    const auto blocks = graded_blocks(l, m);
    for (long long r = 0; r <= top; ++r) {
      LevelCheck c;
      c.m = m;
      c.r = r;
      c.dim_from = static_cast<long long>(restricted_binomial(l, m, r));
      c.dim_to = static_cast<long long>(restricted_binomial(l, m, r + 1));
      c.rank = r < top ? static_cast<long long>(exact::rank(blocks[r])) : 0;
      c.injective_required = r <= inj_hi;
      c.surjective_required = r >= surj_lo;
      if (c.injective_required && c.rank != c.dim_from) c.pass = false;
      if (c.surjective_required && c.rank != c.dim_to) c.pass = false;
      rep.all_pass = rep.all_pass && c.pass;
      rep.levels.push_back(c);
    }
    bool mono = true;
    for (long long r = 0; r < surj_lo; ++r) {
      if (restricted_binomial(l, m, r) > restricted_binomial(l, m, r + 1)) mono = false;
    }
    rep.monotone.emplace_back(m, mono);
    rep.all_pass = rep.all_pass && mono;
  }
  return rep;
}

}  // namespace liouv::comb
