#pragma once

#include "liouv/exact.hpp"
#include "liouv/lyapunov.hpp"
#include "liouv/rapidity.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace liouv {

struct LiouvilleanEigenvalue {
  Complex lambda;
  std::vector<int> occupation;  // m_b per block of the JordanForm, in block order
  long long subspace_dim = 1;
  int max_jordan_block = 1;
};

/// Eigenvalues closer than the merge tolerance, pooled. The block size is the
/// largest over contributing occupations, which only bounds the true block size
/// from below when several occupations collide.
struct MergedEigenvalue {
  Complex lambda;
  long long subspace_dim = 0;
  int max_jordan_block = 1;
  int contributing = 0;
  bool block_is_lower_bound = false;
};

struct LiouvilleanSpectrum {
  std::vector<LiouvilleanEigenvalue> raw;
  std::vector<MergedEigenvalue> merged;
  long long total_dim = 0;
};

inline long long binomial_ll(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Number of occupation vectors prod (ell + 1), saturating at limit + 1.
inline long long occupation_count(const JordanForm& jf, long long limit) {
  long long c = 1;
  for (const auto& b : jf.blocks) {
    c *= (b.size + 1);
    if (c > limit) return limit + 1;
  }
  return c;
}

inline LiouvilleanEigenvalue eigenvalue_for(const JordanForm& jf, const std::vector<int>& m) {
  LiouvilleanEigenvalue e;
  e.occupation = m;
  for (std::size_t b = 0; b < jf.blocks.size(); ++b) {
    const auto& blk = jf.blocks[b];
    e.lambda += -2.0 * static_cast<double>(m[b]) * blk.rapidity;
    e.subspace_dim *= binomial_ll(blk.size, m[b]);
    e.max_jordan_block += (blk.size - m[b]) * m[b];
  }
  return e;
}

inline std::vector<MergedEigenvalue> merge_eigenvalues(const std::vector<LiouvilleanEigenvalue>& raw,
                                                       double tol_merge) {
  double scale = 1.0;
  for (const auto& e : raw) scale = std::max(scale, std::abs(e.lambda));
  const double h = tol_merge * scale;
  // Grid hashing: anything within h lies in a neighbouring cell.
  std::map<std::pair<long long, long long>, std::vector<int>> grid;
  std::vector<MergedEigenvalue> out;
  std::vector<Complex> sums;
  auto cell = [&](Complex z) {
    return std::make_pair(static_cast<long long>(std::floor(z.real() / h)),
                          static_cast<long long>(std::floor(z.imag() / h)));
  };
  for (const auto& e : raw) {
    const auto c = cell(e.lambda);
    int hit = -1;
    for (long long dx = -1; dx <= 1 && hit < 0; ++dx)
      for (long long dy = -1; dy <= 1 && hit < 0; ++dy) {
        auto it = grid.find({c.first + dx, c.second + dy});
        if (it == grid.end()) continue;
        for (int g : it->second) {
          if (std::abs(out[g].lambda - e.lambda) <= h) {
            hit = g;
            break;
          }
        }
      }
    if (hit < 0) {
      hit = static_cast<int>(out.size());
      out.push_back({e.lambda, 0, 1, 0, false});
      sums.push_back(0.0);
      grid[c].push_back(hit);
    }
    auto& g = out[hit];
    g.subspace_dim += e.subspace_dim;
    g.max_jordan_block = std::max(g.max_jordan_block, e.max_jordan_block);
    g.contributing += 1;
    g.block_is_lower_bound = g.contributing > 1;
    sums[hit] += e.lambda;
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].lambda = sums[i] / static_cast<double>(out[i].contributing);
  std::stable_sort(out.begin(), out.end(), [](const MergedEigenvalue& a, const MergedEigenvalue& b) {
    if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
    return a.lambda.imag() < b.lambda.imag();
  });
  return out;
}

/// lambda_m = -2 sum m_{j,k} beta_j over all occupations 0 <= m_{j,k} <= ell_{j,k}.
inline LiouvilleanSpectrum enumerate_spectrum(const JordanForm& jf, long long limit = 1000000,
                                              double tol_merge = Tolerances{}.merge) {
  const long long count = occupation_count(jf, limit);
  if (count > limit) {
    throw Error(ErrorKind::SpectrumTooLarge, "occupation-vector count exceeds limit " + std::to_string(limit));
  }
  LiouvilleanSpectrum sp;
  sp.raw.reserve(count);
  const std::size_t nb = jf.blocks.size();
  std::vector<int> m(nb, 0);
  for (long long idx = 0; idx < count; ++idx) {
    long long rest = idx;
    for (std::size_t b = nb; b-- > 0;) {
      const int radix = jf.blocks[b].size + 1;
      m[b] = static_cast<int>(rest % radix);
      rest /= radix;
    }
    sp.raw.push_back(eigenvalue_for(jf, m));
  }
  std::stable_sort(sp.raw.begin(), sp.raw.end(), [](const LiouvilleanEigenvalue& a, const LiouvilleanEigenvalue& b) {
    if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
    if (a.lambda.imag() != b.lambda.imag()) return a.lambda.imag() < b.lambda.imag();
    return a.occupation < b.occupation;
  });
  for (const auto& e : sp.raw) sp.total_dim += e.subspace_dim;
  const long long expect = 1LL << jf.dim();
  if (sp.total_dim != expect) {
    throw Error(ErrorKind::BuildInvariantViolated,
                "invariant subspaces sum to " + std::to_string(sp.total_dim) + ", expected " + std::to_string(expect));
  }
  sp.merged = merge_eigenvalues(sp.raw, tol_merge);
  return sp;
}

struct ZeroModeDescriptor {
  int j = 1;
  int k = 1;
  friend bool operator==(const ZeroModeDescriptor&, const ZeroModeDescriptor&) = default;
};

/// b'_{j,k,1} b'_{j',k',1} |NESS> +- the (k <-> k') swap; the '-' combination
/// carries a factor i and vanishes identically when k = k'.
struct ImaginaryPairDescriptor {
  int j = 1;
  int j_prime = 1;
  int k = 1;
  int k_prime = 1;
  bool plus = true;
  bool vanishing = false;
  friend bool operator==(const ImaginaryPairDescriptor&, const ImaginaryPairDescriptor&) = default;
};

struct NessReport {
  bool unique = true;
  double gap = 0.0;
  std::vector<ZeroModeDescriptor> zero_rapidity_modes;
  std::vector<ImaginaryPairDescriptor> imaginary_pair_modes;
  long long stationary_dim = 1;
  CMatrix covariance;
  bool covariance_unique = true;
  bool physical = true;           // singular values of 4Z within 1 + tol (checked when unique)
  double max_singular_4Z = 0.0;
};

/// Occupation vectors with lambda_m = 0. Only axis rapidities can contribute,
/// and their blocks are trivial, so this is a subset-sum count over Im beta.
inline long long stationary_dimension(const JordanForm& jf, double tol = Tolerances{}.stability) {
  const double thr = axis_threshold(jf, tol);
  std::vector<std::pair<double, long long>> sums{{0.0, 1}};
  for (const auto& b : jf.blocks) {
    if (std::abs(b.rapidity.real()) > thr) continue;
    std::vector<std::pair<double, long long>> next = sums;
    for (const auto& [s, c] : sums) next.emplace_back(s + b.rapidity.imag(), c);
    std::sort(next.begin(), next.end());
    sums.clear();
    for (const auto& e : next) {
      if (!sums.empty() && std::abs(sums.back().first - e.first) <= thr) {
        sums.back().second += e.second;
      } else {
        sums.push_back(e);
      }
    }
  }
  long long out = 0;
  for (const auto& [s, c] : sums)
    if (std::abs(s) <= thr) out += c;
  return out;
}

inline NessReport classify_ness(const JordanForm& jf, double tol = Tolerances{}.stability) {
  NessReport rep;
  const double thr = axis_threshold(jf, tol);
  rep.gap = spectral_gap(jf, tol);
  for (const auto& beta : jf.rapidities) {
    if (beta.real() <= thr) rep.unique = false;
  }
  for (const auto& b : jf.blocks) {
    if (classify_rapidity(b.rapidity, thr) == RapidityClass::Zero) rep.zero_rapidity_modes.push_back({b.j, b.k});
  }
  for (std::size_t jp = 0; jp < jf.rapidities.size(); ++jp) {
    const Complex beta = jf.rapidities[jp];
    if (classify_rapidity(beta, thr) != RapidityClass::Imaginary || beta.imag() <= 0) continue;
    // partner rapidity -beta = conj(beta)
    int partner = -1;
    for (std::size_t q = 0; q < jf.rapidities.size(); ++q)
      if (std::abs(jf.rapidities[q] + beta) <= thr) partner = static_cast<int>(q);
    if (partner < 0) continue;
    int blocks_j = 0;
    int blocks_jp = 0;
    for (const auto& b : jf.blocks) {
      if (b.j == static_cast<int>(jp) + 1) blocks_j = std::max(blocks_j, b.k);
      if (b.j == partner + 1) blocks_jp = std::max(blocks_jp, b.k);
    }
    const int mult = std::min(blocks_j, blocks_jp);
    for (int k = 1; k <= mult; ++k)
      for (int kp = k; kp <= mult; ++kp) {
        rep.imaginary_pair_modes.push_back({static_cast<int>(jp) + 1, partner + 1, k, kp, true, false});
        rep.imaginary_pair_modes.push_back({static_cast<int>(jp) + 1, partner + 1, k, kp, false, k == kp});
      }
  }
  rep.stationary_dim = stationary_dimension(jf, tol);
  rep.covariance_unique = rep.unique;
  return rep;
}

/// NESS correlators tr(w_j w_k rho) = delta_jk - 4i Z_jk.
inline CMatrix ness_covariance(const RMatrix& Z) {
  const int d = static_cast<int>(Z.rows());
  return CMatrix::Identity(d, d) - 4.0 * I_unit * Z.cast<Complex>();
}

/// Fills covariance and the physicality check (largest singular value of 4Z <= 1 + tol).
inline void attach_covariance(NessReport& rep, const RMatrix& Z, bool z_unique, double tol = 1e-8) {
  rep.covariance = ness_covariance(Z);
  rep.covariance_unique = rep.unique && z_unique;
  rep.max_singular_4Z = spectral_norm(RMatrix(4.0 * Z));
  rep.physical = !rep.unique || rep.max_singular_4Z <= 1.0 + tol;
}

}  // namespace liouv
