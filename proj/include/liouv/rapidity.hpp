#pragma once

#include "liouv/core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace liouv {

struct JordanBlockDescriptor {
  Complex rapidity;
  int size = 1;
  int chain_start = 0;  // first column of P belonging to this block
  int j = 1;            // distinct-rapidity index, 1-based, in sort order
  int k = 1;            // block index within rapidity j, 1-based
};

/// X = P Delta P^{-1}, Delta upper bidiagonal with ones on the superdiagonal.
struct JordanForm {
  CMatrix P;
  CMatrix P_inv;
  std::vector<JordanBlockDescriptor> blocks;
  std::vector<Complex> rapidities;    // distinct, index j-1
  std::vector<int> conjugate_partner; // per block; -1 for real rapidities
  double scale = 0.0;                 // |X|_2
  bool ill_conditioned = false;
  double condition_number = 1.0;
  double reconstruction_residual = 0.0;  // relative to max|X|

  int dim() const { return static_cast<int>(P.rows()); }

  CMatrix jordan_matrix() const {
    CMatrix d = CMatrix::Zero(dim(), dim());
    for (const auto& b : blocks) {
      for (int i = 0; i < b.size; ++i) {
        d(b.chain_start + i, b.chain_start + i) = b.rapidity;
        if (i + 1 < b.size) d(b.chain_start + i, b.chain_start + i + 1) = 1.0;
      }
    }
    return d;
  }

  /// Per-column rapidity.
  std::vector<Complex> diagonal() const {
    std::vector<Complex> out(dim());
    for (const auto& b : blocks)
      for (int i = 0; i < b.size; ++i) out[b.chain_start + i] = b.rapidity;
    return out;
  }

  /// Per-column superdiagonal entry s_a = Delta(a-1, a) (0 at chain starts).
  std::vector<int> superdiagonal() const {
    std::vector<int> out(dim(), 0);
    for (const auto& b : blocks)
      for (int i = 1; i < b.size; ++i) out[b.chain_start + i] = 1;
    return out;
  }

  int max_block_size() const {
    int m = 0;
    for (const auto& b : blocks) m = std::max(m, b.size);
    return m;
  }
};

namespace detail {

struct Cluster {
  Complex center;
  int multiplicity = 0;
};

/// Single-linkage clusters of the eigenvalues at distance <= radius.
inline std::vector<Cluster> cluster_eigenvalues(const CVector& ev, double radius) {
  const int m = static_cast<int>(ev.size());
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      if (std::abs(ev(a) - ev(b)) <= radius) parent[find(a)] = find(b);
  std::vector<Cluster> out;
  std::vector<int> slot(m, -1);
  for (int a = 0; a < m; ++a) {
    const int r = find(a);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.push_back({});
    }
    out[slot[r]].center += ev(a);
    out[slot[r]].multiplicity += 1;
  }
  for (auto& c : out) c.center /= static_cast<double>(c.multiplicity);
  return out;
}

template <class Mat>
Mat smallest_right_singular(const Mat& a, int count) {
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(count);
}

template <class Mat>
Mat orthonormal_basis(const Mat& cols, double rel_tol = 1e-12) {
  if (cols.cols() == 0) return Mat(cols.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(cols, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int r = 0;
  while (r < s.size() && s(r) > rel_tol * std::max(1.0, s(0))) ++r;
  return svd.matrixU().leftCols(r);
}

struct Staircase {
  std::vector<int> nullity;  // nullity[k] = dim ker N^k, k = 0..a
  bool ill_conditioned = false;
};

/// Nullities of N^k for k = 1..a, counting singular values <= tol_rank |N|_2^k,
/// clamped to a consistent Jordan staircase.
template <class Mat>
Staircase rank_staircase(const Mat& nmat, int a, double tol_rank) {
  Staircase st;
  st.nullity.assign(a + 1, 0);
  const double nnorm = spectral_norm(Mat(nmat));
  Mat p = Mat::Identity(nmat.rows(), nmat.cols());
  for (int k = 1; k <= a; ++k) {
    p = (p * nmat).eval();
    Eigen::JacobiSVD<Mat> svd(p);
    const auto& s = svd.singularValues();
    const double thr = tol_rank * std::pow(nnorm, k);
    int cnt = 0;
    for (int i = 0; i < s.size(); ++i) {
      if (s(i) <= thr) ++cnt;
      if (thr > 0 && s(i) > thr / 10.0 && s(i) < thr * 10.0) st.ill_conditioned = true;
    }
    int d = std::min(cnt, a);
    const int prev = st.nullity[k - 1];
    const int prev_inc = k >= 2 ? st.nullity[k - 1] - st.nullity[k - 2] : a;
    d = std::max(d, prev);
    if (d - prev > prev_inc) {
      d = prev + prev_inc;
      st.ill_conditioned = true;
    }
    st.nullity[k] = d;
  }
  if (st.nullity[a] != a) {
    // the cluster did not fit into the generalized kernel at this tolerance
    st.ill_conditioned = true;
    st.nullity[a] = a;
    for (int k = a - 1; k >= 1; --k) st.nullity[k] = std::min(st.nullity[k], st.nullity[k + 1]);
    if (st.nullity[1] == 0) st.nullity[1] = 1;
  }
  return st;
}

/// Jordan chains for one cluster, each ordered [N^{s-1}u, ..., u] with the
/// proper eigenvector of unit norm. Returns chains sorted by length descending.
template <class Mat>
std::vector<Mat> build_chains(const Mat& nmat, const Staircase& st) {
  using Scalar = typename Mat::Scalar;
  const int a = static_cast<int>(st.nullity.size()) - 1;
  const int dim = static_cast<int>(nmat.rows());
  // number of blocks of size >= k
  std::vector<int> ge(a + 2, 0);
  for (int k = 1; k <= a; ++k) ge[k] = st.nullity[k] - st.nullity[k - 1];
  std::vector<Mat> powers{Mat::Identity(dim, dim)};
  for (int k = 1; k <= a; ++k) powers.push_back(powers.back() * nmat);

  struct Chain {
    Mat vecs;  // columns [N^{L-1}u ... u]
    int length;
  };
  std::vector<Chain> chains;
  for (int s = a; s >= 1; --s) {
    const int count = ge[s] - ge[s + 1];
    if (count <= 0) continue;
    const Mat ks = smallest_right_singular(powers[s], st.nullity[s]);
    Mat span(dim, 0);
    if (s > 1) {
      const Mat km = smallest_right_singular(powers[s - 1], st.nullity[s - 1]);
      span = km;
    }
    for (const auto& c : chains) {
      // vector of c at height s
      Mat grown(dim, span.cols() + 1);
      grown << span, c.vecs.col(c.length - s);
      span = grown;
    }
    const Mat q = orthonormal_basis(span);
    const Mat resid = ks - q * (q.adjoint() * ks);
    Eigen::JacobiSVD<Mat> svd(resid, Eigen::ComputeFullV);
    const Mat tops = ks * svd.matrixV().leftCols(count);
    for (int c = 0; c < count; ++c) {
      Chain ch;
      ch.length = s;
      ch.vecs.resize(dim, s);
      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> u = tops.col(c);
      for (int i = 0; i < s; ++i) ch.vecs.col(i) = powers[s - 1 - i] * u;
      const double nrm = ch.vecs.col(0).norm();
      if (nrm > 0) ch.vecs /= Scalar(nrm);
      chains.push_back(std::move(ch));
    }
  }
  std::vector<Mat> out;
  for (auto& c : chains) out.push_back(std::move(c.vecs));
  return out;
}

}  // namespace detail

inline JordanForm jordan_decompose(const RMatrix& X, double tol_cluster = Tolerances{}.cluster,
                                   double tol_rank = Tolerances{}.rank,
                                   double tol_jordan = Tolerances{}.jordan) {
  if (X.rows() != X.cols()) throw Error(ErrorKind::DimensionMismatch, "X must be square");
  if (!all_finite(X)) throw Error(ErrorKind::NonFinite, "X has non-finite entries");
  const int d = static_cast<int>(X.rows());
  JordanForm jf;
  jf.scale = spectral_norm(X);
  const double ref = jf.scale > 0 ? jf.scale : 1.0;

  Eigen::EigenSolver<RMatrix> es(X, false);
  const auto clusters = detail::cluster_eigenvalues(es.eigenvalues(), tol_cluster * ref);

  struct Pending {
    Complex beta;
    CMatrix vecs;
    int size;
    bool real;
    int partner_of = -1;  // index into pending list of the Im > 0 partner
  };
  std::vector<Pending> pending;
  for (const auto& c : clusters) {
    const bool real = std::abs(c.center.imag()) <= tol_cluster * ref;
    if (!real && c.center.imag() < 0) continue;  // generated from the Im > 0 partner
    if (real) {
      const double beta = c.center.real();
      const RMatrix nmat = X - beta * RMatrix::Identity(d, d);
      const auto st = detail::rank_staircase(nmat, c.multiplicity, tol_rank);
      jf.ill_conditioned = jf.ill_conditioned || st.ill_conditioned;
      for (auto& ch : detail::build_chains(nmat, st)) {
        pending.push_back({Complex(beta, 0.0), ch.cast<Complex>(), static_cast<int>(ch.cols()), true});
      }
    } else {
      const Complex beta = c.center;
      const CMatrix nmat = X.cast<Complex>() - beta * CMatrix::Identity(d, d);
      const auto st = detail::rank_staircase(nmat, c.multiplicity, tol_rank);
      jf.ill_conditioned = jf.ill_conditioned || st.ill_conditioned;
      for (auto& ch : detail::build_chains(nmat, st)) {
        const int self = static_cast<int>(pending.size());
        pending.push_back({beta, ch, static_cast<int>(ch.cols()), false});
        pending.push_back({std::conj(beta), ch.conjugate(), static_cast<int>(ch.cols()), false, self});
      }
    }
  }
  int total = 0;
  for (const auto& p : pending) total += p.size;
  if (total != d) {
    throw Error(ErrorKind::BuildInvariantViolated,
                "Jordan chains cover " + std::to_string(total) + " of " + std::to_string(d) + " dimensions");
  }

  std::vector<int> order(pending.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& pa = pending[a];
    const auto& pb = pending[b];
    if (pa.beta.real() != pb.beta.real()) return pa.beta.real() < pb.beta.real();
    if (pa.beta.imag() != pb.beta.imag()) return pa.beta.imag() < pb.beta.imag();
    return pa.size > pb.size;
  });
  std::vector<int> position(pending.size());
  jf.P.resize(d, d);
  int col = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& p = pending[order[i]];
    position[order[i]] = static_cast<int>(i);
    JordanBlockDescriptor b;
    b.rapidity = p.beta;
    b.size = p.size;
    b.chain_start = col;
    if (jf.rapidities.empty() || jf.rapidities.back() != p.beta) {
      jf.rapidities.push_back(p.beta);
      b.k = 1;
    } else {
      b.k = jf.blocks.back().k + 1;
    }
    b.j = static_cast<int>(jf.rapidities.size());
    jf.P.middleCols(col, p.size) = p.vecs;
    col += p.size;
    jf.blocks.push_back(b);
  }
  jf.conjugate_partner.assign(jf.blocks.size(), -1);
  for (std::size_t i = 0; i < pending.size(); ++i) {
    if (pending[i].partner_of >= 0) {
      const int a = position[i];
      const int b = position[pending[i].partner_of];
      jf.conjugate_partner[a] = b;
      jf.conjugate_partner[b] = a;
    }
  }

  Eigen::FullPivLU<CMatrix> lu(jf.P);
  jf.P_inv = lu.inverse();
  Eigen::JacobiSVD<CMatrix> svd(jf.P);
  const auto& s = svd.singularValues();
  jf.condition_number = (s.size() == 0) ? 1.0 : (s(s.size() - 1) > 0 ? s(0) / s(s.size() - 1) : INFINITY);
  const double xmax = max_abs(X);
  const CMatrix recon = jf.P * jf.jordan_matrix() * jf.P_inv;
  jf.reconstruction_residual = max_abs(CMatrix(recon - X.cast<Complex>())) / (xmax > 0 ? xmax : 1.0);
  if (!std::isfinite(jf.reconstruction_residual) || jf.reconstruction_residual > tol_jordan) jf.ill_conditioned = true;
  return jf;
}

enum class RapidityClass { Stable, Zero, Imaginary, Unstable };

inline std::string_view to_string(RapidityClass c) {
  switch (c) {
    case RapidityClass::Stable: return "stable";
    case RapidityClass::Zero: return "zero";
    case RapidityClass::Imaginary: return "imaginary";
    case RapidityClass::Unstable: return "unstable";
  }
  return "unknown";
}

struct StabilityReport {
  double min_re = 0.0;
  std::vector<RapidityClass> classes;  // per distinct rapidity
  double threshold = 0.0;              // absolute threshold used
};

inline RapidityClass classify_rapidity(Complex beta, double thr) {
  if (beta.real() < -thr) return RapidityClass::Unstable;
  if (beta.real() > thr) return RapidityClass::Stable;
  return std::abs(beta.imag()) > thr ? RapidityClass::Imaginary : RapidityClass::Zero;
}

inline double axis_threshold(const JordanForm& jf, double tol) { return tol * (jf.scale > 0 ? jf.scale : 1.0); }

/// Re beta >= 0 for all rapidities, with trivial blocks on the imaginary axis.
inline StabilityReport stability_check(const JordanForm& jf, double tol = Tolerances{}.stability) {
  StabilityReport rep;
  rep.threshold = axis_threshold(jf, tol);
  rep.min_re = INFINITY;
  for (const auto& beta : jf.rapidities) {
    rep.min_re = std::min(rep.min_re, beta.real());
    rep.classes.push_back(classify_rapidity(beta, rep.threshold));
  }
  if (jf.rapidities.empty()) rep.min_re = 0.0;
  for (std::size_t j = 0; j < jf.rapidities.size(); ++j) {
    if (rep.classes[j] == RapidityClass::Unstable) {
      throw Error(ErrorKind::StabilityViolated, "rapidity with Re = " + std::to_string(jf.rapidities[j].real()));
    }
  }
  for (const auto& b : jf.blocks) {
    const auto c = rep.classes[b.j - 1];
    if ((c == RapidityClass::Zero || c == RapidityClass::Imaginary) && b.size > 1) {
      throw Error(ErrorKind::StabilityViolated,
                  "Jordan block of size " + std::to_string(b.size) + " on the imaginary axis");
    }
  }
  return rep;
}

/// 2 min_j Re beta_j; zero when some rapidity sits on the imaginary axis.
inline double spectral_gap(const JordanForm& jf, double tol = Tolerances{}.stability) {
  if (jf.rapidities.empty()) return 0.0;
  double m = INFINITY;
  for (const auto& b : jf.rapidities) m = std::min(m, b.real());
  return m <= axis_threshold(jf, tol) ? 0.0 : 2.0 * m;
}

}  // namespace liouv
