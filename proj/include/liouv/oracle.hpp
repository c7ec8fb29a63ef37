#pragma once

// Brute-force ground truth: explicit 2^n-dimensional Majorana operators, the dense
// 4^n x 4^n Lindblad superoperator, and the Liouville-Fock maps on the monomial basis.

#include "liouv/model.hpp"
#include "liouv/normal_modes.hpp"
#include "liouv/rapidity.hpp"
#include "liouv/spectra.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace liouv::oracle {

/// Size limits. LIOUV_NMAX, when set, replaces both.
struct Limits {
  int n_max = 5;        // operator construction
  int n_max_eigen = 3;  // dense superoperator eigensolves

  static Limits from_env() {
    Limits lim;
    if (const char* s = std::getenv("LIOUV_NMAX")) {
      char* end = nullptr;
      const long v = std::strtol(s, &end, 10);
      if (end != s && *end == '\0' && v > 0 && v < 16) {
        lim.n_max = static_cast<int>(v);
        lim.n_max_eigen = static_cast<int>(v);
      }
    }
    return lim;
  }
};

inline void require_size(int n, int limit, const char* what) {
  if (n > limit) {
    throw Error(ErrorKind::TooLarge,
                std::string(what) + ": n = " + std::to_string(n) + " exceeds n_max = " + std::to_string(limit));
  }
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) c.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return c;
}

struct MajoranaRep {
  int n = 0;
  std::vector<CMatrix> w;  // 2n Hermitian 2^n x 2^n matrices
};

/// Jordan-Wigner: w_{2j-1} = sz..sz sx 1..1, w_{2j} = sz..sz sy 1..1 (site j).
inline MajoranaRep majorana_ops(int n, const Limits& lim = Limits::from_env()) {
  if (n < 0) throw Error(ErrorKind::DimensionMismatch, "n must be nonnegative");
  require_size(n, lim.n_max, "majorana_ops");
  CMatrix sx(2, 2), sy(2, 2), sz(2, 2), id = CMatrix::Identity(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, -I_unit, I_unit, 0;
  sz << 1, 0, 0, -1;
  MajoranaRep rep;
  rep.n = n;
  for (int j = 0; j < n; ++j) {
    for (const CMatrix* site : {&sx, &sy}) {
      CMatrix op = CMatrix::Identity(1, 1);
      for (int s = 0; s < n; ++s) op = kron(op, s < j ? sz : (s == j ? *site : id));
      rep.w.push_back(op);
    }
  }
  return rep;
}

inline CMatrix hamiltonian_operator(const QuadraticLindbladModel& model, const MajoranaRep& rep) {
  const int dim = 1 << model.n;
  CMatrix H = CMatrix::Zero(dim, dim);
  for (int j = 0; j < model.dim(); ++j)
    for (int k = 0; k < model.dim(); ++k)
      if (model.K(j, k) != 0.0) H += (I_unit * model.K(j, k)) * rep.w[j] * rep.w[k];
  return H;
}

inline CMatrix lindblad_operator(const CVector& l, const MajoranaRep& rep) {
  const int dim = static_cast<int>(rep.w.front().rows());
  CMatrix L = CMatrix::Zero(dim, dim);
  for (int j = 0; j < l.size(); ++j) L += l(j) * rep.w[j];
  return L;
}

/// Matrix of rho -> -i[H, rho] + sum (2 L rho L^+ - {L^+ L, rho}) on column-stacked vec(rho).
inline CMatrix build_superoperator(const QuadraticLindbladModel& model, const Limits& lim = Limits::from_env()) {
  require_size(model.n, lim.n_max, "build_superoperator");
  const auto rep = majorana_ops(model.n, lim);
  const int dim = 1 << model.n;
  const CMatrix one = CMatrix::Identity(dim, dim);
  const CMatrix H = hamiltonian_operator(model, rep);
  CMatrix S = -I_unit * (kron(one, H) - kron(H.transpose(), one));
  for (const auto& l : model.lindblad_vectors) {
    const CMatrix L = lindblad_operator(l, rep);
    const CMatrix LdL = L.adjoint() * L;
    S += 2.0 * kron(L.conjugate(), L) - kron(one, LdL) - kron(LdL.transpose(), one);
  }
  return S;
}

// ---------------------------------------------------------------------------
// Liouville-Fock maps on the basis P_alpha = 2^{-n/2} w_1^{alpha_1} ... w_{2n}^{alpha_{2n}}.
// Basis index = sum_j alpha_j 2^{j-1}.

struct Term {
  int target = -1;
  Complex coef;
};

inline int parity_below(unsigned alpha, int j) { return __builtin_popcount(alpha & ((1u << j) - 1u)) & 1; }

/// c_j (annihilation, removes w_j) and c_j^+ (creation) on basis index alpha; j is 0-based.
inline Term apply_c(int j, unsigned alpha) {
  if (!(alpha & (1u << j))) return {};
  return {static_cast<int>(alpha & ~(1u << j)), parity_below(alpha, j) ? -1.0 : 1.0};
}
inline Term apply_cdag(int j, unsigned alpha) {
  if (alpha & (1u << j)) return {};
  return {static_cast<int>(alpha | (1u << j)), parity_below(alpha, j) ? -1.0 : 1.0};
}

/// a_p on basis index alpha, p in 0..4n-1: a_{1,j} = (c + c^+)/sqrt2, a_{2,j} = i(c - c^+)/sqrt2.
inline std::array<Term, 2> apply_a(int p, int two_n, unsigned alpha) {
  const double s = 1.0 / std::sqrt(2.0);
  const int j = p % two_n;
  Term c = apply_c(j, alpha);
  Term cd = apply_cdag(j, alpha);
  if (p < two_n) {
    c.coef *= s;
    cd.coef *= s;
  } else {
    c.coef *= I_unit * s;
    cd.coef *= -I_unit * s;
  }
  return {c, cd};
}

inline CMatrix dense_c(int n, int j, bool dagger) {
  const int dim = 1 << (2 * n);
  CMatrix m = CMatrix::Zero(dim, dim);
  for (unsigned a = 0; a < static_cast<unsigned>(dim); ++a) {
    const Term t = dagger ? apply_cdag(j, a) : apply_c(j, a);
    if (t.target >= 0) m(t.target, a) += t.coef;
  }
  return m;
}

/// The 4n maps a_p as dense 4^n x 4^n matrices.
inline std::vector<CMatrix> build_fock_maps(int n, const Limits& lim = Limits::from_env()) {
  require_size(n, lim.n_max, "build_fock_maps");
  const int two_n = 2 * n;
  const int dim = 1 << two_n;
  std::vector<CMatrix> maps;
  for (int p = 0; p < 2 * two_n; ++p) {
    CMatrix m = CMatrix::Zero(dim, dim);
    for (unsigned a = 0; a < static_cast<unsigned>(dim); ++a)
      for (const auto& t : apply_a(p, two_n, a))
        if (t.target >= 0) m(t.target, a) += t.coef;
    maps.push_back(std::move(m));
  }
  return maps;
}

/// sum_pq A_pq a_p a_q - A0 1 in the P_alpha basis.
inline CMatrix quadratic_form_matrix(const CMatrix& A, double A0, int n) {
  const int two_n = 2 * n;
  const int dim = 1 << two_n;
  CMatrix Q = -A0 * CMatrix::Identity(dim, dim);
  for (unsigned a = 0; a < static_cast<unsigned>(dim); ++a) {
    for (int q = 0; q < 2 * two_n; ++q) {
      for (const auto& t1 : apply_a(q, two_n, a)) {
        if (t1.target < 0) continue;
        for (int p = 0; p < 2 * two_n; ++p) {
          const Complex apq = A(p, q);
          if (apq == 0.0) continue;
          for (const auto& t2 : apply_a(p, two_n, static_cast<unsigned>(t1.target))) {
            if (t2.target >= 0) Q(t2.target, a) += apq * t1.coef * t2.coef;
          }
        }
      }
    }
  }
  return Q;
}

/// Columns: vec(P_alpha) for even alpha, vec(P_alpha Gamma) for odd alpha, with
/// Gamma = i^n w_1 ... w_{2n}. This identification makes the superoperator equal to
/// the quadratic form on both parity sectors.
inline CMatrix basis_alignment(const MajoranaRep& rep) {
  const int n = rep.n;
  const int two_n = 2 * n;
  const int hdim = 1 << n;
  const int dim = 1 << two_n;
  CMatrix gamma = CMatrix::Identity(hdim, hdim);
  for (const auto& w : rep.w) gamma = gamma * w;
  Complex phase = 1.0;
  for (int i = 0; i < n; ++i) phase *= I_unit;
  gamma *= phase;
  const double norm = std::pow(2.0, -0.5 * n);
  CMatrix T(dim, dim);
  for (unsigned a = 0; a < static_cast<unsigned>(dim); ++a) {
    CMatrix p = norm * CMatrix::Identity(hdim, hdim);
    for (int j = 0; j < two_n; ++j)
      if (a & (1u << j)) p = p * rep.w[j];
    if (__builtin_popcount(a) & 1) p = p * gamma;
    T.col(a) = Eigen::Map<const CVector>(p.data(), p.size());
  }
  return T;
}

/// Operator (2^n x 2^n) represented by a vector in the P_alpha coordinates.
inline CMatrix to_operator(const CVector& x, const CMatrix& T, int n) {
  const int hdim = 1 << n;
  const CVector v = T * x;
  return Eigen::Map<const CMatrix>(v.data(), hdim, hdim);
}

struct QuadraticFormReport {
  double residual = 0.0;
  int dimension = 0;
};

/// max |T^+ L T - (a.A a - A0)|; A may be overridden to exercise the failure path.
inline QuadraticFormReport verify_quadratic_form(const QuadraticLindbladModel& model,
                                                 const std::optional<CMatrix>& A_override = std::nullopt,
                                                 const Limits& lim = Limits::from_env()) {
  require_size(model.n, lim.n_max, "verify_quadratic_form");
  const auto bath = build_bath_matrices(model);
  auto sm = build_structure_matrix(model, bath);
  if (A_override) sm.A = *A_override;
  const CMatrix S = build_superoperator(model, lim);
  const CMatrix T = basis_alignment(majorana_ops(model.n, lim));
  const CMatrix Q = quadratic_form_matrix(sm.A, sm.A0, model.n);
  QuadraticFormReport rep;
  rep.dimension = static_cast<int>(S.rows());
  rep.residual = max_abs(CMatrix(T.adjoint() * S * T - Q));
  return rep;
}

// ---------------------------------------------------------------------------
// Spectrum comparison.

/// Minimal-cost perfect matching (Hungarian algorithm, O(N^3)); returns column per row.
inline std::vector<int> hungarian(const RMatrix& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> match(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) match[p[j] - 1] = j - 1;
  return match;
}

inline std::vector<Complex> expand_multiset(const LiouvilleanSpectrum& sp) {
  std::vector<Complex> out;
  for (const auto& e : sp.raw)
    for (long long i = 0; i < e.subspace_dim; ++i) out.push_back(e.lambda);
  return out;
}

/// Largest |a_i - b_match(i)| under the minimal-total-distance matching.
inline double matched_max_deviation(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(a.size());
  RMatrix cost(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cost(i, j) = std::abs(a[i] - b[j]);
  const auto m = hungarian(cost);
  double dev = 0.0;
  for (int i = 0; i < n; ++i) dev = std::max(dev, cost(i, m[i]));
  return dev;
}

inline std::vector<Complex> superoperator_eigenvalues(const CMatrix& S) {
  Eigen::ComplexEigenSolver<CMatrix> es(S, false);
  std::vector<Complex> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

struct SpectrumComparison {
  double max_deviation = 0.0;
  int dimension = 0;
};

inline SpectrumComparison compare_spectrum(const QuadraticLindbladModel& model, const LiouvilleanSpectrum& sp,
                                           const Limits& lim = Limits::from_env()) {
  require_size(model.n, lim.n_max_eigen, "compare_spectrum");
  const CMatrix S = build_superoperator(model, lim);
  SpectrumComparison c;
  c.dimension = static_cast<int>(S.rows());
  c.max_deviation = matched_max_deviation(superoperator_eigenvalues(S), expand_multiset(sp));
  return c;
}

/// Largest Jordan block of S at the eigenvalue cluster around lambda of the
/// given algebraic multiplicity, from the numerical rank staircase.
inline int superoperator_largest_block(const CMatrix& S, Complex lambda, int multiplicity,
                                       double tol_rank = 1e-6) {
  const CMatrix N = S - lambda * CMatrix::Identity(S.rows(), S.cols());
  const auto st = liouv::detail::rank_staircase(N, multiplicity, tol_rank);
  int largest = 0;
  for (int k = 1; k <= multiplicity; ++k)
    if (st.nullity[k] > st.nullity[k - 1]) largest = k;
  return largest;
}

// ---------------------------------------------------------------------------
// Kernel / steady states.

struct OracleNess {
  int kernel_dim = 0;
  std::vector<CMatrix> hermitian_basis;  // first element trace one, others traceless
  bool unique = false;
  CMatrix rho;                           // trace-one state (the NESS, or a witness)
  bool witness_found = false;
  double hermiticity_residual = 0.0;
  double min_eigenvalue = 0.0;
  CMatrix covariance;                    // tr(w_j w_k rho)
};

inline CMatrix correlators(const CMatrix& rho, const MajoranaRep& rep) {
  const int d = static_cast<int>(rep.w.size());
  CMatrix C(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) C(j, k) = (rep.w[j] * rep.w[k] * rho).trace();
  return C;
}

namespace detail {

/// Orthonormal basis (real inner product Re tr(A^+ B)) of the real span of Hermitian matrices.
inline std::vector<CMatrix> real_orthonormalize(const std::vector<CMatrix>& mats, double tol) {
  std::vector<CMatrix> out;
  for (auto m : mats) {
    for (const auto& b : out) m -= (b.adjoint() * m).trace().real() * b;
    for (const auto& b : out) m -= (b.adjoint() * m).trace().real() * b;
    const double nrm = m.norm();
    if (nrm > tol) out.push_back(m / nrm);
  }
  return out;
}

inline double min_hermitian_eigenvalue(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace detail

/// Right kernel of the superoperator, a Hermitian basis of it, and a trace-one state:
/// the projection of the maximally mixed state onto the kernel along the other
/// spectral subspaces; if that fails a grid scan over up to two traceless directions.
inline OracleNess oracle_ness(const QuadraticLindbladModel& model, double tol = 1e-9,
                              const Limits& lim = Limits::from_env()) {
  require_size(model.n, lim.n_max_eigen, "oracle_ness");
  const CMatrix S = build_superoperator(model, lim);
  const auto rep = majorana_ops(model.n, lim);
  const int hdim = 1 << model.n;
  const int dim = static_cast<int>(S.rows());
  Eigen::BDCSVD<CMatrix> svd(S, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double thr = tol * std::max(1.0, s(0));
  int kdim = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) <= thr) ++kdim;
  OracleNess out;
  out.kernel_dim = kdim;
  if (kdim == 0) return out;
  const CMatrix R = svd.matrixV().rightCols(kdim);  // right kernel
  const CMatrix L = svd.matrixU().rightCols(kdim);  // left kernel (as columns)

  std::vector<CMatrix> herm;
  for (int c = 0; c < kdim; ++c) {
    const CMatrix m = Eigen::Map<const CMatrix>(R.col(c).data(), hdim, hdim);
    herm.push_back(0.5 * (m + m.adjoint()));
    herm.push_back(CMatrix(-0.5 * I_unit * (m - m.adjoint())));
  }
  auto basis = detail::real_orthonormalize(herm, 1e-8);
  // rotate so that exactly one basis element carries the trace
  int pivot = -1;
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (pivot < 0 || std::abs(basis[i].trace()) > std::abs(basis[pivot].trace())) pivot = static_cast<int>(i);
  if (pivot >= 0 && std::abs(basis[pivot].trace()) > 1e-12) {
    std::swap(basis[0], basis[pivot]);
    const Complex t0 = basis[0].trace();
    for (std::size_t i = 1; i < basis.size(); ++i) basis[i] -= (basis[i].trace() / t0) * basis[0];
    basis[0] /= t0;
  }
  out.hermitian_basis = basis;

  // spectral projection of 1/2^n onto the kernel: R (L^+ R)^{-1} L^+ x
  const CMatrix mixed = CMatrix::Identity(hdim, hdim) / static_cast<double>(hdim);
  const CVector x = Eigen::Map<const CVector>(mixed.data(), dim);
  const CMatrix G = L.adjoint() * R;
  const CVector proj = R * G.fullPivLu().solve(L.adjoint() * x);
  CMatrix rho = Eigen::Map<const CMatrix>(proj.data(), hdim, hdim);
  auto accept = [&](const CMatrix& cand) {
    const Complex tr = cand.trace();
    if (std::abs(tr) < 1e-12) return false;
    const CMatrix r = cand / tr;
    if (detail::min_hermitian_eigenvalue(r) < -1e-9) return false;
    out.rho = r;
    return true;
  };
  out.witness_found = accept(rho);
  if (!out.witness_found && !basis.empty() && basis.size() <= 3) {
    const int steps = 41;
    const int dims = static_cast<int>(basis.size()) - 1;
    for (int a = 0; a < (dims >= 1 ? steps : 1) && !out.witness_found; ++a)
      for (int b = 0; b < (dims >= 2 ? steps : 1) && !out.witness_found; ++b) {
        CMatrix cand = basis[0];
        if (dims >= 1) cand += (-2.0 + 4.0 * a / (steps - 1)) * basis[1];
        if (dims >= 2) cand += (-2.0 + 4.0 * b / (steps - 1)) * basis[2];
        out.witness_found = accept(cand);
      }
  }
  out.unique = kdim == 1;
  if (out.witness_found) {
    out.hermiticity_residual = max_abs(CMatrix(out.rho - out.rho.adjoint()));
    out.min_eigenvalue = detail::min_hermitian_eigenvalue(out.rho);
    out.covariance = correlators(out.rho, rep);
  }
  return out;
}

/// max over columns |<1| L|; the trace functional is a left null vector.
inline double trace_preservation_residual(const CMatrix& S, int n) {
  const int hdim = 1 << n;
  const CMatrix one = CMatrix::Identity(hdim, hdim);
  const CVector t = Eigen::Map<const CVector>(one.data(), one.size());
  return max_abs(CVector(S.adjoint() * t));
}

// ---------------------------------------------------------------------------
// Normal master modes as explicit maps.

struct ModeMaps {
  std::vector<CMatrix> b;        // rows 0..2n-1 of V applied to a
  std::vector<CMatrix> b_prime;  // rows 2n..4n-1
};

inline ModeMaps mode_maps(const CMatrix& V, const std::vector<CMatrix>& a) {
  const int four_n = static_cast<int>(V.rows());
  const int dim = static_cast<int>(a.front().rows());
  ModeMaps mm;
  for (int r = 0; r < four_n; ++r) {
    CMatrix m = CMatrix::Zero(dim, dim);
    for (int p = 0; p < four_n; ++p)
      if (V(r, p) != 0.0) m += V(r, p) * a[p];
    (r < four_n / 2 ? mm.b : mm.b_prime).push_back(std::move(m));
  }
  return mm;
}

/// max deviation from {b,b} = 0, {b,b'} = delta, {b',b'} = 0.
inline double almost_car_residual(const ModeMaps& mm) {
  const int d = static_cast<int>(mm.b.size());
  const int dim = static_cast<int>(mm.b.front().rows());
  const CMatrix one = CMatrix::Identity(dim, dim);
  double r = 0.0;
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q) {
      r = std::max(r, max_abs(CMatrix(mm.b[p] * mm.b[q] + mm.b[q] * mm.b[p])));
      r = std::max(r, max_abs(CMatrix(mm.b_prime[p] * mm.b_prime[q] + mm.b_prime[q] * mm.b_prime[p])));
      r = std::max(r, max_abs(CMatrix(mm.b[p] * mm.b_prime[q] + mm.b_prime[q] * mm.b[p] -
                                      (p == q ? 1.0 : 0.0) * one)));
    }
  return r;
}

/// -2 sum { beta b'_l b_l + b'_{l+1} b_l } assembled from the mode maps.
inline CMatrix normal_form_matrix(const ModeMaps& mm, const JordanForm& jf) {
  const int dim = static_cast<int>(mm.b.front().rows());
  CMatrix L = CMatrix::Zero(dim, dim);
  for (const auto& blk : jf.blocks) {
    for (int l = 0; l < blk.size; ++l) {
      const int c = blk.chain_start + l;
      L += -2.0 * blk.rapidity * mm.b_prime[c] * mm.b[c];
      if (l + 1 < blk.size) L += -2.0 * mm.b_prime[c + 1] * mm.b[c];
    }
  }
  return L;
}

/// Common null vector of all b maps, normalized so <1|NESS> = 2^{n/2} x_0 = 1.
inline CVector vacuum(const ModeMaps& mm, int n) {
  const int dim = static_cast<int>(mm.b.front().rows());
  CMatrix stack(dim * static_cast<int>(mm.b.size()), dim);
  for (std::size_t i = 0; i < mm.b.size(); ++i) stack.middleRows(i * dim, dim) = mm.b[i];
  Eigen::BDCSVD<CMatrix> svd(stack, Eigen::ComputeFullV);
  CVector x = svd.matrixV().col(dim - 1);
  const Complex t = std::pow(2.0, 0.5 * n) * x(0);
  if (std::abs(t) < 1e-14) throw Error(ErrorKind::NormalizationFailure, "vacuum has zero trace");
  return x / t;
}

}  // namespace liouv::oracle
