#pragma once

#include "liouv/model.hpp"
#include "liouv/rapidity.hpp"

#include <string>
#include <vector>

namespace liouv {

struct ModeLabel {
  int j = 1;
  int k = 1;
  int l = 1;
  bool primed = false;

  std::string str() const {
    return std::string(primed ? "b'" : "b") + "(" + std::to_string(j) + "," + std::to_string(k) + "," +
           std::to_string(l) + ")";
  }
  friend bool operator==(const ModeLabel&, const ModeLabel&) = default;
};

struct NormalModeBasis {
  CMatrix V;
  CMatrix W;
  std::vector<ModeLabel> row_labels;  // 4n entries; first 2n unprimed
  double normalization_residual = 0.0;  // |V V^T - J|_max
  double orthogonality_residual = 0.0;  // |W W^T - 1|_max
  double reconstruction_residual = 0.0; // |V^T (0 D; -D^T 0) V - A|_max / |A|_max
};

/// W = 1 + 2 (sigma^1 - i sigma^3) (x) Z.
inline CMatrix build_W(const RMatrix& Z) {
  const int d = static_cast<int>(Z.rows());
  const CMatrix z = Z.cast<Complex>();
  const CMatrix one = CMatrix::Identity(d, d);
  CMatrix W(2 * d, 2 * d);
  W.topLeftCorner(d, d) = one - 2.0 * I_unit * z;
  W.topRightCorner(d, d) = 2.0 * z;
  W.bottomLeftCorner(d, d) = 2.0 * z;
  W.bottomRightCorner(d, d) = one + 2.0 * I_unit * z;
  return W;
}

inline CMatrix build_W_inverse(const RMatrix& Z) { return build_W(-Z); }

/// V_0 = (P^T (+) P^{-1}) U.
inline CMatrix build_V0(const CMatrix& P, const CMatrix& P_inv) {
  const int d = static_cast<int>(P.rows());
  CMatrix blk = CMatrix::Zero(2 * d, 2 * d);
  blk.topLeftCorner(d, d) = P.transpose();
  blk.bottomRightCorner(d, d) = P_inv;
  return blk * tilde_unitary(d);
}

/// Closed block form of V_0 W.
inline CMatrix build_V_matrix(const CMatrix& P, const CMatrix& P_inv, const RMatrix& Z) {
  const int d = static_cast<int>(P.rows());
  const double s = 1.0 / std::sqrt(2.0);
  const CMatrix one = CMatrix::Identity(d, d);
  const CMatrix z4 = 4.0 * I_unit * Z.cast<Complex>();
  const CMatrix Pt = P.transpose();
  CMatrix V(2 * d, 2 * d);
  V.topLeftCorner(d, d) = s * Pt * (one - z4);
  V.topRightCorner(d, d) = -I_unit * s * Pt * (one + z4);
  V.bottomLeftCorner(d, d) = s * P_inv;
  V.bottomRightCorner(d, d) = I_unit * s * P_inv;
  return V;
}

inline std::vector<ModeLabel> mode_labels(const JordanForm& jf) {
  const int d = jf.dim();
  std::vector<ModeLabel> labels(2 * d);
  for (const auto& b : jf.blocks) {
    for (int i = 0; i < b.size; ++i) {
      labels[b.chain_start + i] = {b.j, b.k, i + 1, false};
      labels[d + b.chain_start + i] = {b.j, b.k, i + 1, true};
    }
  }
  return labels;
}

/// (0 D; -D^T 0).
inline CMatrix canonical_core(const JordanForm& jf) {
  const int d = jf.dim();
  const CMatrix D = jf.jordan_matrix();
  CMatrix c = CMatrix::Zero(2 * d, 2 * d);
  c.topRightCorner(d, d) = D;
  c.bottomLeftCorner(d, d) = -D.transpose();
  return c;
}

inline NormalModeBasis build_V(const JordanForm& jf, const RMatrix& Z, const CMatrix& A,
                               double tol = Tolerances{}.normalization) {
  const int d = jf.dim();
  NormalModeBasis nmb;
  nmb.W = build_W(Z);
  nmb.V = build_V_matrix(jf.P, jf.P_inv, Z);
  nmb.row_labels = mode_labels(jf);
  const RMatrix J = skew_unit(d);
  nmb.normalization_residual = max_abs(CMatrix(nmb.V * nmb.V.transpose() - J.cast<Complex>()));
  nmb.orthogonality_residual = max_abs(CMatrix(nmb.W * nmb.W.transpose() - CMatrix::Identity(2 * d, 2 * d)));
  const double amax = max_abs(A);
  nmb.reconstruction_residual =
      max_abs(CMatrix(nmb.V.transpose() * canonical_core(jf) * nmb.V - A)) / (amax > 0 ? amax : 1.0);
  // Rounding in P^{-1} is amplified by the conditioning of P.
  const double slack = std::max(1.0, jf.condition_number);
  if (!(nmb.normalization_residual <= tol * slack) || !(nmb.orthogonality_residual <= tol * slack)) {
    throw Error(ErrorKind::NormalizationFailure,
                "|VV^T - J| = " + std::to_string(nmb.normalization_residual) +
                    ", |WW^T - 1| = " + std::to_string(nmb.orthogonality_residual));
  }
  return nmb;
}

struct NormalFormBlock {
  Complex rapidity;
  int j = 1;
  int k = 1;
  int size = 1;
  std::vector<int> diagonal_modes;               // l = 1..size in b'_l b_l
  std::vector<std::pair<int, int>> couplings;    // (l, l+1) in b'_{l+1} b_l
};

/// L = -2 sum_{j,k} { beta_j sum_l b'_l b_l + sum_l b'_{l+1} b_l }.
struct NormalFormDescriptor {
  std::vector<NormalFormBlock> blocks;
  Complex weighted_rapidity_sum;  // sum ell_{j,k} beta_j
};

inline NormalFormDescriptor normal_form_coefficients(const NormalModeBasis& nmb, const JordanForm& jf) {
  (void)nmb;
  NormalFormDescriptor nf;
  for (const auto& b : jf.blocks) {
    NormalFormBlock blk;
    blk.rapidity = b.rapidity;
    blk.j = b.j;
    blk.k = b.k;
    blk.size = b.size;
    for (int l = 1; l <= b.size; ++l) blk.diagonal_modes.push_back(l);
    for (int l = 1; l < b.size; ++l) blk.couplings.emplace_back(l, l + 1);
    nf.weighted_rapidity_sum += static_cast<double>(b.size) * b.rapidity;
    nf.blocks.push_back(std::move(blk));
  }
  return nf;
}

}  // namespace liouv
