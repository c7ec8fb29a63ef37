#pragma once

#include "liouv/model.hpp"
#include "liouv/rapidity.hpp"

#include <Eigen/LU>

#include <vector>

namespace liouv {

struct OmegaCheck {
  int row = 0;  // index a * 2n + b into vec(P^T Z P)
  double magnitude = 0.0;
};

/// Antisymmetric real Z with X^T Z + Z X = M_i.
struct DrivingSolution {
  RMatrix Z;
  bool unique = true;
  int free_parameter_count = 0;
  double residual = 0.0;
  bool residual_ok = true;
  std::vector<OmegaCheck> omega_checks;
  double pre_projection_asymmetry = 0.0;
  bool used_jordan_path = false;
};

/// |X^T Z + Z X - M_i|_max.
inline double lyapunov_residual(const RMatrix& X, const RMatrix& Z, const RMatrix& Mi) {
  return max_abs(RMatrix(X.transpose() * Z + Z * X - Mi));
}

/// Dense solve of (X^T (x) 1 + 1 (x) X^T) vec Z = vec M_i, vec row-major.
inline RMatrix solve_lyapunov_dense(const RMatrix& X, const RMatrix& Mi) {
  const int d = static_cast<int>(X.rows());
  const RMatrix one = RMatrix::Identity(d, d);
  const RMatrix Xt = X.transpose();
  RMatrix op = RMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      op.block(i * d, j * d, d, d) += Xt(i, j) * one;
      op.block(i * d, j * d, d, d) += one(i, j) * Xt;
    }
  RVector rhs(d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) rhs(i * d + j) = Mi(i, j);
  const RVector z = op.fullPivLu().solve(rhs);
  RMatrix Z(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) Z(i, j) = z(i * d + j);
  return Z;
}

namespace detail {

inline bool pair_singular(Complex a, Complex b, double thr) { return std::abs(a + b) <= thr; }

}  // namespace detail

inline DrivingSolution solve_lyapunov(const RMatrix& X, const RMatrix& Mi, const JordanForm& jf,
                                      const Tolerances& tol = {}) {
  const int d = static_cast<int>(X.rows());
  if (Mi.rows() != d || Mi.cols() != d || jf.dim() != d) {
    throw Error(ErrorKind::DimensionMismatch, "solve_lyapunov operand shapes disagree");
  }
  const double thr = axis_threshold(jf, tol.stability);
  for (const auto& b : jf.blocks) {
    if (b.size > 1 && std::abs(b.rapidity.real()) <= thr) {
      throw Error(ErrorKind::NontrivialImaginaryBlock,
                  "block of size " + std::to_string(b.size) + " at rapidity on the imaginary axis");
    }
  }
  const auto diag = jf.diagonal();
  const auto sup = jf.superdiagonal();
  bool any_singular = false;
  for (int a = 0; a < d && !any_singular; ++a)
    for (int b = a; b < d; ++b)
      if (detail::pair_singular(diag[a], diag[b], thr)) {
        any_singular = true;
        break;
      }

  DrivingSolution sol;
  RMatrix Zraw;
  if (!any_singular) {
    Zraw = solve_lyapunov_dense(X, Mi);
  } else {
    sol.used_jordan_path = true;
    const CMatrix R = jf.P.transpose() * Mi.cast<Complex>() * jf.P;
    const double rscale = max_abs(R);
    CMatrix Y = CMatrix::Zero(d, d);
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        Complex rhs = R(a, b);
        if (sup[a] && a > 0) rhs -= Y(a - 1, b);
        if (sup[b] && b > 0) rhs -= Y(a, b - 1);
        if (detail::pair_singular(diag[a], diag[b], thr)) {
          const double om = std::abs(rhs);
          sol.omega_checks.push_back({a * d + b, om});
          if (om > tol.omega * (rscale > 0 ? rscale : 1.0)) {
            throw Error(ErrorKind::InconsistentSingularSystem,
                        "|omega| = " + std::to_string(om) + " at (" + std::to_string(a) + "," +
                            std::to_string(b) + ")");
          }
          Y(a, b) = 0.0;
          if (a < b) ++sol.free_parameter_count;
        } else {
          Y(a, b) = rhs / (diag[a] + diag[b]);
        }
      }
    }
    const CMatrix Zc = jf.P_inv.transpose() * Y * jf.P_inv;
    Zraw = Zc.real();
  }
  sol.pre_projection_asymmetry = max_abs(RMatrix(Zraw + Zraw.transpose()));
  sol.Z = 0.5 * (Zraw - Zraw.transpose());
  sol.unique = sol.free_parameter_count == 0;
  sol.residual = lyapunov_residual(X, sol.Z, Mi);
  sol.residual_ok = sol.residual <= tol.lyapunov * (max_abs(X) * max_abs(sol.Z) + max_abs(Mi)) + 1e-300;
  return sol;
}

/// Solvability certificate for one singular rapidity class: for beta = 0 the real
/// antisymmetric K = U^T M_i U and Q = U^T M U over the kernel columns U of P; for
/// beta = ib the antihermitian K = U+^T M_i U- and Hermitian Q+- = U+^T M^+- U-.
struct SolvabilityCertificate {
  Complex rapidity;
  CMatrix K;
  CMatrix Q_plus;
  CMatrix Q_minus;  // empty for beta = 0
  double k_max = 0.0;
  double q_min_eigenvalue = 0.0;
};

inline std::vector<SolvabilityCertificate> solvability_certificates(const JordanForm& jf, const BathMatrices& bath,
                                                                   double tol_stability = Tolerances{}.stability) {
  std::vector<SolvabilityCertificate> out;
  const double thr = axis_threshold(jf, tol_stability);
  auto columns_of = [&](Complex beta) {
    std::vector<int> cols;
    for (const auto& b : jf.blocks)
      if (b.rapidity == beta)
        for (int i = 0; i < b.size; ++i) cols.push_back(b.chain_start + i);
    CMatrix U(jf.dim(), static_cast<int>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) U.col(c) = jf.P.col(cols[c]);
    return U;
  };
  auto min_eig = [](const CMatrix& q) {
    if (q.size() == 0) return 0.0;
    const CMatrix h = 0.5 * (q + q.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  };
  const CMatrix Mi = bath.M_i.cast<Complex>();
  for (const auto& beta : jf.rapidities) {
    if (std::abs(beta.real()) > thr) continue;
    if (beta.imag() < -thr) continue;  // handled with its Im > 0 partner
    SolvabilityCertificate c;
    c.rapidity = beta;
    const CMatrix U = columns_of(beta);
    if (std::abs(beta.imag()) <= thr) {
      c.K = U.transpose() * Mi * U;
      c.Q_plus = U.transpose() * bath.M * U;
      c.q_min_eigenvalue = min_eig(c.Q_plus);
    } else {
      const CMatrix Um = U.conjugate();
      c.K = U.transpose() * Mi * Um;
      c.Q_plus = U.transpose() * bath.M * Um;
      c.Q_minus = U.transpose() * CMatrix(bath.M.conjugate()) * Um;
      c.q_min_eigenvalue = std::min(min_eig(c.Q_plus), min_eig(c.Q_minus));
    }
    c.k_max = max_abs(c.K);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace liouv
