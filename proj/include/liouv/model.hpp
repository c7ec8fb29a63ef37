#pragma once

#include "liouv/core.hpp"

#include <Eigen/Eigenvalues>

#include <string>
#include <vector>

namespace liouv {

/// Quadratic Lindblad generator on n fermions. The Hamiltonian is H = w.(iK)w with
/// K real antisymmetric, and each Lindblad operator is the linear form L_mu = l_mu.w.
struct QuadraticLindbladModel {
  int n = 0;
  RMatrix K;
  std::vector<CVector> lindblad_vectors;

  int dim() const { return 2 * n; }
};

struct BathMatrices {
  CMatrix M;
  RMatrix M_r;
  RMatrix M_i;
};

struct StructureMatrix {
  CMatrix A;
  double A0 = 0.0;
};

inline QuadraticLindbladModel validate_model(const QuadraticLindbladModel& raw,
                                             double tol_input = Tolerances{}.input) {
  if (raw.n <= 0) {
    throw Error(ErrorKind::DimensionMismatch, "n must be positive, got " + std::to_string(raw.n));
  }
  const int d = raw.dim();
  if (raw.K.rows() != d || raw.K.cols() != d) {
    throw Error(ErrorKind::DimensionMismatch,
                "K must be " + std::to_string(d) + "x" + std::to_string(d) + ", got " +
                    std::to_string(raw.K.rows()) + "x" + std::to_string(raw.K.cols()));
  }
  if (!all_finite(raw.K)) throw Error(ErrorKind::NonFinite, "K has non-finite entries");
  for (std::size_t mu = 0; mu < raw.lindblad_vectors.size(); ++mu) {
    const auto& l = raw.lindblad_vectors[mu];
    if (l.size() != d) {
      throw Error(ErrorKind::DimensionMismatch, "lindblad vector " + std::to_string(mu) +
                                                    " has length " + std::to_string(l.size()) +
                                                    ", expected " + std::to_string(d));
    }
    if (!all_finite(l)) {
      throw Error(ErrorKind::NonFinite, "lindblad vector " + std::to_string(mu) + " has non-finite entries");
    }
  }
  const double asym = max_abs(raw.K + raw.K.transpose());
  if (asym > tol_input * max_abs(raw.K)) {
    throw Error(ErrorKind::NotAntisymmetric,
                "max|K + K^T| = " + std::to_string(asym) + " exceeds tolerance");
  }
  QuadraticLindbladModel out = raw;
  out.K = 0.5 * (raw.K - raw.K.transpose());
  return out;
}

/// M = sum_mu l_mu (x) conj(l_mu), split into real symmetric and real antisymmetric parts.
inline BathMatrices build_bath_matrices(const QuadraticLindbladModel& model) {
  const int d = model.dim();
  BathMatrices b;
  b.M = CMatrix::Zero(d, d);
  for (const auto& l : model.lindblad_vectors) b.M += l * l.conjugate().transpose();
  // Exact Hermitian symmetrization so that M_r, M_i are symmetric/antisymmetric to the bit.
  b.M = 0.5 * (b.M + b.M.adjoint()).eval();
  b.M_r = b.M.real();
  b.M_i = b.M.imag();
  return b;
}

inline double min_bath_eigenvalue(const BathMatrices& bath) {
  if (bath.M.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(bath.M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// X = -2iH + 2M_r = 2K + 2M_r.
inline RMatrix build_X(const QuadraticLindbladModel& model, const BathMatrices& bath) {
  return 2.0 * model.K + 2.0 * bath.M_r;
}

inline StructureMatrix build_structure_matrix(const QuadraticLindbladModel& model,
                                              const BathMatrices& bath,
                                              double tol_build = Tolerances{}.build) {
  const int d = model.dim();
  const CMatrix H = I_unit * model.K.cast<Complex>();
  const CMatrix Mi = bath.M_i.cast<Complex>();
  StructureMatrix s;
  s.A.resize(2 * d, 2 * d);
  s.A.topLeftCorner(d, d) = -2.0 * I_unit * H + 2.0 * I_unit * Mi;
  s.A.topRightCorner(d, d) = 2.0 * I_unit * bath.M;
  s.A.bottomLeftCorner(d, d) = -2.0 * I_unit * bath.M.transpose();
  s.A.bottomRightCorner(d, d) = -2.0 * I_unit * H - 2.0 * I_unit * Mi;
  s.A0 = 2.0 * bath.M_r.trace();

  const double scale = max_abs(s.A);
  const RMatrix J = skew_unit(d);
  const double asym = max_abs(s.A + s.A.transpose());
  const double selfconj = max_abs(CMatrix(s.A.conjugate()) - J * s.A * J);
  if (asym > tol_build * scale || selfconj > tol_build * scale) {
    throw Error(ErrorKind::BuildInvariantViolated,
                "structure matrix residuals: antisymmetry " + std::to_string(asym) +
                    ", self-conjugation " + std::to_string(selfconj));
  }
  return s;
}

/// Zero-driving counterpart A|_{M_i = 0}.
inline CMatrix zero_driving_structure_matrix(const QuadraticLindbladModel& model,
                                             const BathMatrices& bath) {
  BathMatrices b0 = bath;
  b0.M_i.setZero();
  b0.M = bath.M_r.cast<Complex>();
  return build_structure_matrix(model, b0).A;
}

}  // namespace liouv
