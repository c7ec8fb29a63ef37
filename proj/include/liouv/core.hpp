#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace liouv {

using Complex = std::complex<double>;
using RMatrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;

inline constexpr Complex I_unit{0.0, 1.0};

enum class ErrorKind {
  DimensionMismatch,
  NotAntisymmetric,
  NonFinite,
  BuildInvariantViolated,
  StabilityViolated,
  InconsistentSingularSystem,
  NontrivialImaginaryBlock,
  NormalizationFailure,
  SpectrumTooLarge,
  TooLarge,
  IdentityViolated,
  ParseError,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::BuildInvariantViolated: return "BuildInvariantViolated";
    case ErrorKind::StabilityViolated: return "StabilityViolated";
    case ErrorKind::InconsistentSingularSystem: return "InconsistentSingularSystem";
    case ErrorKind::NontrivialImaginaryBlock: return "NontrivialImaginaryBlock";
    case ErrorKind::NormalizationFailure: return "NormalizationFailure";
    case ErrorKind::SpectrumTooLarge: return "SpectrumTooLarge";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::IdentityViolated: return "IdentityViolated";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Errors caused by what the caller handed in, as opposed to a broken internal invariant.
inline bool is_input_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NotAntisymmetric:
    case ErrorKind::NonFinite:
    case ErrorKind::SpectrumTooLarge:
    case ErrorKind::TooLarge:
    case ErrorKind::ParseError:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Every decision threshold used by the pipeline. Values are relative to the
/// natural scale of the quantity they test (see each consumer).
struct Tolerances {
  double input = 1e-10;          // antisymmetry of K, relative to max|K|
  double build = 1e-12;          // structure-matrix identities, relative to max|A|
  double psd = 1e-10;            // bath PSD check, relative to max|M|
  double cluster = 1e-7;         // eigenvalue clustering, relative to |X|_2
  double rank = 1e-9;            // singular-value threshold for rank decisions
  double jordan = 1e-8;          // reconstruction of X from P, Delta
  double stability = 1e-10;      // zero / imaginary-axis classification, relative to |X|_2
  double lyapunov = 1e-8;        // Lyapunov residual
  double omega = 1e-8;           // vanishing RHS entries on singular rows
  double merge = 1e-9;           // merging coincident many-body eigenvalues, relative
  double normalization = 1e-8;   // V V^T = J, W W^T = 1
};

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double spectral_norm(const RMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<RMatrix> svd(m);
  return svd.singularValues()(0);
}

inline double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

template <class Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// J = sigma^1 (x) 1_{2n}: the skew unit on C^{4n}.
inline RMatrix skew_unit(int two_n) {
  RMatrix J = RMatrix::Zero(2 * two_n, 2 * two_n);
  J.topRightCorner(two_n, two_n).setIdentity();
  J.bottomLeftCorner(two_n, two_n).setIdentity();
  return J;
}

/// U = (1/sqrt 2) [[1, -i], [1, i]] (x) 1_{2n}, mapping A to its block-triangular form.
inline CMatrix tilde_unitary(int two_n) {
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix U = CMatrix::Zero(2 * two_n, 2 * two_n);
  const CMatrix one = CMatrix::Identity(two_n, two_n);
  U.topLeftCorner(two_n, two_n) = s * one;
  U.topRightCorner(two_n, two_n) = -I_unit * s * one;
  U.bottomLeftCorner(two_n, two_n) = s * one;
  U.bottomRightCorner(two_n, two_n) = I_unit * s * one;
  return U;
}

}  // namespace liouv
