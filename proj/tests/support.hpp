#pragma once

// Fixture models and helpers shared by the test suites.

#include "liouv/liouv.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace fixtures {

using namespace liouv;

/// One fermion, H = i h w1 w2, L = sqrt(G) (w1 + e^{i theta} w2).
inline QuadraticLindbladModel single_qubit(double gamma, double theta, double h) {
  QuadraticLindbladModel m;
  m.n = 1;
  m.K = RMatrix::Zero(2, 2);
  m.K(0, 1) = h;
  m.K(1, 0) = -h;
  CVector l(2);
  l << std::sqrt(gamma), std::sqrt(gamma) * std::polar(1.0, theta);
  m.lindblad_vectors.push_back(l);
  return m;
}

inline QuadraticLindbladModel single_qubit_defective() {
  const double g = 1.0;
  const double th = std::numbers::pi / 3.0;
  return single_qubit(g, th, g * std::cos(th));
}

struct IsingParams {
  double g1 = 0.3;
  double g2 = 0.5;
  double J = 0.7;
  double gp() const { return g2 + g1; }
  double gm() const { return g2 - g1; }
};

/// Ising-coupled chain of `n` spins with the bath on the first spin. Bonds:
/// K(1,2) = -J/2 and, for the third spin, K(3,4) = -J2/2 (0-based indices).
inline QuadraticLindbladModel ising_chain(int n, const IsingParams& p = {}, double J2 = 0.9) {
  QuadraticLindbladModel m;
  m.n = n;
  const int d = 2 * n;
  m.K = RMatrix::Zero(d, d);
  m.K(1, 2) = -p.J / 2;
  m.K(2, 1) = p.J / 2;
  if (n >= 3) {
    m.K(3, 4) = -J2 / 2;
    m.K(4, 3) = J2 / 2;
  }
  const double a = std::sqrt(p.gp() / 4 - p.gm() / 8);
  const double b = std::sqrt(p.gp() / 4 + p.gm() / 8);
  CVector l1 = CVector::Zero(d);
  CVector l2 = CVector::Zero(d);
  l1(0) = a;
  l1(1) = Complex(0, a);
  l2(0) = b;
  l2(1) = Complex(0, -b);
  m.lindblad_vectors = {l1, l2};
  return m;
}

inline QuadraticLindbladModel ising_pair(const IsingParams& p = {}) { return ising_chain(2, p); }

inline QuadraticLindbladModel zero_model(int n) {
  QuadraticLindbladModel m;
  m.n = n;
  m.K = RMatrix::Zero(2 * n, 2 * n);
  return m;
}

inline RMatrix ising_S(const IsingParams& p) {
  RMatrix s = RMatrix::Zero(4, 4);
  s(0, 1) = p.gp();
  s(1, 0) = -p.gp();
  s(0, 2) = p.J;
  s(2, 0) = -p.J;
  return s;
}

/// Displayed closed form for the Ising-pair Z (prefactor 2 G- / (2 G+^2 + J^2)).
inline RMatrix ising_Z_displayed(const IsingParams& p) {
  return (2 * p.gm() / (2 * p.gp() * p.gp() + p.J * p.J)) * ising_S(p);
}

/// Solution of X^T Z + Z X = M_i for the displayed X and M_i.
inline RMatrix ising_Z_exact(const IsingParams& p) {
  return (p.gm() / (4 * (2 * p.gp() * p.gp() + p.J * p.J))) * ising_S(p);
}

inline std::string model_path(const std::string& name) { return std::string(LIOUV_MODELS_DIR) + "/" + name; }

/// Everything the pipeline produces for one model.
struct Pipeline {
  QuadraticLindbladModel model;
  BathMatrices bath;
  RMatrix X;
  StructureMatrix sm;
  JordanForm jf;
  DrivingSolution drive;
  NormalModeBasis nmb;

  explicit Pipeline(const QuadraticLindbladModel& raw, const Tolerances& tol = {}) {
    model = validate_model(raw, tol.input);
    bath = build_bath_matrices(model);
    X = build_X(model, bath);
    sm = build_structure_matrix(model, bath, tol.build);
    jf = jordan_decompose(X, tol.cluster, tol.rank, tol.jordan);
    drive = solve_lyapunov(X, bath.M_i, jf, tol);
    nmb = build_V(jf, drive.Z, sm.A, tol.normalization);
  }
};

/// Sorted by (re, im); used to compare small eigenvalue multisets.
inline std::vector<Complex> sorted(std::vector<Complex> v) {
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
    if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return v;
}

inline std::vector<Complex> eigenvalues(const CMatrix& m) {
  Eigen::ComplexEigenSolver<CMatrix> es(m, false);
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

inline std::vector<Complex> eigenvalues(const RMatrix& m) {
  Eigen::EigenSolver<RMatrix> es(m, false);
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

}  // namespace fixtures
