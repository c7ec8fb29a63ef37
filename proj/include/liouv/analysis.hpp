#pragma once

// End-to-end pipeline: model -> rapidities -> Lyapunov -> normal modes -> spectra.

#include "liouv/lyapunov.hpp"
#include "liouv/model.hpp"
#include "liouv/normal_modes.hpp"
#include "liouv/rapidity.hpp"
#include "liouv/spectra.hpp"

#include "json.hpp"

#include <cfloat>
#include <string>
#include <vector>

namespace liouv {

enum class WarningKind {
  IllConditioned,
  NonDiagonalizable,
  CovarianceNotUnique,
  PhysicalityViolated,
  SpectrumTruncated,
};

inline std::string_view to_string(WarningKind k) {
  switch (k) {
    case WarningKind::IllConditioned: return "IllConditioned";
    case WarningKind::NonDiagonalizable: return "NonDiagonalizable";
    case WarningKind::CovarianceNotUnique: return "CovarianceNotUnique";
    case WarningKind::PhysicalityViolated: return "PhysicalityViolated";
    case WarningKind::SpectrumTruncated: return "SpectrumTruncated";
  }
  return "Unknown";
}

struct Warning {
  WarningKind kind;
  std::string detail;
  friend bool operator==(const Warning&, const Warning&) = default;
};

struct RapidityEntry {
  int j = 1;
  int k = 1;
  Complex rapidity;
  int size = 1;
  std::string cls;
  friend bool operator==(const RapidityEntry&, const RapidityEntry&) = default;
};

struct SpectrumSummary {
  long long occupation_count = 0;  // -1 when above the limit
  bool within_limit = true;
  Complex lambda_full;             // all blocks fully occupied: -2 tr X
  int max_jordan_block = 1;        // 1 + sum floor(ell^2 / 4)
  bool full_listed = false;
  std::vector<LiouvilleanEigenvalue> raw;
  std::vector<MergedEigenvalue> merged;
};

struct AnalysisOptions {
  Tolerances tol;
  long long limit = 1000000;
  bool full_spectrum = false;
};

struct AnalysisReport {
  // input echo
  int n = 0;
  RMatrix K;
  std::vector<CVector> lindblad;
  nlohmann::json labels;  // null when absent
  Tolerances tolerances;
  long long limit = 0;
  // model
  CMatrix M;
  RMatrix M_r;
  RMatrix M_i;
  RMatrix X;
  double A0 = 0.0;
  // rapidities
  std::vector<RapidityEntry> blocks;
  double gap = 0.0;
  double min_re = 0.0;
  bool ill_conditioned = false;
  double condition_number = 1.0;
  double jordan_residual = 0.0;
  // driving
  RMatrix Z;
  bool z_unique = true;
  int free_parameter_count = 0;
  double lyapunov_residual = 0.0;
  std::vector<OmegaCheck> omega_checks;
  bool used_jordan_path = false;
  // normal modes
  double normalization_residual = 0.0;
  double orthogonality_residual = 0.0;
  double reconstruction_residual = 0.0;
  double trace_consistency = 0.0;  // |sum ell beta - A0|
  // steady state and spectrum
  NessReport ness;
  SpectrumSummary spectrum;
  std::vector<Warning> warnings;

  bool has_warning(WarningKind k) const {
    for (const auto& w : warnings)
      if (w.kind == k) return true;
    return false;
  }
};

inline double finite_or_max(double v) { return std::isfinite(v) ? v : DBL_MAX; }

inline AnalysisReport analyze(const QuadraticLindbladModel& raw, const AnalysisOptions& opt = {},
                              const nlohmann::json& labels = nullptr) {
  const Tolerances& tol = opt.tol;
  const auto model = validate_model(raw, tol.input);
  const auto bath = build_bath_matrices(model);
  const double mscale = max_abs(bath.M);
  if (min_bath_eigenvalue(bath) < -tol.psd * (mscale > 0 ? mscale : 1.0)) {
    throw Error(ErrorKind::BuildInvariantViolated, "bath matrix is not positive semidefinite");
  }
  const RMatrix X = build_X(model, bath);
  const auto sm = build_structure_matrix(model, bath, tol.build);
  const auto jf = jordan_decompose(X, tol.cluster, tol.rank, tol.jordan);
  const auto stab = stability_check(jf, tol.stability);
  const auto drive = solve_lyapunov(X, bath.M_i, jf, tol);
  const auto nmb = build_V(jf, drive.Z, sm.A, tol.normalization);
  const auto nf = normal_form_coefficients(nmb, jf);

  AnalysisReport r;
  r.n = model.n;
  r.K = model.K;
  r.lindblad = model.lindblad_vectors;
  r.labels = labels;
  r.tolerances = tol;
  r.limit = opt.limit;
  r.M = bath.M;
  r.M_r = bath.M_r;
  r.M_i = bath.M_i;
  r.X = X;
  r.A0 = sm.A0;
  for (const auto& b : jf.blocks) {
    r.blocks.push_back({b.j, b.k, b.rapidity, b.size,
                        std::string(to_string(stab.classes[b.j - 1]))});
  }
  r.gap = spectral_gap(jf, tol.stability);
  r.min_re = stab.min_re;
  r.ill_conditioned = jf.ill_conditioned;
  r.condition_number = finite_or_max(jf.condition_number);
  r.jordan_residual = finite_or_max(jf.reconstruction_residual);
  r.Z = drive.Z;
  r.z_unique = drive.unique;
  r.free_parameter_count = drive.free_parameter_count;
  r.lyapunov_residual = drive.residual;
  r.omega_checks = drive.omega_checks;
  r.used_jordan_path = drive.used_jordan_path;
  r.normalization_residual = nmb.normalization_residual;
  r.orthogonality_residual = nmb.orthogonality_residual;
  r.reconstruction_residual = nmb.reconstruction_residual;
  r.trace_consistency = std::abs(nf.weighted_rapidity_sum - Complex(sm.A0, 0.0));

  r.ness = classify_ness(jf, tol.stability);
  attach_covariance(r.ness, drive.Z, drive.unique);

  auto& sp = r.spectrum;
  sp.lambda_full = -2.0 * nf.weighted_rapidity_sum;
  for (const auto& b : jf.blocks) sp.max_jordan_block += (b.size * b.size) / 4;
  const long long count = occupation_count(jf, opt.limit);
  sp.within_limit = count <= opt.limit;
  sp.occupation_count = sp.within_limit ? count : -1;
  if (opt.full_spectrum && sp.within_limit) {
    auto full = enumerate_spectrum(jf, opt.limit, tol.merge);
    sp.raw = std::move(full.raw);
    sp.merged = std::move(full.merged);
    sp.full_listed = true;
  }

  if (jf.ill_conditioned || !drive.residual_ok) {
    std::string d = "rank decisions near threshold; cond(P) = " + std::to_string(jf.condition_number);
    if (!drive.residual_ok) d += "; Lyapunov residual " + std::to_string(drive.residual);
    r.warnings.push_back({WarningKind::IllConditioned, d});
  }
  for (const auto& b : jf.blocks) {
    if (b.size > 1) {
      r.warnings.push_back({WarningKind::NonDiagonalizable,
                            "non-diagonalizable: block size " + std::to_string(b.size) + " at rapidity (" +
                                std::to_string(b.j) + "," + std::to_string(b.k) + ")"});
    }
  }
  if (!r.ness.covariance_unique) {
    r.warnings.push_back({WarningKind::CovarianceNotUnique,
                          drive.unique ? "steady state not unique; covariance belongs to the canonical NESS"
                                       : "Lyapunov solution not unique; free parameters set to zero"});
  }
  if (!r.ness.physical) {
    r.warnings.push_back({WarningKind::PhysicalityViolated,
                          "largest singular value of 4Z is " + std::to_string(r.ness.max_singular_4Z)});
  }
  if (!sp.within_limit) {
    r.warnings.push_back({WarningKind::SpectrumTruncated,
                          "occupation-vector count exceeds limit " + std::to_string(opt.limit)});
  }
  return r;
}

}  // namespace liouv
