#pragma once

// Model files and analysis reports as JSON; plain-text report tables.

#include "liouv/analysis.hpp"

#include "json.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace liouv::io {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Scalars and matrices. Complex numbers are [re, im]; matrices are row arrays.

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const RMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

inline json to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline json to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

[[noreturn]] inline void field_error(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::ParseError, "field '" + path + "': " + what);
}

inline const json& member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) field_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) field_error(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

inline double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) field_error(path, "expected a number");
  return v.get<double>();
}

inline Complex complex_at(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) field_error(path, "expected [re, im]");
  return {number_at(v[0], path + "[0]"), number_at(v[1], path + "[1]")};
}

inline RMatrix rmatrix_at(const json& v, const std::string& path) {
  if (!v.is_array()) field_error(path, "expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(v.size());
  const auto cols = rows > 0 && v[0].is_array() ? static_cast<Eigen::Index>(v[0].size()) : 0;
  RMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_array()) field_error(rp, "expected an array");
    if (static_cast<Eigen::Index>(v[i].size()) != cols) {
      throw Error(ErrorKind::DimensionMismatch, "field '" + rp + "': row length " + std::to_string(v[i].size()) +
                                                    ", expected " + std::to_string(cols));
    }
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = number_at(v[i][j], rp + "[" + std::to_string(j) + "]");
  }
  return m;
}

inline CMatrix cmatrix_at(const json& v, const std::string& path) {
  if (!v.is_array()) field_error(path, "expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(v.size());
  const auto cols = rows > 0 && v[0].is_array() ? static_cast<Eigen::Index>(v[0].size()) : 0;
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || static_cast<Eigen::Index>(v[i].size()) != cols) field_error(rp, "ragged row");
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = complex_at(v[i][j], rp + "[" + std::to_string(j) + "]");
  }
  return m;
}

inline CVector cvector_at(const json& v, const std::string& path) {
  if (!v.is_array()) field_error(path, "expected an array of [re, im] pairs");
  CVector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = complex_at(v[i], path + "[" + std::to_string(i) + "]");
  return out;
}

inline bool bool_at(const json& v, const std::string& path) {
  if (!v.is_boolean()) field_error(path, "expected a boolean");
  return v.get<bool>();
}

inline long long int_at(const json& v, const std::string& path) {
  if (!v.is_number_integer()) field_error(path, "expected an integer");
  return v.get<long long>();
}

inline std::string string_at(const json& v, const std::string& path) {
  if (!v.is_string()) field_error(path, "expected a string");
  return v.get<std::string>();
}

// ---------------------------------------------------------------------------
// Tolerances.

#define LIOUV_TOLERANCE_FIELDS(X) \
  X(input) X(build) X(psd) X(cluster) X(rank) X(jordan) X(stability) X(lyapunov) X(omega) X(merge) X(normalization)

inline json to_json(const Tolerances& t) {
  json out = json::object();
#define LIOUV_X(name) out[#name] = t.name;
  LIOUV_TOLERANCE_FIELDS(LIOUV_X)
#undef LIOUV_X
  return out;
}

/// Applies the keys present in `v` on top of `base`; unknown keys are rejected.
inline Tolerances tolerances_from_json(const json& v, Tolerances base, const std::string& path) {
  if (!v.is_object()) field_error(path, "expected an object");
  for (auto it = v.begin(); it != v.end(); ++it) {
    const std::string p = path + "." + it.key();
    bool known = false;
#define LIOUV_X(name)                                   \
  if (it.key() == #name) {                              \
    base.name = number_at(it.value(), p);               \
    if (!(base.name > 0)) field_error(p, "must be > 0"); \
    known = true;                                       \
  }
    LIOUV_TOLERANCE_FIELDS(LIOUV_X)
#undef LIOUV_X
    if (!known) field_error(p, "unknown tolerance");
  }
  return base;
}

// ---------------------------------------------------------------------------
// Model files.

struct ModelFile {
  QuadraticLindbladModel model;
  Tolerances tolerances;
  json labels;  // null when absent
};

inline json parse_document(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size() + 1; ++i) {
      if (i > 0 && i - 1 < text.size() && text[i - 1] == '\n') {
        ++line;
        col = 1;
      } else if (i > 0) {
        ++col;
      }
    }
    throw Error(ErrorKind::ParseError,
                source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

inline ModelFile model_from_json(const json& doc) {
  ModelFile f;
  const long long n = int_at(member(doc, "n", ""), "n");
  if (n <= 0 || n > 30) throw Error(ErrorKind::DimensionMismatch, "field 'n': must be in 1..30");
  f.model.n = static_cast<int>(n);
  f.model.K = rmatrix_at(member(doc, "K", ""), "K");
  const json& lind = member(doc, "lindblad", "");
  if (!lind.is_array()) field_error("lindblad", "expected an array of vectors");
  for (std::size_t mu = 0; mu < lind.size(); ++mu) {
    f.model.lindblad_vectors.push_back(cvector_at(lind[mu], "lindblad[" + std::to_string(mu) + "]"));
  }
  if (auto it = doc.find("tolerances"); it != doc.end()) f.tolerances = tolerances_from_json(*it, {}, "tolerances");
  if (auto it = doc.find("labels"); it != doc.end()) f.labels = *it;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const auto& k = it.key();
    if (k != "n" && k != "K" && k != "lindblad" && k != "tolerances" && k != "labels") field_error(k, "unknown field");
  }
  return f;
}

inline ModelFile load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(parse_document(ss.str(), path));
}

inline json model_to_json(const QuadraticLindbladModel& m, const json& labels = nullptr) {
  json out = json::object();
  out["n"] = m.n;
  out["K"] = to_json(m.K);
  json lind = json::array();
  for (const auto& l : m.lindblad_vectors) lind.push_back(to_json(l));
  out["lindblad"] = lind;
  if (!labels.is_null()) out["labels"] = labels;
  return out;
}

// ---------------------------------------------------------------------------
// Reports.

inline std::optional<WarningKind> warning_kind_from(const std::string& s) {
  for (auto k : {WarningKind::IllConditioned, WarningKind::NonDiagonalizable, WarningKind::CovarianceNotUnique,
                 WarningKind::PhysicalityViolated, WarningKind::SpectrumTruncated})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

inline json eigenvalue_to_json(const LiouvilleanEigenvalue& e) {
  return {{"lambda", to_json(e.lambda)},
          {"occupation", e.occupation},
          {"subspace_dim", e.subspace_dim},
          {"max_jordan_block", e.max_jordan_block}};
}

inline json report_to_json(const AnalysisReport& r) {
  json out = json::object();
  out["model"] = model_to_json({r.n, r.K, r.lindblad}, r.labels);
  out["tolerances"] = to_json(r.tolerances);
  out["limit"] = r.limit;
  out["bath"] = {{"M", to_json(r.M)}, {"M_r", to_json(r.M_r)}, {"M_i", to_json(r.M_i)}};
  out["X"] = to_json(r.X);
  out["A0"] = r.A0;

  json blocks = json::array();
  for (const auto& b : r.blocks)
    blocks.push_back({{"j", b.j}, {"k", b.k}, {"rapidity", to_json(b.rapidity)}, {"size", b.size}, {"class", b.cls}});
  out["rapidities"] = {{"blocks", blocks},
                       {"gap", r.gap},
                       {"min_re", r.min_re},
                       {"ill_conditioned", r.ill_conditioned},
                       {"condition_number", r.condition_number},
                       {"reconstruction_residual", r.jordan_residual}};

  json omegas = json::array();
  for (const auto& o : r.omega_checks) omegas.push_back({{"row", o.row}, {"magnitude", o.magnitude}});
  out["driving"] = {{"Z", to_json(r.Z)},
                    {"unique", r.z_unique},
                    {"free_parameter_count", r.free_parameter_count},
                    {"residual", r.lyapunov_residual},
                    {"omega_checks", omegas},
                    {"used_jordan_path", r.used_jordan_path}};
  out["normal_modes"] = {{"normalization_residual", r.normalization_residual},
                         {"orthogonality_residual", r.orthogonality_residual},
                         {"reconstruction_residual", r.reconstruction_residual},
                         {"trace_consistency", r.trace_consistency}};

  json zero = json::array();
  for (const auto& z : r.ness.zero_rapidity_modes) zero.push_back({{"j", z.j}, {"k", z.k}});
  json pairs = json::array();
  for (const auto& p : r.ness.imaginary_pair_modes)
    pairs.push_back({{"j", p.j},
                     {"j_prime", p.j_prime},
                     {"k", p.k},
                     {"k_prime", p.k_prime},
                     {"sign", p.plus ? "+" : "-"},
                     {"vanishing", p.vanishing}});
  out["ness"] = {{"unique", r.ness.unique},
                 {"gap", r.ness.gap},
                 {"zero_rapidity_modes", zero},
                 {"imaginary_pair_modes", pairs},
                 {"stationary_dim", r.ness.stationary_dim},
                 {"covariance", to_json(r.ness.covariance)},
                 {"covariance_unique", r.ness.covariance_unique},
                 {"physical", r.ness.physical},
                 {"max_singular_4Z", r.ness.max_singular_4Z}};

  const auto& sp = r.spectrum;
  json spec = {{"occupation_count", sp.occupation_count},
               {"within_limit", sp.within_limit},
               {"lambda_full", to_json(sp.lambda_full)},
               {"max_jordan_block", sp.max_jordan_block},
               {"full_listed", sp.full_listed}};
  if (sp.full_listed) {
    json raw = json::array();
    for (const auto& e : sp.raw) raw.push_back(eigenvalue_to_json(e));
    json merged = json::array();
    for (const auto& e : sp.merged)
      merged.push_back({{"lambda", to_json(e.lambda)},
                        {"subspace_dim", e.subspace_dim},
                        {"max_jordan_block", e.max_jordan_block},
                        {"contributing", e.contributing},
                        {"block_is_lower_bound", e.block_is_lower_bound}});
    spec["raw"] = raw;
    spec["merged"] = merged;
  }
  out["spectrum"] = spec;

  json warns = json::array();
  for (const auto& w : r.warnings) warns.push_back({{"kind", to_string(w.kind)}, {"detail", w.detail}});
  out["warnings"] = warns;
  return out;
}

inline AnalysisReport report_from_json(const json& doc) {
  AnalysisReport r;
  const auto mf = model_from_json(member(doc, "model", ""));
  r.n = mf.model.n;
  r.K = mf.model.K;
  r.lindblad = mf.model.lindblad_vectors;
  r.labels = mf.labels;
  r.tolerances = tolerances_from_json(member(doc, "tolerances", ""), {}, "tolerances");
  r.limit = int_at(member(doc, "limit", ""), "limit");
  const auto& bath = member(doc, "bath", "");
  r.M = cmatrix_at(member(bath, "M", "bath"), "bath.M");
  r.M_r = rmatrix_at(member(bath, "M_r", "bath"), "bath.M_r");
  r.M_i = rmatrix_at(member(bath, "M_i", "bath"), "bath.M_i");
  r.X = rmatrix_at(member(doc, "X", ""), "X");
  r.A0 = number_at(member(doc, "A0", ""), "A0");

  const auto& rap = member(doc, "rapidities", "");
  for (const auto& b : member(rap, "blocks", "rapidities")) {
    r.blocks.push_back({static_cast<int>(int_at(member(b, "j", "rapidities.blocks"), "j")),
                        static_cast<int>(int_at(member(b, "k", "rapidities.blocks"), "k")),
                        complex_at(member(b, "rapidity", "rapidities.blocks"), "rapidity"),
                        static_cast<int>(int_at(member(b, "size", "rapidities.blocks"), "size")),
                        string_at(member(b, "class", "rapidities.blocks"), "class")});
  }
  r.gap = number_at(member(rap, "gap", "rapidities"), "rapidities.gap");
  r.min_re = number_at(member(rap, "min_re", "rapidities"), "rapidities.min_re");
  r.ill_conditioned = bool_at(member(rap, "ill_conditioned", "rapidities"), "rapidities.ill_conditioned");
  r.condition_number = number_at(member(rap, "condition_number", "rapidities"), "rapidities.condition_number");
  r.jordan_residual = number_at(member(rap, "reconstruction_residual", "rapidities"), "rapidities.reconstruction_residual");

  const auto& drv = member(doc, "driving", "");
  r.Z = rmatrix_at(member(drv, "Z", "driving"), "driving.Z");
  r.z_unique = bool_at(member(drv, "unique", "driving"), "driving.unique");
  r.free_parameter_count = static_cast<int>(int_at(member(drv, "free_parameter_count", "driving"), "driving.free_parameter_count"));
  r.lyapunov_residual = number_at(member(drv, "residual", "driving"), "driving.residual");
  for (const auto& o : member(drv, "omega_checks", "driving")) {
    r.omega_checks.push_back({static_cast<int>(int_at(member(o, "row", "driving.omega_checks"), "row")),
                              number_at(member(o, "magnitude", "driving.omega_checks"), "magnitude")});
  }
  r.used_jordan_path = bool_at(member(drv, "used_jordan_path", "driving"), "driving.used_jordan_path");

  const auto& nm = member(doc, "normal_modes", "");
  r.normalization_residual = number_at(member(nm, "normalization_residual", "normal_modes"), "normalization_residual");
  r.orthogonality_residual = number_at(member(nm, "orthogonality_residual", "normal_modes"), "orthogonality_residual");
  r.reconstruction_residual = number_at(member(nm, "reconstruction_residual", "normal_modes"), "reconstruction_residual");
  r.trace_consistency = number_at(member(nm, "trace_consistency", "normal_modes"), "trace_consistency");

  const auto& ness = member(doc, "ness", "");
  r.ness.unique = bool_at(member(ness, "unique", "ness"), "ness.unique");
  r.ness.gap = number_at(member(ness, "gap", "ness"), "ness.gap");
  for (const auto& z : member(ness, "zero_rapidity_modes", "ness"))
    r.ness.zero_rapidity_modes.push_back({static_cast<int>(int_at(member(z, "j", "ness"), "j")),
                                          static_cast<int>(int_at(member(z, "k", "ness"), "k"))});
  for (const auto& p : member(ness, "imaginary_pair_modes", "ness")) {
    ImaginaryPairDescriptor d;
    d.j = static_cast<int>(int_at(member(p, "j", "ness"), "j"));
    d.j_prime = static_cast<int>(int_at(member(p, "j_prime", "ness"), "j_prime"));
    d.k = static_cast<int>(int_at(member(p, "k", "ness"), "k"));
    d.k_prime = static_cast<int>(int_at(member(p, "k_prime", "ness"), "k_prime"));
    d.plus = string_at(member(p, "sign", "ness"), "sign") == "+";
    d.vanishing = bool_at(member(p, "vanishing", "ness"), "vanishing");
    r.ness.imaginary_pair_modes.push_back(d);
  }
  r.ness.stationary_dim = int_at(member(ness, "stationary_dim", "ness"), "ness.stationary_dim");
  r.ness.covariance = cmatrix_at(member(ness, "covariance", "ness"), "ness.covariance");
  r.ness.covariance_unique = bool_at(member(ness, "covariance_unique", "ness"), "ness.covariance_unique");
  r.ness.physical = bool_at(member(ness, "physical", "ness"), "ness.physical");
  r.ness.max_singular_4Z = number_at(member(ness, "max_singular_4Z", "ness"), "ness.max_singular_4Z");

  const auto& spj = member(doc, "spectrum", "");
  auto& sp = r.spectrum;
  sp.occupation_count = int_at(member(spj, "occupation_count", "spectrum"), "spectrum.occupation_count");
  sp.within_limit = bool_at(member(spj, "within_limit", "spectrum"), "spectrum.within_limit");
  sp.lambda_full = complex_at(member(spj, "lambda_full", "spectrum"), "spectrum.lambda_full");
  sp.max_jordan_block = static_cast<int>(int_at(member(spj, "max_jordan_block", "spectrum"), "spectrum.max_jordan_block"));
  sp.full_listed = bool_at(member(spj, "full_listed", "spectrum"), "spectrum.full_listed");
  if (sp.full_listed) {
    for (const auto& e : member(spj, "raw", "spectrum")) {
      LiouvilleanEigenvalue ev;
      ev.lambda = complex_at(member(e, "lambda", "spectrum.raw"), "lambda");
      ev.occupation = member(e, "occupation", "spectrum.raw").get<std::vector<int>>();
      ev.subspace_dim = int_at(member(e, "subspace_dim", "spectrum.raw"), "subspace_dim");
      ev.max_jordan_block = static_cast<int>(int_at(member(e, "max_jordan_block", "spectrum.raw"), "max_jordan_block"));
      sp.raw.push_back(ev);
    }
    for (const auto& e : member(spj, "merged", "spectrum")) {
      MergedEigenvalue m;
      m.lambda = complex_at(member(e, "lambda", "spectrum.merged"), "lambda");
      m.subspace_dim = int_at(member(e, "subspace_dim", "spectrum.merged"), "subspace_dim");
      m.max_jordan_block = static_cast<int>(int_at(member(e, "max_jordan_block", "spectrum.merged"), "max_jordan_block"));
      m.contributing = static_cast<int>(int_at(member(e, "contributing", "spectrum.merged"), "contributing"));
      m.block_is_lower_bound = bool_at(member(e, "block_is_lower_bound", "spectrum.merged"), "block_is_lower_bound");
      sp.merged.push_back(m);
    }
  }
  for (const auto& w : member(doc, "warnings", "")) {
    const auto kind = warning_kind_from(string_at(member(w, "kind", "warnings"), "warnings.kind"));
    if (!kind) field_error("warnings.kind", "unknown warning");
    r.warnings.push_back({*kind, string_at(member(w, "detail", "warnings"), "warnings.detail")});
  }
  return r;
}

// ---------------------------------------------------------------------------
// Field-by-field equality.

template <class A, class B>
bool same_matrix(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

inline bool operator==(const Tolerances& a, const Tolerances& b) { return to_json(a) == to_json(b); }

inline bool equal(const AnalysisReport& a, const AnalysisReport& b) {
  if (a.lindblad.size() != b.lindblad.size()) return false;
  for (std::size_t i = 0; i < a.lindblad.size(); ++i)
    if (!same_matrix(a.lindblad[i], b.lindblad[i])) return false;
  auto eq_raw = [](const LiouvilleanEigenvalue& x, const LiouvilleanEigenvalue& y) {
    return x.lambda == y.lambda && x.occupation == y.occupation && x.subspace_dim == y.subspace_dim &&
           x.max_jordan_block == y.max_jordan_block;
  };
  auto eq_merged = [](const MergedEigenvalue& x, const MergedEigenvalue& y) {
    return x.lambda == y.lambda && x.subspace_dim == y.subspace_dim && x.max_jordan_block == y.max_jordan_block &&
           x.contributing == y.contributing && x.block_is_lower_bound == y.block_is_lower_bound;
  };
  const auto& sa = a.spectrum;
  const auto& sb = b.spectrum;
  return a.n == b.n && same_matrix(a.K, b.K) && a.labels == b.labels && a.tolerances == b.tolerances &&
         a.limit == b.limit && same_matrix(a.M, b.M) && same_matrix(a.M_r, b.M_r) && same_matrix(a.M_i, b.M_i) &&
         same_matrix(a.X, b.X) && a.A0 == b.A0 && a.blocks == b.blocks && a.gap == b.gap && a.min_re == b.min_re &&
         a.ill_conditioned == b.ill_conditioned && a.condition_number == b.condition_number &&
         a.jordan_residual == b.jordan_residual && same_matrix(a.Z, b.Z) && a.z_unique == b.z_unique &&
         a.free_parameter_count == b.free_parameter_count && a.lyapunov_residual == b.lyapunov_residual &&
         a.omega_checks.size() == b.omega_checks.size() &&
         std::equal(a.omega_checks.begin(), a.omega_checks.end(), b.omega_checks.begin(),
                    [](const OmegaCheck& x, const OmegaCheck& y) { return x.row == y.row && x.magnitude == y.magnitude; }) &&
         a.used_jordan_path == b.used_jordan_path && a.normalization_residual == b.normalization_residual &&
         a.orthogonality_residual == b.orthogonality_residual &&
         a.reconstruction_residual == b.reconstruction_residual && a.trace_consistency == b.trace_consistency &&
         a.ness.unique == b.ness.unique && a.ness.gap == b.ness.gap &&
         a.ness.zero_rapidity_modes == b.ness.zero_rapidity_modes &&
         a.ness.imaginary_pair_modes == b.ness.imaginary_pair_modes &&
         a.ness.stationary_dim == b.ness.stationary_dim && same_matrix(a.ness.covariance, b.ness.covariance) &&
         a.ness.covariance_unique == b.ness.covariance_unique && a.ness.physical == b.ness.physical &&
         a.ness.max_singular_4Z == b.ness.max_singular_4Z && sa.occupation_count == sb.occupation_count &&
         sa.within_limit == sb.within_limit && sa.lambda_full == sb.lambda_full &&
         sa.max_jordan_block == sb.max_jordan_block && sa.full_listed == sb.full_listed &&
         sa.raw.size() == sb.raw.size() && std::equal(sa.raw.begin(), sa.raw.end(), sb.raw.begin(), eq_raw) &&
         sa.merged.size() == sb.merged.size() &&
         std::equal(sa.merged.begin(), sa.merged.end(), sb.merged.begin(), eq_merged) && a.warnings == b.warnings;
}

// ---------------------------------------------------------------------------
// Text tables.

inline std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << std::defaultfloat << v;
  return os.str();
}

inline std::string fmt(Complex z, int prec = 6) {
  if (z.imag() == 0.0) return fmt(z.real(), prec);
  std::ostringstream os;
  os << std::setprecision(prec) << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

template <class Mat>
void print_matrix(std::ostream& os, const std::string& title, const Mat& m) {
  os << title << "\n";
  std::vector<std::string> cells;
  std::size_t width = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      cells.push_back(fmt(m(i, j), 5));
      width = std::max(width, cells.back().size());
    }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << "  ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << std::setw(static_cast<int>(width) + 2) << cells[i * m.cols() + j];
    os << "\n";
  }
}

inline std::string format_text(const AnalysisReport& r) {
  std::ostringstream os;
  os << "n = " << r.n << ", Lindblad vectors = " << r.lindblad.size() << ", A0 = " << fmt(r.A0) << "\n\n";
  print_matrix(os, "X", r.X);
  os << "\nRapidities\n";
  os << "  " << std::left << std::setw(4) << "j" << std::setw(4) << "k" << std::setw(30) << "beta" << std::setw(6)
     << "size" << "class\n";
  for (const auto& b : r.blocks) {
    os << "  " << std::setw(4) << b.j << std::setw(4) << b.k << std::setw(30) << fmt(b.rapidity, 10) << std::setw(6)
       << b.size << b.cls << "\n";
  }
  os << std::right;
  os << "  gap = " << fmt(r.gap) << ", min Re beta = " << fmt(r.min_re) << ", cond(P) = " << fmt(r.condition_number)
     << ", reconstruction = " << fmt(r.jordan_residual, 3) << "\n\n";
  print_matrix(os, "Z", r.Z);
  os << "  unique = " << (r.z_unique ? "yes" : "no") << ", free parameters = " << r.free_parameter_count
     << ", residual = " << fmt(r.lyapunov_residual, 3) << ", path = " << (r.used_jordan_path ? "jordan" : "dense")
     << "\n\n";
  os << "Normal modes: |VV^T - J| = " << fmt(r.normalization_residual, 3)
     << ", |WW^T - 1| = " << fmt(r.orthogonality_residual, 3)
     << ", A reconstruction = " << fmt(r.reconstruction_residual, 3) << "\n\n";
  os << "NESS: unique = " << (r.ness.unique ? "yes" : "no") << ", stationary_dim = " << r.ness.stationary_dim
     << ", gap = " << fmt(r.ness.gap) << "\n";
  for (const auto& z : r.ness.zero_rapidity_modes) os << "  zero mode |NESS;" << z.j << "," << z.k << ">\n";
  for (const auto& p : r.ness.imaginary_pair_modes) {
    os << "  pair mode |NESS;" << p.j << "," << p.j_prime << "," << p.k << "," << p.k_prime << ","
       << (p.plus ? "+" : "-") << ">" << (p.vanishing ? " (vanishes)" : "") << "\n";
  }
  print_matrix(os, "  covariance tr(w_j w_k rho)" + std::string(r.ness.covariance_unique ? "" : " [not unique]"),
               r.ness.covariance);
  os << "\nSpectrum: occupations = "
     << (r.spectrum.within_limit ? std::to_string(r.spectrum.occupation_count) : std::string("> limit"))
     << ", lambda(full) = " << fmt(r.spectrum.lambda_full) << ", largest Jordan block = "
     << r.spectrum.max_jordan_block << "\n";
  if (r.spectrum.full_listed) {
    os << "  " << std::left << std::setw(34) << "lambda" << std::setw(8) << "dim" << "max block\n";
    for (const auto& e : r.spectrum.merged) {
      os << "  " << std::setw(34) << fmt(e.lambda, 10) << std::setw(8) << e.subspace_dim << e.max_jordan_block
         << (e.block_is_lower_bound ? " (lower bound)" : "") << "\n";
    }
    os << std::right;
  }
  os << "\nWarnings:" << (r.warnings.empty() ? " none" : "") << "\n";
  for (const auto& w : r.warnings) os << "  " << to_string(w.kind) << ": " << w.detail << "\n";
  return os.str();
}

}  // namespace liouv::io
