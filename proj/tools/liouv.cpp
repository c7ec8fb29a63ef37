// liouv: analyze quadratic Lindblad models, check them against the dense
// superoperator, and print the exact combinatorics tables.

#include "liouv/liouv.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace liouv;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kInternalError = 3;

int exit_code_for(const Error& e) { return is_input_error(e.kind()) ? kInputError : kInternalError; }

struct TolFlags {
  std::optional<double> input, build, psd, cluster, rank, jordan, stability, lyapunov, omega, merge, normalization;

  void add_to(CLI::App* app) {
    app->add_option("--tol-input", input, "antisymmetry tolerance for K");
    app->add_option("--tol-build", build, "structure-matrix invariant tolerance");
    app->add_option("--tol-psd", psd, "bath positivity tolerance");
    app->add_option("--tol-cluster", cluster, "eigenvalue clustering radius (relative)");
    app->add_option("--tol-rank", rank, "rank-staircase threshold");
    app->add_option("--tol-jordan", jordan, "Jordan reconstruction tolerance");
    app->add_option("--tol-stability", stability, "imaginary-axis threshold");
    app->add_option("--tol-lyapunov", lyapunov, "Lyapunov residual tolerance");
    app->add_option("--tol-omega", omega, "singular-system consistency tolerance");
    app->add_option("--tol-merge", merge, "Liouvillean eigenvalue merge radius");
    app->add_option("--tol-normalization", normalization, "normal-mode normalization tolerance");
  }

  Tolerances apply(Tolerances t) const {
    auto set = [](double& dst, const std::optional<double>& v, const char* name) {
      if (!v) return;
      if (!(*v > 0)) throw Error(ErrorKind::ParseError, std::string("--tol-") + name + " must be > 0");
      dst = *v;
    };
    set(t.input, input, "input");
    set(t.build, build, "build");
    set(t.psd, psd, "psd");
    set(t.cluster, cluster, "cluster");
    set(t.rank, rank, "rank");
    set(t.jordan, jordan, "jordan");
    set(t.stability, stability, "stability");
    set(t.lyapunov, lyapunov, "lyapunov");
    set(t.omega, omega, "omega");
    set(t.merge, merge, "merge");
    set(t.normalization, normalization, "normalization");
    return t;
  }
};

struct AnalyzeArgs {
  std::string file;
  std::string batch;
  std::string format = "text";
  std::string output;
  bool full_spectrum = false;
  long long limit = 1000000;
  TolFlags tol;
};

struct FileResult {
  std::string path;
  int code = kOk;
  std::optional<AnalysisReport> report;
  std::string error;
};

FileResult analyze_file(const std::string& path, const AnalyzeArgs& args) {
  FileResult res;
  res.path = path;
  try {
    const auto mf = io::load_model_file(path);
    AnalysisOptions opt;
    opt.tol = args.tol.apply(mf.tolerances);
    opt.limit = args.limit;
    opt.full_spectrum = args.full_spectrum;
    res.report = analyze(mf.model, opt, mf.labels);
  } catch (const Error& e) {
    res.code = exit_code_for(e);
    res.error = e.what();
  } catch (const std::exception& e) {
    res.code = kInternalError;
    res.error = e.what();
  }
  return res;
}

int emit(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text;
    return kOk;
  }
  std::ofstream out(output);
  if (!out) {
    std::cerr << "error: cannot write " << output << "\n";
    return kInputError;
  }
  out << text;
  return kOk;
}

int run_analyze(const AnalyzeArgs& args) {
  if (args.limit < 0) {
    std::cerr << "error: --limit must be nonnegative\n";
    return kInputError;
  }
  if (args.batch.empty()) {
    const auto res = analyze_file(args.file, args);
    if (res.code != kOk) {
      std::cerr << "error: " << res.error << "\n";
      return res.code;
    }
    const std::string text =
        args.format == "json" ? io::report_to_json(*res.report).dump(2) + "\n" : io::format_text(*res.report);
    return emit(text, args.output);
  }

  std::vector<std::string> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(args.batch, ec))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path().string());
  if (ec) {
    std::cerr << "error: cannot read directory " << args.batch << ": " << ec.message() << "\n";
    return kInputError;
  }
  std::sort(files.begin(), files.end());

  // Each file is analyzed in its own task with private state.
  std::vector<std::future<FileResult>> jobs;
  for (const auto& f : files) jobs.push_back(std::async(std::launch::async, analyze_file, f, std::cref(args)));

  int code = kOk;
  nlohmann::json arr = nlohmann::json::array();
  std::ostringstream text;
  for (auto& j : jobs) {
    const auto res = j.get();
    code = std::max(code, res.code);
    if (args.format == "json") {
      nlohmann::json item = {{"file", res.path}, {"exit_code", res.code}};
      if (res.report) item["report"] = io::report_to_json(*res.report);
      else item["error"] = res.error;
      arr.push_back(item);
    } else {
      text << "== " << res.path << "\n";
      if (res.report) text << io::format_text(*res.report);
      else text << "error (exit " << res.code << "): " << res.error << "\n";
      text << "\n";
    }
    if (!res.report) std::cerr << res.path << ": " << res.error << "\n";
  }
  const int wcode = emit(args.format == "json" ? arr.dump(2) + "\n" : text.str(), args.output);
  return std::max(code, wcode);
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string file;
  bool random = false;
  int n = 2;
  std::uint64_t seed = 1;
  int lindblad_count = -1;
  std::string format = "text";
  double tol_spectrum = 1e-7;
  double tol_quadratic = 1e-9;
  double tol_covariance = 1e-7;
  double corrupt = 0.0;  // test hook: perturb A before the structural comparison
  TolFlags tol;
};

struct Check {
  std::string name;
  double value = 0.0;
  double tol = 0.0;
  bool ran = false;
  std::string note;
  bool ok() const { return !ran || value <= tol; }
};

int run_verify(const VerifyArgs& args) {
  QuadraticLindbladModel model;
  Tolerances tol;
  std::string source;
  if (args.random) {
    if (args.n < 1) throw Error(ErrorKind::DimensionMismatch, "--n must be >= 1");
    model = random_model(args.n, args.seed, args.lindblad_count);
    source = "random n=" + std::to_string(args.n) + " seed=" + std::to_string(args.seed);
  } else {
    const auto mf = io::load_model_file(args.file);
    model = mf.model;
    tol = mf.tolerances;
    source = args.file;
  }
  tol = args.tol.apply(tol);
  const oracle::Limits lim = oracle::Limits::from_env();
  oracle::require_size(model.n, lim.n_max_eigen, "verify");

  model = validate_model(model, tol.input);
  const auto bath = build_bath_matrices(model);
  const RMatrix X = build_X(model, bath);
  const auto sm = build_structure_matrix(model, bath, tol.build);
  const auto jf = jordan_decompose(X, tol.cluster, tol.rank, tol.jordan);
  stability_check(jf, tol.stability);
  const auto drive = solve_lyapunov(X, bath.M_i, jf, tol);
  const auto sp = enumerate_spectrum(jf, 1LL << 40, tol.merge);

  std::vector<Check> checks;
  {
    const auto cmp = oracle::compare_spectrum(model, sp, lim);
    checks.push_back({"spectrum multiset", cmp.max_deviation, args.tol_spectrum, true,
                      "dim " + std::to_string(cmp.dimension)});
  }
  {
    std::optional<CMatrix> A_override;
    if (args.corrupt != 0.0) {
      CMatrix A = sm.A;
      A(0, 1) += args.corrupt;
      A(1, 0) -= args.corrupt;
      A_override = A;
    }
    const auto qf = oracle::verify_quadratic_form(model, A_override, lim);
    checks.push_back({"quadratic form", qf.residual, args.tol_quadratic, true,
                      args.corrupt != 0.0 ? "A corrupted by hook" : ""});
  }
  {
    const auto on = oracle::oracle_ness(model);
    auto rep = classify_ness(jf, tol.stability);
    attach_covariance(rep, drive.Z, drive.unique);
    Check c{"NESS covariance", 0.0, args.tol_covariance, false, ""};
    if (!drive.unique) {
      c.note = "skipped: Lyapunov solution not unique";
    } else if (!on.witness_found) {
      c.note = "skipped: no positive trace-one kernel element found";
    } else {
      c.ran = true;
      c.value = max_abs(CMatrix(on.covariance - rep.covariance));
      c.note = "kernel dim " + std::to_string(on.kernel_dim) + ", stationary_dim " +
               std::to_string(rep.stationary_dim);
    }
    checks.push_back(c);
    Check k{"kernel dimension", static_cast<double>(std::abs(on.kernel_dim - rep.stationary_dim)), 0.0, true,
            "oracle " + std::to_string(on.kernel_dim) + " vs " + std::to_string(rep.stationary_dim)};
    checks.push_back(k);
  }

  const bool all_ok = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok(); });
  if (args.format == "json") {
    nlohmann::json out = {{"source", source}, {"pass", all_ok}};
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks)
      arr.push_back({{"check", c.name}, {"ran", c.ran}, {"max_deviation", c.value}, {"tolerance", c.tol},
                     {"pass", c.ok()}, {"note", c.note}});
    out["checks"] = arr;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "verify " << source << "\n";
    for (const auto& c : checks) {
      std::cout << "  " << std::left << std::setw(20) << c.name << std::right;
      if (c.ran) std::cout << std::setw(12) << io::fmt(c.value, 3) << "  (tol " << io::fmt(c.tol, 3) << ")  "
                           << (c.ok() ? "PASS" : "FAIL");
      else std::cout << std::setw(12) << "-" << "  SKIP";
      if (!c.note.empty()) std::cout << "  " << c.note;
      std::cout << "\n";
    }
    std::cout << (all_ok ? "PASS" : "FAIL") << "\n";
  }
  return all_ok ? kOk : kInternalError;
}

// ---------------------------------------------------------------------------

std::string join(const std::vector<comb::BigInt>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

std::string expand_blocks(const exact::BlockMultiset& b) {
  std::ostringstream os;
  bool first = true;
  for (auto it = b.rbegin(); it != b.rend(); ++it)
    for (long long c = 0; c < it->second; ++c) {
      os << (first ? "" : " ") << it->first;
      first = false;
    }
  return os.str();
}

int run_restricted_binomial(int l, int m) {
  if (l < 0 || m < 0 || m > l) throw Error(ErrorKind::DimensionMismatch, "need 0 <= m <= l");
  std::cout << join(comb::restricted_binomial_row(l, m)) << "\n";
  return kOk;
}

int run_tensor_blocks(int k, int l) {
  if (k < 1 || l < 1) throw Error(ErrorKind::DimensionMismatch, "need k, l >= 1");
  if (static_cast<long long>(k) * l > comb::Limits{}.max_dense_dim)
    throw Error(ErrorKind::TooLarge, "k*l exceeds " + std::to_string(comb::Limits{}.max_dense_dim));
  const auto formula = comb::tensor_sum_blocks(k, l);
  const auto exact_blocks = exact::nilpotent_blocks_exact(comb::tensor_sum_matrix(k, l));
  std::cout << expand_blocks(formula) << "\n";
  if (formula != exact_blocks) {
    std::cerr << "rank staircase disagrees: " << expand_blocks(exact_blocks) << "\n";
    return kInternalError;
  }
  return kOk;
}

int run_nilpotent_blocks(int l, int m) {
  const auto res = comb::nilpotent_blocks(l, m);
  std::cout << std::setw(6) << "size" << std::setw(12) << "staircase" << std::setw(12) << "formula" << "\n";
  std::set<int> sizes;
  for (const auto& [s, c] : res.staircase) sizes.insert(s);
  for (const auto& [s, c] : res.conjectured) sizes.insert(s);
  for (auto it = sizes.rbegin(); it != sizes.rend(); ++it) {
    auto get = [&](const exact::BlockMultiset& b) {
      auto f = b.find(*it);
      return f == b.end() ? 0LL : f->second;
    };
    std::cout << std::setw(6) << *it << std::setw(12) << get(res.staircase) << std::setw(12) << get(res.conjectured)
              << "\n";
  }
  std::cout << "largest block " << res.largest_block << " (expected " << (static_cast<long long>(l - m) * m + 1)
            << ")\n";
  std::cout << (res.agree ? "AGREE" : "DISAGREE") << "\n";
  return res.agree ? kOk : kInternalError;
}

int run_verify_conjecture(int l) {
  const auto rep = comb::verify_conjecture(l);
  std::cout << std::setw(4) << "m" << std::setw(6) << "r" << std::setw(10) << "dim r" << std::setw(10) << "dim r+1"
            << std::setw(8) << "rank" << std::setw(6) << "inj" << std::setw(6) << "surj" << "  result\n";
  for (const auto& c : rep.levels) {
    std::cout << std::setw(4) << c.m << std::setw(6) << c.r << std::setw(10) << c.dim_from << std::setw(10)
              << c.dim_to << std::setw(8) << c.rank << std::setw(6) << (c.injective_required ? "req" : "-")
              << std::setw(6) << (c.surjective_required ? "req" : "-") << "  " << (c.pass ? "ok" : "FAIL") << "\n";
  }
  for (const auto& [m, mono] : rep.monotone)
    if (!mono) std::cout << "restricted binomials not unimodal for m = " << m << "\n";
  std::cout << (rep.all_pass ? "PASS" : "FAIL") << "\n";
  return rep.all_pass ? kOk : kInternalError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"liouv: spectra and normal modes of quadratic fermionic Lindblad models"};
  app.require_subcommand(1);

  AnalyzeArgs aa;
  auto* analyze_cmd = app.add_subcommand("analyze", "analyze a model file");
  auto* file_opt = analyze_cmd->add_option("file", aa.file, "model JSON file")->check(CLI::ExistingFile);
  auto* batch_opt = analyze_cmd->add_option("--batch", aa.batch, "analyze every *.json in a directory")
                        ->check(CLI::ExistingDirectory);
  file_opt->excludes(batch_opt);
  analyze_cmd->add_option("--format", aa.format, "output format")->check(CLI::IsMember({"json", "text"}));
  analyze_cmd->add_option("-o,--output", aa.output, "write the report to a file");
  analyze_cmd->add_flag("--full-spectrum", aa.full_spectrum, "list every Liouvillean eigenvalue");
  analyze_cmd->add_option("--limit", aa.limit, "maximum number of occupation vectors to enumerate");
  aa.tol.add_to(analyze_cmd);

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "compare against the dense superoperator");
  auto* vfile = verify_cmd->add_option("file", va.file, "model JSON file")->check(CLI::ExistingFile);
  auto* vrand = verify_cmd->add_flag("--random", va.random, "use a seeded random model");
  vfile->excludes(vrand);
  verify_cmd->add_option("--n", va.n, "number of fermions for --random");
  verify_cmd->add_option("--seed", va.seed, "64-bit seed for --random");
  verify_cmd->add_option("--lindblad-count", va.lindblad_count, "Lindblad vectors for --random (default n)");
  verify_cmd->add_option("--format", va.format, "output format")->check(CLI::IsMember({"json", "text"}));
  verify_cmd->add_option("--tol-spectrum", va.tol_spectrum, "spectrum matching tolerance");
  verify_cmd->add_option("--tol-quadratic", va.tol_quadratic, "quadratic-form residual tolerance");
  verify_cmd->add_option("--tol-covariance", va.tol_covariance, "NESS covariance tolerance");
  verify_cmd->add_option("--corrupt-A", va.corrupt, "perturb A(0,1) by this amount")->group("");
  va.tol.add_to(verify_cmd);

  auto* comb_cmd = app.add_subcommand("comb", "exact combinatorics tables");
  comb_cmd->require_subcommand(1);
  int c1 = 0;
  int c2 = 0;
  auto* rb = comb_cmd->add_subcommand("restricted-binomial", "restricted binomials (l m)_r for all r");
  rb->add_option("l", c1)->required();
  rb->add_option("m", c2)->required();
  auto* tb = comb_cmd->add_subcommand("tensor-blocks", "Jordan blocks of D_k x 1 + 1 x D_l");
  tb->add_option("k", c1)->required();
  tb->add_option("l", c2)->required();
  auto* nb = comb_cmd->add_subcommand("nilpotent-blocks", "Jordan blocks of the hop map on m of l");
  nb->add_option("l", c1)->required();
  nb->add_option("m", c2)->required();
  auto* vc = comb_cmd->add_subcommand("verify-conjecture", "exact injectivity/surjectivity check per level");
  vc->add_option("l", c1)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (analyze_cmd->parsed()) {
      if (aa.file.empty() && aa.batch.empty()) {
        std::cerr << "error: give a model file or --batch dir\n";
        return kInputError;
      }
      return run_analyze(aa);
    }
    if (verify_cmd->parsed()) {
      if (va.file.empty() && !va.random) {
        std::cerr << "error: give a model file or --random\n";
        return kInputError;
      }
      return run_verify(va);
    }
    if (rb->parsed()) return run_restricted_binomial(c1, c2);
    if (tb->parsed()) return run_tensor_blocks(c1, c2);
    if (nb->parsed()) return run_nilpotent_blocks(c1, c2);
    if (vc->parsed()) return run_verify_conjecture(c1);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternalError;
  }
  return kOk;
}
