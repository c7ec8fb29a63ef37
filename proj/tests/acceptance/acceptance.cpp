// Acceptance suite: one PASS/FAIL line per criterion, with the measured numbers.
//
// Usage: acceptance [--expect-fail 1,5]
// Exit status is 0 when the set of failing criteria equals the --expect-fail set
// (empty by default), 1 otherwise.

#include "liouv/liouv.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

using namespace liouv;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { details.push_back("note " + what); }
};

QuadraticLindbladModel load(const std::string& name) {
  return io::load_model_file(std::string(LIOUV_MODELS_DIR) + "/" + name).model;
}

struct Solved {
  QuadraticLindbladModel model;
  BathMatrices bath;
  RMatrix X;
  StructureMatrix sm;
  JordanForm jf;
  DrivingSolution drive;
};

Solved solve(const QuadraticLindbladModel& raw) {
  Solved s;
  const Tolerances tol;
  s.model = validate_model(raw, tol.input);
  s.bath = build_bath_matrices(s.model);
  s.X = build_X(s.model, s.bath);
  s.sm = build_structure_matrix(s.model, s.bath, tol.build);
  s.jf = jordan_decompose(s.X, tol.cluster, tol.rank, tol.jordan);
  s.drive = solve_lyapunov(s.X, s.bath.M_i, s.jf, tol);
  return s;
}

QuadraticLindbladModel ising(int n) {
  QuadraticLindbladModel m = load("ising_pair.json");
  if (n == 3) m = load("ising_chain3.json");
  return m;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  const double g1 = 0.3, g2 = 0.5, J = 0.7;
  const double gp = g2 + g1, gm = g2 - g1;
  const auto s = solve(ising(2));
  RMatrix S = RMatrix::Zero(4, 4);
  S(0, 1) = gp;
  S(1, 0) = -gp;
  S(0, 2) = J;
  S(2, 0) = -J;
  const RMatrix closed = (2 * gm / (2 * gp * gp + J * J)) * S;
  const double dz = max_abs(RMatrix(s.drive.Z - closed));
  o.require(dz <= 1e-10, "Z vs displayed closed form: max dev " + sci(dz) + " (tol 1e-10)");
  const double ratio = closed(0, 1) / s.drive.Z(0, 1);
  o.note("closed form / computed Z = " + sci(ratio) + "; computed Z residual against the displayed X, M_i = " +
         sci(s.drive.residual) + ", closed form residual = " + sci(lyapunov_residual(s.X, closed, s.bath.M_i)));
  const double half = gp / 2;
  const Complex root = std::sqrt(Complex(half * half - J * J));
  const double dr = oracle::matched_max_deviation(s.jf.rapidities, {gp, half + root, half - root, 0.0});
  o.require(dr <= 1e-10 && s.jf.rapidities.size() == 4, "rapidities: max dev " + sci(dr) + " (tol 1e-10)");
  const double t = seconds_since(t0);
  o.require(t < 1.0, "runtime " + sci(t) + " s (< 1 s)");
  o.summary = "Ising-pair regression";
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto t0 = Clock::now();
  const double g = 1.0, th = std::numbers::pi / 3;
  auto make = [&](double h) {
    QuadraticLindbladModel m;
    m.n = 1;
    m.K = RMatrix::Zero(2, 2);
    m.K(0, 1) = h;
    m.K(1, 0) = -h;
    CVector l(2);
    l << std::sqrt(g), std::sqrt(g) * std::polar(1.0, th);
    m.lindblad_vectors = {l};
    return m;
  };
  const auto a = solve(make(g * std::cos(th)));
  const bool one_block = a.jf.blocks.size() == 1 && a.jf.blocks[0].size == 2 &&
                         std::abs(a.jf.blocks[0].rapidity - Complex(2 * g)) <= 1e-10;
  o.require(one_block, "h = G cos(theta): " + std::to_string(a.jf.blocks.size()) + " block(s), first of size " +
                           std::to_string(a.jf.blocks[0].size) + " at " + sci(a.jf.blocks[0].rapidity.real()));
  const auto b = solve(make(g * std::cos(th) + 0.1));
  const bool two = b.jf.blocks.size() == 2 && b.jf.blocks[0].size == 1 && b.jf.blocks[1].size == 1;
  o.require(two, "h = G cos(theta) + 0.1: " + std::to_string(b.jf.blocks.size()) + " blocks of size 1");
  const auto bundled = solve(load("single_qubit.json"));
  o.require(bundled.jf.max_block_size() == 2, "bundled single_qubit.json reports a size-2 block");
  const double t = seconds_since(t0);
  o.require(t < 1.0, "runtime " + sci(t) + " s (< 1 s)");
  o.summary = "single-qubit defectivity";
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto t0 = Clock::now();
  std::vector<std::pair<std::string, QuadraticLindbladModel>> models{{"single_qubit.json", load("single_qubit.json")},
                                                                      {"ising_pair.json", load("ising_pair.json")}};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int n = seed % 2 ? 2 : 3;
    models.emplace_back("random n=" + std::to_string(n) + " seed=" + std::to_string(seed), random_model(n, seed));
  }
  double worst = 0.0;
  std::string worst_name;
  for (const auto& [name, m] : models) {
    const auto s = solve(m);
    const auto sp = enumerate_spectrum(s.jf);
    const auto cmp = oracle::compare_spectrum(s.model, sp);
    if (cmp.max_deviation >= worst) {
      worst = cmp.max_deviation;
      worst_name = name;
    }
  }
  o.require(worst < 1e-7, "max matched deviation over " + std::to_string(models.size()) + " models " + sci(worst) +
                              " (" + worst_name + ", tol 1e-7)");
  const double t = seconds_since(t0);
  o.require(t < 120.0, "runtime " + sci(t) + " s (< 120 s)");
  o.summary = "oracle spectrum equivalence";
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::vector<QuadraticLindbladModel> models{load("single_qubit.json"), load("ising_pair.json"),
                                             load("ising_chain3.json")};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) models.push_back(random_model(1 + static_cast<int>(seed % 3), seed));
  double worst = 0.0;
  for (const auto& m : models) worst = std::max(worst, oracle::verify_quadratic_form(m).residual);
  o.require(worst < 1e-9, "max residual over " + std::to_string(models.size()) + " models " + sci(worst) +
                              " (tol 1e-9)");
  o.summary = "structural identity";
  return o;
}

Outcome criterion5() {
  Outcome o;
  double literal = 0.0;
  double transposed = 0.0;
  int count = 0;
  for (std::uint64_t seed = 1; count < 10 && seed < 100; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    const auto s = solve(random_model(n, seed));
    const auto ness = classify_ness(s.jf);
    if (!ness.unique || !s.drive.unique) continue;
    const auto on = oracle::oracle_ness(s.model);
    if (!on.unique || !on.witness_found) continue;
    const int d = s.model.dim();
    const CMatrix one = CMatrix::Identity(d, d);
    const CMatrix fourZ = 4.0 * I_unit * s.drive.Z.cast<Complex>();
    literal = std::max(literal, max_abs(CMatrix(on.covariance - (one + fourZ))));
    transposed = std::max(transposed, max_abs(CMatrix(on.covariance - (one + fourZ).transpose())));
    ++count;
  }
  o.require(count == 10, std::to_string(count) + " strictly stable models with n <= 3");
  o.require(literal <= 1e-7, "oracle tr(w_j w_k rho) vs 1 + 4iZ: max dev " + sci(literal) + " (tol 1e-7)");
  o.note("oracle vs (1 + 4iZ)^T = 1 - 4iZ: max dev " + sci(transposed));
  o.summary = "NESS covariance";
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto pair = solve(ising(2));
  const auto np = classify_ness(pair.jf);
  const auto op = oracle::oracle_ness(pair.model);
  o.require(np.stationary_dim == 2 && op.kernel_dim == 2,
            "pair: stationary_dim " + std::to_string(np.stationary_dim) + ", oracle kernel " +
                std::to_string(op.kernel_dim));
  const auto chain = solve(ising(3));
  const auto nc = classify_ness(chain.jf);
  const auto oc = oracle::oracle_ness(chain.model);
  int imaginary = 0;
  for (const auto& b : chain.jf.blocks) imaginary += classify_rapidity(b.rapidity, axis_threshold(chain.jf, 1e-10)) ==
                                                     RapidityClass::Imaginary;
  o.require(nc.stationary_dim > np.stationary_dim && nc.stationary_dim == oc.kernel_dim,
            "three spins: stationary_dim " + std::to_string(nc.stationary_dim) + ", oracle kernel " +
                std::to_string(oc.kernel_dim));
  o.require(imaginary == 2, "three spins: " + std::to_string(imaginary) + " purely imaginary rapidities");
  o.summary = "degeneracy count";
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto t0 = Clock::now();
  bool rb = true;
  for (int l = 0; l <= 20; ++l)
    for (int m = 0; m <= l; ++m) {
      const auto row = comb::restricted_binomial_row(l, m);
      comb::BigInt sum = 0;
      for (std::size_t r = 0; r < row.size(); ++r) {
        sum += row[r];
        rb = rb && row[r] == row[row.size() - 1 - r];
      }
      rb = rb && sum == comb::binomial(l, m);
    }
  o.require(rb, "restricted binomial sum rule and symmetry, l <= 20");
  bool tb = true;
  for (int k = 1; k <= 6; ++k)
    for (int l = 1; l <= 6; ++l)
      tb = tb && comb::tensor_sum_blocks(k, l) == exact::nilpotent_blocks_exact(comb::tensor_sum_matrix(k, l));
  o.require(tb, "tensor-sum block sizes vs exact staircase, k, l <= 6");
  bool nb = true;
  for (int l = 0; l <= 10; ++l)
    for (int m = 0; m <= l; ++m) {
      const auto res = comb::nilpotent_blocks(l, m);
      nb = nb && res.agree && res.largest_block == (l - m) * m + 1;
    }
  o.require(nb, "largest block (l-m)m+1 and conjectured multiset vs exact staircase, l <= 10");
  bool vc = true;
  for (int l = 0; l <= 10; ++l) vc = vc && comb::verify_conjecture(l).all_pass;
  o.require(vc, "verify-conjecture, l <= 10");
  const double t = seconds_since(t0);
  o.require(t < 300.0, "runtime " + sci(t) + " s (< 300 s)");
  o.summary = "combinatorics suite";
  return o;
}

Outcome criterion8() {
  Outcome o;
  double min_re = INFINITY, vv = 0.0, ww = 0.0, aspec = 0.0, adrive = 0.0, lyap = 0.0;
  int axis_defective = 0, axis_blocks = 0;
  const Tolerances tol;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 1 + static_cast<int>(seed % 4);
    const int count = 1 + static_cast<int>((seed / 4) % n);
    const auto s = solve(random_model(n, seed, count));
    const auto nmb = build_V(s.jf, s.drive.Z, s.sm.A, tol.normalization);
    for (const auto& b : s.jf.blocks) {
      min_re = std::min(min_re, b.rapidity.real());
      if (std::abs(b.rapidity.real()) <= 1e-10) {
        ++axis_blocks;
        axis_defective += b.size > 1;
      }
    }
    vv = std::max(vv, nmb.normalization_residual);
    ww = std::max(ww, nmb.orthogonality_residual);
    std::vector<Complex> want;
    Eigen::EigenSolver<RMatrix> ex(s.X, false);
    for (Eigen::Index i = 0; i < ex.eigenvalues().size(); ++i) {
      want.push_back(ex.eigenvalues()(i));
      want.push_back(-ex.eigenvalues()(i));
    }
    Eigen::ComplexEigenSolver<CMatrix> ea(s.sm.A, false);
    Eigen::ComplexEigenSolver<CMatrix> e0(zero_driving_structure_matrix(s.model, s.bath), false);
    const std::vector<Complex> a(ea.eigenvalues().data(), ea.eigenvalues().data() + ea.eigenvalues().size());
    const std::vector<Complex> a0(e0.eigenvalues().data(), e0.eigenvalues().data() + e0.eigenvalues().size());
    const double scale = std::max(1.0, s.jf.scale);
    aspec = std::max(aspec, oracle::matched_max_deviation(a, want) / scale);
    adrive = std::max(adrive, oracle::matched_max_deviation(a, a0) / scale);
    lyap = std::max(lyap, s.drive.residual);
  }
  o.require(min_re >= -1e-10, "min Re beta " + sci(min_re) + " (>= -1e-10)");
  o.require(axis_defective == 0, std::to_string(axis_blocks) + " imaginary-axis blocks, " +
                                     std::to_string(axis_defective) + " of size > 1");
  o.require(vv <= 1e-8, "max |VV^T - J| " + sci(vv) + " (tol 1e-8)");
  o.require(ww <= 1e-8, "max |WW^T - 1| " + sci(ww) + " (tol 1e-8)");
  o.require(aspec <= 1e-7, "spec(A) vs spec(X) u -spec(X): max dev " + sci(aspec) + " (relative, tol 1e-7)");
  o.require(adrive <= 1e-7, "spec(A) vs spec(A at M_i = 0): max dev " + sci(adrive) + " (relative, tol 1e-7)");
  o.require(lyap <= 1e-8, "max Lyapunov residual " + sci(lyap) + " (tol 1e-8)");
  o.summary = "property suites over 200 random models";
  return o;
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--expect-fail" && i + 1 < argc) {
      expected = parse_list(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--expect-fail 1,5]\n";
      return 2;
    }
  }
  Outcome (*criteria[])() = {criterion1, criterion2, criterion3, criterion4,
                             criterion5, criterion6, criterion7, criterion8};
  std::set<int> failed;
  for (int i = 0; i < 8; ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = "exception";
      o.details.push_back(std::string("FAIL ") + e.what());
    }
    std::cout << "criterion " << (i + 1) << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.summary << "\n";
    for (const auto& d : o.details) std::cout << "    " << d << "\n";
    if (!o.pass) failed.insert(i + 1);
  }
  std::cout << "failed:";
  for (int f : failed) std::cout << " " << f;
  if (failed.empty()) std::cout << " none";
  std::cout << "\n";
  if (failed != expected) {
    std::cout << "failures differ from the expected set\n";
    return 1;
  }
  return 0;
}
