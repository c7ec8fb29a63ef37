#include "support.hpp"

using namespace liouv;
using namespace fixtures;

namespace {

std::string parse_error_message(const std::string& text) {
  try {
    io::model_from_json(io::parse_document(text, "input.json"));
  } catch (const Error& e) {
    EXPECT_TRUE(is_input_error(e.kind())) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "parsed without error: " << text;
  return "";
}

AnalysisReport analyze_file(const std::string& name, bool full = true) {
  const auto mf = io::load_model_file(model_path(name));
  AnalysisOptions opt;
  opt.tol = mf.tolerances;
  opt.full_spectrum = full;
  return analyze(mf.model, opt, mf.labels);
}

}  // namespace

TEST(Io, BundledSingleQubit) {
  const auto r = analyze_file("single_qubit.json");
  ASSERT_TRUE(r.has_warning(WarningKind::NonDiagonalizable));
  bool found = false;
  for (const auto& w : r.warnings)
    if (w.detail.find("non-diagonalizable: block size 2") != std::string::npos) found = true;
  EXPECT_TRUE(found);
  EXPECT_TRUE(io::format_text(r).find("non-diagonalizable: block size 2") != std::string::npos);
}

TEST(Io, BundledIsingPair) {
  const auto r = analyze_file("ising_pair.json");
  EXPECT_FALSE(r.ness.unique);
  EXPECT_EQ(r.ness.stationary_dim, 2);
  EXPECT_TRUE(r.z_unique);
  EXPECT_LT(max_abs(RMatrix(r.Z - ising_Z_exact({}))), 1e-12);
  EXPECT_TRUE(r.has_warning(WarningKind::CovarianceNotUnique));
  EXPECT_EQ(r.labels["J"], 0.7);
}

TEST(Io, EmptyBath) {
  auto m = zero_model(2);
  m.K(0, 3) = 0.4;
  m.K(3, 0) = -0.4;
  const auto r = analyze(m);
  EXPECT_EQ(r.gap, 0.0);
  EXPECT_EQ(r.ness.covariance, CMatrix::Identity(4, 4));
  EXPECT_FALSE(r.ness.unique);
}

TEST(Io, ReportRoundTrip) {
  for (const char* name : {"single_qubit.json", "ising_pair.json", "ising_chain3.json"}) {
    for (bool full : {false, true}) {
      const auto r = analyze_file(name, full);
      const auto j = io::report_to_json(r);
      const auto back = io::report_from_json(nlohmann::json::parse(j.dump()));
      EXPECT_TRUE(io::equal(r, back)) << name;
      EXPECT_EQ(io::report_to_json(back).dump(), j.dump());
    }
  }
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    AnalysisOptions opt;
    opt.full_spectrum = true;
    const auto r = analyze(random_model(1 + static_cast<int>(seed % 3), seed), opt);
    EXPECT_TRUE(io::equal(r, io::report_from_json(nlohmann::json::parse(io::report_to_json(r).dump()))));
  }
}

TEST(Io, EqualityNoticesChanges) {
  const auto r = analyze_file("ising_pair.json");
  auto s = r;
  s.Z(0, 1) += 1e-15;
  EXPECT_FALSE(io::equal(r, s));
  auto t = r;
  t.warnings.pop_back();
  EXPECT_FALSE(io::equal(r, t));
}

TEST(Io, OutputIsDeterministic) {
  const auto a = io::report_to_json(analyze_file("ising_chain3.json")).dump();
  const auto b = io::report_to_json(analyze_file("ising_chain3.json")).dump();
  EXPECT_EQ(a, b);
  EXPECT_EQ(io::format_text(analyze_file("single_qubit.json")), io::format_text(analyze_file("single_qubit.json")));
}

TEST(Io, AllReportNumbersAreFinite) {
  const auto j = io::report_to_json(analyze_file("ising_chain3.json"));
  std::function<void(const nlohmann::json&)> walk = [&](const nlohmann::json& v) {
    if (v.is_number_float()) EXPECT_TRUE(std::isfinite(v.get<double>()));
    if (v.is_structured())
      for (const auto& c : v) walk(c);
  };
  walk(j);
}

TEST(Io, ModelRoundTrip) {
  const auto m = validate_model(random_model(2, 77));
  const auto back = io::model_from_json(nlohmann::json::parse(io::model_to_json(m).dump()));
  EXPECT_EQ(back.model.K, m.K);
  ASSERT_EQ(back.model.lindblad_vectors.size(), m.lindblad_vectors.size());
  for (std::size_t i = 0; i < m.lindblad_vectors.size(); ++i)
    EXPECT_EQ(back.model.lindblad_vectors[i], m.lindblad_vectors[i]);
}

TEST(Io, MalformedJsonHasLocation) {
  const auto msg = parse_error_message("{\n  \"n\": 1,\n  \"K\": [[0, 1], [-1 0]]\n}");
  EXPECT_NE(msg.find("input.json:3:"), std::string::npos) << msg;
}

TEST(Io, FieldDiagnostics) {
  EXPECT_NE(parse_error_message(R"({"K": [[0]], "lindblad": []})").find("'n'"), std::string::npos);
  EXPECT_NE(parse_error_message(R"({"n": 1, "K": [[0, 1], [-1, 0]], "lindblad": [[[1, 0], [2]]]})")
                .find("lindblad[0][1]"),
            std::string::npos);
  EXPECT_NE(parse_error_message(R"({"n": 1, "K": [[0, 1], [-1, "x"]], "lindblad": []})").find("K[1][1]"),
            std::string::npos);
  EXPECT_NE(parse_error_message(R"({"n": 1, "K": [[0, 1], [-1, 0]], "lindblad": [], "tolerances": {"rnak": 1}})")
                .find("tolerances.rnak"),
            std::string::npos);
  EXPECT_NE(parse_error_message(R"({"n": 1, "K": [[0, 1], [-1, 0]], "lindblad": [], "extra": 1})").find("extra"),
            std::string::npos);
  EXPECT_NE(parse_error_message(R"({"n": 1, "K": [[0, 1], [-1, 0]], "lindblad": [], "tolerances": {"rank": -1}})")
                .find("must be > 0"),
            std::string::npos);
}

TEST(Io, TolerancesOverrideDefaults) {
  const auto mf = io::model_from_json(
      nlohmann::json::parse(R"({"n": 1, "K": [[0, 1], [-1, 0]], "lindblad": [], "tolerances": {"rank": 1e-6}})"));
  EXPECT_EQ(mf.tolerances.rank, 1e-6);
  EXPECT_EQ(mf.tolerances.cluster, Tolerances{}.cluster);
}

TEST(Io, RaggedKIsDimensionMismatch) {
  try {
    io::model_from_json(nlohmann::json::parse(R"({"n": 1, "K": [[0, 1], [-1]], "lindblad": []})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(Io, SpectrumLimitWarning) {
  AnalysisOptions opt;
  opt.limit = 10;
  opt.full_spectrum = true;
  const auto r = analyze(random_model(3, 2), opt);
  EXPECT_TRUE(r.has_warning(WarningKind::SpectrumTruncated));
  EXPECT_FALSE(r.spectrum.full_listed);
  EXPECT_EQ(r.spectrum.occupation_count, -1);
}
