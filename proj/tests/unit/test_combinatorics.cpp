#include "support.hpp"

using namespace liouv;
using namespace liouv::comb;

namespace {

/// (l m)_r by brute-force subset enumeration.
std::vector<long long> enumerate_row(int l, int m) {
  const int top = (l - m) * m;
  std::vector<long long> row(top + 1, 0);
  for (unsigned mask = 0; mask < (1u << l); ++mask) {
    if (__builtin_popcount(mask) != m) continue;
    long long s = 0;
    for (int i = 0; i < l; ++i)
      if (mask & (1u << i)) s += i + 1;
    row[s - static_cast<long long>(m) * (m + 1) / 2] += 1;
  }
  return row;
}

}  // namespace

TEST(Combinatorics, RestrictedBinomialSmallRow) {
  const auto row = restricted_binomial_row(4, 2);
  ASSERT_EQ(row.size(), 5u);
  const std::vector<int> want{1, 1, 2, 1, 1};
  for (int r = 0; r < 5; ++r) EXPECT_EQ(row[r], want[r]);
}

TEST(Combinatorics, RestrictedBinomialEdges) {
  for (int l = 0; l <= 6; ++l) EXPECT_EQ(restricted_binomial(l, 0, 0), 1);
  EXPECT_EQ(restricted_binomial(5, 2, -1), 0);
  EXPECT_EQ(restricted_binomial(5, 2, 7), 0);
  BigInt sum = 0;
  for (const auto& v : restricted_binomial_row(12, 6)) sum += v;
  EXPECT_EQ(sum, 924);
}

TEST(Combinatorics, RestrictedBinomialMatchesEnumeration) {
  for (int l = 0; l <= 12; ++l)
    for (int m = 0; m <= l; ++m) {
      const auto row = restricted_binomial_row(l, m);
      const auto want = enumerate_row(l, m);
      ASSERT_EQ(row.size(), want.size());
      for (std::size_t r = 0; r < row.size(); ++r) EXPECT_EQ(row[r], want[r]) << l << " " << m << " " << r;
    }
}

TEST(CombinatoricsProperty, SumRuleAndSymmetry) {
  for (int l = 0; l <= 20; ++l)
    for (int m = 0; m <= l; ++m) {
      const auto row = restricted_binomial_row(l, m);
      BigInt sum = 0;
      for (const auto& v : row) sum += v;
      EXPECT_EQ(sum, binomial(l, m));
      for (std::size_t r = 0; r < row.size(); ++r) EXPECT_EQ(row[r], row[row.size() - 1 - r]);
      EXPECT_EQ(row, restricted_binomial_row(l, l - m));
    }
}

TEST(Combinatorics, TensorBlocksFormula) {
  EXPECT_EQ(tensor_sum_blocks(2, 2), (exact::BlockMultiset{{1, 1}, {3, 1}}));
  EXPECT_EQ(tensor_sum_blocks(5, 1), (exact::BlockMultiset{{5, 1}}));
  EXPECT_EQ(tensor_sum_blocks(3, 5), (exact::BlockMultiset{{3, 1}, {5, 1}, {7, 1}}));
}

TEST(CombinatoricsProperty, TensorBlocksMatchExactStaircase) {
  for (int k = 1; k <= 6; ++k)
    for (int l = 1; l <= 6; ++l) {
      const auto formula = tensor_sum_blocks(k, l);
      long long total = 0;
      for (auto [s, c] : formula) total += s * c;
      EXPECT_EQ(total, k * l);
      const auto D = tensor_sum_matrix(k, l);
      EXPECT_EQ(exact::nilpotent_blocks_exact(D), formula) << k << "x" << l;
      // nilpotency index k + l - 1
      EXPECT_TRUE(exact::power(D, k + l - 1).is_zero());
      EXPECT_FALSE(exact::power(D, k + l - 2).is_zero());
    }
}

TEST(Combinatorics, SeedCoefficients) {
  EXPECT_EQ(seed_coefficients(3, 4, 1).c, std::vector<BigInt>{1});
  const auto s = seed_coefficients(2, 2, 2);
  ASSERT_EQ(s.c.size(), 2u);
  EXPECT_EQ(s.c[0], -1);
  EXPECT_EQ(s.c[1], 1);
  // the seed for r = 2 spans the 1-dimensional kernel of D_{2,2}
  const auto v = seed_vector(2, 2, 2);
  EXPECT_FALSE(v.is_zero());
  EXPECT_TRUE((tensor_sum_matrix(2, 2) * v).is_zero());
}

TEST(Combinatorics, SeedIdentityFourThree) {
  const auto s = seed_coefficients(4, 3, 2);
  // sum_q C(k'+l'+1, l'-j+q) c_q = 0 at j = 1 with k' = 2, l' = 1
  BigInt acc = 0;
  for (std::size_t q = 0; q < s.c.size(); ++q) acc += binomial(4, static_cast<long long>(q) + 1) * s.c[q];
  EXPECT_EQ(acc, 0);
  for (const auto& h : s.homogeneous_sums) EXPECT_EQ(h, 0);
  EXPECT_TRUE(std::any_of(s.nonvanishing_sums.begin(), s.nonvanishing_sums.end(), [](const BigInt& v) { return v != 0; }));
}

TEST(CombinatoricsProperty, SeedChainsHaveTheRightLength) {
  for (int k = 1; k <= 5; ++k)
    for (int l = 1; l <= 5; ++l)
      for (int r = 1; r <= std::min(k, l); ++r) {
        const auto D = tensor_sum_matrix(k, l);
        const auto v = seed_vector(k, l, r);
        const int len = k + l - 2 * r + 1;
        EXPECT_TRUE((exact::power(D, len) * v).is_zero()) << k << l << r;
        EXPECT_FALSE((exact::power(D, len - 1) * v).is_zero()) << k << l << r;
      }
}

TEST(Combinatorics, NilpotentMapSmallCases) {
  // m = 1: a single l x l shift
  const auto m1 = nilpotent_map_matrix(5, 1);
  EXPECT_EQ(exact::nilpotent_blocks_exact(m1), (exact::BlockMultiset{{5, 1}}));
  // m = 0: the 1x1 zero map
  EXPECT_TRUE(nilpotent_map_matrix(4, 0).is_zero());
  // l = 4, m = 2: 6x6, nilpotency index 5
  const auto m42 = nilpotent_map_matrix(4, 2);
  ASSERT_EQ(m42.rows(), 6u);
  EXPECT_TRUE(exact::power(m42, 5).is_zero());
  EXPECT_FALSE(exact::power(m42, 4).is_zero());
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      EXPECT_TRUE(m42(i, j) == 0 || m42(i, j) == 1);
      if (m42(i, j) == 1) EXPECT_GT(i, j);  // weight-ordered basis: strictly lower triangular
    }
}

TEST(Combinatorics, NilpotentBlocksFourTwo) {
  const auto res = nilpotent_blocks(4, 2);
  EXPECT_EQ(res.staircase, (exact::BlockMultiset{{1, 1}, {5, 1}}));
  EXPECT_TRUE(res.agree);
  EXPECT_EQ(res.largest_block, 5);
}

TEST(CombinatoricsProperty, NilpotentBlocksAgreeUpToTen) {
  for (int l = 0; l <= 10; ++l)
    for (int m = 0; m <= l; ++m) {
      const auto res = nilpotent_blocks(l, m);
      EXPECT_TRUE(res.agree) << l << " " << m;
      EXPECT_EQ(res.largest_block, (l - m) * m + 1);
      long long dim = 0, count = 0;
      for (auto [s, c] : res.staircase) {
        dim += s * c;
        count += c;
      }
      EXPECT_EQ(dim, binomial(l, m));
      EXPECT_EQ(count, restricted_binomial(l, m, (l - m) * m / 2));
    }
}

TEST(Combinatorics, GradedStaircaseMatchesDenseStaircase) {
  for (int l = 1; l <= 7; ++l)
    for (int m = 0; m <= l; ++m) {
      const auto dense = exact::nilpotent_blocks_exact(nilpotent_map_matrix(l, m));
      EXPECT_EQ(dense, exact::blocks_from_ranks(graded_rank_staircase(l, m))) << l << " " << m;
    }
}

TEST(Combinatorics, VerifyConjecture) {
  for (int l = 0; l <= 10; ++l) EXPECT_TRUE(verify_conjecture(l).all_pass) << l;
  const auto two = verify_conjecture(2);
  for (const auto& c : two.levels) EXPECT_LE(c.dim_from, 1);
}

TEST(Combinatorics, SizeLimits) {
  Limits lim;
  lim.max_dense_dim = 10;
  EXPECT_THROW(nilpotent_map_matrix(6, 3, lim), Error);
  EXPECT_EQ(floor_div(-1, 2), -1);
  EXPECT_EQ(floor_div(3, 2), 1);
}

TEST(Exact, RankOfRationalMatrix) {
  exact::Matrix<exact::Rational> a(3, 3);
  a(0, 0) = 1;
  a(0, 1) = exact::Rational(1, 2);
  a(1, 0) = 2;
  a(1, 1) = 1;
  a(2, 2) = exact::Rational(3, 7);
  EXPECT_EQ(exact::rank(a), 2u);
}
