#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "siginv/errors.hpp"
#include "siginv/lie.hpp"

using namespace siginv;

namespace {

std::vector<Word> to_words(const std::vector<oracle::Letters>& ls) {
  std::vector<Word> out;
  for (const auto& l : ls) out.emplace_back(l);
  return out;
}

double max_diff(const TruncatedTensor& a, const TruncatedTensor& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace

TEST(BetaDim, KnownValues) {
  for (int n = 1; n <= 8; ++n) EXPECT_EQ(beta_dim(1, n), 1);
  EXPECT_EQ(beta_dim(2, 3), 5);
  EXPECT_EQ(beta_dim(2, 4), 8);
  EXPECT_EQ(beta_dim(3, 2), 6);
  EXPECT_EQ(moebius(1), 1);
  EXPECT_EQ(moebius(4), 0);
  EXPECT_EQ(moebius(6), 1);
  EXPECT_EQ(moebius(7), -1);
}

TEST(BetaDim, EqualsLyndonCount) {
  for (int d = 1; d <= 4; ++d) {
    for (int n = 1; n <= 6; ++n) {
      EXPECT_EQ(beta_dim(d, n), static_cast<std::int64_t>(oracle::lyndon_words(d, n).size())) << d << "," << n;
    }
  }
}

TEST(LyndonWords, SmallCases) {
  EXPECT_EQ(lyndon_words(2, 2), (std::vector<Word>{{1}, {2}, {1, 2}}));
  EXPECT_EQ(lyndon_words(2, 3), (std::vector<Word>{{1}, {2}, {1, 2}, {1, 1, 2}, {1, 2, 2}}));
}

TEST(LyndonWords, MatchRotationOracle) {
  for (int d = 1; d <= 3; ++d) {
    for (int n = 1; n <= 5; ++n) {
      const auto words = lyndon_words(d, n);
      EXPECT_EQ(words, to_words(oracle::lyndon_words(d, n)));
      for (const auto& w : words) EXPECT_TRUE(is_lyndon(w));
    }
  }
  EXPECT_FALSE(is_lyndon(Word{2, 1}));
  EXPECT_FALSE(is_lyndon(Word{1, 1}));
}

TEST(LyndonBracket, TwoLetters) {
  const auto e = lyndon_bracket(2, Word{1, 2});
  EXPECT_EQ(e, WordPoly(2, Word{1, 2}) - WordPoly(2, Word{2, 1}));
  LogSignature ls{2, 2, {0, 0, 1}};
  const auto t = lyndon_expand(ls);
  EXPECT_EQ(t.coeff(Word{1, 2}), 1.0);
  EXPECT_EQ(t.coeff(Word{2, 1}), -1.0);
  EXPECT_EQ(t.coeff(Word{1}), 0.0);
}

TEST(LyndonExpand, ZeroAndShape) {
  LogSignature zero{3, 3, std::vector<double>(static_cast<std::size_t>(beta_dim(3, 3)), 0.0)};
  EXPECT_EQ(max_diff(lyndon_expand(zero), TruncatedTensor(3, 3)), 0.0);
  LogSignature bad{3, 3, {1.0, 2.0}};
  EXPECT_THROW(lyndon_expand(bad), ShapeError);
}

TEST(LyndonExpand, ProjectRoundTrip) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  for (int d = 1; d <= 4; ++d) {
    for (int n = 1; n <= 5; ++n) {
      LogSignature ls{d, n, std::vector<double>(static_cast<std::size_t>(beta_dim(d, n)))};
      for (double& c : ls.coords) c = g(rng);
      const auto back = lyndon_project(lyndon_expand(ls));
      ASSERT_EQ(back.coords.size(), ls.coords.size());
      for (std::size_t i = 0; i < ls.coords.size(); ++i) EXPECT_NEAR(back.coords[i], ls.coords[i], 1e-10);
    }
  }
}

TEST(LogSignature, SegmentAndConstant) {
  const SampledPath seg({0, 1}, {0, 0, 0, 0.5, -2, 1}, 3);
  const auto ls = log_signature(seg, 4);
  ASSERT_EQ(ls.coords.size(), static_cast<std::size_t>(beta_dim(3, 4)));
  EXPECT_NEAR(ls.coords[0], 0.5, 1e-14);
  EXPECT_NEAR(ls.coords[1], -2.0, 1e-14);
  EXPECT_NEAR(ls.coords[2], 1.0, 1e-14);
  for (std::size_t i = 3; i < ls.coords.size(); ++i) EXPECT_NEAR(ls.coords[i], 0.0, 1e-13);

  const SampledPath flat({0, 1, 2}, {3, 3, 3}, 1);
  for (double c : log_signature(flat, 3).coords) EXPECT_EQ(c, 0.0);
}

TEST(LogSignature, LevyAreaCoordinate) {
  const double r3 = std::sqrt(3.0);
  const SampledPath p({0, 1, 2, 3}, {0, 0, 2, 2 * r3, 8, 2 * r3, 9, 3 * r3}, 2);
  const auto ls = log_signature(p, 2);
  ASSERT_EQ(ls.coords.size(), 3u);
  EXPECT_NEAR(ls.coords[2], -3 * r3, 1e-10);
}

TEST(LogSignature, ExpRecoversSignature) {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> g;
  for (int d = 2; d <= 3; ++d) {
    std::vector<double> t(8), v(8 * d);
    for (int i = 0; i < 8; ++i) t[i] = i;
    for (double& x : v) x = g(rng);
    const SampledPath p(t, v, d);
    EXPECT_LT(max_diff(signature_from_log(log_signature(p, 5)), signature(p, 5)), 1e-9);
  }
}

TEST(LyndonBasis, CachedAndFingerprinted) {
  const auto a = LyndonBasis::get(3, 4);
  const auto b = LyndonBasis::get(3, 4);
  EXPECT_EQ(a.get(), b.get());
  EXPECT_EQ(a->fingerprint(), LyndonBasis(3, 4).fingerprint());
  EXPECT_NE(a->fingerprint(), LyndonBasis::get(3, 5)->fingerprint());
  EXPECT_EQ(a->fingerprint_hex().size(), 16u);
  const auto [lo, hi] = a->level_range(2);
  EXPECT_EQ(hi - lo, 3u);
}
