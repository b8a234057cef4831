#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "siginv/errors.hpp"
#include "siginv/word_algebra.hpp"

using namespace siginv;

namespace {

WordPoly from_series(int alphabet, const oracle::Series& s) {
  WordPoly p(alphabet);
  for (const auto& [w, c] : s) p.add_term(Word(w), c);
  return p;
}

SampledPath random_path(std::mt19937_64& rng, int dim, int n) {
  std::normal_distribution<double> g;
  std::vector<double> t(n), v(static_cast<std::size_t>(n) * dim);
  for (int i = 0; i < n; ++i) t[i] = i;
  for (double& x : v) x = g(rng);
  return SampledPath(t, v, dim);
}

Word random_word(std::mt19937_64& rng, int dim, int min_len, int max_len) {
  std::uniform_int_distribution<int> len(min_len, max_len), letter(1, dim);
  std::vector<int> w(static_cast<std::size_t>(len(rng)));
  for (int& l : w) l = letter(rng);
  return Word(w);
}

}  // namespace

TEST(Word, TextRoundTripAndIndex) {
  const Word w{2, 1, 3};
  EXPECT_EQ(w.to_string(), "2.1.3");
  EXPECT_EQ(Word::parse("2.1.3"), w);
  EXPECT_EQ(Word::parse(""), Word{});
  EXPECT_THROW(Word::parse("1..2"), ParseError);
  EXPECT_THROW(Word::parse("x"), ParseError);
  EXPECT_EQ(w.flat_index(3), 1u * 9 + 0u * 3 + 2u);
  EXPECT_EQ(Word::from_flat_index(w.flat_index(3), 3, 3), w);
}

TEST(Shuffle, TwoLetters) {
  const auto s = shuffle(2, Word{1}, Word{2});
  EXPECT_EQ(s, WordPoly(2, Word{1, 2}) + WordPoly(2, Word{2, 1}));
  EXPECT_EQ(shuffle(1, Word{1}, Word{1}), WordPoly(1, Word{1, 1}, 2.0));
}

TEST(Shuffle, EmptyWordIsUnit) {
  const WordPoly u = WordPoly(3, Word{3, 1}) + WordPoly(3, Word{2}, -0.5);
  EXPECT_EQ(shuffle(WordPoly(3, Word{}), u), u);
  EXPECT_EQ(shuffle_power(u, 0), WordPoly(3, Word{}));
}

TEST(Shuffle, MatchesRecursiveOracle) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 30; ++rep) {
    const auto u = random_word(rng, 3, 0, 3);
    const auto v = random_word(rng, 3, 0, 3);
    EXPECT_EQ(shuffle(3, u, v), from_series(3, oracle::shuffle(u.letters(), v.letters())));
  }
}

TEST(HalfShuffle, BaseCase) {
  EXPECT_EQ(half_shuffle_right(WordPoly(2, Word{1}), WordPoly(2, Word{2})), WordPoly(2, Word{1, 2}));
}

TEST(HalfShuffle, HalvesAddToShuffle) {
  const WordPoly e1(2, Word{1}), e2(2, Word{2});
  EXPECT_EQ(half_shuffle_right(e1, e2) + half_shuffle_right(e2, e1), shuffle(e1, e2));
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 20; ++rep) {
    const WordPoly u(3, random_word(rng, 3, 1, 3)), v(3, random_word(rng, 3, 1, 3));
    const auto lhs = half_shuffle_right(u, v) + half_shuffle_right(v, u);
    const auto rhs = shuffle(u, v);
    for (const auto& [w, c] : rhs.terms()) EXPECT_NEAR(lhs[w], c, 1e-12);
    EXPECT_EQ(lhs.size(), rhs.size());
  }
}

TEST(HalfShuffle, MatchesRecursiveOracle) {
  EXPECT_EQ(half_shuffle_right(WordPoly(4, Word{1, 2}), WordPoly(4, Word{3, 4})),
            from_series(4, oracle::half_shuffle({1, 2}, {3, 4})));
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 30; ++rep) {
    const auto u = random_word(rng, 4, 1, 3);
    const auto v = random_word(rng, 4, 1, 3);
    EXPECT_EQ(half_shuffle_right(WordPoly(4, u), WordPoly(4, v)),
              from_series(4, oracle::half_shuffle(u.letters(), v.letters())));
  }
}

TEST(HalfShuffle, RejectsEmptyRightFactor) {
  EXPECT_THROW(half_shuffle_right(WordPoly(2, Word{1}), WordPoly(2, Word{})), DomainError);
}

TEST(Pair, LevyAreaExample) {
  const double r3 = std::sqrt(3.0);
  const SampledPath p({0, 1, 2, 3}, {0, 0, 2, 2 * r3, 8, 2 * r3, 9, 3 * r3}, 2);
  const WordPoly f = WordPoly(2, Word{1, 2}) - WordPoly(2, Word{2, 1});
  EXPECT_NEAR(pair(f, signature(p, 2)), -6 * r3, 1e-12);
  EXPECT_NEAR(pair_on_path(f, p), -6 * r3, 1e-12);
}

TEST(Pair, EmptyWordOnGrouplike) {
  std::mt19937_64 rng(14);
  EXPECT_DOUBLE_EQ(pair(WordPoly(2, Word{}), signature(random_path(rng, 2, 5), 3)), 1.0);
}

TEST(Pair, ShuffleIdentity) {
  std::mt19937_64 rng(15);
  for (int rep = 0; rep < 25; ++rep) {
    const int dim = 2 + rep % 3;
    const auto p = random_path(rng, dim, 6);
    const WordPoly u(dim, random_word(rng, dim, 1, 3)), v(dim, random_word(rng, dim, 1, 3));
    const auto s = signature(p, 6);
    const double lhs = pair(shuffle(u, v), s);
    const double rhs = pair(u, s) * pair(v, s);
    EXPECT_NEAR(lhs, rhs, 1e-9 * (1 + std::abs(rhs)));
  }
}

TEST(Pair, HalfShuffleIsIteratedIntegral) {
  // <u > v, S_{0,t}> = int_0^t <u, S_{0,s}> d<v, S_{0,s}>; on a fine
  // grid the trapezoid Stieltjes sum converges to it at O(h^2).
  const int n = 4001;
  std::vector<double> t(n), v(2 * n);
  for (int i = 0; i < n; ++i) {
    t[i] = i / (n - 1.0);
    v[2 * i] = std::sin(3 * t[i]);
    v[2 * i + 1] = t[i] * t[i];
  }
  const SampledPath p(t, v, 2);
  const WordPoly u(2, Word{1}), w(2, Word{2, 1});
  // Running values of <u,S_{0,s}> and <w,S_{0,s}> along the grid.
  std::vector<double> uu(n), ww(n);
  double x1 = 0.0, x21 = 0.0;
  for (int i = 1; i < n; ++i) {
    const double d1 = v[2 * i] - v[2 * i - 2];
    const double x2_prev = v[2 * i - 1] - v[1];
    const double d2 = v[2 * i + 1] - v[2 * i - 1];
    x21 += x2_prev * d1 + 0.5 * d2 * d1;
    x1 += d1;
    uu[i] = x1;
    ww[i] = x21;
  }
  double acc = 0.0;
  for (int i = 1; i < n; ++i) acc += 0.5 * (uu[i - 1] + uu[i]) * (ww[i] - ww[i - 1]);
  EXPECT_NEAR(pair_on_path(half_shuffle_right(u, w), p), acc, 1e-6);
}

TEST(PairOnPath, AgreesWithDense) {
  std::mt19937_64 rng(16);
  for (int rep = 0; rep < 20; ++rep) {
    const auto p = random_path(rng, 3, 7);
    WordPoly f(3);
    for (int k = 0; k < 5; ++k) f.add_term(random_word(rng, 3, 0, 4), std::normal_distribution<double>()(rng));
    const double dense = pair(f, signature(p, 4));
    EXPECT_NEAR(pair_on_path(f, p), dense, 1e-10 * (1 + std::abs(dense)));
  }
}

TEST(PairOnPath, SingleIncrement) {
  const auto g = oracle::linspace(0.0, 2.0 * std::numbers::pi, 50);
  std::vector<double> v;
  for (double t : g) {
    v.push_back(t);
    v.push_back(std::cos(t));
  }
  EXPECT_NEAR(pair_on_path(WordPoly(2, Word{1}), SampledPath(g, v, 2)), 2.0 * std::numbers::pi, 1e-13);
}

TEST(Pair, DepthChecked) {
  EXPECT_THROW(pair(WordPoly(2, Word{1, 2, 1}), TruncatedTensor::unit(2, 2)), DepthError);
}

TEST(WordPoly, TextRoundTrip) {
  const WordPoly f = WordPoly(3, Word{}, 2.0) + WordPoly(3, Word{2, 1}, 0.5) - WordPoly(3, Word{3});
  EXPECT_EQ(WordPoly::parse(3, f.to_string()), f);
  EXPECT_THROW(WordPoly(2, Word{3}), InputError);
}
