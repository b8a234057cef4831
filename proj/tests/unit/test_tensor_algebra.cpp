#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "siginv/errors.hpp"
#include "siginv/tensor_algebra.hpp"

using namespace siginv;

namespace {

const double kSqrt3 = std::sqrt(3.0);

// Points (0,0), (2, 2 sqrt3), (8, 2 sqrt3), (9, 3 sqrt3).
SampledPath example_path() {
  return SampledPath({0, 1, 2, 3}, {0, 0, 2, 2 * kSqrt3, 8, 2 * kSqrt3, 9, 3 * kSqrt3}, 2);
}

SampledPath random_path(std::mt19937_64& rng, int dim, int n) {
  std::normal_distribution<double> g;
  std::vector<double> t(n), v(static_cast<std::size_t>(n) * dim);
  for (int i = 0; i < n; ++i) t[i] = i;
  for (double& x : v) x = g(rng);
  return SampledPath(t, v, dim);
}

TruncatedTensor random_lie_like(std::mt19937_64& rng, int dim, int depth) {
  std::normal_distribution<double> g;
  TruncatedTensor l(dim, depth);
  for (int k = 1; k <= depth; ++k) {
    for (double& x : l.level(k)) x = g(rng) / k;
  }
  return l;
}

double max_diff(const TruncatedTensor& a, const TruncatedTensor& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace

TEST(TruncatedTensor, LevelShapes) {
  TruncatedTensor t(3, 4);
  EXPECT_EQ(t.size(), tensor_size(3, 4));
  for (int k = 0; k <= 4; ++k) EXPECT_EQ(t.level(k).size(), static_cast<std::size_t>(std::pow(3, k)));
  EXPECT_THROW(TruncatedTensor(0, 2), ShapeError);
  EXPECT_THROW(TruncatedTensor(2, -1), ShapeError);
}

TEST(TruncatedTensor, CoeffChecksLetterAndDepth) {
  TruncatedTensor t(2, 2);
  EXPECT_THROW(t.coeff(Word{1, 2, 1}), DepthError);
  EXPECT_THROW(t.coeff(Word{3}), InputError);
  t.coeff_ref(Word{2, 1}) = 4.0;
  EXPECT_EQ(t.level(2)[2], 4.0);
}

TEST(TensorProduct, UnitIsNeutral) {
  std::mt19937_64 rng(1);
  auto b = random_lie_like(rng, 3, 3);
  b.scalar() = 0.7;
  EXPECT_EQ(max_diff(tensor_product(TruncatedTensor::unit(3, 3), b), b), 0.0);
  EXPECT_EQ(max_diff(tensor_product(b, TruncatedTensor::unit(3, 3)), b), 0.0);
}

TEST(TensorProduct, ScalarCase) {
  TruncatedTensor a(1, 2), b(1, 2);
  a.scalar() = b.scalar() = 1.0;
  a.level(1)[0] = 0.3;
  b.level(1)[0] = -1.7;
  const auto c = tensor_product(a, b);
  EXPECT_DOUBLE_EQ(c.scalar(), 1.0);
  EXPECT_DOUBLE_EQ(c.level(1)[0], 0.3 - 1.7);
  EXPECT_DOUBLE_EQ(c.level(2)[0], 0.3 * -1.7);
}

TEST(TensorProduct, ShapeMismatchThrows) {
  EXPECT_THROW(tensor_product(TruncatedTensor(2, 3), TruncatedTensor(3, 3)), ShapeError);
  EXPECT_THROW(tensor_product(TruncatedTensor(2, 3), TruncatedTensor(2, 2)), ShapeError);
}

TEST(TensorProduct, ChenForConcatenatedSegments) {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 10; ++rep) {
    const auto full = random_path(rng, 3, 9);
    std::vector<double> t1(full.times().begin(), full.times().begin() + 5);
    std::vector<double> v1(full.values().begin(), full.values().begin() + 15);
    std::vector<double> t2(full.times().begin() + 4, full.times().end());
    std::vector<double> v2(full.values().begin() + 12, full.values().end());
    const auto s = signature(full, 4);
    const auto chen = tensor_product(signature(SampledPath(t1, v1, 3), 4), signature(SampledPath(t2, v2, 3), 4));
    EXPECT_LT(max_diff(s, chen), 1e-12);
  }
}

TEST(TensorExp, ZeroGivesUnit) {
  EXPECT_EQ(max_diff(tensor_exp(TruncatedTensor(2, 4)), TruncatedTensor::unit(2, 4)), 0.0);
}

TEST(TensorExp, LevelOneIncrement) {
  TruncatedTensor l(2, 2);
  l.level(1)[0] = 1.0;
  l.level(1)[1] = 2.0;
  const auto e = tensor_exp(l);
  EXPECT_DOUBLE_EQ(e.level(1)[0], 1.0);
  EXPECT_DOUBLE_EQ(e.level(1)[1], 2.0);
  const double expect[] = {0.5, 1.0, 1.0, 2.0};
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(e.level(2)[i], expect[i]);
}

TEST(TensorExp, RejectsNonzeroScalar) {
  auto l = TruncatedTensor(2, 2);
  l.scalar() = 1.0;
  EXPECT_THROW(tensor_exp(l), DomainError);
  EXPECT_THROW(tensor_log(TruncatedTensor(2, 2)), DomainError);
}

TEST(TensorExpLog, RoundTrips) {
  std::mt19937_64 rng(3);
  for (int depth = 1; depth <= 6; ++depth) {
    for (int dim = 1; dim <= 3; ++dim) {
      const auto l = random_lie_like(rng, dim, depth);
      EXPECT_LT(max_diff(tensor_log(tensor_exp(l)), l), 1e-9) << dim << " " << depth;
      const auto s = signature(random_path(rng, dim, 6), depth);
      EXPECT_LT(max_diff(tensor_exp(tensor_log(s)), s), 1e-9) << dim << " " << depth;
    }
  }
}

TEST(TensorLog, UnitAndSegment) {
  EXPECT_EQ(max_diff(tensor_log(TruncatedTensor::unit(3, 3)), TruncatedTensor(3, 3)), 0.0);
  const std::vector<double> v{0.4, -1.1, 2.0};
  const auto l = tensor_log(exp_increment(v, 5));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(l.level(1)[i], v[i], 1e-14);
  for (int k = 2; k <= 5; ++k) EXPECT_LT(l.level_max_abs(k), 1e-12);
}

TEST(Signature, ConstantPathIsUnit) {
  const SampledPath p({0, 1, 2}, {1, 2, 1, 2, 1, 2}, 2);
  EXPECT_EQ(max_diff(signature(p, 4), TruncatedTensor::unit(2, 4)), 0.0);
  EXPECT_EQ(word_coefficient(p, Word{1, 2, 2}), 0.0);
}

TEST(Signature, LevyAreaExample) {
  const auto s = signature(example_path(), 2);
  EXPECT_NEAR(s.coeff(Word{1}), 9.0, 1e-12);
  EXPECT_NEAR(s.coeff(Word{2}), 3 * kSqrt3, 1e-12);
  EXPECT_NEAR(s.coeff(Word{1, 1}), 40.5, 1e-12);
  EXPECT_NEAR(s.coeff(Word{1, 2}), 21 * kSqrt3 / 2, 1e-12);
  EXPECT_NEAR(s.coeff(Word{2, 1}), 33 * kSqrt3 / 2, 1e-12);
  EXPECT_NEAR(s.coeff(Word{2, 2}), 13.5, 1e-12);
  EXPECT_NEAR(word_coefficient(example_path(), Word{1}), 9.0, 1e-12);
}

TEST(Signature, CollinearInsertionInvariant) {
  const SampledPath a({0, 1, 2}, {0, 0, 1, 2, 3, 1}, 2);
  const SampledPath b({0, 0.25, 1, 2}, {0, 0, 0.25, 0.5, 1, 2, 3, 1}, 2);
  EXPECT_LT(max_diff(signature(a, 5), signature(b, 5)), 1e-13);
}

TEST(Signature, MatchesWordMapOracle) {
  std::mt19937_64 rng(4);
  for (int dim = 1; dim <= 3; ++dim) {
    const auto p = random_path(rng, dim, 7);
    const auto s = signature(p, 4);
    const auto ref = oracle::signature(p.values(), dim, 4);
    for (const auto& [w, val] : ref) EXPECT_NEAR(s.coeff(Word(w)), val, 1e-11 * (1 + std::abs(val)));
  }
}

TEST(Signature, BudgetEnforced) {
  const SampledPath p({0, 1}, {0, 0, 0, 0, 1, 1, 1, 1}, 4);
  SignatureOptions opt;
  opt.coefficient_budget = 100;
  EXPECT_THROW(signature(p, 4, opt), BudgetError);
  EXPECT_NO_THROW(signature(p, 3, opt));
}

TEST(WordCoefficient, MatchesDenseEntries) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> len(1, 5);
  for (int rep = 0; rep < 40; ++rep) {
    const int dim = 1 + rep % 3;
    const auto p = random_path(rng, dim, 8);
    const auto dense = signature(p, 5);
    std::uniform_int_distribution<int> letter(1, dim);
    std::vector<int> letters(static_cast<std::size_t>(len(rng)));
    for (int& l : letters) l = letter(rng);
    const Word w(letters);
    EXPECT_NEAR(word_coefficient(p, w), dense.coeff(w), 1e-12 * (1 + std::abs(dense.coeff(w))));
  }
}

TEST(WordCoefficient, BatchAgreesWithSingle) {
  std::mt19937_64 rng(6);
  const auto p = random_path(rng, 3, 12);
  const std::vector<Word> words{{1}, {1, 2}, {1, 2, 3}, {1, 2, 2}, {3, 3, 1, 2}, {2}, {}};
  const auto batch = word_coefficients(p, words);
  ASSERT_EQ(batch.size(), words.size());
  for (std::size_t i = 0; i < words.size(); ++i) EXPECT_NEAR(batch[i], word_coefficient(p, words[i]), 1e-13);
  EXPECT_EQ(batch.back(), 1.0);
}

TEST(SampledPath, Validation) {
  EXPECT_THROW(SampledPath({0}, {1}, 1), InputError);
  EXPECT_THROW(SampledPath({0, 0}, {1, 2}, 1), InputError);
  EXPECT_THROW(SampledPath({0, 1}, {1, 2, 3}, 1), InputError);
  EXPECT_THROW(SampledPath({0, 1}, {1, 2}, 0), InputError);
}
