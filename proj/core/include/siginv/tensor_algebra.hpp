#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "siginv/path.hpp"
#include "siginv/word.hpp"

namespace siginv {

/// Default cap on the number of coefficients a dense signature may hold.
inline constexpr std::size_t kDefaultCoefficientBudget = std::size_t{1} << 26;

/// Number of coefficients in T^n(R^d): 1 + d + ... + d^n.
std::size_t tensor_size(int dim, int depth);

/// Element of the truncated tensor algebra T^n(R^d). Level k is a dense block
/// of d^k coefficients indexed row-major by words, first letter most
/// significant; level 0 is a single scalar.
class TruncatedTensor {
 public:
  TruncatedTensor() = default;
  /// Zero tensor. Throws ShapeError for dim < 1 or depth < 0.
  TruncatedTensor(int dim, int depth);

  /// The unit (1, 0, ..., 0).
  static TruncatedTensor unit(int dim, int depth);

  int dim() const noexcept { return dim_; }
  int depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<double> level(int k);
  std::span<const double> level(int k) const;
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  double scalar() const { return data_[0]; }
  double& scalar() { return data_[0]; }

  /// <word, A>. Throws DepthError if the word is longer than depth and
  /// InputError if a letter is outside 1..dim.
  double coeff(const Word& w) const;
  double& coeff_ref(const Word& w);

  TruncatedTensor& operator+=(const TruncatedTensor& other);
  TruncatedTensor& operator-=(const TruncatedTensor& other);
  TruncatedTensor& operator*=(double s);
  friend TruncatedTensor operator+(TruncatedTensor a, const TruncatedTensor& b) { return a += b; }
  friend TruncatedTensor operator-(TruncatedTensor a, const TruncatedTensor& b) { return a -= b; }
  friend TruncatedTensor operator*(TruncatedTensor a, double s) { return a *= s; }
  friend TruncatedTensor operator*(double s, TruncatedTensor a) { return a *= s; }

  /// Largest |entry| within level k.
  double level_max_abs(int k) const;

 private:
  void check_same_shape(const TruncatedTensor& other) const;

  int dim_ = 0;
  int depth_ = 0;
  std::vector<double> data_;
  std::vector<std::size_t> offsets_;
};

/// C_k = sum_{i=0..k} A_i (x) B_{k-i}, truncated at depth.
TruncatedTensor tensor_product(const TruncatedTensor& a, const TruncatedTensor& b);

/// exp(L) = sum_k L^k / k!. Requires L's scalar to be 0 (DomainError otherwise).
/// Elements living purely on level 1 take the closed form v^k / k!.
TruncatedTensor tensor_exp(const TruncatedTensor& lie);

/// log(A) = sum_{k>=1} (-1)^{k-1} (A - 1)^k / k. Requires A's scalar to be 1.
TruncatedTensor tensor_log(const TruncatedTensor& group);

/// exp of the level-1 element `increment`: level k holds v^{(x)k} / k!.
TruncatedTensor exp_increment(std::span<const double> increment, int depth);

/// In place A <- A (x) exp(increment), Horner style; no allocation beyond one
/// scratch level.
void multiply_by_exp_increment(TruncatedTensor& a, std::span<const double> increment);

struct SignatureOptions {
  std::size_t coefficient_budget = kDefaultCoefficientBudget;
};

/// Step-n signature of the piecewise-linear path: the ordered product of the
/// exponentials of its increments. Throws BudgetError when the dense result
/// would exceed `options.coefficient_budget`; use word_coefficient(s) then.
TruncatedTensor signature(const SampledPath& path, int depth, const SignatureOptions& options = {});

/// <word, S(path)> without materialising the dense signature.
double word_coefficient(const SampledPath& path, const Word& word);

/// Batch version of word_coefficient. Words share prefix work through a
/// trie, so evaluating all words of a functional costs one pass per segment.
std::vector<double> word_coefficients(const SampledPath& path, std::span<const Word> words);

}  // namespace siginv
