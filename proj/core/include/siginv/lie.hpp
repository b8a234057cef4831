#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "siginv/path.hpp"
#include "siginv/tensor_algebra.hpp"
#include "siginv/word.hpp"
#include "siginv/word_algebra.hpp"

namespace siginv {

/// Dimension of the step-n free Lie algebra over R^d (Witt's formula summed
/// over levels 1..n).
std::int64_t beta_dim(int dim, int depth);

/// Möbius function; exposed for tests.
int moebius(int m);

/// All Lyndon words over {1..d} of length <= n in (length, lexicographic) order.
std::vector<Word> lyndon_words(int dim, int depth);

/// True iff w is strictly smaller than each of its proper rotations.
bool is_lyndon(const Word& w);

/// Lyndon basis of L^n(R^d): the words plus the tensor expansion of each
/// word's standard bracketing. Built once per (d, n) and shared.
class LyndonBasis {
 public:
  /// Cached, thread-safe accessor.
  static std::shared_ptr<const LyndonBasis> get(int dim, int depth);

  LyndonBasis(int dim, int depth);

  int dim() const noexcept { return dim_; }
  int depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return words_.size(); }
  const std::vector<Word>& words() const noexcept { return words_; }
  const std::vector<WordPoly>& expansions() const noexcept { return expansions_; }

  /// Index range [first, last) of the Lyndon words of length k.
  std::pair<std::size_t, std::size_t> level_range(int k) const;

  /// Stable 64-bit FNV-1a hash of (d, n, ordered words); stored in artifacts
  /// so that coordinate orders can be checked when they are read back.
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }
  std::string fingerprint_hex() const;

  /// Lie element sum_j coords[j] * expansion_j.
  TruncatedTensor expand(const std::vector<double>& coords) const;

  /// Lyndon coordinates of a Lie element. Solved level by level on the rows
  /// indexed by the Lyndon words themselves, where the expansion matrix is
  /// unitriangular.
  std::vector<double> project(const TruncatedTensor& lie) const;

  /// max |M c - L| over all entries of the given Lie element; a diagnostic
  /// for how far `lie` is from the span of the basis.
  double projection_residual(const TruncatedTensor& lie, const std::vector<double>& coords) const;

 private:
  int dim_;
  int depth_;
  std::vector<Word> words_;
  std::vector<WordPoly> expansions_;
  std::vector<std::size_t> level_start_;
  std::uint64_t fingerprint_ = 0;
  // Per level: LU factors of the square system, stored column-major.
  struct LevelSystem;
  std::vector<std::shared_ptr<const LevelSystem>> systems_;
};

/// Coordinates of a log-signature in the Lyndon basis.
struct LogSignature {
  int dim = 0;
  int depth = 0;
  std::vector<double> coords;
};

/// Standard bracketing expansion of a single Lyndon word.
WordPoly lyndon_bracket(int dim, const Word& lyndon);

/// tensor_log(signature(path, n)) in Lyndon coordinates.
LogSignature log_signature(const SampledPath& path, int depth);

/// Lie element with the given Lyndon coordinates. Throws ShapeError when
/// coords.size() != beta_dim(dim, depth).
TruncatedTensor lyndon_expand(const LogSignature& ls);

/// Lyndon coordinates of a Lie element (inverse of lyndon_expand).
LogSignature lyndon_project(const TruncatedTensor& lie);

/// exp(lyndon_expand(ls)): the signature the coordinates describe.
TruncatedTensor signature_from_log(const LogSignature& ls);

}  // namespace siginv
