#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

#include "siginv/path.hpp"
#include "siginv/tensor_algebra.hpp"
#include "siginv/word.hpp"

namespace siginv {

/// Finite real linear combination of words over the alphabet {1..d}. Terms
/// are kept in canonical (length, lexicographic) order and exact zeros are
/// dropped.
class WordPoly {
 public:
  using Terms = std::map<Word, double, CanonicalLess>;

  WordPoly() = default;
  explicit WordPoly(int alphabet) : alphabet_(alphabet) {}
  /// c * w. Throws InputError if a letter exceeds the alphabet.
  WordPoly(int alphabet, const Word& w, double c = 1.0);

  int alphabet() const noexcept { return alphabet_; }
  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  /// Coefficient of w (0 when absent).
  double operator[](const Word& w) const;
  void add_term(const Word& w, double c);

  /// Longest word length, 0 for the zero polynomial.
  std::size_t max_length() const noexcept;
  /// Sum of |coefficients|.
  double l1_norm() const noexcept;

  WordPoly& operator+=(const WordPoly& other);
  WordPoly& operator-=(const WordPoly& other);
  WordPoly& operator*=(double s);
  friend WordPoly operator+(WordPoly a, const WordPoly& b) { return a += b; }
  friend WordPoly operator-(WordPoly a, const WordPoly& b) { return a -= b; }
  friend WordPoly operator*(WordPoly a, double s) { return a *= s; }
  friend WordPoly operator*(double s, WordPoly a) { return a *= s; }

  /// Concatenation product (non-commutative), bilinear in the terms.
  WordPoly concat(const WordPoly& other) const;
  /// Right multiplication by a single letter: w -> w.letter.
  WordPoly append(int letter) const;

  /// Text form "+0.5*2.1 -1*1.2"; the empty word is written "()".
  std::string to_string() const;
  static WordPoly parse(int alphabet, std::string_view text);

  bool operator==(const WordPoly&) const = default;

 private:
  void check_alphabet(const WordPoly& other) const;

  int alphabet_ = 0;
  Terms terms_;
};

/// Shuffle of two words: sum over all interleavings, with multiplicity.
WordPoly shuffle(int alphabet, const Word& u, const Word& v);
/// Bilinear shuffle product.
WordPoly shuffle(const WordPoly& u, const WordPoly& v);
/// u shuffled with itself `power` times; power 0 gives the empty word.
WordPoly shuffle_power(const WordPoly& u, int power);

/// Right half-shuffle u > v, the bilinear extension of
///   u > e_j = u e_j,   u > (w e_j) = (u > w + w > u) e_j,
/// evaluated through the equivalent closed form u > (w e_j) = (u sh w) e_j.
/// Throws DomainError if v has an empty-word term.
WordPoly half_shuffle_right(const WordPoly& u, const WordPoly& v);

/// sum_w f(w) <w, A>. Throws DepthError for words longer than A.depth().
double pair(const WordPoly& f, const TruncatedTensor& a);

/// sum_w f(w) <w, S(path)> with coefficients fetched on demand, so no dense
/// signature is built.
double pair_on_path(const WordPoly& f, const SampledPath& path);

}  // namespace siginv
