#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace siginv {

/// A word e_{i_1 ... i_k}: a sequence of letters in 1..d. The empty word is
/// the unit of the shuffle algebra and pairs to the level-0 scalar.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<int> letters) : letters_(letters) {}
  explicit Word(std::vector<int> letters) : letters_(std::move(letters)) {}

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  int operator[](std::size_t i) const { return letters_[i]; }
  int back() const { return letters_.back(); }
  const std::vector<int>& letters() const noexcept { return letters_; }

  /// Largest letter, 0 for the empty word.
  int max_letter() const noexcept;

  Word concat(const Word& other) const;
  Word append(int letter) const;
  /// The word without its last letter. Precondition: non-empty.
  Word drop_last() const;

  /// Dot-separated form, e.g. "1.2.1"; the empty word prints as "".
  std::string to_string() const;
  /// Inverse of to_string. Throws ParseError on malformed text.
  static Word parse(std::string_view text);

  /// Row-major index inside level size() of a dense tensor over d letters,
  /// first letter most significant.
  std::size_t flat_index(int dim) const;
  static Word from_flat_index(std::size_t index, std::size_t length, int dim);

  bool operator==(const Word&) const = default;

 private:
  std::vector<int> letters_;
};

/// Canonical order: shorter words first, then lexicographic.
struct CanonicalLess {
  bool operator()(const Word& a, const Word& b) const noexcept {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.letters() < b.letters();
  }
};

}  // namespace siginv
