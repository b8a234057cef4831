#include "siginv/word.hpp"

#include <algorithm>
#include <charconv>

#include "siginv/errors.hpp"

namespace siginv {

int Word::max_letter() const noexcept {
  return letters_.empty() ? 0 : *std::max_element(letters_.begin(), letters_.end());
}

Word Word::concat(const Word& other) const {
  std::vector<int> out = letters_;
  out.insert(out.end(), other.letters_.begin(), other.letters_.end());
  return Word(std::move(out));
}

Word Word::append(int letter) const {
  std::vector<int> out = letters_;
  out.push_back(letter);
  return Word(std::move(out));
}

Word Word::drop_last() const {
  std::vector<int> out = letters_;
  out.pop_back();
  return Word(std::move(out));
}

std::string Word::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(letters_[i]);
  }
  return s;
}

Word Word::parse(std::string_view text) {
  std::vector<int> letters;
  if (text.empty()) return Word{};
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t dot = std::min(text.find('.', pos), text.size());
    const auto piece = text.substr(pos, dot - pos);
    int letter = 0;
    const auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), letter);
    if (piece.empty() || ec != std::errc{} || ptr != piece.data() + piece.size() || letter < 1) {
      throw ParseError("malformed word '" + std::string(text) + "'");
    }
    letters.push_back(letter);
    pos = dot + 1;
  }
  return Word(std::move(letters));
}

std::size_t Word::flat_index(int dim) const {
  std::size_t idx = 0;
  for (int l : letters_) idx = idx * static_cast<std::size_t>(dim) + static_cast<std::size_t>(l - 1);
  return idx;
}

Word Word::from_flat_index(std::size_t index, std::size_t length, int dim) {
  std::vector<int> letters(length);
  for (std::size_t i = length; i-- > 0;) {
    letters[i] = static_cast<int>(index % static_cast<std::size_t>(dim)) + 1;
    index /= static_cast<std::size_t>(dim);
  }
  return Word(std::move(letters));
}

}  // namespace siginv
