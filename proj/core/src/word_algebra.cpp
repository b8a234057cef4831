#include "siginv/word_algebra.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "siginv/errors.hpp"

namespace siginv {

WordPoly::WordPoly(int alphabet, const Word& w, double c) : alphabet_(alphabet) { add_term(w, c); }

double WordPoly::operator[](const Word& w) const {
  const auto it = terms_.find(w);
  return it == terms_.end() ? 0.0 : it->second;
}

void WordPoly::add_term(const Word& w, double c) {
  if (w.max_letter() > alphabet_) {
    throw InputError("word " + w.to_string() + " exceeds alphabet size " + std::to_string(alphabet_));
  }
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

std::size_t WordPoly::max_length() const noexcept { return terms_.empty() ? 0 : terms_.rbegin()->first.size(); }

double WordPoly::l1_norm() const noexcept {
  double s = 0.0;
  for (const auto& [w, c] : terms_) s += std::abs(c);
  return s;
}

void WordPoly::check_alphabet(const WordPoly& other) const {
  if (alphabet_ != other.alphabet_) {
    throw ShapeError("alphabet mismatch: " + std::to_string(alphabet_) + " vs " + std::to_string(other.alphabet_));
  }
}

WordPoly& WordPoly::operator+=(const WordPoly& other) {
  check_alphabet(other);
  for (const auto& [w, c] : other.terms_) add_term(w, c);
  return *this;
}

WordPoly& WordPoly::operator-=(const WordPoly& other) {
  check_alphabet(other);
  for (const auto& [w, c] : other.terms_) add_term(w, -c);
  return *this;
}

WordPoly& WordPoly::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, c] : terms_) c *= s;
  return *this;
}

WordPoly WordPoly::concat(const WordPoly& other) const {
  check_alphabet(other);
  WordPoly out(alphabet_);
  for (const auto& [u, a] : terms_) {
    for (const auto& [v, b] : other.terms_) out.add_term(u.concat(v), a * b);
  }
  return out;
}

WordPoly WordPoly::append(int letter) const {
  WordPoly out(alphabet_);
  for (const auto& [w, c] : terms_) out.add_term(w.append(letter), c);
  return out;
}

std::string WordPoly::to_string() const {
  std::string s;
  char buf[64];
  for (const auto& [w, c] : terms_) {
    if (!s.empty()) s += ' ';
    std::snprintf(buf, sizeof buf, "%+.17g", c);
    s += buf;
    s += '*';
    s += w.empty() ? "()" : w.to_string();
  }
  return s;
}

WordPoly WordPoly::parse(int alphabet, std::string_view text) {
  WordPoly out(alphabet);
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    const auto star = token.find('*');
    if (star == std::string::npos) throw ParseError("missing '*' in term '" + token + "'");
    double c = 0.0;
    try {
      std::size_t used = 0;
      c = std::stod(token.substr(0, star), &used);
      if (used != star) throw ParseError("bad coefficient in term '" + token + "'");
    } catch (const std::logic_error&) {
      throw ParseError("bad coefficient in term '" + token + "'");
    }
    const std::string word = token.substr(star + 1);
    out.add_term(word == "()" ? Word{} : Word::parse(word), c);
  }
  return out;
}

namespace {

void interleave(const Word& u, const Word& v, std::size_t i, std::size_t j, std::vector<int>& buf, double c,
                WordPoly& out) {
  if (i == u.size() && j == v.size()) {
    out.add_term(Word(buf), c);
    return;
  }
  if (i < u.size()) {
    buf.push_back(u[i]);
    interleave(u, v, i + 1, j, buf, c, out);
    buf.pop_back();
  }
  if (j < v.size()) {
    buf.push_back(v[j]);
    interleave(u, v, i, j + 1, buf, c, out);
    buf.pop_back();
  }
}

}  // namespace

WordPoly shuffle(int alphabet, const Word& u, const Word& v) {
  WordPoly out(alphabet);
  std::vector<int> buf;
  buf.reserve(u.size() + v.size());
  interleave(u, v, 0, 0, buf, 1.0, out);
  return out;
}

WordPoly shuffle(const WordPoly& u, const WordPoly& v) {
  if (u.alphabet() != v.alphabet()) throw ShapeError("shuffle: alphabet mismatch");
  WordPoly out(u.alphabet());
  std::vector<int> buf;
  for (const auto& [wu, cu] : u.terms()) {
    for (const auto& [wv, cv] : v.terms()) {
      buf.clear();
      interleave(wu, wv, 0, 0, buf, cu * cv, out);
    }
  }
  return out;
}

WordPoly shuffle_power(const WordPoly& u, int power) {
  WordPoly out(u.alphabet(), Word{}, 1.0);
  for (int k = 0; k < power; ++k) out = shuffle(out, u);
  return out;
}

WordPoly half_shuffle_right(const WordPoly& u, const WordPoly& v) {
  if (u.alphabet() != v.alphabet()) throw ShapeError("half_shuffle_right: alphabet mismatch");
  WordPoly out(u.alphabet());
  for (const auto& [w, c] : v.terms()) {
    if (w.empty()) throw DomainError("half_shuffle_right: empty word on the right");
    const WordPoly prefix(v.alphabet(), w.drop_last(), c);
    out += shuffle(u, prefix).append(w.back());
  }
  return out;
}

double pair(const WordPoly& f, const TruncatedTensor& a) {
  if (f.alphabet() > a.dim()) {
    throw ShapeError("pair: alphabet " + std::to_string(f.alphabet()) + " exceeds tensor dimension " +
                     std::to_string(a.dim()));
  }
  double s = 0.0;
  for (const auto& [w, c] : f.terms()) s += c * a.coeff(w);
  return s;
}

double pair_on_path(const WordPoly& f, const SampledPath& path) {
  std::vector<Word> words;
  std::vector<double> coefs;
  words.reserve(f.size());
  coefs.reserve(f.size());
  for (const auto& [w, c] : f.terms()) {
    words.push_back(w);
    coefs.push_back(c);
  }
  const auto values = word_coefficients(path, words);
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += coefs[i] * values[i];
  return s;
}

}  // namespace siginv
