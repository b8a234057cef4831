#include "siginv/lie.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>

#include "siginv/errors.hpp"
#include "siginv/rng.hpp"

namespace siginv {

int moebius(int m) {
  if (m < 1) throw DomainError("moebius: argument must be positive");
  int result = 1;
  for (int p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      m /= p;
      if (m % p == 0) return 0;
      result = -result;
    }
  }
  if (m > 1) result = -result;
  return result;
}

std::int64_t beta_dim(int dim, int depth) {
  if (dim < 1 || depth < 1) throw DomainError("beta_dim requires d >= 1 and n >= 1");
  std::int64_t total = 0;
  for (int k = 1; k <= depth; ++k) {
    std::int64_t sum = 0;
    for (int i = 1; i <= k; ++i) {
      if (k % i != 0) continue;
      std::int64_t power = 1;
      for (int e = 0; e < i; ++e) power *= dim;
      sum += moebius(k / i) * power;
    }
    total += sum / k;
  }
  return total;
}

bool is_lyndon(const Word& w) {
  const std::size_t n = w.size();
  if (n == 0) return false;
  const auto& l = w.letters();
  for (std::size_t r = 1; r < n; ++r) {
    std::vector<int> rot(l.begin() + static_cast<std::ptrdiff_t>(r), l.end());
    rot.insert(rot.end(), l.begin(), l.begin() + static_cast<std::ptrdiff_t>(r));
    if (!(l < rot)) return false;
  }
  return true;
}

std::vector<Word> lyndon_words(int dim, int depth) {
  if (dim < 1 || depth < 1) throw DomainError("lyndon_words requires d >= 1 and n >= 1");
  std::vector<Word> out;
  // Duval's generation: emits Lyndon words of length <= n in lexicographic order.
  std::vector<int> w{1};
  while (!w.empty()) {
    out.emplace_back(w);
    const std::size_t m = w.size();
    while (w.size() < static_cast<std::size_t>(depth)) w.push_back(w[w.size() - m]);
    while (!w.empty() && w.back() == dim) w.pop_back();
    if (!w.empty()) ++w.back();
  }
  std::stable_sort(out.begin(), out.end(), [](const Word& a, const Word& b) { return a.size() < b.size(); });
  return out;
}

namespace {

WordPoly bracket(const WordPoly& a, const WordPoly& b) { return a.concat(b) - b.concat(a); }

const WordPoly& bracket_expansion(int dim, const Word& w, std::map<Word, WordPoly, CanonicalLess>& memo) {
  if (auto it = memo.find(w); it != memo.end()) return it->second;
  WordPoly p(dim);
  if (w.size() == 1) {
    p.add_term(w, 1.0);
  } else {
    // Standard factorisation: v is the longest proper suffix that is Lyndon.
    std::size_t split = 1;
    for (; split < w.size(); ++split) {
      Word suffix(std::vector<int>(w.letters().begin() + static_cast<std::ptrdiff_t>(split), w.letters().end()));
      if (is_lyndon(suffix)) break;
    }
    const Word u(std::vector<int>(w.letters().begin(), w.letters().begin() + static_cast<std::ptrdiff_t>(split)));
    const Word v(std::vector<int>(w.letters().begin() + static_cast<std::ptrdiff_t>(split), w.letters().end()));
    const WordPoly pu = bracket_expansion(dim, u, memo);
    const WordPoly pv = bracket_expansion(dim, v, memo);
    p = bracket(pu, pv);
  }
  return memo.emplace(w, std::move(p)).first->second;
}

}  // namespace

WordPoly lyndon_bracket(int dim, const Word& lyndon) {
  if (!is_lyndon(lyndon)) throw DomainError("not a Lyndon word: " + lyndon.to_string());
  std::map<Word, WordPoly, CanonicalLess> memo;
  return bracket_expansion(dim, lyndon, memo);
}

struct LyndonBasis::LevelSystem {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  std::vector<std::size_t> rows;  // flat index of each Lyndon word of the level
};

LyndonBasis::LyndonBasis(int dim, int depth) : dim_(dim), depth_(depth), words_(lyndon_words(dim, depth)) {
  std::map<Word, WordPoly, CanonicalLess> memo;
  expansions_.reserve(words_.size());
  for (const Word& w : words_) expansions_.push_back(bracket_expansion(dim, w, memo));

  level_start_.assign(static_cast<std::size_t>(depth) + 2, words_.size());
  for (std::size_t i = words_.size(); i-- > 0;) level_start_[words_[i].size()] = i;
  for (int k = depth; k >= 0; --k) level_start_[k] = std::min(level_start_[k], level_start_[k + 1]);

  std::string text = "d=" + std::to_string(dim) + ";n=" + std::to_string(depth) + ";";
  for (const Word& w : words_) text += w.to_string() + ",";
  fingerprint_ = fnv1a64(text);

  systems_.resize(static_cast<std::size_t>(depth) + 1);
  for (int k = 1; k <= depth; ++k) {
    const auto [first, last] = level_range(k);
    const auto m = static_cast<Eigen::Index>(last - first);
    auto sys = std::make_shared<LevelSystem>();
    Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t i = first; i < last; ++i) sys->rows.push_back(words_[i].flat_index(dim));
    std::map<std::size_t, Eigen::Index> row_of;
    for (Eigen::Index r = 0; r < m; ++r) row_of[sys->rows[static_cast<std::size_t>(r)]] = r;
    for (std::size_t j = first; j < last; ++j) {
      for (const auto& [w, c] : expansions_[j].terms()) {
        if (auto it = row_of.find(w.flat_index(dim)); it != row_of.end()) {
          mat(it->second, static_cast<Eigen::Index>(j - first)) = c;
        }
      }
    }
    if (m > 0) sys->lu.compute(mat);
    systems_[k] = std::move(sys);
  }
}

std::shared_ptr<const LyndonBasis> LyndonBasis::get(int dim, int depth) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const LyndonBasis>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dim, depth}];
  if (!slot) slot = std::make_shared<const LyndonBasis>(dim, depth);
  return slot;
}

std::pair<std::size_t, std::size_t> LyndonBasis::level_range(int k) const {
  if (k < 1 || k > depth_) return {0, 0};
  return {level_start_[k], level_start_[k + 1]};
}

std::string LyndonBasis::fingerprint_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fingerprint_));
  return buf;
}

TruncatedTensor LyndonBasis::expand(const std::vector<double>& coords) const {
  if (coords.size() != words_.size()) {
    throw ShapeError("log-signature has " + std::to_string(coords.size()) + " coordinates, basis (d=" +
                     std::to_string(dim_) + ", n=" + std::to_string(depth_) + ") needs " +
                     std::to_string(words_.size()));
  }
  TruncatedTensor out(dim_, depth_);
  for (std::size_t j = 0; j < coords.size(); ++j) {
    if (coords[j] == 0.0) continue;
    for (const auto& [w, c] : expansions_[j].terms()) {
      out.level(static_cast<int>(w.size()))[w.flat_index(dim_)] += coords[j] * c;
    }
  }
  return out;
}

std::vector<double> LyndonBasis::project(const TruncatedTensor& lie) const {
  if (lie.dim() != dim_ || lie.depth() != depth_) throw ShapeError("project: tensor shape does not match basis");
  std::vector<double> coords(words_.size(), 0.0);
  for (int k = 1; k <= depth_; ++k) {
    const auto& sys = *systems_[k];
    const auto m = static_cast<Eigen::Index>(sys.rows.size());
    if (m == 0) continue;
    Eigen::VectorXd rhs(m);
    const auto lvl = lie.level(k);
    for (Eigen::Index r = 0; r < m; ++r) rhs(r) = lvl[sys.rows[static_cast<std::size_t>(r)]];
    const Eigen::VectorXd c = sys.lu.solve(rhs);
    const std::size_t first = level_start_[k];
    for (Eigen::Index r = 0; r < m; ++r) coords[first + static_cast<std::size_t>(r)] = c(r);
  }
  return coords;
}

double LyndonBasis::projection_residual(const TruncatedTensor& lie, const std::vector<double>& coords) const {
  const TruncatedTensor back = expand(coords);
  double m = 0.0;
  for (std::size_t i = 1; i < back.size(); ++i) m = std::max(m, std::abs(back.data()[i] - lie.data()[i]));
  return m;
}

LogSignature log_signature(const SampledPath& path, int depth) {
  const auto basis = LyndonBasis::get(path.dim(), depth);
  const TruncatedTensor lg = tensor_log(signature(path, depth));
  return {path.dim(), depth, basis->project(lg)};
}

TruncatedTensor lyndon_expand(const LogSignature& ls) { return LyndonBasis::get(ls.dim, ls.depth)->expand(ls.coords); }

LogSignature lyndon_project(const TruncatedTensor& lie) {
  const auto basis = LyndonBasis::get(lie.dim(), lie.depth());
  return {lie.dim(), lie.depth(), basis->project(lie)};
}

TruncatedTensor signature_from_log(const LogSignature& ls) { return tensor_exp(lyndon_expand(ls)); }

}  // namespace siginv
