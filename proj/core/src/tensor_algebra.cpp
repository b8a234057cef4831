#include "siginv/tensor_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "siginv/errors.hpp"

namespace siginv {
namespace {

std::vector<double> inverse_factorials(int n) {
  std::vector<double> out(static_cast<std::size_t>(n) + 1, 1.0);
  for (int k = 1; k <= n; ++k) out[k] = out[k - 1] / k;
  return out;
}

constexpr double kScalarTolerance = 1e-12;

}  // namespace

std::size_t tensor_size(int dim, int depth) {
  std::size_t total = 0;
  std::size_t level = 1;
  for (int k = 0; k <= depth; ++k) {
    total += level;
    level *= static_cast<std::size_t>(dim);
  }
  return total;
}

TruncatedTensor::TruncatedTensor(int dim, int depth) : dim_(dim), depth_(depth) {
  if (dim < 1) throw ShapeError("tensor dimension must be >= 1");
  if (depth < 0) throw ShapeError("tensor depth must be >= 0");
  offsets_.resize(static_cast<std::size_t>(depth) + 2);
  std::size_t level = 1;
  offsets_[0] = 0;
  for (int k = 0; k <= depth; ++k) {
    offsets_[k + 1] = offsets_[k] + level;
    level *= static_cast<std::size_t>(dim);
  }
  data_.assign(offsets_.back(), 0.0);
}

TruncatedTensor TruncatedTensor::unit(int dim, int depth) {
  TruncatedTensor t(dim, depth);
  t.data_[0] = 1.0;
  return t;
}

std::span<double> TruncatedTensor::level(int k) {
  return {data_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]};
}

std::span<const double> TruncatedTensor::level(int k) const {
  return {data_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]};
}

double TruncatedTensor::coeff(const Word& w) const {
  if (w.size() > static_cast<std::size_t>(depth_)) {
    throw DepthError("word " + w.to_string() + " longer than depth " + std::to_string(depth_));
  }
  for (int l : w.letters()) {
    if (l < 1 || l > dim_) throw InputError("letter " + std::to_string(l) + " outside alphabet 1.." + std::to_string(dim_));
  }
  return data_[offsets_[w.size()] + w.flat_index(dim_)];
}

double& TruncatedTensor::coeff_ref(const Word& w) {
  (void)coeff(w);  // validation
  return data_[offsets_[w.size()] + w.flat_index(dim_)];
}

void TruncatedTensor::check_same_shape(const TruncatedTensor& other) const {
  if (dim_ != other.dim_ || depth_ != other.depth_) {
    throw ShapeError("tensor shape mismatch: (d=" + std::to_string(dim_) + ", n=" + std::to_string(depth_) +
                     ") vs (d=" + std::to_string(other.dim_) + ", n=" + std::to_string(other.depth_) + ")");
  }
}

TruncatedTensor& TruncatedTensor::operator+=(const TruncatedTensor& other) {
  check_same_shape(other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

TruncatedTensor& TruncatedTensor::operator-=(const TruncatedTensor& other) {
  check_same_shape(other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

TruncatedTensor& TruncatedTensor::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

double TruncatedTensor::level_max_abs(int k) const {
  double m = 0.0;
  for (double v : level(k)) m = std::max(m, std::abs(v));
  return m;
}

TruncatedTensor tensor_product(const TruncatedTensor& a, const TruncatedTensor& b) {
  if (a.dim() != b.dim() || a.depth() != b.depth()) {
    throw ShapeError("tensor_product: shape mismatch");
  }
  TruncatedTensor c(a.dim(), a.depth());
  for (int k = 0; k <= a.depth(); ++k) {
    auto ck = c.level(k);
    for (int i = 0; i <= k; ++i) {
      const auto ai = a.level(i);
      const auto bj = b.level(k - i);
      const std::size_t nb = bj.size();
      for (std::size_t p = 0; p < ai.size(); ++p) {
        const double av = ai[p];
        if (av == 0.0) continue;
        double* dst = ck.data() + p * nb;
        for (std::size_t q = 0; q < nb; ++q) dst[q] += av * bj[q];
      }
    }
  }
  return c;
}

TruncatedTensor exp_increment(std::span<const double> increment, int depth) {
  const int d = static_cast<int>(increment.size());
  TruncatedTensor out = TruncatedTensor::unit(d, depth);
  for (int k = 1; k <= depth; ++k) {
    const auto prev = out.level(k - 1);
    auto cur = out.level(k);
    const double inv_k = 1.0 / k;
    for (std::size_t p = 0; p < prev.size(); ++p) {
      for (int j = 0; j < d; ++j) cur[p * d + j] = prev[p] * increment[j] * inv_k;
    }
  }
  return out;
}

void multiply_by_exp_increment(TruncatedTensor& a, std::span<const double> increment) {
  const int d = a.dim();
  if (static_cast<int>(increment.size()) != d) throw ShapeError("increment width does not match tensor dimension");
  const int n = a.depth();
  std::size_t top = 1;
  for (int k = 0; k < n; ++k) top *= static_cast<std::size_t>(d);
  std::vector<double> cur(top), next(top);
  // Level k of A exp(v) is sum_i A_i v^{k-i}/(k-i)!; evaluated as
  // (((A_0 v/k + A_1) v/(k-1) + A_2) ... ) v/1 + A_k. Going from the top level
  // down keeps the lower levels unmodified until they are needed.
  for (int k = n; k >= 1; --k) {
    std::size_t len = 1;
    cur[0] = a.level(0)[0];
    for (int j = 1; j <= k; ++j) {
      const double factor = 1.0 / static_cast<double>(k - j + 1);
      const auto aj = a.level(j);
      for (std::size_t p = 0; p < len; ++p) {
        const double cp = cur[p] * factor;
        for (int q = 0; q < d; ++q) next[p * d + q] = cp * increment[q] + aj[p * d + q];
      }
      len *= static_cast<std::size_t>(d);
      if (j < k) std::swap(cur, next);
    }
    auto ak = a.level(k);
    std::copy(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(len), ak.begin());
  }
}

TruncatedTensor tensor_exp(const TruncatedTensor& lie) {
  if (std::abs(lie.scalar()) > kScalarTolerance) {
    throw DomainError("tensor_exp requires a zero scalar term, got " + std::to_string(lie.scalar()));
  }
  bool level_one_only = true;
  for (int k = 2; k <= lie.depth() && level_one_only; ++k) level_one_only = lie.level_max_abs(k) == 0.0;
  if (lie.depth() == 0) return TruncatedTensor::unit(lie.dim(), 0);
  if (level_one_only) return exp_increment(lie.level(1), lie.depth());

  const TruncatedTensor one = TruncatedTensor::unit(lie.dim(), lie.depth());
  TruncatedTensor result = one;
  for (int k = lie.depth(); k >= 1; --k) {
    result = one + tensor_product(lie, result) * (1.0 / k);
  }
  return result;
}

TruncatedTensor tensor_log(const TruncatedTensor& group) {
  if (std::abs(group.scalar() - 1.0) > kScalarTolerance) {
    throw DomainError("tensor_log requires a unit scalar term, got " + std::to_string(group.scalar()));
  }
  TruncatedTensor x = group;
  x.scalar() = 0.0;
  const int n = group.depth();
  if (n == 0) return x;
  const TruncatedTensor one = TruncatedTensor::unit(group.dim(), n);
  auto coef = [](int k) { return (k % 2 == 1 ? 1.0 : -1.0) / k; };
  TruncatedTensor acc = one * coef(n);
  for (int k = n - 1; k >= 1; --k) acc = one * coef(k) + tensor_product(x, acc);
  return tensor_product(x, acc);
}

TruncatedTensor signature(const SampledPath& path, int depth, const SignatureOptions& options) {
  if (depth < 1) throw InputError("signature depth must be >= 1");
  if (path.size() < 2) throw InputError("signature needs at least 2 samples");
  const std::size_t need = tensor_size(path.dim(), depth);
  if (need > options.coefficient_budget) {
    throw BudgetError("dense signature with d=" + std::to_string(path.dim()) + ", depth=" + std::to_string(depth) +
                      " needs " + std::to_string(need) + " coefficients (budget " +
                      std::to_string(options.coefficient_budget) + "); use word_coefficients instead");
  }
  TruncatedTensor sig = TruncatedTensor::unit(path.dim(), depth);
  std::vector<double> inc(static_cast<std::size_t>(path.dim()));
  for (std::size_t i = 1; i < path.size(); ++i) {
    const auto p0 = path.point(i - 1);
    const auto p1 = path.point(i);
    bool zero = true;
    for (int c = 0; c < path.dim(); ++c) {
      inc[c] = p1[c] - p0[c];
      zero = zero && inc[c] == 0.0;
    }
    if (!zero) multiply_by_exp_increment(sig, inc);
  }
  return sig;
}

namespace {

// Prefix trie over a set of words; node 0 is the empty word.
struct WordTrie {
  std::vector<int> letter;  // letter leading into the node (0 for root)
  std::vector<int> depth;
  std::vector<std::size_t> preorder;
  std::vector<std::size_t> terminal;  // node of each input word
  int max_depth = 0;

  explicit WordTrie(std::span<const Word> words) {
    std::vector<std::map<int, std::size_t>> children(1);
    letter.push_back(0);
    depth.push_back(0);
    terminal.reserve(words.size());
    for (const Word& w : words) {
      std::size_t node = 0;
      for (int l : w.letters()) {
        auto it = children[node].find(l);
        if (it == children[node].end()) {
          const std::size_t id = letter.size();
          letter.push_back(l);
          depth.push_back(depth[node] + 1);
          children.emplace_back();
          children[node].emplace(l, id);
          node = id;
        } else {
          node = it->second;
        }
      }
      terminal.push_back(node);
      max_depth = std::max(max_depth, depth[node]);
    }
    preorder.reserve(letter.size());
    std::vector<std::size_t> stack{0};
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      preorder.push_back(node);
      for (auto it = children[node].rbegin(); it != children[node].rend(); ++it) stack.push_back(it->second);
    }
  }
};

}  // namespace

std::vector<double> word_coefficients(const SampledPath& path, std::span<const Word> words) {
  const int d = path.dim();
  for (const Word& w : words) {
    for (int l : w.letters()) {
      if (l < 1 || l > d) {
        throw InputError("letter " + std::to_string(l) + " of word " + w.to_string() + " outside alphabet 1.." +
                         std::to_string(d));
      }
    }
  }
  const WordTrie trie(words);
  const int m = trie.max_depth;
  const auto inv_fact = inverse_factorials(m);
  std::vector<double> value(trie.letter.size(), 0.0);
  value[0] = 1.0;

  // partial[j][i] = <prefix_i, S_old> * prod of increments of letters i+1..j
  // along the current root-to-node chain.
  const std::size_t stride = static_cast<std::size_t>(m) + 1;
  std::vector<double> partial(stride * stride, 0.0);
  std::vector<double> inc(static_cast<std::size_t>(d));
  for (std::size_t s = 1; s < path.size(); ++s) {
    bool zero = true;
    for (int c = 0; c < d; ++c) {
      inc[c] = path.value(s, c) - path.value(s - 1, c);
      zero = zero && inc[c] == 0.0;
    }
    if (zero) continue;
    partial[0] = 1.0;
    for (std::size_t idx = 1; idx < trie.preorder.size(); ++idx) {
      const std::size_t node = trie.preorder[idx];
      const int j = trie.depth[node];
      const double x = inc[trie.letter[node] - 1];
      const double* up = partial.data() + static_cast<std::size_t>(j - 1) * stride;
      double* row = partial.data() + static_cast<std::size_t>(j) * stride;
      double acc = 0.0;
      for (int i = 0; i < j; ++i) {
        row[i] = up[i] * x;
        acc += row[i] * inv_fact[j - i];
      }
      row[j] = value[node];
      value[node] = acc + row[j];
    }
  }
  std::vector<double> out(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) out[i] = value[trie.terminal[i]];
  return out;
}

double word_coefficient(const SampledPath& path, const Word& word) {
  const Word one[] = {word};
  return word_coefficients(path, one)[0];
}

}  // namespace siginv
