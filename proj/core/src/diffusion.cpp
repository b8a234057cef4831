#include "siginv/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "siginv/errors.hpp"

namespace siginv {

// ---- schedule ------------------------------------------------------------

void NoiseSchedule::validate() const {
  if (!(beta_min > 0.0) || !(beta_max >= beta_min) || !std::isfinite(beta_max)) {
    throw ConfigError("noise schedule needs 0 < beta_min <= beta_max");
  }
}

double NoiseSchedule::mean_factor(double t) const { return std::exp(-0.5 * integral(t)); }

double NoiseSchedule::sigma(double t) const { return std::sqrt(-std::expm1(-integral(t))); }

Perturbed forward_perturb(std::span<const double> x0, double t, const NoiseSchedule& schedule,
                          std::span<const double> noise) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("diffusion time must lie in [0, 1]");
  if (x0.size() != noise.size()) throw ShapeError("x0 and noise widths differ");
  Perturbed p;
  p.sigma = schedule.sigma(t);
  const double m = schedule.mean_factor(t);
  p.xt.resize(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) p.xt[i] = m * x0[i] + p.sigma * noise[i];
  return p;
}

// ---- network -------------------------------------------------------------

void ScoreNetShape::validate() const {
  if (data_width < 1) throw ShapeError("score net data width must be >= 1");
  if (time_features < 2 || time_features % 2 != 0) throw ConfigError("time features must be even and >= 2");
  if (hidden < 1 || hidden_layers < 1) throw ShapeError("score net needs at least one hidden layer");
}

std::size_t ScoreNetShape::parameter_count() const {
  std::size_t n = 0;
  int in = data_width + time_features;
  for (int l = 0; l < hidden_layers; ++l) {
    n += static_cast<std::size_t>(hidden) * static_cast<std::size_t>(in + 1);
    in = hidden;
  }
  n += static_cast<std::size_t>(data_width) * static_cast<std::size_t>(in + 1);
  return n;
}

std::vector<double> time_embedding(double t, int features) {
  const int half = features / 2;
  std::vector<double> e(static_cast<std::size_t>(features));
  for (int k = 0; k < half; ++k) {
    const double f = std::exp(-std::log(1e4) * k / half);
    e[static_cast<std::size_t>(k)] = std::sin(1000.0 * t * f);
    e[static_cast<std::size_t>(half + k)] = std::cos(1000.0 * t * f);
  }
  return e;
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }
double silu(double z) { return z * sigmoid(z); }
double silu_grad(double z) {
  const double s = sigmoid(z);
  return s * (1.0 + z * (1.0 - s));
}

}  // namespace

ScoreNet::ScoreNet(ScoreNetShape shape) : shape_(shape) {
  shape_.validate();
  params_.assign(shape_.parameter_count(), 0.0);
}

ScoreNet::ScoreNet(ScoreNetShape shape, std::vector<double> params) : shape_(shape), params_(std::move(params)) {
  shape_.validate();
  if (params_.size() != shape_.parameter_count()) {
    throw ShapeError("score net expects " + std::to_string(shape_.parameter_count()) + " parameters, got " +
                     std::to_string(params_.size()));
  }
}

std::vector<ScoreNet::LayerView> ScoreNet::layers() const {
  std::vector<LayerView> out;
  std::size_t off = 0;
  int in = shape_.data_width + shape_.time_features;
  for (int l = 0; l <= shape_.hidden_layers; ++l) {
    const int o = l == shape_.hidden_layers ? shape_.data_width : shape_.hidden;
    const std::size_t w = off;
    off += static_cast<std::size_t>(o) * static_cast<std::size_t>(in);
    out.push_back({in, o, w, off});
    off += static_cast<std::size_t>(o);
    in = o;
  }
  return out;
}

void ScoreNet::initialize(Rng& rng) {
  for (const auto& L : layers()) {
    const double lim = std::sqrt(6.0 / (L.in + L.out));
    std::uniform_real_distribution<double> u(-lim, lim);
    for (std::size_t i = 0; i < static_cast<std::size_t>(L.in) * static_cast<std::size_t>(L.out); ++i) {
      params_[L.w_offset + i] = u(rng);
    }
    std::fill_n(params_.begin() + static_cast<std::ptrdiff_t>(L.b_offset), L.out, 0.0);
  }
}

namespace {

struct Activations {
  std::vector<std::vector<double>> inputs;  // input to each layer
  std::vector<std::vector<double>> pre;     // pre-activation of each layer
};

void forward(std::span<const double> params, const std::vector<ScoreNet::LayerView>& layers, double t,
             std::span<const double> x, int time_features, Activations& act, std::span<double> out);

}  // namespace

void ScoreNet::predict(double t, std::span<const double> x, std::span<double> out) const {
  if (x.size() != static_cast<std::size_t>(shape_.data_width) || out.size() != x.size()) {
    throw ShapeError("score net input width mismatch");
  }
  Activations act;
  forward(params_, layers(), t, x, shape_.time_features, act, out);
}

void ScoreNet::backward(double t, std::span<const double> x, std::span<const double> upstream,
                        std::span<double> out, std::span<double> grads) const {
  if (x.size() != static_cast<std::size_t>(shape_.data_width) || out.size() != x.size() ||
      upstream.size() != x.size() || grads.size() != params_.size()) {
    throw ShapeError("score net backward shape mismatch");
  }
  const auto ls = layers();
  Activations act;
  forward(params_, ls, t, x, shape_.time_features, act, out);
  std::vector<double> delta(upstream.begin(), upstream.end());
  for (std::size_t l = ls.size(); l-- > 0;) {
    const auto& L = ls[l];
    const auto& in = act.inputs[l];
    std::vector<double> prev(static_cast<std::size_t>(L.in), 0.0);
    for (int o = 0; o < L.out; ++o) {
      const double d = delta[static_cast<std::size_t>(o)];
      if (d == 0.0) continue;
      const std::size_t row = L.w_offset + static_cast<std::size_t>(o) * static_cast<std::size_t>(L.in);
      for (int i = 0; i < L.in; ++i) {
        grads[row + static_cast<std::size_t>(i)] += d * in[static_cast<std::size_t>(i)];
        prev[static_cast<std::size_t>(i)] += d * params_[row + static_cast<std::size_t>(i)];
      }
      grads[L.b_offset + static_cast<std::size_t>(o)] += d;
    }
    if (l == 0) break;
    const auto& z = act.pre[l - 1];
    for (std::size_t i = 0; i < prev.size(); ++i) prev[i] *= silu_grad(z[i]);
    delta = std::move(prev);
  }
}

namespace {

void forward(std::span<const double> params, const std::vector<ScoreNet::LayerView>& layers, double t,
             std::span<const double> x, int time_features, Activations& act, std::span<double> out) {
  std::vector<double> a(x.begin(), x.end());
  const auto emb = time_embedding(t, time_features);
  a.insert(a.end(), emb.begin(), emb.end());
  act.inputs.clear();
  act.pre.clear();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& L = layers[l];
    std::vector<double> z(static_cast<std::size_t>(L.out));
    for (int o = 0; o < L.out; ++o) {
      const double* w = params.data() + L.w_offset + static_cast<std::size_t>(o) * static_cast<std::size_t>(L.in);
      double s = params[L.b_offset + static_cast<std::size_t>(o)];
      for (int i = 0; i < L.in; ++i) s += w[i] * a[static_cast<std::size_t>(i)];
      z[static_cast<std::size_t>(o)] = s;
    }
    act.inputs.push_back(std::move(a));
    if (l + 1 == layers.size()) {
      std::copy(z.begin(), z.end(), out.begin());
      act.pre.push_back(std::move(z));
      break;
    }
    a.resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) a[i] = silu(z[i]);
    act.pre.push_back(std::move(z));
  }
}

}  // namespace

// ---- denoising score matching ---------------------------------------------

DsmDraws draw_dsm(std::size_t batch, int width, Rng& rng) {
  std::uniform_real_distribution<double> ut(kMinDiffusionTime, 1.0);
  std::normal_distribution<double> n01;
  DsmDraws d;
  d.times.resize(batch);
  d.noise.resize(batch * static_cast<std::size_t>(width));
  for (std::size_t b = 0; b < batch; ++b) {
    d.times[b] = ut(rng);
    for (int j = 0; j < width; ++j) d.noise[b * static_cast<std::size_t>(width) + static_cast<std::size_t>(j)] = n01(rng);
  }
  return d;
}

DsmResult dsm_loss_and_grads(const ScoreNet& net, std::span<const double> batch, std::size_t batch_size,
                             const NoiseSchedule& schedule, const DsmDraws& draws) {
  if (batch_size == 0) throw InputError("denoising score matching needs a nonempty batch");
  const auto width = static_cast<std::size_t>(net.shape().data_width);
  if (batch.size() != batch_size * width) throw ShapeError("batch size does not match the network width");
  if (draws.times.size() != batch_size || draws.noise.size() != batch.size()) {
    throw ShapeError("draws do not match the batch");
  }
  DsmResult r;
  r.grads.assign(net.params().size(), 0.0);
  std::vector<double> out(width), up(width);
  const double norm = 1.0 / static_cast<double>(batch.size());
  for (std::size_t b = 0; b < batch_size; ++b) {
    const auto x0 = batch.subspan(b * width, width);
    const auto noise = std::span<const double>(draws.noise).subspan(b * width, width);
    const Perturbed p = forward_perturb(x0, draws.times[b], schedule, noise);
    // First pass gives the residual; the upstream gradient depends on it.
    net.predict(draws.times[b], p.xt, out);
    for (std::size_t j = 0; j < width; ++j) {
      const double e = out[j] - noise[j];
      r.loss += e * e * norm;
      up[j] = 2.0 * e * norm;
    }
    net.backward(draws.times[b], p.xt, up, out, r.grads);
  }
  return r;
}

DsmResult dsm_loss_and_grads(const ScoreNet& net, std::span<const double> batch, std::size_t batch_size,
                             const NoiseSchedule& schedule, Rng& rng) {
  if (batch_size == 0) throw InputError("denoising score matching needs a nonempty batch");
  return dsm_loss_and_grads(net, batch, batch_size, schedule, draw_dsm(batch_size, net.shape().data_width, rng));
}

// ---- training ------------------------------------------------------------

void ScoreCheckpoint::validate() const {
  shape.validate();
  const auto w = static_cast<std::size_t>(shape.data_width);
  if (params.size() != shape.parameter_count()) throw ShapeError("checkpoint parameter count mismatch");
  if (mean.size() != w || scale.size() != w || fixed.size() != w) {
    throw ShapeError("checkpoint normalisation width mismatch");
  }
  for (double s : scale) {
    if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("checkpoint scale must be positive");
  }
  schedule.validate();
}

ScoreCheckpoint train(std::span<const double> data, std::size_t rows, int width, const TrainConfig& config) {
  if (width < 1) throw ShapeError("training width must be >= 1");
  const auto w = static_cast<std::size_t>(width);
  if (data.size() != rows * w) throw ShapeError("training data is not rows x width");
  if (rows == 0) throw InputError("training set is empty");
  if (config.epochs < 0) throw ConfigError("epochs must be >= 0");
  if (config.batch_size == 0) throw ConfigError("batch size must be >= 1");
  if (!(config.learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
  config.schedule.validate();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i])) {
      throw InputError("non-finite training value at row " + std::to_string(i / w) + ", coordinate " +
                       std::to_string(i % w));
    }
  }

  ScoreCheckpoint ck;
  ck.shape = {.data_width = width, .time_features = config.time_features, .hidden = config.hidden, .hidden_layers = 2};
  ck.schedule = config.schedule;
  ck.seed = config.seed;
  ck.epochs = config.epochs;
  ck.mean.assign(w, 0.0);
  ck.scale.assign(w, 1.0);
  ck.fixed.assign(w, 0);
  for (std::size_t j = 0; j < w; ++j) {
    double m = 0.0;
    for (std::size_t r = 0; r < rows; ++r) m += data[r * w + j];
    m /= static_cast<double>(rows);
    double v = 0.0;
    for (std::size_t r = 0; r < rows; ++r) v += (data[r * w + j] - m) * (data[r * w + j] - m);
    const double sd = std::sqrt(v / static_cast<double>(rows));
    ck.mean[j] = m;
    if (sd > 1e-12 * (1.0 + std::abs(m))) {
      ck.scale[j] = sd;
    } else {
      ck.fixed[j] = 1;
    }
  }
  std::vector<double> z(data.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < w; ++j) {
      z[r * w + j] = ck.fixed[j] ? 0.0 : (data[r * w + j] - ck.mean[j]) / ck.scale[j];
    }
  }

  const SeedTree seeds(config.seed);
  Rng init_rng = seeds.stream("init");
  Rng order_rng = seeds.stream("shuffle");
  Rng dsm_rng = seeds.stream("dsm");
  ScoreNet net(ck.shape);
  net.initialize(init_rng);

  const std::size_t P = net.params().size();
  std::vector<double> m1(P, 0.0), m2(P, 0.0);
  constexpr double b1 = 0.9, b2 = 0.999, adam_eps = 1e-8;
  long step = 0;
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> batch;
  std::vector<double> ema(net.params().begin(), net.params().end());
  const std::size_t per_epoch = (rows + config.batch_size - 1) / config.batch_size;
  const double total_steps = static_cast<double>(per_epoch) * config.epochs;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), order_rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < rows; start += config.batch_size) {
      const std::size_t n = std::min(config.batch_size, rows - start);
      batch.resize(n * w);
      for (std::size_t b = 0; b < n; ++b) {
        std::copy_n(z.begin() + static_cast<std::ptrdiff_t>(order[start + b] * w), w,
                    batch.begin() + static_cast<std::ptrdiff_t>(b * w));
      }
      const DsmResult r = dsm_loss_and_grads(net, batch, n, config.schedule, dsm_rng);
      epoch_loss += r.loss * static_cast<double>(n);
      ++step;
      const double c1 = 1.0 - std::pow(b1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(b2, static_cast<double>(step));
      double lr = config.learning_rate;
      if (config.cosine_lr) lr *= 0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(step - 1) / total_steps));
      auto p = net.params();
      for (std::size_t i = 0; i < P; ++i) {
        m1[i] = b1 * m1[i] + (1.0 - b1) * r.grads[i];
        m2[i] = b2 * m2[i] + (1.0 - b2) * r.grads[i] * r.grads[i];
        p[i] -= lr * (m1[i] / c1) / (std::sqrt(m2[i] / c2) + adam_eps);
      }
      if (config.ema_decay > 0.0) {
        const double d = std::min(config.ema_decay, (1.0 + step) / (10.0 + step));
        for (std::size_t i = 0; i < P; ++i) ema[i] = d * ema[i] + (1.0 - d) * p[i];
      }
    }
    epoch_loss /= static_cast<double>(rows);
    if (!std::isfinite(epoch_loss)) throw NumericalError("training loss diverged at epoch " + std::to_string(epoch));
    ck.loss_history.push_back(epoch_loss);
  }
  if (config.ema_decay > 0.0 && config.epochs > 0) {
    ck.params = std::move(ema);
  } else {
    ck.params.assign(net.params().begin(), net.params().end());
  }
  return ck;
}

// ---- sampling ------------------------------------------------------------

std::vector<double> sample_probability_flow(const ScoreFn& score, int width, std::size_t count,
                                            const NoiseSchedule& schedule, Rng& rng, int steps) {
  if (width < 1) throw ShapeError("sampling width must be >= 1");
  std::vector<double> xs(count * static_cast<std::size_t>(width));
  std::normal_distribution<double> n01;
  for (double& v : xs) v = n01(rng);
  integrate_probability_flow(score, width, xs, schedule, steps);
  return xs;
}

void integrate_probability_flow(const ScoreFn& score, int width, std::span<double> xs,
                                const NoiseSchedule& schedule, int steps) {
  if (width < 1) throw ShapeError("sampling width must be >= 1");
  if (steps < 1) throw ConfigError("ODE steps must be >= 1");
  const auto w = static_cast<std::size_t>(width);
  if (xs.size() % w != 0) throw ShapeError("initial points are not a multiple of the width");
  const std::size_t count = xs.size() / w;

  const double h = (kSampleEndTime - 1.0) / steps;
  std::vector<double> k1(w), k2(w), k3(w), k4(w), tmp(w), s(w);
  auto drift = [&](double t, std::span<const double> x, std::span<double> out) {
    score(t, x, s);
    const double b = schedule.beta(t);
    for (std::size_t j = 0; j < w; ++j) out[j] = -0.5 * b * (x[j] + s[j]);
  };
  for (std::size_t r = 0; r < count; ++r) {
    std::span<double> x(xs.data() + r * w, w);
    double t = 1.0;
    for (int i = 0; i < steps; ++i) {
      drift(t, x, k1);
      for (std::size_t j = 0; j < w; ++j) tmp[j] = x[j] + 0.5 * h * k1[j];
      drift(t + 0.5 * h, tmp, k2);
      for (std::size_t j = 0; j < w; ++j) tmp[j] = x[j] + 0.5 * h * k2[j];
      drift(t + 0.5 * h, tmp, k3);
      for (std::size_t j = 0; j < w; ++j) tmp[j] = x[j] + h * k3[j];
      drift(t + h, tmp, k4);
      for (std::size_t j = 0; j < w; ++j) x[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
      t = 1.0 + (i + 1) * h;
    }
  }
}

ScoreFn checkpoint_score(const ScoreCheckpoint& ckpt) {
  auto net = std::make_shared<ScoreNet>(ckpt.net());
  const NoiseSchedule sched = ckpt.schedule;
  return [net, sched](double t, std::span<const double> x, std::span<double> out) {
    net->predict(t, x, out);
    const double inv = -1.0 / sched.sigma(t);
    for (double& v : out) v *= inv;
  };
}

std::vector<double> sample(const ScoreCheckpoint& ckpt, std::size_t count, Rng& rng) {
  ckpt.validate();
  const auto w = static_cast<std::size_t>(ckpt.shape.data_width);
  auto xs = sample_probability_flow(checkpoint_score(ckpt), ckpt.shape.data_width, count, ckpt.schedule, rng);
  for (std::size_t r = 0; r < count; ++r) {
    for (std::size_t j = 0; j < w; ++j) {
      double& v = xs[r * w + j];
      v = ckpt.fixed[j] ? ckpt.mean[j] : ckpt.mean[j] + ckpt.scale[j] * v;
    }
  }
  return xs;
}

// ---- persistence ---------------------------------------------------------

namespace {
constexpr int kCheckpointVersion = 1;
}

std::string checkpoint_to_json(const ScoreCheckpoint& ck) {
  nlohmann::json j;
  j["format"] = "siginv-score-checkpoint";
  j["version"] = kCheckpointVersion;
  j["shape"] = {{"data_width", ck.shape.data_width},
                {"time_features", ck.shape.time_features},
                {"hidden", ck.shape.hidden},
                {"hidden_layers", ck.shape.hidden_layers}};
  j["schedule"] = {{"beta_min", ck.schedule.beta_min}, {"beta_max", ck.schedule.beta_max}};
  j["normalisation"] = {{"mean", ck.mean}, {"scale", ck.scale}, {"fixed", ck.fixed}};
  j["embedding"] = {{"fingerprint", ck.fingerprint},
                    {"lie_dim", ck.lie_dim},
                    {"lie_depth", ck.lie_depth},
                    {"channels", ck.channels}};
  j["training"] = {{"seed", ck.seed}, {"epochs", ck.epochs}, {"loss_history", ck.loss_history}};
  j["params"] = ck.params;
  return j.dump(1);
}

ScoreCheckpoint checkpoint_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  ScoreCheckpoint ck;
  try {
    if (j.at("format").get<std::string>() != "siginv-score-checkpoint") throw ParseError("not a score checkpoint");
    const int version = j.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw ConfigError("unsupported checkpoint version " + std::to_string(version));
    }
    const auto& s = j.at("shape");
    ck.shape = {s.at("data_width").get<int>(), s.at("time_features").get<int>(), s.at("hidden").get<int>(),
                s.at("hidden_layers").get<int>()};
    ck.schedule = {j.at("schedule").at("beta_min").get<double>(), j.at("schedule").at("beta_max").get<double>()};
    const auto& n = j.at("normalisation");
    ck.mean = n.at("mean").get<std::vector<double>>();
    ck.scale = n.at("scale").get<std::vector<double>>();
    ck.fixed = n.at("fixed").get<std::vector<std::uint8_t>>();
    const auto& e = j.at("embedding");
    ck.fingerprint = e.at("fingerprint").get<std::string>();
    ck.lie_dim = e.at("lie_dim").get<int>();
    ck.lie_depth = e.at("lie_depth").get<int>();
    ck.channels = e.at("channels").get<int>();
    const auto& tr = j.at("training");
    ck.seed = tr.at("seed").get<std::uint64_t>();
    ck.epochs = tr.at("epochs").get<int>();
    ck.loss_history = tr.at("loss_history").get<std::vector<double>>();
    ck.params = j.at("params").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed checkpoint: ") + e.what());
  }
  ck.validate();
  return ck;
}

void save_checkpoint(const ScoreCheckpoint& ckpt, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write checkpoint " + path);
  out << checkpoint_to_json(ckpt) << '\n';
  if (!out) throw InputError("failed writing checkpoint " + path);
}

ScoreCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open checkpoint " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return checkpoint_from_json(ss.str());
}

}  // namespace siginv
