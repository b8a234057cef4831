#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "siginv/rng.hpp"

namespace siginv {

/// Linear VP-SDE schedule beta(t) = beta_min + t (beta_max - beta_min), t in [0, 1].
struct NoiseSchedule {
  double beta_min = 0.1;
  double beta_max = 5.0;

  void validate() const;
  double beta(double t) const { return beta_min + t * (beta_max - beta_min); }
  /// B(t) = int_0^t beta(s) ds.
  double integral(double t) const { return beta_min * t + 0.5 * (beta_max - beta_min) * t * t; }
  /// Mean factor exp(-B(t)/2) of the forward marginal.
  double mean_factor(double t) const;
  /// Standard deviation sqrt(1 - exp(-B(t))) of the forward marginal.
  double sigma(double t) const;
};

struct Perturbed {
  std::vector<double> xt;
  /// sigma(t); the denoising target is -noise / sigma.
  double sigma = 0.0;
};

/// Closed-form VP marginal x_t = x0 e^{-B/2} + sqrt(1 - e^{-B}) noise.
/// Throws DomainError for t outside [0, 1] and ShapeError on width mismatch.
Perturbed forward_perturb(std::span<const double> x0, double t, const NoiseSchedule& schedule,
                          std::span<const double> noise);

struct ScoreNetShape {
  int data_width = 1;
  int time_features = 16;  // even
  int hidden = 64;
  int hidden_layers = 2;

  void validate() const;
  std::size_t parameter_count() const;
};

/// Sinusoidal embedding of t in [0, 1]: (sin(1000 t f_k), cos(1000 t f_k)),
/// with geometrically spaced frequencies f_k in (1e-4, 1].
std::vector<double> time_embedding(double t, int features);

/// Fully connected score network with SiLU activations. Input is the data
/// vector concatenated with the time embedding; output has the data width
/// and is read as a noise prediction eps(t, x), so the score is
/// -eps(t, x) / sigma(t).
///
/// Parameters are one flat vector: for each layer, the weight matrix
/// (row-major, out x in) followed by the bias.
class ScoreNet {
 public:
  ScoreNet() = default;
  explicit ScoreNet(ScoreNetShape shape);
  ScoreNet(ScoreNetShape shape, std::vector<double> params);

  const ScoreNetShape& shape() const noexcept { return shape_; }
  std::span<const double> params() const noexcept { return params_; }
  std::span<double> params() noexcept { return params_; }

  /// Glorot-uniform weights, zero biases.
  void initialize(Rng& rng);

  /// Noise prediction for one input.
  void predict(double t, std::span<const double> x, std::span<double> out) const;

  /// Accumulates d(sum_i upstream_i * out_i)/d(params) into grads for one
  /// input; returns the output in `out`.
  void backward(double t, std::span<const double> x, std::span<const double> upstream,
                std::span<double> out, std::span<double> grads) const;

  /// Offsets of one layer inside the flat parameter vector.
  struct LayerView {
    int in, out;
    std::size_t w_offset, b_offset;
  };
  std::vector<LayerView> layers() const;

 private:

  ScoreNetShape shape_{};
  std::vector<double> params_;
};

/// Explicit draws for one denoising-score-matching evaluation.
struct DsmDraws {
  std::vector<double> times;  // one per example
  std::vector<double> noise;  // row-major, batch x width
};

struct DsmResult {
  double loss = 0.0;
  std::vector<double> grads;
};

/// Smallest diffusion time used in training and sampling.
inline constexpr double kMinDiffusionTime = 1e-5;
inline constexpr double kSampleEndTime = 1e-3;

/// Draws t ~ U[kMinDiffusionTime, 1] and standard normal noise per example.
DsmDraws draw_dsm(std::size_t batch, int width, Rng& rng);

/// Mean over batch and coordinates of (eps(t, x_t) - noise)^2, which equals
/// sigma(t)^2 times the squared error between the network score and the
/// conditional score -noise / sigma(t). Gradients are exact (reverse mode).
/// `batch` is row-major, batch x width. Throws InputError on an empty batch.
DsmResult dsm_loss_and_grads(const ScoreNet& net, std::span<const double> batch, std::size_t batch_size,
                             const NoiseSchedule& schedule, const DsmDraws& draws);
DsmResult dsm_loss_and_grads(const ScoreNet& net, std::span<const double> batch, std::size_t batch_size,
                             const NoiseSchedule& schedule, Rng& rng);

struct TrainConfig {
  int epochs = 1200;
  std::size_t batch_size = 128;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  int hidden = 64;
  int time_features = 16;
  NoiseSchedule schedule{};
  /// Exponential moving average of the weights kept for sampling; 0 disables.
  double ema_decay = 0.0;
  /// Cosine decay of the learning rate to zero over the run.
  bool cosine_lr = false;
};

/// The persisted generative model.
struct ScoreCheckpoint {
  ScoreNetShape shape;
  std::vector<double> params;
  NoiseSchedule schedule;
  /// Per-coordinate z-score statistics of the training data.
  std::vector<double> mean;
  std::vector<double> scale;
  /// Coordinates that are constant across the training set; they are not
  /// modelled and are emitted at their training value.
  std::vector<std::uint8_t> fixed;
  /// Embedding provenance: Lyndon fingerprint per channel block.
  std::string fingerprint;
  int lie_dim = 0;
  int lie_depth = 0;
  int channels = 0;
  std::uint64_t seed = 0;
  int epochs = 0;
  std::vector<double> loss_history;

  ScoreNet net() const { return ScoreNet(shape, params); }
  void validate() const;
};

/// Row-major data, rows x width. Standardises, then runs Adam over shuffled
/// minibatches. Pure function of (data, config). Throws InputError naming
/// the first non-finite coordinate.
ScoreCheckpoint train(std::span<const double> data, std::size_t rows, int width, const TrainConfig& config);

/// Score s(t, x) in the (normalised) model space.
using ScoreFn = std::function<void(double t, std::span<const double> x, std::span<double> out)>;

inline constexpr int kOdeSteps = 128;

/// Integrates dx = -1/2 beta(t) [x + s(t, x)] dt from t = 1 down to
/// kSampleEndTime with fixed-step RK4, starting from x_1 ~ N(0, I).
/// Returns count x width row-major values.
std::vector<double> sample_probability_flow(const ScoreFn& score, int width, std::size_t count,
                                            const NoiseSchedule& schedule, Rng& rng,
                                            int steps = kOdeSteps);

/// Same flow, in place, from caller-supplied points at t = 1 (row-major).
void integrate_probability_flow(const ScoreFn& score, int width, std::span<double> xs,
                                const NoiseSchedule& schedule, int steps = kOdeSteps);

/// Samples from a checkpoint and undoes the normalisation.
std::vector<double> sample(const ScoreCheckpoint& ckpt, std::size_t count, Rng& rng);

/// Network score of a checkpoint in normalised space.
ScoreFn checkpoint_score(const ScoreCheckpoint& ckpt);

/// JSON container; layout in docs/checkpoint_format.md.
void save_checkpoint(const ScoreCheckpoint& ckpt, const std::string& path);
ScoreCheckpoint load_checkpoint(const std::string& path);
std::string checkpoint_to_json(const ScoreCheckpoint& ckpt);
ScoreCheckpoint checkpoint_from_json(const std::string& text);

}  // namespace siginv
