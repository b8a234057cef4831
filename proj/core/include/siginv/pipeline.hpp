#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "siginv/datagen.hpp"
#include "siginv/diffusion.hpp"
#include "siginv/eval.hpp"
#include "siginv/path.hpp"

namespace siginv {

/// Plain-text configuration: one `key = value` per line, `#` starts a
/// comment. Keys are case sensitive; later assignments win.
class Config {
 public:
  static Config parse(std::istream& in);
  static Config parse_string(const std::string& text);
  static Config load(const std::string& file);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback) const;
  long get_int(const std::string& key, long fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& values() const noexcept { return values_; }
  /// Sorted "key=value\n" lines; what the hash is computed over.
  std::string canonical() const;
  std::uint64_t hash() const;

 private:
  std::map<std::string, std::string> values_;
};

/// Every key the pipeline understands, with its default.
const std::map<std::string, std::string>& config_defaults();

struct PipelineSettings {
  std::uint64_t seed = 0;

  std::string dataset = "sines";  // sines | noisy_sines | predator_prey | fbm | csv
  int count = 256;
  int length = 100;
  int channels = 1;
  double freq_min = 0.0;
  double freq_max = 1.0;
  double noise = 0.05;
  double hurst = 0.5;
  double t_end = 10.0;
  std::string csv_file;
  CsvLayout csv{};

  std::string basis = "fourier";  // fourier | legendre | jacobi:A:B
  int order = 2;                  // N; signature depth is N + 2
  bool mirror = true;

  TrainConfig train{};
  int samples = 256;

  KsProtocolConfig ks{};

  int depth() const noexcept { return order + 2; }

  /// Validates keys and values. Unknown keys, Hermite bases and weights
  /// that are unbounded at an end point raise ConfigError.
  static PipelineSettings from_config(const Config& config);
};

/// Provenance of an embedding; written next to every embedding, sample and
/// checkpoint file.
struct EmbeddingMeta {
  std::string basis;
  int order = 0;
  int depth = 0;
  int lie_dim = 0;   // dimension of the augmented path
  int channels = 0;  // data channels, each embedded separately
  int block = 0;     // log-signature width per channel
  bool mirror = false;
  std::string fingerprint;
  std::vector<double> grid;

  int width() const noexcept { return channels * block; }
  std::string to_json() const;
  static EmbeddingMeta from_json(const std::string& text);
};

struct Embedding {
  EmbeddingMeta meta;
  std::size_t rows = 0;
  std::vector<double> data;  // rows x meta.width(), row-major
};

std::vector<SampledPath> generate_dataset(const PipelineSettings& settings, std::vector<std::string>* warnings = nullptr);

/// Per-channel log-signatures of the basis augmentation at depth N + 2.
Embedding embed_paths(const std::vector<SampledPath>& paths, const PipelineSettings& settings);

/// Inverts log-signature rows back to paths on meta.grid: exp of the Lie
/// element, then the basis functionals on the dense signature.
std::vector<SampledPath> invert_embeddings(const std::vector<double>& data, std::size_t rows, const EmbeddingMeta& meta);

/// Matrix CSV with header c0..c{w-1}.
void write_matrix_csv(std::ostream& out, const std::vector<double>& data, std::size_t rows, int width);
std::vector<double> read_matrix_csv(std::istream& in, std::size_t& rows, int& width);

// ---- file-based stages ------------------------------------------------------
// Each stage reads and writes files only, so any stage can be re-run on the
// artifacts of an earlier run.

void stage_gen_data(const PipelineSettings& s, const std::string& out_paths);
void stage_embed(const PipelineSettings& s, const std::string& paths_file, const std::string& out_prefix);
void stage_train(const PipelineSettings& s, const std::string& embedding_prefix, const std::string& out_checkpoint);
void stage_sample(const PipelineSettings& s, const std::string& checkpoint, const std::string& embedding_prefix,
                  const std::string& out_samples);
void stage_invert(const std::string& samples_file, const std::string& embedding_prefix, const std::string& out_paths);
KsReport stage_eval(const PipelineSettings& s, const std::string& real_paths, const std::string& generated_paths,
                    const std::string& out_prefix);

/// gen/ingest -> embed -> train -> sample -> invert -> eval inside out_dir,
/// finishing with manifest.json. A failing stage is reported as
/// "stage <name>: <cause>" with the original error category preserved.
void run_pipeline(const Config& config, const std::string& out_dir);

/// Library version string recorded in manifests.
std::string library_version();

/// CLI exit code for an exception: 1 usage/config, 2 data, 3 numerical.
int exit_code_for(const std::exception& e);

}  // namespace siginv
