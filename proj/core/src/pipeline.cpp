#include "siginv/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "siginv/datagen.hpp"
#include "siginv/errors.hpp"
#include "siginv/inversion.hpp"
#include "siginv/lie.hpp"
#include "siginv/rng.hpp"

#ifndef SIGINV_VERSION_STRING
#define SIGINV_VERSION_STRING "0.0.0"
#endif

namespace siginv {

std::string library_version() { return SIGINV_VERSION_STRING; }

// ---- config ---------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

Config Config::parse(std::istream& in) {
  Config c;
  std::string line;
  long row = 0;
  while (std::getline(in, line)) {
    ++row;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(row) + " is not key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(row) + " has an empty key");
    c.set(key, trim(line.substr(eq + 1)));
  }
  return c;
}

Config Config::parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

Config Config::load(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file " + file);
  return parse(in);
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

std::string Config::get(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

long Config::get_int(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get(key, "");
  try {
    std::size_t used = 0;
    const long r = std::stol(v, &used);
    if (used == v.size()) return r;
  } catch (const std::logic_error&) {
  }
  throw ConfigError("config key '" + key + "' expects an integer, got '" + v + "'");
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get(key, "");
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] != '-') {
      const auto r = std::stoull(v, &used);
      if (used == v.size()) return r;
    }
  } catch (const std::logic_error&) {
  }
  throw ConfigError("config key '" + key + "' expects a non-negative integer, got '" + v + "'");
}

double Config::get_double(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get(key, "");
  try {
    std::size_t used = 0;
    const double r = std::stod(v, &used);
    if (used == v.size() && std::isfinite(r)) return r;
  } catch (const std::logic_error&) {
  }
  throw ConfigError("config key '" + key + "' expects a number, got '" + v + "'");
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get(key, "");
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "' expects true/false, got '" + v + "'");
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

std::uint64_t Config::hash() const { return fnv1a64(canonical()); }

const std::map<std::string, std::string>& config_defaults() {
  static const std::map<std::string, std::string> d = {
      {"seed", "0"},
      {"dataset", "sines"},
      {"count", "256"},
      {"length", "100"},
      {"channels", "1"},
      {"freq_min", "0"},
      {"freq_max", "1"},
      {"noise", "0.05"},
      {"hurst", "0.5"},
      {"t_end", "10"},
      {"csv.file", ""},
      {"csv.window", "1000"},
      {"csv.stride", "200"},
      {"csv.channels", "0"},
      {"csv.time_column", "-1"},
      {"csv.header", "true"},
      {"basis", "fourier"},
      {"order", "2"},
      {"depth", "auto"},
      {"mirror", "auto"},
      {"epochs", "1200"},
      {"batch", "128"},
      {"lr", "0.001"},
      {"hidden", "64"},
      {"time_features", "16"},
      {"ema", "0"},
      {"cosine_lr", "false"},
      {"beta_min", "0.1"},
      {"beta_max", "5"},
      {"samples", "auto"},
      {"ks.timepoints", "auto"},
      {"ks.repeats", "1000"},
      {"ks.batch", "64"},
  };
  return d;
}

PipelineSettings PipelineSettings::from_config(const Config& c) {
  for (const auto& [k, v] : c.values()) {
    if (!config_defaults().count(k)) throw ConfigError("unknown config key '" + k + "'");
  }
  PipelineSettings s;
  s.seed = c.get_u64("seed", 0);
  s.dataset = c.get("dataset", "sines");
  if (s.dataset != "sines" && s.dataset != "noisy_sines" && s.dataset != "predator_prey" && s.dataset != "fbm" &&
      s.dataset != "csv") {
    throw ConfigError("unknown dataset '" + s.dataset + "'");
  }
  s.count = static_cast<int>(c.get_int("count", 256));
  s.length = static_cast<int>(c.get_int("length", 100));
  s.channels = static_cast<int>(c.get_int("channels", 1));
  s.freq_min = c.get_double("freq_min", 0.0);
  s.freq_max = c.get_double("freq_max", 1.0);
  s.noise = c.get_double("noise", 0.05);
  s.hurst = c.get_double("hurst", 0.5);
  s.t_end = c.get_double("t_end", 10.0);
  if (s.count < 0) throw ConfigError("count must be >= 0");
  if (s.length < 2) throw ConfigError("length must be >= 2");
  if (s.channels < 1) throw ConfigError("channels must be >= 1");

  s.csv_file = c.get("csv.file", "");
  s.csv.window = static_cast<int>(c.get_int("csv.window", 1000));
  s.csv.stride = static_cast<int>(c.get_int("csv.stride", 200));
  s.csv.time_column = static_cast<int>(c.get_int("csv.time_column", -1));
  s.csv.has_header = c.get_bool("csv.header", true);
  s.csv.channels.clear();
  for (const auto& item : split_list(c.get("csv.channels", "0"))) {
    Config one;
    one.set("x", item);
    s.csv.channels.push_back(static_cast<int>(one.get_int("x", 0)));
  }
  if (s.dataset == "csv" && s.csv_file.empty()) throw ConfigError("dataset=csv needs csv.file");

  s.basis = c.get("basis", "fourier");
  if (s.basis != "fourier") {
    const OrthoFamily fam = parse_family(s.basis);
    if (fam.kind() == OrthoKind::hermite_shift_scale) {
      throw ConfigError("Hermite bases invert pointwise and cannot be embedded; use fourier, legendre or jacobi");
    }
    // Sampled grids include both end points, where these weights blow up.
    if (fam.kind() == OrthoKind::chebyshev ||
        (fam.kind() == OrthoKind::jacobi && (fam.params().alpha < 0.0 || fam.params().beta < 0.0))) {
      throw ConfigError("basis " + s.basis + " has a weight that is unbounded at an end point of the grid");
    }
  }
  s.order = static_cast<int>(c.get_int("order", 2));
  if (c.has("depth") && c.get("depth", "auto") != "auto") {
    const int depth = static_cast<int>(c.get_int("depth", 4));
    if (c.has("order") && depth != s.order + 2) {
      throw ConfigError("depth must equal order + 2 (got order " + std::to_string(s.order) + ", depth " +
                        std::to_string(depth) + ")");
    }
    s.order = depth - 2;
  }
  if (s.order < 0) throw ConfigError("order must be >= 0");
  const std::string mirror = c.get("mirror", "auto");
  s.mirror = mirror == "auto" ? s.dataset == "sines" : c.get_bool("mirror", false);

  s.train.epochs = static_cast<int>(c.get_int("epochs", 1200));
  const long batch = c.get_int("batch", 128);
  if (batch < 1) throw ConfigError("batch must be >= 1");
  s.train.batch_size = static_cast<std::size_t>(batch);
  s.train.learning_rate = c.get_double("lr", 1e-3);
  s.train.hidden = static_cast<int>(c.get_int("hidden", 64));
  s.train.time_features = static_cast<int>(c.get_int("time_features", 16));
  s.train.ema_decay = c.get_double("ema", 0.0);
  s.train.cosine_lr = c.get_bool("cosine_lr", false);
  if (s.train.ema_decay < 0.0 || s.train.ema_decay >= 1.0) throw ConfigError("ema must lie in [0, 1)");
  s.train.schedule = {c.get_double("beta_min", 0.1), c.get_double("beta_max", 5.0)};
  s.train.schedule.validate();
  if (s.train.epochs < 0) throw ConfigError("epochs must be >= 0");

  const SeedTree tree(s.seed);
  s.train.seed = tree.seed("train");
  s.samples = c.get("samples", "auto") == "auto" ? s.count : static_cast<int>(c.get_int("samples", 0));
  if (s.samples < 0) throw ConfigError("samples must be >= 0");

  s.ks.repeats = static_cast<int>(c.get_int("ks.repeats", 1000));
  s.ks.batch = static_cast<int>(c.get_int("ks.batch", 64));
  s.ks.seed = tree.seed("ks");
  const std::string tps = c.get("ks.timepoints", "auto");
  if (tps != "auto") {
    for (const auto& item : split_list(tps)) {
      Config one;
      one.set("x", item);
      const long v = one.get_int("x", 0);
      if (v < 0) throw ConfigError("KS timepoints must be >= 0");
      s.ks.timepoints.push_back(static_cast<std::size_t>(v));
    }
  }
  return s;
}

// ---- embedding ---------------------------------------------------------------

std::string EmbeddingMeta::to_json() const {
  nlohmann::json j;
  j["basis"] = basis;
  j["order"] = order;
  j["depth"] = depth;
  j["lie_dim"] = lie_dim;
  j["channels"] = channels;
  j["block"] = block;
  j["mirror"] = mirror;
  j["fingerprint"] = fingerprint;
  j["grid"] = grid;
  return j.dump(1);
}

EmbeddingMeta EmbeddingMeta::from_json(const std::string& text) {
  EmbeddingMeta m;
  try {
    const auto j = nlohmann::json::parse(text);
    m.basis = j.at("basis").get<std::string>();
    m.order = j.at("order").get<int>();
    m.depth = j.at("depth").get<int>();
    m.lie_dim = j.at("lie_dim").get<int>();
    m.channels = j.at("channels").get<int>();
    m.block = j.at("block").get<int>();
    m.mirror = j.at("mirror").get<bool>();
    m.fingerprint = j.at("fingerprint").get<std::string>();
    m.grid = j.at("grid").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed embedding metadata: ") + e.what());
  }
  if (m.depth != m.order + 2 || m.channels < 1 || m.grid.size() == 1) {
    throw ConfigError("inconsistent embedding metadata");
  }
  const auto basis = LyndonBasis::get(m.lie_dim, m.depth);
  if (basis->fingerprint_hex() != m.fingerprint || static_cast<int>(basis->size()) != m.block) {
    throw ConfigError("embedding fingerprint does not match this library's Lyndon basis");
  }
  return m;
}

std::vector<SampledPath> generate_dataset(const PipelineSettings& s, std::vector<std::string>* warnings) {
  const SeedTree tree(s.seed);
  const std::uint64_t seed = tree.seed("data");
  if (s.dataset == "sines") {
    return gen_sines({.count = s.count,
                      .length = s.length,
                      .channels = s.channels,
                      .freq_min = s.freq_min,
                      .freq_max = s.freq_max,
                      .freq_scale = 1.0,
                      .seed = seed});
  }
  if (s.dataset == "noisy_sines") {
    NoisySinesConfig c;
    c.count = s.count;
    c.length = s.length;
    c.noise = s.noise;
    c.seed = seed;
    return gen_noisy_sines(c);
  }
  if (s.dataset == "predator_prey") {
    PredatorPreyConfig c;
    c.count = s.count;
    c.length = s.length;
    c.t_end = s.t_end;
    c.seed = seed;
    return gen_predator_prey(c);
  }
  if (s.dataset == "fbm") return gen_fbm({.count = s.count, .length = s.length, .hurst = s.hurst, .seed = seed});
  IngestResult r = ingest_csv_file(s.csv_file, s.csv);
  if (warnings) warnings->insert(warnings->end(), r.warnings.begin(), r.warnings.end());
  return std::move(r.paths);
}

namespace {

int dataset_channels(const PipelineSettings& s) {
  if (s.dataset == "sines") return s.channels;
  if (s.dataset == "predator_prey") return 2;
  if (s.dataset == "csv") return static_cast<int>(s.csv.channels.size());
  return 1;
}

}  // namespace

Embedding embed_paths(const std::vector<SampledPath>& paths, const PipelineSettings& s) {
  const bool fourier = s.basis == "fourier";
  const OrthoFamily family = fourier ? make_family(OrthoKind::legendre) : parse_family(s.basis);
  Embedding e;
  e.meta.basis = s.basis;
  e.meta.order = s.order;
  e.meta.depth = s.depth();
  e.meta.lie_dim = fourier ? 4 : 2;
  // An empty set still gets a well-formed (zero-row) embedding.
  e.meta.channels = paths.empty() ? dataset_channels(s) : paths.front().dim();
  e.meta.mirror = fourier && s.mirror;
  if (!paths.empty()) e.meta.grid = paths.front().times();
  const auto basis = LyndonBasis::get(e.meta.lie_dim, e.meta.depth);
  e.meta.block = static_cast<int>(basis->size());
  e.meta.fingerprint = basis->fingerprint_hex();
  e.rows = paths.size();
  e.data.reserve(e.rows * static_cast<std::size_t>(e.meta.width()));
  for (std::size_t r = 0; r < paths.size(); ++r) {
    const auto& p = paths[r];
    if (p.dim() != e.meta.channels || p.size() != e.meta.grid.size()) {
      throw InputError("path " + std::to_string(r) + " does not match the shape of path 0");
    }
    for (int c = 0; c < p.dim(); ++c) {
      const SampledPath ch = p.channel(c);
      const SampledPath aug = fourier ? augment_fourier(ch, e.meta.mirror) : augment_ortho(ch, family);
      const LogSignature ls = log_signature(aug, e.meta.depth);
      e.data.insert(e.data.end(), ls.coords.begin(), ls.coords.end());
    }
  }
  return e;
}

std::vector<SampledPath> invert_embeddings(const std::vector<double>& data, std::size_t rows, const EmbeddingMeta& meta) {
  const auto w = static_cast<std::size_t>(meta.width());
  if (data.size() != rows * w) throw ShapeError("embedding rows do not match the metadata width");
  if (rows == 0) return {};
  const bool fourier = meta.basis == "fourier";
  const OrthoFamily family = fourier ? make_family(OrthoKind::legendre) : parse_family(meta.basis);
  const TimeMap map = fourier ? fourier_time_map(meta.grid, meta.mirror) : ortho_time_map(meta.grid, family);
  const auto block = static_cast<std::size_t>(meta.block);
  const auto channels = static_cast<std::size_t>(meta.channels);
  std::vector<SampledPath> out;
  out.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> values(meta.grid.size() * channels);
    for (std::size_t c = 0; c < channels; ++c) {
      LogSignature ls{meta.lie_dim, meta.depth, {}};
      const auto first = data.begin() + static_cast<std::ptrdiff_t>(r * w + c * block);
      ls.coords.assign(first, first + static_cast<std::ptrdiff_t>(block));
      const TruncatedTensor sig = signature_from_log(ls);
      const SampledPath rec = fourier ? reconstruct(fourier_from_signature(sig, meta.order, map), meta.grid)
                                      : reconstruct(ortho_from_signature(sig, family, meta.order, map), meta.grid);
      for (std::size_t i = 0; i < meta.grid.size(); ++i) values[i * channels + c] = rec.value(i, 0);
    }
    out.emplace_back(meta.grid, std::move(values), meta.channels);
  }
  return out;
}

void write_matrix_csv(std::ostream& out, const std::vector<double>& data, std::size_t rows, int width) {
  if (data.size() != rows * static_cast<std::size_t>(width)) throw ShapeError("matrix is not rows x width");
  for (int j = 0; j < width; ++j) out << (j ? ",c" : "c") << j;
  out << '\n';
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  for (std::size_t r = 0; r < rows; ++r) {
    for (int j = 0; j < width; ++j) {
      out << (j ? "," : "") << data[r * static_cast<std::size_t>(width) + static_cast<std::size_t>(j)];
    }
    out << '\n';
  }
  out.precision(old);
}

std::vector<double> read_matrix_csv(std::istream& in, std::size_t& rows, int& width) {
  std::string header;
  if (!std::getline(in, header)) throw ParseError("empty matrix file", 1);
  width = static_cast<int>(std::count(header.begin(), header.end(), ',')) + 1;
  std::vector<double> data;
  std::string line;
  long row = 1;
  rows = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    int n = 0;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || *end != '\0') throw ParseError("non-numeric cell '" + cell + "'", row);
      data.push_back(v);
      ++n;
    }
    if (n != width) throw ParseError("ragged row in matrix file", row);
    ++rows;
  }
  return data;
}

// ---- stages ---------------------------------------------------------------------

namespace {

std::ifstream open_in(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open " + file);
  return in;
}

std::ofstream open_out(const std::string& file) {
  std::ofstream out(file);
  if (!out) throw InputError("cannot write " + file);
  return out;
}

std::string slurp(const std::string& file) {
  auto in = open_in(file);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<SampledPath> read_paths_file(const std::string& file) {
  auto in = open_in(file);
  return read_paths_csv(in);
}

void write_paths_file(const std::string& file, const std::vector<SampledPath>& paths) {
  auto out = open_out(file);
  write_paths_csv(out, paths);
}

Embedding read_embedding(const std::string& prefix) {
  Embedding e;
  e.meta = EmbeddingMeta::from_json(slurp(prefix + ".json"));
  auto in = open_in(prefix + ".csv");
  int width = 0;
  e.data = read_matrix_csv(in, e.rows, width);
  if (width != e.meta.width()) throw ShapeError("embedding file width disagrees with its metadata");
  return e;
}

std::vector<std::size_t> timepoints_for(const PipelineSettings& s, std::size_t length) {
  if (!s.ks.timepoints.empty()) return s.ks.timepoints;
  return {length / 4, length / 2, 3 * length / 4};
}

}  // namespace

void stage_gen_data(const PipelineSettings& s, const std::string& out_paths) {
  write_paths_file(out_paths, generate_dataset(s));
}

void stage_embed(const PipelineSettings& s, const std::string& paths_file, const std::string& out_prefix) {
  const Embedding e = embed_paths(read_paths_file(paths_file), s);
  auto csv = open_out(out_prefix + ".csv");
  write_matrix_csv(csv, e.data, e.rows, e.meta.width());
  open_out(out_prefix + ".json") << e.meta.to_json() << '\n';
}

void stage_train(const PipelineSettings& s, const std::string& embedding_prefix, const std::string& out_checkpoint) {
  const Embedding e = read_embedding(embedding_prefix);
  ScoreCheckpoint ck = train(e.data, e.rows, e.meta.width(), s.train);
  ck.fingerprint = e.meta.fingerprint;
  ck.lie_dim = e.meta.lie_dim;
  ck.lie_depth = e.meta.depth;
  ck.channels = e.meta.channels;
  save_checkpoint(ck, out_checkpoint);
}

void stage_sample(const PipelineSettings& s, const std::string& checkpoint, const std::string& embedding_prefix,
                  const std::string& out_samples) {
  const ScoreCheckpoint ck = load_checkpoint(checkpoint);
  const EmbeddingMeta meta = EmbeddingMeta::from_json(slurp(embedding_prefix + ".json"));
  if (ck.fingerprint != meta.fingerprint || ck.shape.data_width != meta.width() || ck.lie_depth != meta.depth) {
    throw ConfigError("checkpoint was trained on a different embedding (fingerprint or width mismatch)");
  }
  Rng rng = SeedTree(s.seed).stream("sample");
  const auto n = static_cast<std::size_t>(s.samples);
  const auto xs = sample(ck, n, rng);
  auto out = open_out(out_samples);
  write_matrix_csv(out, xs, n, meta.width());
}

void stage_invert(const std::string& samples_file, const std::string& embedding_prefix, const std::string& out_paths) {
  const EmbeddingMeta meta = EmbeddingMeta::from_json(slurp(embedding_prefix + ".json"));
  auto in = open_in(samples_file);
  std::size_t rows = 0;
  int width = 0;
  const auto data = read_matrix_csv(in, rows, width);
  if (width != meta.width()) throw ConfigError("samples width does not match the embedding");
  write_paths_file(out_paths, invert_embeddings(data, rows, meta));
}

KsReport stage_eval(const PipelineSettings& s, const std::string& real_paths, const std::string& generated_paths,
                    const std::string& out_prefix) {
  const auto real = read_paths_file(real_paths);
  const auto gen = read_paths_file(generated_paths);
  if (real.empty() || gen.empty()) throw InputError("evaluation needs nonempty real and generated sets");
  KsProtocolConfig ks = s.ks;
  ks.timepoints = timepoints_for(s, real.front().size());
  const KsReport rep = ks_marginal_protocol(real, gen, ks);
  open_out(out_prefix + ".json") << rep.to_json() << '\n';
  open_out(out_prefix + ".csv") << rep.to_csv();
  return rep;
}

// ---- orchestration ------------------------------------------------------------

namespace {

template <class F>
void run_stage(const std::string& name, F&& f) {
  const std::string p = "stage " + name + ": ";
  try {
    f();
  } catch (const ParseError& e) {
    throw ParseError(p + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(p + e.what());
  } catch (const InputError& e) {
    throw InputError(p + e.what());
  } catch (const ShapeError& e) {
    throw ShapeError(p + e.what());
  } catch (const DomainError& e) {
    throw DomainError(p + e.what());
  } catch (const DepthError& e) {
    throw DepthError(p + e.what());
  } catch (const BudgetError& e) {
    throw BudgetError(p + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(p + e.what());
  } catch (const Error& e) {
    throw Error(p + e.what());
  }
}

}  // namespace

void run_pipeline(const Config& config, const std::string& out_dir) {
  const PipelineSettings s = PipelineSettings::from_config(config);
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw InputError("cannot create output directory " + out_dir + ": " + ec.message());
  auto at = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };

  nlohmann::json manifest;
  manifest["version"] = library_version();
  manifest["seed"] = s.seed;
  manifest["config_hash"] = hex64(config.hash());
  manifest["config"] = config.values();
  nlohmann::json artifacts = nlohmann::json::object();
  nlohmann::json metrics = nlohmann::json::object();
  std::vector<std::string> stages;

  std::vector<std::string> warnings;
  run_stage("gen-data", [&] { write_paths_file(at("data.csv"), generate_dataset(s, &warnings)); });
  artifacts["data"] = "data.csv";
  stages.push_back("gen-data");

  std::string fingerprint;
  std::size_t rows = 0;
  run_stage("embed", [&] {
    stage_embed(s, at("data.csv"), at("embedding"));
    fingerprint = EmbeddingMeta::from_json(slurp(at("embedding.json"))).fingerprint;
    const Embedding e = read_embedding(at("embedding"));
    const auto real = read_paths_file(at("data.csv"));
    const auto rec = invert_embeddings(e.data, e.rows, e.meta);
    double total = 0.0;
    for (std::size_t i = 0; i < real.size(); ++i) total += l2_error(real[i], rec[i]);
    if (!real.empty()) metrics["embedding_mean_l2"] = total / static_cast<double>(real.size());
    rows = e.rows;
  });
  artifacts["embedding"] = {"embedding.csv", "embedding.json"};
  manifest["fingerprint"] = fingerprint;
  stages.push_back("embed");

  if (rows == 0) {
    warnings.push_back("empty dataset: training and sampling skipped");
    manifest["stages"] = stages;
    manifest["artifacts"] = artifacts;
    manifest["metrics"] = metrics;
    manifest["warnings"] = warnings;
    open_out(at("manifest.json")) << manifest.dump(2) << '\n';
    return;
  }

  run_stage("train", [&] { stage_train(s, at("embedding"), at("checkpoint.json")); });
  artifacts["checkpoint"] = "checkpoint.json";
  stages.push_back("train");

  if (s.samples > 0) {
    run_stage("sample", [&] { stage_sample(s, at("checkpoint.json"), at("embedding"), at("samples.csv")); });
    artifacts["samples"] = "samples.csv";
    stages.push_back("sample");
    run_stage("invert", [&] { stage_invert(at("samples.csv"), at("embedding"), at("generated.csv")); });
    artifacts["generated"] = "generated.csv";
    stages.push_back("invert");
    run_stage("eval", [&] {
      const KsReport rep = stage_eval(s, at("data.csv"), at("generated.csv"), at("report"));
      metrics["mean_ks"] = rep.mean_ks;
      metrics["type1_rate"] = rep.type1_rate;
    });
    artifacts["report"] = {"report.json", "report.csv"};
    stages.push_back("eval");
  }

  manifest["stages"] = stages;
  manifest["artifacts"] = artifacts;
  manifest["metrics"] = metrics;
  manifest["warnings"] = warnings;
  open_out(at("manifest.json")) << manifest.dump(2) << '\n';
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 1;
  if (dynamic_cast<const InputError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const ShapeError*>(&e)) {
    return 2;
  }
  return 3;
}

}  // namespace siginv
