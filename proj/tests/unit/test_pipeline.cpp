#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "siginv/errors.hpp"
#include "siginv/lie.hpp"
#include "siginv/pipeline.hpp"

using namespace siginv;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("siginv_test_" + name);
  fs::remove_all(p);
  return p;
}

Config small_config() {
  return Config::parse_string(
      "seed = 5\n"
      "count = 24   # series\n"
      "length = 30\n"
      "epochs = 3\n"
      "batch = 8\n"
      "samples = 12\n"
      "ks.repeats = 20\n"
      "ks.batch = 8\n");
}

}  // namespace

TEST(Config, ParseRules) {
  const auto c = Config::parse_string("# header\n a = 1 \nb=two # trailing\n\na = 3\n");
  EXPECT_EQ(c.get("a", ""), "3");
  EXPECT_EQ(c.get("b", ""), "two");
  EXPECT_EQ(c.get_int("a", 0), 3);
  EXPECT_THROW(c.get_int("b", 0), ConfigError);
  EXPECT_THROW(Config::parse_string("novalue\n"), ConfigError);
  EXPECT_THROW(Config::parse_string(" = 4\n"), ConfigError);
  EXPECT_THROW(Config::load("/nonexistent/siginv.cfg"), ConfigError);
  EXPECT_EQ(c.canonical(), "a=3\nb=two\n");
  EXPECT_EQ(c.hash(), Config::parse_string("b = two\na = 3\n").hash());
}

TEST(Config, AllDefaultsAccepted) {
  Config c;
  for (const auto& [k, v] : config_defaults()) c.set(k, v);
  c.set("csv.file", "x.csv");
  const auto s = PipelineSettings::from_config(c);
  EXPECT_EQ(s.order, 2);
  EXPECT_EQ(s.depth(), 4);
  EXPECT_TRUE(s.mirror);
  EXPECT_EQ(s.samples, 256);
  EXPECT_EQ(s.train.hidden, 64);
}

TEST(Settings, Validation) {
  auto with = [](const std::string& text) { return PipelineSettings::from_config(Config::parse_string(text)); };
  EXPECT_THROW(with("colour = red\n"), ConfigError);
  EXPECT_THROW(with("basis = hermite:0.05\n"), ConfigError);
  EXPECT_THROW(with("basis = chebyshev\n"), ConfigError);
  EXPECT_THROW(with("basis = jacobi:-0.5:0\n"), ConfigError);
  EXPECT_THROW(with("order = 2\ndepth = 5\n"), ConfigError);
  EXPECT_EQ(with("depth = 6\n").order, 4);
  EXPECT_THROW(with("dataset = csv\n"), ConfigError);
  EXPECT_THROW(with("dataset = stocks\n"), ConfigError);
  EXPECT_THROW(with("batch = 0\n"), ConfigError);
  EXPECT_THROW(with("beta_min = 3\nbeta_max = 1\n"), ConfigError);
  EXPECT_FALSE(with("dataset = fbm\n").mirror);
  EXPECT_FALSE(with("mirror = false\n").mirror);
  EXPECT_EQ(with("basis = jacobi:0.5:0\n").basis, "jacobi:0.5:0");
  const auto s = with("seed = 3\n");
  EXPECT_EQ(s.train.seed, SeedTree(3).seed("train"));
  EXPECT_NE(s.train.seed, s.ks.seed);
}

TEST(Embedding, WidthAndMeta) {
  auto cfg = small_config();
  cfg.set("channels", "2");
  const auto s = PipelineSettings::from_config(cfg);
  const auto paths = generate_dataset(s);
  const auto e = embed_paths(paths, s);
  EXPECT_EQ(e.rows, 24u);
  EXPECT_EQ(e.meta.lie_dim, 4);
  EXPECT_EQ(e.meta.block, beta_dim(4, 4));
  EXPECT_EQ(e.meta.width(), 2 * beta_dim(4, 4));
  EXPECT_EQ(e.meta.fingerprint, LyndonBasis::get(4, 4)->fingerprint_hex());
  const auto back = EmbeddingMeta::from_json(e.meta.to_json());
  EXPECT_EQ(back.grid, e.meta.grid);
  EXPECT_EQ(back.width(), e.meta.width());

  auto j = nlohmann::json::parse(e.meta.to_json());
  j["fingerprint"] = "0000000000000000";
  EXPECT_THROW(EmbeddingMeta::from_json(j.dump()), ConfigError);
}

TEST(Embedding, InversionRoundTripIsClose) {
  for (const char* basis : {"fourier", "legendre", "jacobi:0.5:0"}) {
    auto cfg = small_config();
    cfg.set("basis", basis);
    cfg.set("order", "4");
    const auto s = PipelineSettings::from_config(cfg);
    const auto paths = generate_dataset(s);
    const auto e = embed_paths(paths, s);
    const auto rec = invert_embeddings(e.data, e.rows, e.meta);
    ASSERT_EQ(rec.size(), paths.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < paths.size(); ++i) worst = std::max(worst, l2_error(paths[i], rec[i]));
    EXPECT_LT(worst, 0.35) << basis;
  }
}

TEST(MatrixCsv, RoundTrip) {
  const std::vector<double> data{1.0 / 3.0, -2e-17, 4.5, 6.0, 1e300, -0.0};
  std::ostringstream out;
  write_matrix_csv(out, data, 2, 3);
  std::istringstream in(out.str());
  std::size_t rows = 0;
  int width = 0;
  EXPECT_EQ(read_matrix_csv(in, rows, width), data);
  EXPECT_EQ(rows, 2u);
  EXPECT_EQ(width, 3);
  std::istringstream bad("c0,c1\n1,2\n3\n");
  EXPECT_THROW(read_matrix_csv(bad, rows, width), ParseError);
}

TEST(Pipeline, NoSamplesWritesManifestAndEmbedding) {
  const auto dir = scratch("nosamples");
  auto cfg = small_config();
  cfg.set("epochs", "0");
  cfg.set("samples", "0");
  run_pipeline(cfg, dir.string());
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  EXPECT_TRUE(fs::exists(dir / "embedding.csv"));
  EXPECT_TRUE(fs::exists(dir / "embedding.json"));
  EXPECT_FALSE(fs::exists(dir / "samples.csv"));
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(m["fingerprint"], LyndonBasis::get(4, 4)->fingerprint_hex());
  EXPECT_EQ(m["seed"], 5);
  EXPECT_EQ(m["config_hash"].get<std::string>().size(), 16u);
  EXPECT_EQ(m["stages"].size(), 3u);
  fs::remove_all(dir);
}

TEST(Pipeline, EmptyDatasetStillProducesEmbeddingFiles) {
  const auto dir = scratch("empty");
  auto cfg = small_config();
  cfg.set("epochs", "0");
  cfg.set("count", "0");
  run_pipeline(cfg, dir.string());
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  EXPECT_TRUE(fs::exists(dir / "embedding.csv"));
  EXPECT_FALSE(fs::exists(dir / "samples.csv"));
  fs::remove_all(dir);
}

TEST(Pipeline, DeterministicOutputs) {
  const auto a = scratch("det_a"), b = scratch("det_b");
  run_pipeline(small_config(), a.string());
  run_pipeline(small_config(), b.string());
  for (const char* f : {"manifest.json", "data.csv", "embedding.csv", "embedding.json", "checkpoint.json",
                        "samples.csv", "generated.csv", "report.json", "report.csv"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Pipeline, RerunFromIntermediateStage) {
  const auto dir = scratch("rerun");
  const auto cfg = small_config();
  run_pipeline(cfg, dir.string());
  const auto s = PipelineSettings::from_config(cfg);
  const auto again = (dir / "samples_again.csv").string();
  stage_sample(s, (dir / "checkpoint.json").string(), (dir / "embedding").string(), again);
  EXPECT_EQ(slurp(again), slurp(dir / "samples.csv"));
  stage_invert(again, (dir / "embedding").string(), (dir / "generated_again.csv").string());
  EXPECT_EQ(slurp(dir / "generated_again.csv"), slurp(dir / "generated.csv"));
  fs::remove_all(dir);
}

TEST(Pipeline, FingerprintMismatchRejected) {
  const auto dir = scratch("mismatch");
  const auto cfg = small_config();
  run_pipeline(cfg, dir.string());
  auto other = small_config();
  other.set("order", "3");
  const auto s3 = PipelineSettings::from_config(other);
  stage_embed(s3, (dir / "data.csv").string(), (dir / "emb3").string());
  EXPECT_THROW(stage_sample(s3, (dir / "checkpoint.json").string(), (dir / "emb3").string(),
                            (dir / "x.csv").string()),
               ConfigError);
  fs::remove_all(dir);
}

TEST(Pipeline, StageErrorsNameTheStage) {
  const auto dir = scratch("stage_error");
  auto cfg = small_config();
  cfg.set("dataset", "csv");
  cfg.set("csv.file", (dir / "missing.csv").string());
  try {
    run_pipeline(cfg, dir.string());
    FAIL() << "expected an error";
  } catch (const InputError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("stage gen-data: ", 0), 0u) << e.what();
  }
  fs::remove_all(dir);
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code_for(ConfigError("x")), 1);
  EXPECT_EQ(exit_code_for(InputError("x")), 2);
  EXPECT_EQ(exit_code_for(ParseError("x", 3)), 2);
  EXPECT_EQ(exit_code_for(ShapeError("x")), 2);
  EXPECT_EQ(exit_code_for(NumericalError("x")), 3);
  EXPECT_EQ(exit_code_for(DomainError("x")), 3);
}
