// siginv command line: one subcommand per pipeline stage plus `pipeline`,
// which runs them all. Settings come from a key = value file (--config)
// with --set key=value overrides applied on top.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "siginv/errors.hpp"
#include "siginv/pipeline.hpp"

namespace {

struct Common {
  std::string config_file;
  std::vector<std::string> overrides;
};

siginv::Config build_config(const Common& c) {
  siginv::Config cfg = c.config_file.empty() ? siginv::Config{} : siginv::Config::load(c.config_file);
  for (const auto& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw siginv::ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

siginv::PipelineSettings settings(const Common& c) {
  return siginv::PipelineSettings::from_config(build_config(c));
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("-c,--config", c.config_file, "key = value configuration file");
  app->add_option("-s,--set", c.overrides, "override one key, e.g. --set epochs=50 (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signature inversion and log-signature diffusion toolkit"};
  app.set_version_flag("--version", siginv::library_version());
  app.require_subcommand(1);

  Common common;
  std::string out, paths, prefix, checkpoint, samples, real, generated;

  auto* gen = app.add_subcommand("gen-data", "generate or ingest a path set (CSV)");
  add_common(gen, common);
  gen->add_option("-o,--out", out, "output paths CSV")->required();

  auto* embed = app.add_subcommand("embed", "per-channel log-signature embedding");
  add_common(embed, common);
  embed->add_option("-p,--paths", paths, "input paths CSV")->required();
  embed->add_option("-o,--out", prefix, "output prefix; writes PREFIX.csv and PREFIX.json")->required();

  auto* train = app.add_subcommand("train", "fit the score network on an embedding");
  add_common(train, common);
  train->add_option("-e,--embedding", prefix, "embedding prefix")->required();
  train->add_option("-o,--out", checkpoint, "output checkpoint JSON")->required();

  auto* sample = app.add_subcommand("sample", "draw log-signatures from a checkpoint");
  add_common(sample, common);
  sample->add_option("-k,--checkpoint", checkpoint, "checkpoint JSON")->required();
  sample->add_option("-e,--embedding", prefix, "embedding prefix the checkpoint was trained on")->required();
  sample->add_option("-o,--out", out, "output samples CSV")->required();

  auto* invert = app.add_subcommand("invert", "turn log-signature rows back into paths");
  invert->add_option("-i,--samples", samples, "samples CSV")->required();
  invert->add_option("-e,--embedding", prefix, "embedding prefix (basis, order, grid)")->required();
  invert->add_option("-o,--out", out, "output paths CSV")->required();

  auto* eval = app.add_subcommand("eval", "KS marginal protocol, real vs generated");
  add_common(eval, common);
  eval->add_option("-r,--real", real, "real paths CSV")->required();
  eval->add_option("-g,--generated", generated, "generated paths CSV")->required();
  eval->add_option("-o,--out", prefix, "output prefix; writes PREFIX.json and PREFIX.csv")->required();

  auto* pipe = app.add_subcommand("pipeline", "run every stage and write a manifest");
  add_common(pipe, common);
  pipe->add_option("-o,--out", out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*gen) {
      siginv::stage_gen_data(settings(common), out);
    } else if (*embed) {
      siginv::stage_embed(settings(common), paths, prefix);
    } else if (*train) {
      siginv::stage_train(settings(common), prefix, checkpoint);
    } else if (*sample) {
      siginv::stage_sample(settings(common), checkpoint, prefix, out);
    } else if (*invert) {
      siginv::stage_invert(samples, prefix, out);
    } else if (*eval) {
      const auto rep = siginv::stage_eval(settings(common), real, generated, prefix);
      std::cout << "mean_ks " << rep.mean_ks << "  type1_rate " << rep.type1_rate << '\n';
    } else if (*pipe) {
      siginv::run_pipeline(build_config(common), out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return siginv::exit_code_for(e);
  }
  return 0;
}
