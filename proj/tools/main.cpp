#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "commands.hpp"
#include "vpd/error.hpp"
#include "vpd/pipeline.hpp"

namespace {

using namespace vpd;
using namespace vpd::cli;

// Config file plus one `--<key> value` override per config key.
struct ConfigFlags {
  std::string file;
  std::map<std::string, std::string> overrides;

  void attach(CLI::App* app) {
    app->add_option("--config", file, "Config file ([section] / key = value)");
    for (const auto& key : PipelineConfig::keys()) {
      app->add_option("--" + key, overrides[key],
                      "Override " + std::string(PipelineConfig::section_of(key)) + "." + key)
          ->group("Config overrides");
    }
  }

  PipelineConfig resolve(const CLI::App* app) const {
    PipelineConfig config = file.empty() ? PipelineConfig{} : load_config(file);
    for (const auto& key : PipelineConfig::keys()) {
      if (app->count("--" + key) > 0) config.set(key, overrides.at(key));
    }
    config.validate();
    return config;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vpd: unsupervised discovery of repeated visual patterns"};
  app.require_subcommand(1);

  RunOptions run;
  ConfigFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "Segment the repeated patterns of one image");
  run_cmd->add_option("image", run.image, "Input PNG")->required();
  run_cmd->add_option("-o,--out", run.out_dir, "Output directory")->required();
  run_cmd->add_flag("--debug-dumps", run.debug_dumps,
                    "Also write keypoints, descriptors, accumulator and superpixels");
  run_cmd->add_flag("--scale-radius", run.scale_radius,
                    "Rescale daisy_radius from 5 MP photographs to this image's size");
  run_flags.attach(run_cmd);

  EvalOptions eval;
  std::vector<std::string> gt_paths;
  std::string eval_instances, eval_out;
  auto* eval_cmd = app.add_subcommand("eval", "Score a category mask against ground truth");
  eval_cmd->add_option("--mask", eval.mask, "Category mask (16-bit PNG)")->required();
  eval_cmd->add_option("--gt", gt_paths, "Ground-truth map(s); *_L1 / *_L2 chosen by --level")->required();
  eval_cmd->add_option("--level", eval.level, "Semantic level")->check(CLI::Range(1, 2));
  eval_cmd->add_option("--instances", eval_instances,
                       "Instance map (instances.png from run); default: connected regions of the mask");
  eval_cmd->add_option("--out", eval_out, "Also write the JSON report here");

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic scene with two GT levels");
  synth_cmd->add_option("--motifs", synth.spec.motifs, "Distinct motifs");
  synth_cmd->add_option("--instances", synth.spec.instances, "Copies per motif");
  synth_cmd->add_option("--width", synth.spec.width);
  synth_cmd->add_option("--height", synth.spec.height);
  synth_cmd->add_option("--motif-size", synth.spec.motif_size);
  synth_cmd->add_option("--jitter", synth.spec.jitter);
  synth_cmd->add_option("--spacing", synth.spec.spacing);
  synth_cmd->add_option("--noise", synth.spec.noise, "Gaussian noise std as a fraction of 255");
  synth_cmd->add_option("--seed", synth.spec.seed);
  synth_cmd->add_option("--name", synth.name, "File stem");
  synth_cmd->add_option("-o,--out", synth.out_dir, "Output directory")->required();

  CorruptOptions corrupt;
  std::string kind;
  auto* corrupt_cmd = app.add_subcommand("corrupt", "Apply one robustness corruption");
  corrupt_cmd->add_option("image", corrupt.image, "Input PNG")->required();
  corrupt_cmd->add_option("--kind", kind, "noise | blur | brightness | contrast")->required();
  corrupt_cmd->add_option("--seed", corrupt.seed);
  corrupt_cmd->add_option("-o,--out", corrupt.out, "Output PNG")->required();

  BenchOptions bench;
  ConfigFlags bench_flags;
  std::string sweep;
  auto* bench_cmd = app.add_subcommand("bench", "Run and evaluate every image of a directory");
  bench_cmd->add_option("dir", bench.dir, "Directory of NAME.png with NAME_L1/_L2.png")->required();
  bench_cmd->add_option("--level", bench.level)->check(CLI::Range(1, 2));
  bench_cmd->add_option("--sweep", sweep, "Parameter sweep, e.g. superpixel_count=50,100,150");
  bench_cmd->add_option("--jobs", bench.jobs, "Images processed in parallel")->check(CLI::PositiveNumber);
  bench_cmd->add_option("-o,--out", bench.out, "CSV output")->required();
  bench_cmd->add_flag("--scale-radius", bench.scale_radius,
                      "Rescale daisy_radius from 5 MP photographs to each image's size");
  bench_flags.attach(bench_cmd);

  ConfigFlags show_flags;
  auto* config_cmd = app.add_subcommand("config", "Print the effective configuration file");
  show_flags.attach(config_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*run_cmd) {
      run.config = run_flags.resolve(run_cmd);
      return cmd_run(run);
    }
    if (*eval_cmd) {
      for (const auto& p : gt_paths) eval.gt.emplace_back(p);
      if (!eval_instances.empty()) eval.instances = eval_instances;
      if (!eval_out.empty()) eval.out = eval_out;
      return cmd_eval(eval);
    }
    if (*synth_cmd) return cmd_synth(synth);
    if (*corrupt_cmd) {
      corrupt.kind = parse_corruption_kind(kind);
      return cmd_corrupt(corrupt);
    }
    if (*bench_cmd) {
      bench.config = bench_flags.resolve(bench_cmd);
      if (!sweep.empty()) bench.sweep = parse_sweep(sweep);
      return cmd_bench(bench);
    }
    if (*config_cmd) {
      std::cout << format_config(show_flags.resolve(config_cmd));
      return kOk;
    }
  } catch (const StageError& e) {
    std::cerr << "vpd: stage '" << e.stage() << "' failed: " << e.what() << '\n';
    return kPipelineError;
  } catch (const Error& e) {
    std::cerr << "vpd: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "vpd: " << e.what() << '\n';
    return kPipelineError;
  }
  return kUsageError;
}
