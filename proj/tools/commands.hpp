#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vpd/config.hpp"
#include "vpd/corruption.hpp"
#include "vpd/synthetic.hpp"

namespace vpd::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kPipelineError = 1;
inline constexpr int kUsageError = 2;

struct RunOptions {
  std::filesystem::path image;
  std::filesystem::path out_dir;
  PipelineConfig config;
  bool debug_dumps = false;
  bool scale_radius = false;  // rescale daisy_radius to the image size
};

struct EvalOptions {
  std::filesystem::path mask;
  std::optional<std::filesystem::path> instances;
  std::vector<std::filesystem::path> gt;
  int level = 2;
  std::optional<std::filesystem::path> out;
};

struct SynthOptions {
  SyntheticSpec spec;
  std::filesystem::path out_dir;
  std::string name = "scene";
};

struct CorruptOptions {
  std::filesystem::path image;
  CorruptionKind kind = CorruptionKind::GaussianNoise;
  std::uint64_t seed = 0;
  std::filesystem::path out;
};

struct Sweep {
  std::string key;
  std::vector<std::string> values;
};

struct BenchOptions {
  std::filesystem::path dir;
  PipelineConfig config;
  int level = 2;
  std::optional<Sweep> sweep;
  std::filesystem::path out;
  int jobs = 1;
  bool scale_radius = false;
};

/// `key=v1,v2,...`; the key must be a config key.
Sweep parse_sweep(const std::string& text);

/// Picks the GT path whose stem ends in `_L<level>`; a single path is used as is.
std::filesystem::path select_gt(const std::vector<std::filesystem::path>& gt, int level);

int cmd_run(const RunOptions& opts);
int cmd_eval(const EvalOptions& opts);
int cmd_synth(const SynthOptions& opts);
int cmd_corrupt(const CorruptOptions& opts);
int cmd_bench(const BenchOptions& opts);

}  // namespace vpd::cli
