#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>

#include "vpd/evaluation.hpp"
#include "vpd/io.hpp"
#include "vpd/pipeline.hpp"

namespace vpd::cli {

namespace fs = std::filesystem;

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir.string() + ": " + ec.message());
}

struct ImageJob {
  fs::path image;
  fs::path gt;
};

std::vector<ImageJob> collect_bench_images(const fs::path& dir, int level) {
  if (!fs::is_directory(dir)) throw IoError(dir.string() + ": not a directory");
  std::vector<ImageJob> jobs;
  const std::string suffix = "_L" + std::to_string(level);
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto& p = entry.path();
    if (p.extension() != ".png") continue;
    const std::string stem = p.stem().string();
    if (stem.size() > 3 && stem[stem.size() - 3] == '_' && stem[stem.size() - 2] == 'L') continue;
    fs::path gt = p.parent_path() / (stem + suffix + ".png");
    if (fs::exists(gt)) jobs.push_back({p, gt});
  }
  std::sort(jobs.begin(), jobs.end(), [](const ImageJob& a, const ImageJob& b) { return a.image < b.image; });
  return jobs;
}

struct BenchRow {
  double mu = 0, recall = 0, total = 0, ms = 0;
};

BenchRow bench_one(const ImageJob& job, const PipelineConfig& config, bool scale_radius) {
  const Image img = load_image(job.image);
  const LabelMap gt = load_label_map(job.gt);
  const auto start = std::chrono::steady_clock::now();
  const PipelineResult r =
      run_pipeline(img, scale_radius ? scaled_to_image(config, img.width(), img.height()) : config);
  const auto end = std::chrono::steady_clock::now();
  const auto inst = instances_from_segmentation(r.segmentation, r.superpixels);
  return {mu_consistency(inst, gt), average_best_recall(inst, gt), total_recall(inst, gt),
          std::chrono::duration<double, std::milli>(end - start).count()};
}

}  // namespace

Sweep parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    throw ConfigError("sweep must look like key=v1,v2,... (got '" + text + "')");
  }
  Sweep s;
  s.key = text.substr(0, eq);
  PipelineConfig probe;
  probe.get(s.key);  // rejects unknown keys
  std::stringstream values(text.substr(eq + 1));
  for (std::string v; std::getline(values, v, ',');) {
    if (!v.empty()) s.values.push_back(v);
  }
  if (s.values.empty()) throw ConfigError("sweep '" + text + "' lists no values");
  return s;
}

fs::path select_gt(const std::vector<fs::path>& gt, int level) {
  if (gt.empty()) throw InvalidArgument("no ground-truth map given");
  if (gt.size() == 1) return gt.front();
  const std::string suffix = "_L" + std::to_string(level);
  for (const auto& p : gt) {
    const std::string stem = p.stem().string();
    if (stem.size() >= suffix.size() && stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0) {
      return p;
    }
  }
  throw InvalidArgument("no ground-truth map with suffix " + suffix + " among the given paths");
}

int cmd_run(const RunOptions& opts) {
  const Image img = load_image(opts.image);
  ensure_dir(opts.out_dir);
  PipelineResult r;
  try {
    r = run_pipeline(img, opts.scale_radius ? scaled_to_image(opts.config, img.width(), img.height())
                                            : opts.config);
  } catch (const StageError& e) {
    std::cerr << "vpd run: stage '" << e.stage() << "' failed: " << e.what() << '\n';
    return kPipelineError;
  }
  const fs::path& out = opts.out_dir;
  save_label_map(r.segmentation.mask, out / "mask.png");
  save_label_map(instance_map(r.segmentation, r.superpixels), out / "instances.png");
  save_image(render_overlay(img, r.segmentation.mask), out / "overlay.png");
  write_file_atomic(out / "report.json", partition_report_json(r.partition, r.segmentation));
  write_file_atomic(out / "timing.json", timings_json(r.timings));
  if (opts.debug_dumps) {
    write_keypoints_csv(r.keypoints, out / "keypoints.csv");
    write_descriptors_binary(r.descriptors, out / "descriptors.bin");
    write_accumulator_binary(r.accumulator, out / "accumulator.bin");
    write_surviving_cells_csv(r.accumulator, r.hotspots.threshold_used, out / "hotspot_cells.csv");
    save_label_map(r.superpixels.labels, out / "superpixels.png");
  }
  std::cout << "categories: " << r.segmentation.categories.size() << "  keypoints: " << r.keypoints.size()
            << "  hotspot edges: " << r.hotspots.size() << "  superpixels: " << r.superpixels.count()
            << "  time: " << static_cast<long>(r.total_milliseconds()) << " ms\n";
  return kOk;
}

int cmd_eval(const EvalOptions& opts) {
  const LabelMap mask = load_label_map(opts.mask);
  const LabelMap gt = load_label_map(select_gt(opts.gt, opts.level));
  const PatternInstances inst = opts.instances ? instances_from_maps(mask, load_label_map(*opts.instances))
                                               : instances_from_mask(mask);
  const std::string json = to_json(evaluate(inst, gt));
  std::cout << json;
  if (opts.out) write_file_atomic(*opts.out, json);
  return kOk;
}

int cmd_synth(const SynthOptions& opts) {
  const SyntheticScene scene = generate_synthetic(opts.spec);
  ensure_dir(opts.out_dir);
  save_image(scene.image, opts.out_dir / (opts.name + ".png"));
  save_label_map(scene.level1, opts.out_dir / (opts.name + "_L1.png"));
  save_label_map(scene.level2, opts.out_dir / (opts.name + "_L2.png"));
  return kOk;
}

int cmd_corrupt(const CorruptOptions& opts) {
  const Image img = load_image(opts.image);
  save_image(corrupt_image(img, opts.kind, opts.seed), opts.out);
  return kOk;
}

int cmd_bench(const BenchOptions& opts) {
  const auto images = collect_bench_images(opts.dir, opts.level);
  if (images.empty()) {
    std::cerr << "vpd bench: no images with _L" << opts.level << " ground truth in " << opts.dir << '\n';
    return kUsageError;
  }
  std::vector<std::pair<std::string, PipelineConfig>> settings;
  std::string param = "-";
  if (opts.sweep) {
    param = opts.sweep->key;
    for (const auto& v : opts.sweep->values) {
      PipelineConfig c = opts.config;
      c.set(opts.sweep->key, v);
      c.validate();
      settings.emplace_back(v, c);
    }
  } else {
    settings.emplace_back("-", opts.config);
  }

  std::ostringstream csv;
  csv << "param,value,mu_consistency,avg_best_recall,total_recall,runtime_ms\n";
  for (const auto& [value, config] : settings) {
    std::vector<BenchRow> rows(images.size());
    try {
      const std::size_t jobs = static_cast<std::size_t>(std::max(1, opts.jobs));
      for (std::size_t begin = 0; begin < images.size(); begin += jobs) {
        std::vector<std::future<BenchRow>> batch;
        for (std::size_t i = begin; i < std::min(images.size(), begin + jobs); ++i) {
          batch.push_back(std::async(std::launch::async, bench_one, images[i], config, opts.scale_radius));
        }
        for (std::size_t i = 0; i < batch.size(); ++i) rows[begin + i] = batch[i].get();
      }
    } catch (const StageError& e) {
      std::cerr << "vpd bench: stage '" << e.stage() << "' failed: " << e.what() << '\n';
      return kPipelineError;
    }
    BenchRow mean;
    for (const auto& r : rows) {
      mean.mu += r.mu;
      mean.recall += r.recall;
      mean.total += r.total;
      mean.ms += r.ms;
    }
    const double n = static_cast<double>(rows.size());
    csv << param << ',' << value << ',' << mean.mu / n << ',' << mean.recall / n << ','
        << mean.total / n << ',' << mean.ms / n << '\n';
  }
  write_file_atomic(opts.out, csv.str());
  std::cout << csv.str();
  return kOk;
}

}  // namespace vpd::cli
