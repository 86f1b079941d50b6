#include "vpd/evaluation.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "vpd/error.hpp"

namespace vpd {

namespace {

void check_dims(const PatternInstances& seg, const LabelMap& gt) {
  if (seg.width != gt.width() || seg.height != gt.height()) {
    throw InvalidArgument("segmentation " + std::to_string(seg.width) + "x" +
                          std::to_string(seg.height) + " does not match ground truth " +
                          std::to_string(gt.width()) + "x" + std::to_string(gt.height()));
  }
}

// overlap[i][label] = pixels of instance i (1-based) carrying that GT label.
struct InstanceOverlap {
  std::vector<std::size_t> area;
  std::vector<std::map<std::uint32_t, std::size_t>> by_label;
};

InstanceOverlap overlap_with(const PatternInstances& seg, const std::vector<std::uint32_t>& gt) {
  InstanceOverlap o;
  o.area.assign(seg.instance_count() + 1, 0);
  o.by_label.resize(seg.instance_count() + 1);
  for (std::size_t p = 0; p < seg.instance_of_pixel.size(); ++p) {
    const std::uint32_t i = seg.instance_of_pixel[p];
    if (i == 0) continue;
    ++o.area[i];
    ++o.by_label[i][gt[p]];
  }
  return o;
}

// Argmax with ties to the lower key (std::map iterates ascending).
std::pair<std::uint32_t, std::size_t> best_overlap(const std::map<std::uint32_t, std::size_t>& m) {
  std::pair<std::uint32_t, std::size_t> best{0, 0};
  for (const auto& [label, count] : m) {
    if (count > best.second) best = {label, count};
  }
  return best;
}

std::vector<std::uint32_t> gt_vector(const LabelMap& gt) {
  return {gt.labels().begin(), gt.labels().end()};
}

std::map<std::uint32_t, std::size_t> region_sizes(const LabelMap& gt) {
  std::map<std::uint32_t, std::size_t> sizes;
  for (auto l : gt.labels()) {
    if (l != 0) ++sizes[l];
  }
  if (sizes.empty()) throw InvalidArgument("ground truth contains no labeled region");
  return sizes;
}

// 4-connected regions of equal nonzero label; 0 stays background.
std::vector<std::uint32_t> label_components(int w, int h, std::span<const std::uint32_t> labels,
                                            std::uint32_t& count) {
  std::vector<std::uint32_t> comp(labels.size(), 0);
  std::vector<std::size_t> stack;
  count = 0;
  for (std::size_t start = 0; start < labels.size(); ++start) {
    if (labels[start] == 0 || comp[start] != 0) continue;
    const std::uint32_t id = ++count;
    comp[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(p % w), y = static_cast<int>(p / w);
      const int nx[4] = {x - 1, x + 1, x, x};
      const int ny[4] = {y, y, y - 1, y + 1};
      for (int k = 0; k < 4; ++k) {
        if (nx[k] < 0 || ny[k] < 0 || nx[k] >= w || ny[k] >= h) continue;
        const std::size_t q = static_cast<std::size_t>(ny[k]) * w + nx[k];
        if (comp[q] == 0 && labels[q] == labels[start]) {
          comp[q] = id;
          stack.push_back(q);
        }
      }
    }
  }
  return comp;
}

}  // namespace

std::vector<std::uint32_t> PatternInstances::patterns() const {
  std::set<std::uint32_t> s(pattern_of_instance.begin(), pattern_of_instance.end());
  return {s.begin(), s.end()};
}

PatternInstances instances_from_segmentation(const SegmentationResult& seg,
                                             const SuperpixelLabeling& sp) {
  if (seg.mask.width() != sp.labels.width() || seg.mask.height() != sp.labels.height()) {
    throw InvalidArgument("segmentation and superpixel labeling differ in size");
  }
  PatternInstances out;
  out.width = sp.labels.width();
  out.height = sp.labels.height();
  std::vector<std::uint32_t> instance_of_sp(static_cast<std::size_t>(sp.count()) + 1, 0);
  for (std::size_t c = 0; c < seg.categories.size(); ++c) {
    for (auto node : seg.categories[c]) {
      out.pattern_of_instance.push_back(static_cast<std::uint32_t>(c + 1));
      instance_of_sp[node] = static_cast<std::uint32_t>(out.pattern_of_instance.size());
    }
  }
  out.instance_of_pixel.resize(sp.labels.size());
  for (std::size_t p = 0; p < sp.labels.size(); ++p) {
    out.instance_of_pixel[p] = instance_of_sp[sp.labels[p]];
  }
  return out;
}

PatternInstances instances_from_mask(const LabelMap& mask) {
  PatternInstances out;
  out.width = mask.width();
  out.height = mask.height();
  std::uint32_t count = 0;
  out.instance_of_pixel = label_components(mask.width(), mask.height(), mask.labels(), count);
  out.pattern_of_instance.assign(count, 0);
  for (std::size_t p = 0; p < mask.size(); ++p) {
    if (out.instance_of_pixel[p] != 0) out.pattern_of_instance[out.instance_of_pixel[p] - 1] = mask[p];
  }
  return out;
}

PatternInstances instances_from_maps(const LabelMap& mask, const LabelMap& instances) {
  if (mask.width() != instances.width() || mask.height() != instances.height()) {
    throw InvalidArgument("mask and instance map differ in size");
  }
  PatternInstances out;
  out.width = mask.width();
  out.height = mask.height();
  out.instance_of_pixel.assign(mask.size(), 0);
  std::map<std::uint32_t, std::uint32_t> dense;  // raw instance id -> 1-based
  for (std::size_t p = 0; p < mask.size(); ++p) {
    if (mask[p] == 0) continue;
    if (instances[p] == 0) throw InvalidArgument("masked pixel without an instance id");
    auto [it, inserted] = dense.try_emplace(instances[p], 0);
    if (inserted) {
      out.pattern_of_instance.push_back(mask[p]);
      it->second = static_cast<std::uint32_t>(out.pattern_of_instance.size());
    } else if (out.pattern_of_instance[it->second - 1] != mask[p]) {
      throw InvalidArgument("instance " + std::to_string(instances[p]) +
                            " spans more than one pattern label");
    }
    out.instance_of_pixel[p] = it->second;
  }
  return out;
}

std::vector<PatternDetail> pattern_details(const PatternInstances& seg, const LabelMap& gt) {
  check_dims(seg, gt);
  const auto overlap = overlap_with(seg, gt_vector(gt));
  std::map<std::uint32_t, std::vector<std::uint32_t>> touched;  // pattern -> t_p
  for (std::size_t i = 1; i <= seg.instance_count(); ++i) {
    if (overlap.area[i] == 0) continue;
    touched[seg.pattern_of_instance[i - 1]].push_back(best_overlap(overlap.by_label[i]).first);
  }
  std::vector<PatternDetail> out;
  for (const auto& [pattern, labels] : touched) {
    std::map<std::uint32_t, std::size_t> freq;
    for (auto l : labels) ++freq[l];
    const auto [mode, count] = best_overlap(freq);
    out.push_back({pattern, labels.size(), mode,
                   static_cast<double>(count) / static_cast<double>(labels.size())});
  }
  return out;
}

double mu_consistency(const PatternInstances& seg, const LabelMap& gt) {
  const auto details = pattern_details(seg, gt);
  if (details.empty()) return 0.0;
  // Summed in sorted order so renumbering patterns cannot change the rounding.
  std::vector<double> values;
  for (const auto& d : details) values.push_back(d.consistency);
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(details.size());
}

double average_best_recall(const PatternInstances& seg, const LabelMap& gt) {
  check_dims(seg, gt);
  const auto sizes = region_sizes(gt);
  // hits[(pattern, label)] = pattern footprint pixels inside the label region.
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> hits;
  for (std::size_t p = 0; p < seg.instance_of_pixel.size(); ++p) {
    const std::uint32_t i = seg.instance_of_pixel[p];
    if (i == 0 || gt[p] == 0) continue;
    ++hits[{seg.pattern_of_instance[i - 1], gt[p]}];
  }
  std::map<std::uint32_t, double> best;
  for (const auto& [key, count] : hits) {
    const double r = static_cast<double>(count) / static_cast<double>(sizes.at(key.second));
    best[key.second] = std::max(best[key.second], r);
  }
  double sum = 0.0;
  for (const auto& [label, r] : best) sum += r;
  return sum / static_cast<double>(sizes.size());
}

double total_recall(const PatternInstances& seg, const LabelMap& gt, double inside_fraction) {
  check_dims(seg, gt);
  const auto sizes = region_sizes(gt);
  const auto overlap = overlap_with(seg, gt_vector(gt));
  std::set<std::uint32_t> hit;
  for (std::size_t i = 1; i <= seg.instance_count(); ++i) {
    if (overlap.area[i] == 0) continue;
    for (const auto& [label, count] : overlap.by_label[i]) {
      if (label != 0 && static_cast<double>(count) >=
                            inside_fraction * static_cast<double>(overlap.area[i])) {
        hit.insert(label);
      }
    }
  }
  return static_cast<double>(hit.size()) / static_cast<double>(sizes.size());
}

ObjectScores object_precision_recall(const PatternInstances& seg, const LabelMap& gt,
                                     double outside_fraction) {
  check_dims(seg, gt);
  ObjectScores s;
  std::uint32_t objects = 0;
  const auto object_of = label_components(gt.width(), gt.height(), gt.labels(), objects);
  s.objects = objects;
  const auto overlap = overlap_with(seg, object_of);
  std::set<std::uint32_t> matched;
  for (std::size_t i = 1; i <= seg.instance_count(); ++i) {
    if (overlap.area[i] == 0) continue;
    ++s.instances;
    std::map<std::uint32_t, std::size_t> on_objects = overlap.by_label[i];
    on_objects.erase(0);
    if (on_objects.empty()) continue;
    const auto [object, inside] = best_overlap(on_objects);
    const double outside = static_cast<double>(overlap.area[i] - inside);
    if (outside <= outside_fraction * static_cast<double>(overlap.area[i])) {
      ++s.true_positives;
      matched.insert(object);
    }
  }
  s.matched_objects = matched.size();
  s.precision = s.instances == 0 ? 0.0 : static_cast<double>(s.true_positives) / s.instances;
  s.recall = s.objects == 0 ? 0.0 : static_cast<double>(s.matched_objects) / s.objects;
  return s;
}

EvalReport evaluate(const PatternInstances& seg, const LabelMap& gt) {
  EvalReport r;
  r.patterns = pattern_details(seg, gt);
  r.mu_consistency = mu_consistency(seg, gt);
  r.avg_best_recall = average_best_recall(seg, gt);
  r.total_recall = total_recall(seg, gt);
  const auto obj = object_precision_recall(seg, gt);
  r.object_precision = obj.precision;
  r.object_recall = obj.recall;
  return r;
}

std::string to_json(const EvalReport& report) {
  nlohmann::json j;
  j["mu_consistency"] = report.mu_consistency;
  j["avg_best_recall"] = report.avg_best_recall;
  j["total_recall"] = report.total_recall;
  j["object_precision"] = report.object_precision;
  j["object_recall"] = report.object_recall;
  // Rows omit the pattern id and use a canonical order so that renumbering
  // the mask leaves the report unchanged.
  auto details = report.patterns;
  std::sort(details.begin(), details.end(), [](const PatternDetail& a, const PatternDetail& b) {
    return std::tie(a.modal_label, a.instances, a.consistency) <
           std::tie(b.modal_label, b.instances, b.consistency);
  });
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : details) {
    rows.push_back({{"instances", p.instances},
                    {"modal_label", p.modal_label},
                    {"consistency", p.consistency}});
  }
  j["patterns"] = rows;
  return j.dump(2) + "\n";
}

}  // namespace vpd
