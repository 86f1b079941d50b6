#include "vpd/splash.hpp"

#include <algorithm>
#include <string>

#include "vpd/error.hpp"
#include "vpd/parallel.hpp"

namespace vpd {

float descriptor_distance_sq(std::span<const float> a, std::span<const float> b) noexcept {
  constexpr std::size_t kLanes = 8;
  float acc[kLanes] = {};
  const std::size_t n = a.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) {
      const float d = a[i + l] - b[i + l];
      acc[l] += d * d;
    }
  }
  for (; i < n; ++i) {
    const float d = a[i] - b[i];
    acc[0] += d * d;
  }
  return ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7]));
}

namespace {

// Candidates packed in groups of kPack, transposed so that one query can be
// dotted with a whole group using independent lanes. Every dot product is
// summed over the dimensions in the same order, so identical descriptors
// give bit-identical distances whatever their slot.
constexpr std::size_t kPack = 32;

struct PackedDescriptors {
  std::size_t dim = 0;
  std::size_t groups = 0;
  std::vector<float> values;  // [group][dim][kPack]

  PackedDescriptors(const DescriptorSet& desc) : dim(desc.dim) {
    const std::size_t n = desc.rows();
    groups = (n + kPack - 1) / kPack;
    values.assign(groups * dim * kPack, 0.0f);
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = desc.row(i);
      float* g = values.data() + (i / kPack) * dim * kPack + i % kPack;
      for (std::size_t d = 0; d < dim; ++d) g[d * kPack] = row[d];
    }
  }
  const float* group(std::size_t g) const noexcept { return values.data() + g * dim * kPack; }
};

void dot_group(const float* query, const float* group, std::size_t dim, float out[kPack]) noexcept {
  float acc[kPack] = {};
  for (std::size_t d = 0; d < dim; ++d) {
    const float q = query[d];
    const float* col = group + d * kPack;
    for (std::size_t c = 0; c < kPack; ++c) acc[c] += q * col[c];
  }
  for (std::size_t c = 0; c < kPack; ++c) out[c] = acc[c];
}

struct Candidate {
  float dist;
  std::uint32_t index;
  bool operator<(const Candidate& o) const noexcept {
    return dist < o.dist || (dist == o.dist && index < o.index);
  }
};

// Sorted top-k list; insert() keeps at most k entries.
class TopK {
 public:
  explicit TopK(std::size_t k) : k_(k) { best_.reserve(k + 1); }
  void insert(const Candidate& c) {
    if (best_.size() == k_ && !(c < best_.back())) return;
    best_.insert(std::upper_bound(best_.begin(), best_.end(), c), c);
    if (best_.size() > k_) best_.pop_back();
  }
  const std::vector<Candidate>& items() const noexcept { return best_; }

 private:
  std::size_t k_;
  std::vector<Candidate> best_;
};

}  // namespace

std::vector<Splash> build_splashes(const DescriptorSet& desc, const KeypointSet& kps, int k,
                                   double exclusion_radius) {
  if (k < 1) throw InvalidArgument("splash size k must be at least 1");
  if (desc.rows() != kps.size()) {
    throw InvalidArgument("descriptor count " + std::to_string(desc.rows()) +
                          " does not match keypoint count " + std::to_string(kps.size()));
  }
  const std::size_t n = kps.size();
  if (n <= 1) return {};

  const std::size_t dim = desc.dim;
  const PackedDescriptors packed(desc);
  std::vector<float> norms(n);
  for (std::size_t g = 0; g < packed.groups; ++g) {
    float sq[kPack];
    for (std::size_t c = 0; c < kPack && g * kPack + c < n; ++c) {
      dot_group(desc.row(g * kPack + c).data(), packed.group(g), dim, sq);
      norms[g * kPack + c] = sq[c];
    }
  }

  const double excl_sq = exclusion_radius * exclusion_radius;
  std::vector<Splash> splashes(n);
  // Queries are tiled so one candidate group stays cache resident across them.
  constexpr std::size_t kQueryBlock = 64;

  parallel_for((n + kQueryBlock - 1) / kQueryBlock, [&](std::size_t block_begin, std::size_t block_end) {
    for (std::size_t qb = block_begin; qb < block_end; ++qb) {
      const std::size_t q0 = qb * kQueryBlock;
      const std::size_t q1 = std::min(n, q0 + kQueryBlock);
      std::vector<TopK> best(q1 - q0, TopK(static_cast<std::size_t>(k)));
      for (std::size_t g = 0; g < packed.groups; ++g) {
        const float* group = packed.group(g);
        const std::size_t c0 = g * kPack;
        const std::size_t c1 = std::min(n, c0 + kPack);
        for (std::size_t j = q0; j < q1; ++j) {
          float ab[kPack];
          dot_group(desc.row(j).data(), group, dim, ab);
          const Point pj = kps[j];
          TopK& top = best[j - q0];
          for (std::size_t l = c0; l < c1; ++l) {
            if (l == j) continue;
            const double sx = kps[l].x - pj.x;
            const double sy = kps[l].y - pj.y;
            if (sx * sx + sy * sy <= excl_sq) continue;
            const float d = std::max(0.0f, norms[j] + norms[l] - 2.0f * ab[l - c0]);
            top.insert({d, static_cast<std::uint32_t>(l)});
          }
        }
      }
      for (std::size_t j = q0; j < q1; ++j) {
        const auto& items = best[j - q0].items();
        Splash& s = splashes[j];
        s.center = static_cast<std::uint32_t>(j);
        s.k = k;
        s.endpoints.reserve(items.size());
        const Point c = kps[j];
        for (std::size_t r = 0; r < items.size(); ++r) {
          const Point p = kps[items[r].index];
          s.endpoints.push_back({items[r].index, p.x - c.x, p.y - c.y, static_cast<int>(r + 1)});
        }
      }
    }
  }, 1);
  return splashes;
}

}  // namespace vpd
