#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "vpd/features.hpp"

namespace vpd {

struct SplashEndpoint {
  std::uint32_t neighbor = 0;  // keypoint index
  int dx = 0;                  // neighbor.x - center.x
  int dy = 0;
  int rank = 0;  // 1 = most similar
};

/// Star of up to k displacement edges from keypoint `center` to its most
/// descriptor-similar keypoints outside the exclusion radius.
struct Splash {
  std::uint32_t center = 0;
  int k = 0;  // requested neighbor count; endpoints.size() may be smaller
  std::vector<SplashEndpoint> endpoints;
};

/// Squared Euclidean distance between two descriptor rows.
float descriptor_distance_sq(std::span<const float> a, std::span<const float> b) noexcept;

/// Brute-force k-NN in descriptor space, one splash per keypoint (index
/// aligned). Ties go to the lower keypoint index. Returns an empty list when
/// there are fewer than two keypoints.
std::vector<Splash> build_splashes(const DescriptorSet& desc, const KeypointSet& kps, int k,
                                   double exclusion_radius);

}  // namespace vpd
