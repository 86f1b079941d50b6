#pragma once

#include <cstdint>

#include "vpd/image.hpp"

namespace vpd {

struct SyntheticSpec {
  int motifs = 3;
  int instances = 12;  // per motif
  int width = 560;
  int height = 480;
  int motif_size = 44;
  int jitter = 6;    // max placement offset inside a grid cell, pixels
  int spacing = 24;  // minimum free band between neighboring cells
  double noise = 0.02;  // additive Gaussian std as a fraction of 255
  std::uint64_t seed = 0;

  void validate() const;
  int cell_size() const noexcept { return motif_size + 2 * jitter + spacing; }
  int capacity() const noexcept;
};

/// Level 2 labels motif identity, level 1 the family; motifs 2f and 2f+1
/// share family f and its color palette.
struct SyntheticScene {
  Image image;  // RGB
  LabelMap level1;
  LabelMap level2;
};

/// Renders `motifs` procedural tiles, each stamped `instances` times into
/// distinct jittered grid cells. Fully determined by the spec.
SyntheticScene generate_synthetic(const SyntheticSpec& spec);

}  // namespace vpd
