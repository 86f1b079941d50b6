#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "vpd/config.hpp"
#include "vpd/error.hpp"
#include "vpd/io.hpp"

namespace vpd {
namespace {

using testing::fresh_temp_dir;

TEST(Image, SampleCountMatchesShape) {
  const Image img(7, 5, 3);
  EXPECT_EQ(img.samples().size(), 7u * 5u * 3u);
  EXPECT_THROW(Image(0, 5, 1), InvalidArgument);
  EXPECT_THROW(Image(4, 4, 2), InvalidArgument);
  EXPECT_THROW(Image(2, 2, 1, std::vector<float>(3)), InvalidArgument);
}

TEST(Image, LumaUsesRec601Weights) {
  Image rgb(1, 1, 3);
  rgb.at(0, 0, 0) = 100;
  rgb.at(0, 0, 1) = 200;
  rgb.at(0, 0, 2) = 50;
  EXPECT_NEAR(to_luma(rgb).at(0, 0), 0.299 * 100 + 0.587 * 200 + 0.114 * 50, 1e-4);
}

TEST(LabelMap, CanonicalizeRenumbersInFirstAppearanceOrder) {
  const LabelMap m(4, 1, {0, 9, 3, 9});
  const LabelMap c = canonicalize(m);
  EXPECT_EQ(std::vector<std::uint32_t>(c.labels().begin(), c.labels().end()),
            (std::vector<std::uint32_t>{0, 1, 2, 1}));
}

TEST(Io, GrayImageRoundTrip) {
  const auto dir = fresh_temp_dir("io_gray");
  Image img(100, 100, 1);
  for (int y = 0; y < 100; ++y)
    for (int x = 0; x < 100; ++x) img.at(x, y) = static_cast<float>((x * 3 + y) % 256);
  save_image(img, dir / "g.png");
  const Image back = load_image(dir / "g.png");
  EXPECT_EQ(back.channels(), 1);
  EXPECT_EQ(back, img);
}

TEST(Io, ColorImageStaysColor) {
  const auto dir = fresh_temp_dir("io_rgb");
  const Image img = testing::random_scene(31, 17, 4);
  Image rounded = img;
  for (float& v : rounded.samples()) v = std::round(v);
  save_image(img, dir / "c.png");
  const Image back = load_image(dir / "c.png");
  EXPECT_EQ(back.width(), 31);
  EXPECT_EQ(back.height(), 17);
  EXPECT_EQ(back.channels(), 3);
  EXPECT_EQ(back, rounded);
}

TEST(Io, MissingFileNamesThePath) {
  try {
    load_image("/nonexistent/dir/missing.png");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/missing.png"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("not found"), std::string::npos);
  }
}

TEST(Io, CorruptFileIsAnIoError) {
  const auto dir = fresh_temp_dir("io_corrupt");
  write_file_atomic(dir / "bad.png", "definitely not a png");
  EXPECT_THROW(load_image(dir / "bad.png"), IoError);
  EXPECT_THROW(load_label_map(dir / "bad.png"), IoError);
}

TEST(Io, LabelMapRoundTripIsExact) {
  const auto dir = fresh_temp_dir("io_labels");
  const LabelMap zeros(13, 9);
  save_label_map(zeros, dir / "z.png");
  EXPECT_EQ(load_label_map(dir / "z.png"), zeros);

  const LabelMap small(3, 2, {0, 1, 2, 2, 1, 0});
  save_label_map(small, dir / "s.png");
  EXPECT_EQ(load_label_map(dir / "s.png"), small);

  // Property: any labels up to 65535 survive bit-exactly.
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint32_t> label(0, 65535);
  for (int trial = 0; trial < 20; ++trial) {
    LabelMap m(1 + trial * 3, 1 + trial * 2);
    for (auto& v : m.labels()) v = label(rng);
    m.at(0, 0) = 65535;
    save_label_map(m, dir / "r.png");
    ASSERT_EQ(load_label_map(dir / "r.png"), m) << "trial " << trial;
  }
}

TEST(Io, LabelOverflowIsRejected) {
  const auto dir = fresh_temp_dir("io_overflow");
  LabelMap m(2, 2);
  m.at(1, 1) = 70000;
  EXPECT_THROW(save_label_map(m, dir / "o.png"), InvalidArgument);
  EXPECT_FALSE(std::filesystem::exists(dir / "o.png"));
  EXPECT_THROW(save_label_map(LabelMap(), dir / "e.png"), InvalidArgument);
}

TEST(Io, AtomicWriteReplacesContents) {
  const auto dir = fresh_temp_dir("io_atomic");
  write_file_atomic(dir / "f.txt", "one");
  write_file_atomic(dir / "f.txt", "two");
  EXPECT_EQ(testing::read_file(dir / "f.txt"), "two");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  EXPECT_EQ(files, 1u);
}

TEST(Config, DefaultsArePublishedSetting) {
  const PipelineConfig c;
  EXPECT_EQ(c.keypoint_budget, 9000);
  EXPECT_EQ(c.knn_k, 15);
  EXPECT_EQ(c.daisy_radius, 30);
  EXPECT_EQ(c.superpixel_count, 150);
  EXPECT_EQ(c.vote_window, 11);
  EXPECT_EQ(c.tau_mode, TauMode::Relative);
  EXPECT_DOUBLE_EQ(c.tau_value, 0.05);
  EXPECT_NO_THROW(c.validate());
}

// Every field paired with values that break its bound.
struct InvalidCase {
  const char* key;
  std::vector<const char*> values;
};

const std::vector<InvalidCase>& invalid_cases() {
  static const std::vector<InvalidCase> cases = {
      {"keypoint_budget", {"0", "-5"}},
      {"canny_sigma", {"0", "-1", "nan", "inf"}},
      {"canny_low", {"0", "-3"}},
      {"canny_high", {"50", "10"}},
      {"daisy_radius", {"0", "2", "-30"}},
      {"knn_k", {"0", "-1"}},
      {"exclusion_radius", {"0", "-2"}},
      {"vote_window", {"1", "2", "10", "-11"}},
      {"tau_value", {"0", "-0.05"}},
      {"superpixel_count", {"1", "0", "-150"}},
      {"compactness", {"0", "-10"}},
      {"slic_iterations", {"0"}},
      {"alpha", {"-0.5", "nan"}},
      {"min_category_nodes", {"0"}},
  };
  return cases;
}

TEST(Config, ValidationRejectsEveryOutOfBoundField) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto& cases = invalid_cases();
    const auto& c = cases[rng() % cases.size()];
    const char* value = c.values[rng() % c.values.size()];
    PipelineConfig config;
    // Unparsable values fail in set(), out-of-bound ones in validate().
    EXPECT_THROW(
        {
          config.set(c.key, value);
          config.validate();
        },
        ConfigError)
        << c.key << " = " << value;
  }
}

TEST(Config, ValidationAcceptsRandomInBoundConfigs) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    PipelineConfig c;
    c.keypoint_budget = 1 + static_cast<int>(rng() % 20000);
    c.canny_low = 1 + static_cast<double>(rng() % 100);
    c.canny_high = c.canny_low + 1 + static_cast<double>(rng() % 100);
    c.daisy_radius = 3 + static_cast<int>(rng() % 60);
    c.knn_k = 1 + static_cast<int>(rng() % 40);
    c.vote_window = 3 + 2 * static_cast<int>(rng() % 10);
    c.superpixel_count = 2 + static_cast<int>(rng() % 400);
    c.tau_mode = rng() % 2 ? TauMode::Relative : TauMode::Absolute;
    c.tau_value = 0.001 + static_cast<double>(rng() % 1000) / 100.0;
    c.alpha = static_cast<double>(rng() % 100) / 10.0;
    EXPECT_NO_THROW(c.validate());
  }
}

TEST(Config, FileRoundTrip) {
  PipelineConfig c;
  c.keypoint_budget = 1234;
  c.canny_sigma = 0.1 + 0.2;  // not exactly representable as a short decimal
  c.tau_mode = TauMode::Absolute;
  c.tau_value = 5;
  c.alpha = 1.25;
  c.seed = 18446744073709551615ull;
  EXPECT_EQ(parse_config(format_config(c)), c);

  const auto dir = fresh_temp_dir("config");
  save_config(c, dir / "c.ini");
  EXPECT_EQ(load_config(dir / "c.ini"), c);
}

TEST(Config, MissingKeysKeepDefaultsAndSectionsAreChecked) {
  const PipelineConfig c = parse_config("[splash]\nknn_k = 7\n");
  EXPECT_EQ(c.knn_k, 7);
  EXPECT_EQ(c.superpixel_count, 150);
  EXPECT_THROW(parse_config("[splash]\nno_such_key = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[graph]\nknn_k = 7\n"), ConfigError);
  EXPECT_THROW(parse_config("[splash]\nknn_k = seven\n"), ConfigError);
  EXPECT_THROW(parse_config("[splash]\nvote_window = 4\n"), ConfigError);
}

TEST(Config, EveryKeyHasASectionAndGetSetRoundTrips) {
  PipelineConfig c;
  for (const auto& key : PipelineConfig::keys()) {
    EXPECT_FALSE(PipelineConfig::section_of(key).empty());
    PipelineConfig d;
    d.set(key, c.get(key));
    EXPECT_EQ(d, c) << key;
  }
  EXPECT_THROW(c.set("bogus", "1"), ConfigError);
}

}  // namespace
}  // namespace vpd
