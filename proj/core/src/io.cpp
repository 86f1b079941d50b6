#include "vpd/io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "vpd/error.hpp"

namespace vpd {

namespace fs = std::filesystem;

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
  const auto* where = static_cast<const std::string*>(png_get_error_ptr(png));
  throw IoError(*where + ": " + msg);
}

void png_warning_fn(png_structp, png_const_charp) {}

struct RawPng {
  int width = 0;
  int height = 0;
  int channels = 0;   // after expansion and alpha stripping: 1 or 3
  int bit_depth = 0;  // 8 or 16
  std::vector<std::uint16_t> samples;
};

class PngReader {
 public:
  explicit PngReader(std::string where) : where_(std::move(where)) {
    png_ = png_create_read_struct(PNG_LIBPNG_VER_STRING, &where_, png_error_fn, png_warning_fn);
    if (png_ == nullptr) throw IoError(where_ + ": cannot initialise PNG reader");
    info_ = png_create_info_struct(png_);
    if (info_ == nullptr) {
      png_destroy_read_struct(&png_, nullptr, nullptr);
      throw IoError(where_ + ": cannot initialise PNG reader");
    }
  }
  ~PngReader() { png_destroy_read_struct(&png_, &info_, nullptr); }
  PngReader(const PngReader&) = delete;
  PngReader& operator=(const PngReader&) = delete;

  RawPng read(std::FILE* fp) {
    png_byte signature[8];
    if (std::fread(signature, 1, 8, fp) != 8 || png_sig_cmp(signature, 0, 8) != 0) {
      throw IoError(where_ + ": unsupported or corrupt image format (not a PNG)");
    }
    png_init_io(png_, fp);
    png_set_sig_bytes(png_, 8);
    png_read_info(png_, info_);

    const auto color_type = png_get_color_type(png_, info_);
    png_set_expand(png_);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png_);
    if (png_get_valid(png_, info_, PNG_INFO_tRNS)) png_set_strip_alpha(png_);
    if (png_get_bit_depth(png_, info_) == 16) png_set_swap(png_);
    png_read_update_info(png_, info_);

    RawPng out;
    out.width = static_cast<int>(png_get_image_width(png_, info_));
    out.height = static_cast<int>(png_get_image_height(png_, info_));
    out.channels = png_get_channels(png_, info_);
    out.bit_depth = png_get_bit_depth(png_, info_);
    if (out.channels != 1 && out.channels != 3) {
      throw IoError(where_ + ": unsupported channel layout");
    }
    const std::size_t rowbytes = png_get_rowbytes(png_, info_);
    std::vector<png_byte> buffer(rowbytes * out.height);
    std::vector<png_bytep> rows(out.height);
    for (int y = 0; y < out.height; ++y) rows[y] = buffer.data() + rowbytes * y;
    png_read_image(png_, rows.data());
    png_read_end(png_, nullptr);

    const std::size_t n = static_cast<std::size_t>(out.width) * out.height * out.channels;
    out.samples.resize(n);
    if (out.bit_depth == 16) {
      for (std::size_t i = 0; i < n; ++i) {
        out.samples[i] = static_cast<std::uint16_t>(buffer[2 * i] | (buffer[2 * i + 1] << 8));
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) out.samples[i] = buffer[i];
    }
    return out;
  }

 private:
  std::string where_;
  png_structp png_ = nullptr;
  png_infop info_ = nullptr;
};

class PngWriter {
 public:
  explicit PngWriter(std::string where) : where_(std::move(where)) {
    png_ = png_create_write_struct(PNG_LIBPNG_VER_STRING, &where_, png_error_fn, png_warning_fn);
    if (png_ == nullptr) throw IoError(where_ + ": cannot initialise PNG writer");
    info_ = png_create_info_struct(png_);
    if (info_ == nullptr) {
      png_destroy_write_struct(&png_, nullptr);
      throw IoError(where_ + ": cannot initialise PNG writer");
    }
  }
  ~PngWriter() { png_destroy_write_struct(&png_, &info_); }
  PngWriter(const PngWriter&) = delete;
  PngWriter& operator=(const PngWriter&) = delete;

  // `bytes` holds big-endian samples for 16-bit output.
  void write(std::FILE* fp, int width, int height, int channels, int bit_depth,
             const std::vector<png_byte>& bytes) {
    png_init_io(png_, fp);
    png_set_IHDR(png_, info_, width, height, bit_depth,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png_, info_);
    const std::size_t rowbytes = static_cast<std::size_t>(width) * channels * (bit_depth / 8);
    for (int y = 0; y < height; ++y) {
      png_write_row(png_, bytes.data() + rowbytes * y);
    }
    png_write_end(png_, nullptr);
  }

 private:
  std::string where_;
  png_structp png_ = nullptr;
  png_infop info_ = nullptr;
};

RawPng read_png(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) throw IoError(path.string() + ": file not found");
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) throw IoError(path.string() + ": cannot open file");
  PngReader reader(path.string());
  return reader.read(fp.get());
}

void write_png_atomic(const fs::path& path, int width, int height, int channels, int bit_depth,
                      const std::vector<png_byte>& bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    FilePtr fp(std::fopen(tmp.string().c_str(), "wb"));
    if (!fp) throw IoError(path.string() + ": cannot open file for writing");
    PngWriter writer(path.string());
    writer.write(fp.get(), width, height, channels, bit_depth, bytes);
    if (std::fflush(fp.get()) != 0) throw IoError(path.string() + ": write failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError(path.string() + ": " + ec.message());
}

}  // namespace

Image load_image(const fs::path& path) {
  RawPng raw = read_png(path);
  std::vector<float> samples(raw.samples.size());
  const float scale = raw.bit_depth == 16 ? 255.0f / 65535.0f : 1.0f;
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = raw.samples[i] * scale;
  return Image(raw.width, raw.height, raw.channels, std::move(samples));
}

void save_image(const Image& img, const fs::path& path) {
  if (img.empty()) throw InvalidArgument(path.string() + ": cannot save an empty image");
  const auto src = img.samples();
  std::vector<png_byte> bytes(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    bytes[i] = static_cast<png_byte>(std::lround(std::clamp(src[i], 0.0f, 255.0f)));
  }
  write_png_atomic(path, img.width(), img.height(), img.channels(), 8, bytes);
}

void save_label_map(const LabelMap& map, const fs::path& path) {
  if (map.empty()) throw InvalidArgument(path.string() + ": label map has a zero dimension");
  const auto labels = map.labels();
  std::vector<png_byte> bytes(labels.size() * 2);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > 65535) {
      throw InvalidArgument(path.string() + ": label " + std::to_string(labels[i]) +
                            " exceeds the 16-bit label-map range");
    }
    bytes[2 * i] = static_cast<png_byte>(labels[i] >> 8);
    bytes[2 * i + 1] = static_cast<png_byte>(labels[i] & 0xff);
  }
  write_png_atomic(path, map.width(), map.height(), 1, 16, bytes);
}

LabelMap load_label_map(const fs::path& path) {
  RawPng raw = read_png(path);
  if (raw.channels != 1) {
    throw IoError(path.string() + ": label map must be a single-channel raster");
  }
  std::vector<std::uint32_t> labels(raw.samples.begin(), raw.samples.end());
  return LabelMap(raw.width, raw.height, std::move(labels));
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string() + ": cannot open file for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError(path.string() + ": write failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError(path.string() + ": " + ec.message());
}

}  // namespace vpd
