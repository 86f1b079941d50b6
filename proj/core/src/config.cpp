#include "vpd/config.hpp"

#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "vpd/error.hpp"
#include "vpd/io.hpp"

namespace vpd {

namespace pt = boost::property_tree;

namespace {

struct Field {
  const char* section;
  const char* key;
  std::function<void(PipelineConfig&, const std::string&)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

template <typename T>
T parse_value(std::string_view key, const std::string& text) {
  try {
    return boost::lexical_cast<T>(text);
  } catch (const boost::bad_lexical_cast&) {
    throw ConfigError("config key '" + std::string(key) + "': cannot parse '" + text + "'");
  }
}

template <typename T>
std::string format_value(T value) {
  // Shortest representation that parses back to the same value.
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

#define VPD_FIELD(section, name)                                                           \
  Field {                                                                                  \
    section, #name,                                                                        \
        [](PipelineConfig& c, const std::string& v) {                                      \
          c.name = parse_value<decltype(PipelineConfig::name)>(#name, v);                  \
        },                                                                                 \
        [](const PipelineConfig& c) { return format_value(c.name); }                       \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      VPD_FIELD("features", keypoint_budget),
      VPD_FIELD("features", canny_sigma),
      VPD_FIELD("features", canny_low),
      VPD_FIELD("features", canny_high),
      VPD_FIELD("features", daisy_radius),
      VPD_FIELD("splash", knn_k),
      VPD_FIELD("splash", exclusion_radius),
      VPD_FIELD("splash", vote_window),
      Field{"splash", "tau_mode",
            [](PipelineConfig& c, const std::string& v) { c.tau_mode = parse_tau_mode(v); },
            [](const PipelineConfig& c) { return std::string(to_string(c.tau_mode)); }},
      VPD_FIELD("splash", tau_value),
      VPD_FIELD("superpixels", superpixel_count),
      VPD_FIELD("superpixels", compactness),
      VPD_FIELD("superpixels", slic_iterations),
      VPD_FIELD("graph", alpha),
      VPD_FIELD("graph", min_category_nodes),
      VPD_FIELD("run", seed),
  };
  return table;
}

#undef VPD_FIELD

const Field& find_field(std::string_view key) {
  for (const auto& f : fields()) {
    if (key == f.key) return f;
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid config: " + what);
}

}  // namespace

std::string_view to_string(TauMode mode) noexcept {
  return mode == TauMode::Relative ? "relative" : "absolute";
}

TauMode parse_tau_mode(std::string_view text) {
  if (text == "relative") return TauMode::Relative;
  if (text == "absolute") return TauMode::Absolute;
  throw ConfigError("tau_mode must be 'relative' or 'absolute', got '" + std::string(text) + "'");
}

void PipelineConfig::validate() const {
  require(keypoint_budget > 0, "keypoint_budget must be positive");
  require(std::isfinite(canny_sigma) && canny_sigma > 0, "canny_sigma must be positive");
  require(std::isfinite(canny_low) && canny_low > 0, "canny_low must be positive");
  require(std::isfinite(canny_high) && canny_high > canny_low,
          "canny_high must exceed canny_low");
  require(daisy_radius >= 3, "daisy_radius must be at least 3 (one pixel per ring)");
  require(knn_k >= 1, "knn_k must be at least 1");
  require(std::isfinite(exclusion_radius) && exclusion_radius > 0,
          "exclusion_radius must be positive");
  require(vote_window >= 3 && vote_window % 2 == 1, "vote_window must be odd and >= 3");
  require(std::isfinite(tau_value) && tau_value > 0, "tau_value must be positive");
  require(superpixel_count >= 2, "superpixel_count must be at least 2");
  require(std::isfinite(compactness) && compactness > 0, "compactness must be positive");
  require(slic_iterations > 0, "slic_iterations must be positive");
  require(std::isfinite(alpha) && alpha >= 0, "alpha must be non-negative");
  require(min_category_nodes >= 1, "min_category_nodes must be at least 1");
}

void PipelineConfig::set(std::string_view key, std::string_view value) {
  find_field(key).set(*this, std::string(value));
}

std::string PipelineConfig::get(std::string_view key) const { return find_field(key).get(*this); }

const std::vector<std::string>& PipelineConfig::keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& f : fields()) out.emplace_back(f.key);
    return out;
  }();
  return names;
}

std::string_view PipelineConfig::section_of(std::string_view key) {
  return find_field(key).section;
}

PipelineConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  PipelineConfig config;
  for (const auto& [section, entries] : tree) {
    if (entries.empty()) {
      throw ConfigError("config key '" + section + "' must appear under a [section] header");
    }
    for (const auto& [key, value] : entries) {
      const Field& f = find_field(key);
      if (section != f.section) {
        throw ConfigError("config key '" + key + "' belongs in [" + f.section + "], found in [" +
                          section + "]");
      }
      f.set(config, value.get_value<std::string>());
    }
  }
  config.validate();
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": file not found");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string format_config(const PipelineConfig& config) {
  std::ostringstream out;
  std::string current;
  for (const auto& f : fields()) {
    if (current != f.section) {
      if (!current.empty()) out << '\n';
      current = f.section;
      out << '[' << current << "]\n";
    }
    out << f.key << " = " << f.get(config) << '\n';
  }
  return out.str();
}

void save_config(const PipelineConfig& config, const std::filesystem::path& path) {
  write_file_atomic(path, format_config(config));
}

}  // namespace vpd
