#include "headkey/config.hpp"

#include <cmath>
#include <fstream>
#include <istream>

#include "headkey/errors.hpp"
#include "text_util.hpp"

namespace headkey {

void EngineConfig::validate() const {
  segmentation.validate();
  if (recognizer.k < 1) throw InvalidInput("k must be >= 1");
  if (!(prominence_frac >= 0.0 && prominence_frac <= 1.0))
    throw InvalidInput("prominence_frac must lie in [0, 1]");
  spatial.validate();
  predictor.validate();
}

void set_config_value(EngineConfig& cfg, std::string_view key, std::string_view value) {
  auto number = [&]() {
    double v = 0.0;
    if (!detail::parse_double(value, v) || !std::isfinite(v))
      throw InvalidInput("config key '" + std::string(key) + "': bad number");
    return v;
  };
  auto count = [&]() {
    long long v = 0;
    if (!detail::parse_int(value, v) || v < 0)
      throw InvalidInput("config key '" + std::string(key) + "': bad count");
    return static_cast<std::size_t>(v);
  };

  auto& seg = cfg.segmentation;
  if (key == "peak_threshold") seg.peak_threshold = number();
  else if (key == "left_buffer_ms") seg.left_buffer_ms = number();
  else if (key == "right_buffer_ms") seg.right_buffer_ms = number();
  else if (key == "tolerance_ms") seg.tolerance_ms = number();
  else if (key == "sample_rate_hz") seg.sample_rate_hz = number();
  else if (key == "max_unit_ms") seg.max_unit_ms = number();
  else if (key == "k") cfg.recognizer.k = count();
  else if (key == "z_normalize") {
    const auto v = detail::trim(value);
    if (v == "true" || v == "1") cfg.recognizer.z_normalize = true;
    else if (v == "false" || v == "0") cfg.recognizer.z_normalize = false;
    else throw InvalidInput("config key 'z_normalize': expected true/false");
  }
  else if (key == "prominence_frac") cfg.prominence_frac = number();
  else if (key == "p_same") cfg.spatial.p_same = number();
  else if (key == "p_adjacent") cfg.spatial.p_adjacent = number();
  else if (key == "p_diagonal") cfg.spatial.p_diagonal = number();
  else if (key == "alpha") cfg.predictor.alpha = number();
  else if (key == "max_extra_letters") cfg.predictor.max_extra_letters = count();
  else if (key == "top_k") cfg.predictor.top_k = count();
  else throw InvalidInput("unknown config key '" + std::string(key) + "'");
}

EngineConfig parse_config(std::istream& in, EngineConfig base) {
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    detail::strip_cr(line);
    auto body = detail::trim(line);
    if (auto hash = body.find('#'); hash != std::string_view::npos)
      body = detail::trim(body.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw InvalidInput("config line " + std::to_string(no) + ": expected key = value");
    try {
      set_config_value(base, detail::trim(body.substr(0, eq)), detail::trim(body.substr(eq + 1)));
    } catch (const InvalidInput& e) {
      throw InvalidInput("config line " + std::to_string(no) + ": " + e.what());
    }
  }
  base.validate();
  return base;
}

EngineConfig load_config(const std::filesystem::path& path, EngineConfig base) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return parse_config(in, base);
}

}  // namespace headkey
