#include "headkey/synth.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <random>
#include <sstream>

#include "headkey/errors.hpp"
#include "text_util.hpp"

namespace headkey {

namespace {

enum Axis : std::size_t { kPitch = 0, kRoll = 1, kYaw = 2 };

struct Stroke {
  Axis axis;
  double sign;
  double duration_ms;  // zero-amplitude segments are pauses
};

std::vector<Stroke> strokes_for(GestureClass g, const GestureScript& s) {
  const double d = s.stroke_ms;
  const Stroke pause{kYaw, 0.0, s.double_gap_ms};
  switch (g) {
    case GestureClass::SingleLeftTap:
      return {{kYaw, +1, d}, {kYaw, -1, d}};
    case GestureClass::SingleRightTap:
      return {{kYaw, -1, d}, {kYaw, +1, d}};
    case GestureClass::DoubleLeftTap:
      return {{kYaw, +1, d}, {kYaw, -1, d}, pause, {kYaw, +1, d}, {kYaw, -1, d}};
    case GestureClass::DoubleRightTap:
      return {{kYaw, -1, d}, {kYaw, +1, d}, pause, {kYaw, -1, d}, {kYaw, +1, d}};
    case GestureClass::SingleDownTap:
      return {{kPitch, -1, d}, {kPitch, +1, d}};
    case GestureClass::LeftSlide:
      return {{kYaw, +1, d}, {kYaw, -1, 2 * d}, {kYaw, +1, d}};
    case GestureClass::RightSlide:
      return {{kYaw, -1, d}, {kYaw, +1, 2 * d}, {kYaw, -1, d}};
    case GestureClass::Noise: {
      // Walking-like: six short alternating bobs with brief pauses.
      std::vector<Stroke> out;
      const Stroke bob_pause{kRoll, 0.0, 0.4 * d};
      for (int i = 0; i < 6; ++i) {
        if (i > 0) out.push_back(bob_pause);
        out.push_back({kRoll, i % 2 == 0 ? +1.0 : -1.0, 0.6 * d});
      }
      return out;
    }
  }
  return {};
}

}  // namespace

SynthResult synth_trace(const GestureScript& script, const SegmentationConfig& cfg) {
  cfg.validate();
  SynthResult out;
  if (script.amplitude <= cfg.peak_threshold) {
    out.warnings.push_back("amplitude " + std::to_string(script.amplitude) +
                           " deg/s does not exceed peak threshold " +
                           std::to_string(cfg.peak_threshold) +
                           "; gestures may be undetectable");
  }
  if (script.steps.empty()) return out;

  const double period = cfg.sample_period_ms();
  std::mt19937_64 rng(script.seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  auto push = [&](double gx, double gy, double gz) {
    ImuSample s{static_cast<double>(out.samples.size()) * period, gx, gy, gz};
    if (script.noise_sigma > 0.0) {
      s.gx += script.noise_sigma * noise(rng);
      s.gy += script.noise_sigma * noise(rng);
      s.gz += script.noise_sigma * noise(rng);
    }
    out.samples.push_back(s);
  };
  auto quiet = [&](double ms) {
    for (std::size_t i = 0, n = cfg.samples_for(ms); i < n; ++i) push(0, 0, 0);
  };

  quiet(script.lead_in_ms);
  for (const auto& step : script.steps) {
    if (step.gap_ms < 0.0) throw InvalidInput("script gap_ms must be >= 0");
    const std::size_t first = out.samples.size();
    for (const auto& st : strokes_for(step.gesture, script)) {
      const std::size_t n = cfg.samples_for(st.duration_ms);
      for (std::size_t k = 0; k < n; ++k) {
        const double v = st.sign * script.amplitude *
                         std::sin(std::numbers::pi * (static_cast<double>(k) + 0.5) /
                                  static_cast<double>(n));
        double axes[3] = {0.0, 0.0, 0.0};
        axes[st.axis] = v;
        push(axes[0], axes[1], axes[2]);
      }
    }
    if (out.samples.size() > first) {
      out.labels.push_back({step.gesture, out.samples[first].t_ms,
                            out.samples.back().t_ms + period});
    }
    quiet(step.gap_ms);
  }
  return out;
}

GestureScript parse_script(std::istream& in) {
  GestureScript script;
  std::string line;
  std::size_t no = 0;
  auto fail = [&](const std::string& what) {
    throw InvalidInput("script line " + std::to_string(no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++no;
    detail::strip_cr(line);
    auto body = detail::trim(line);
    if (auto hash = body.find('#'); hash != std::string_view::npos)
      body = detail::trim(body.substr(0, hash));
    if (body.empty()) continue;

    if (auto eq = body.find('='); eq != std::string_view::npos) {
      const auto key = detail::trim(body.substr(0, eq));
      const auto value = body.substr(eq + 1);
      double v = 0.0;
      if (!detail::parse_double(value, v) || !std::isfinite(v)) fail("bad number");
      if (key == "amplitude") {
        script.amplitude = v;
      } else if (key == "stroke_ms") {
        script.stroke_ms = v;
      } else if (key == "noise_sigma") {
        script.noise_sigma = v;
      } else if (key == "lead_in_ms") {
        script.lead_in_ms = v;
      } else if (key == "double_gap_ms") {
        script.double_gap_ms = v;
      } else if (key == "seed") {
        script.seed = static_cast<std::uint64_t>(v);
      } else {
        fail("unknown key '" + std::string(key) + "'");
      }
      continue;
    }

    std::istringstream fields{std::string(body)};
    std::string name;
    fields >> name;
    auto g = parse_gesture(name);
    if (!g) fail("unknown gesture '" + name + "'");
    ScriptStep step{*g, 1000.0};
    std::string gap;
    if (fields >> gap) {
      if (!detail::parse_double(gap, step.gap_ms) || step.gap_ms < 0.0) fail("bad gap_ms");
    }
    script.steps.push_back(step);
  }
  return script;
}

GestureScript load_script(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return parse_script(in);
}

}  // namespace headkey
