#pragma once

#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gvfls/edge_map.hpp"
#include "gvfls/gvf.hpp"
#include "gvfls/io.hpp"
#include "gvfls/levelset.hpp"
#include "gvfls/synth.hpp"

namespace gvfls {

struct InitDescriptor {
  std::string kind = "circle";  ///< circle | mask
  double cx = -1.0, cy = -1.0;  ///< <0 selects the grid centre
  double radius = 0.0;          ///< <=0 selects 0.47 of the smaller grid extent
  std::string mask;             ///< PGM or field file, nonzero = inside
};

struct IoSettings {
  std::string input;
  std::string output = "out";
  int snapshot_stride = 100;  ///< 0 disables intermediate level-set snapshots
};

struct SegmentationConfig {
  GridSpec grid{128, 128, 1.0};
  SyntheticShape synth = disk_fixture();
  EdgeParams edge;
  GvfParams gvf;
  LevelSetParams levelset;
  InitDescriptor init;
  IoSettings io;
  std::uint64_t seed = 20240601;
  unsigned threads = 1;
  long diagnose_draws = 100000;

  void validate() const {
    grid.validate();
    edge.validate(grid.spacing);
    gvf.validate();
    levelset.validate();
    if (init.kind != "circle" && init.kind != "mask")
      throw ValidationError("init.kind must be 'circle' or 'mask', got '" + init.kind + "'");
    if (init.kind == "mask" && init.mask.empty()) throw ValidationError("init.mask is required when init.kind = mask");
    if (io.snapshot_stride < 0) throw ValidationError("io.snapshot_stride must be >= 0");
    if (diagnose_draws <= 0) throw ValidationError("diagnose.draws must be positive");
  }
};

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& key, const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
    throw ValidationError("config key '" + key + "': expected a real number, got '" + s + "'");
  return v;
}

inline long long parse_int(const std::string& key, const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    throw ValidationError("config key '" + key + "': expected an integer, got '" + s + "'");
  return v;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct ConfigKey {
  std::string name;
  std::function<std::string(const SegmentationConfig&)> get;
  std::function<void(SegmentationConfig&, const std::string&)> set;
};

template <class T>
ConfigKey real_key(std::string name, T SegmentationConfig::*section, double T::*field) {
  return {name, [=](const SegmentationConfig& c) { return format_double(c.*section.*field); },
          [=](SegmentationConfig& c, const std::string& v) { c.*section.*field = parse_double(name, v); }};
}

template <class T, class I>
ConfigKey int_key(std::string name, T SegmentationConfig::*section, I T::*field) {
  return {name, [=](const SegmentationConfig& c) { return std::to_string(c.*section.*field); },
          [=](SegmentationConfig& c, const std::string& v) {
            const auto n = parse_int(name, v);
            if (n < 0 && std::is_unsigned_v<I>) throw ValidationError("config key '" + name + "' must be >= 0");
            c.*section.*field = static_cast<I>(n);
          }};
}

template <class T>
ConfigKey string_key(std::string name, T SegmentationConfig::*section, std::string T::*field) {
  return {name, [=](const SegmentationConfig& c) { return c.*section.*field; },
          [=](SegmentationConfig& c, const std::string& v) { c.*section.*field = v; }};
}

inline const std::vector<ConfigKey>& config_keys() {
  using C = SegmentationConfig;
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> k;
    k.push_back(int_key("grid.width", &C::grid, &GridSpec::width));
    k.push_back(int_key("grid.height", &C::grid, &GridSpec::height));
    k.push_back(real_key("grid.spacing", &C::grid, &GridSpec::spacing));
    k.push_back({"synth.kind", [](const C& c) { return std::string(to_string(c.synth.kind)); },
                 [](C& c, const std::string& v) { c.synth.kind = parse_shape_kind(v); }});
    k.push_back(real_key("synth.cx", &C::synth, &SyntheticShape::cx));
    k.push_back(real_key("synth.cy", &C::synth, &SyntheticShape::cy));
    k.push_back(real_key("synth.radius", &C::synth, &SyntheticShape::radius));
    k.push_back(real_key("synth.box_w", &C::synth, &SyntheticShape::box_w));
    k.push_back(real_key("synth.box_h", &C::synth, &SyntheticShape::box_h));
    k.push_back(real_key("synth.arm_width", &C::synth, &SyntheticShape::arm_width));
    k.push_back(real_key("synth.depth", &C::synth, &SyntheticShape::depth));
    k.push_back(real_key("synth.foreground", &C::synth, &SyntheticShape::foreground));
    k.push_back(real_key("synth.background", &C::synth, &SyntheticShape::background));
    k.push_back(real_key("synth.noise", &C::synth, &SyntheticShape::noise));
    k.push_back(real_key("synth.margin", &C::synth, &SyntheticShape::margin));
    k.push_back(real_key("edge.sigma", &C::edge, &EdgeParams::sigma));
    k.push_back(int_key("edge.truncation_radius", &C::edge, &EdgeParams::truncation_radius));
    k.push_back(real_key("gvf.mu", &C::gvf, &GvfParams::mu));
    k.push_back(real_key("gvf.dt", &C::gvf, &GvfParams::dt));
    k.push_back(int_key("gvf.max_steps", &C::gvf, &GvfParams::max_steps));
    k.push_back(real_key("gvf.steady_tol", &C::gvf, &GvfParams::steady_tol));
    k.push_back(real_key("gvf.normalize_eps", &C::gvf, &GvfParams::normalize_eps));
    k.push_back(int_key("gvf.energy_stride", &C::gvf, &GvfParams::energy_stride));
    k.push_back(real_key("levelset.beta", &C::levelset, &LevelSetParams::beta));
    k.push_back(real_key("levelset.balloon_h0", &C::levelset, &LevelSetParams::balloon_h0));
    k.push_back(real_key("levelset.dt", &C::levelset, &LevelSetParams::dt));
    k.push_back(int_key("levelset.max_steps", &C::levelset, &LevelSetParams::max_steps));
    k.push_back(real_key("levelset.steady_tol", &C::levelset, &LevelSetParams::steady_tol));
    k.push_back(real_key("levelset.curvature_eps", &C::levelset, &LevelSetParams::curvature_eps));
    k.push_back(int_key("levelset.reinit_every", &C::levelset, &LevelSetParams::reinit_every));
    k.push_back(int_key("levelset.steady_window", &C::levelset, &LevelSetParams::steady_window));
    k.push_back(string_key("init.kind", &C::init, &InitDescriptor::kind));
    k.push_back(real_key("init.cx", &C::init, &InitDescriptor::cx));
    k.push_back(real_key("init.cy", &C::init, &InitDescriptor::cy));
    k.push_back(real_key("init.radius", &C::init, &InitDescriptor::radius));
    k.push_back(string_key("init.mask", &C::init, &InitDescriptor::mask));
    k.push_back(string_key("io.input", &C::io, &IoSettings::input));
    k.push_back(string_key("io.output", &C::io, &IoSettings::output));
    k.push_back(int_key("io.snapshot_stride", &C::io, &IoSettings::snapshot_stride));
    k.push_back({"seed", [](const C& c) { return std::to_string(c.seed); },
                 [](C& c, const std::string& v) { c.seed = static_cast<std::uint64_t>(parse_int("seed", v)); }});
    k.push_back({"threads", [](const C& c) { return std::to_string(c.threads); },
                 [](C& c, const std::string& v) {
                   const auto n = parse_int("threads", v);
                   if (n < 0) throw ValidationError("config key 'threads' must be >= 0");
                   c.threads = static_cast<unsigned>(n);
                 }});
    k.push_back({"diagnose.draws", [](const C& c) { return std::to_string(c.diagnose_draws); },
                 [](C& c, const std::string& v) { c.diagnose_draws = static_cast<long>(parse_int("diagnose.draws", v)); }});
    return k;
  }();
  return keys;
}

}  // namespace detail

/// Applies one "key = value" assignment; unknown keys are rejected by name.
inline void apply_setting(SegmentationConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& k : detail::config_keys()) {
    if (k.name == key) {
      k.set(cfg, value);
      return;
    }
  }
  throw ValidationError("unknown config key '" + key + "'");
}

/// Parses "key=value" (as given to --set).
inline void apply_assignment(SegmentationConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ValidationError("expected key=value, got '" + assignment + "'");
  apply_setting(cfg, detail::trim(assignment.substr(0, eq)), detail::trim(assignment.substr(eq + 1)));
}

/// Flat text: one "key = value" per line, '#' starts a comment.
inline void parse_config_text(SegmentationConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.find('=') == std::string::npos)
      throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
    apply_assignment(cfg, line);
  }
}

inline SegmentationConfig load_config(const std::filesystem::path& path, SegmentationConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw IoError(IoErrorKind::open_failed, path);
  std::stringstream ss;
  ss << in.rdbuf();
  parse_config_text(base, ss.str());
  return base;
}

/// Every key with its current value, in declaration order.
inline std::string serialize_config(const SegmentationConfig& cfg) {
  std::string out;
  for (const auto& k : detail::config_keys()) out += k.name + " = " + k.get(cfg) + "\n";
  return out;
}

inline void write_config(const SegmentationConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(IoErrorKind::open_failed, path);
  out << serialize_config(cfg);
  if (!out) throw IoError(IoErrorKind::write_failed, path);
}

}  // namespace gvfls
