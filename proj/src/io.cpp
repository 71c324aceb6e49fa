/*
 * Copyright 2026 The eznav Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "eznav/io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <type_traits>

#include "eznav/error.hpp"
#include "json.hpp"

namespace eznav {

using json = nlohmann::json;

namespace {

std::string canonical(const json& j) { return j.dump() + "\n"; }

// ---------------------------------------------------------------------------
// Generic field binding. Each config struct lists its fields once in
// bind_fields(); the same list drives both encoding and decoding.

template <typename T>
json encode(const T& v);

struct Writer {
  json& j;
  template <typename T>
  void operator()(const char* key, const T& v) {
    j[key] = encode(v);
  }
};

class Reader {
 public:
  Reader(const json& j, ErrorCode code, std::string where)
      : j_(j), code_(code), where_(std::move(where)) {
    if (!j_.is_object()) fail(where_, "expected an object");
  }

  template <typename T>
  void operator()(const char* key, T& v);

  // Rejects keys that no bind_fields() call consumed.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) fail(where_ + "." + it.key(), "unknown key");
    }
  }

  [[noreturn]] void fail(const std::string& where, const std::string& msg) const {
    throw Error(code_, where + ": " + msg);
  }
  ErrorCode code() const { return code_; }

 private:
  const json& j_;
  ErrorCode code_;
  std::string where_;
  std::set<std::string> seen_;
};

template <typename T>
void decode(const json& j, T& out, const Reader& r, const std::string& where);

template <typename T>
void Reader::operator()(const char* key, T& v) {
  seen_.insert(key);
  const auto it = j_.find(key);
  if (it == j_.end()) return;
  decode(*it, v, *this, where_ + "." + key);
}

// --- bind_fields() for every structured type ---------------------------------

template <typename B> void bind_fields(B& b, Box& x) {
  b("x", x.x); b("y", x.y); b("w", x.w); b("h", x.h); b("height_m", x.height_m);
}
template <typename B> void bind_fields(B& b, TargetSpec& t) {
  b("position", t.position); b("width_m", t.width_m); b("height_m", t.height_m);
}
template <typename B> void bind_fields(B& b, RobotPose& p) {
  b("x", p.x); b("y", p.y); b("theta", p.theta);
}
template <typename B> void bind_fields(B& b, WorldSpec& w) {
  b("width", w.width); b("height", w.height); b("occluders", w.occluders);
  b("target", w.target); b("start", w.start);
}
template <typename B> void bind_fields(B& b, CameraModel& c) {
  b("fx", c.fx); b("fy", c.fy); b("cx", c.cx); b("cy", c.cy);
  b("width", c.width); b("height", c.height);
}
template <typename B> void bind_fields(B& b, PyramidLayout& l) {
  b("image_width", l.image_width); b("image_height", l.image_height);
  b("levels", l.levels);
}
template <typename B> void bind_fields(B& b, FusionParams& f) {
  b("base", f.base); b("sigma_clip_lo", f.sigma_clip_lo);
  b("sigma_clip_hi", f.sigma_clip_hi); b("top_k_per_step", f.top_k_per_step);
  b("sigma_from_fused", f.sigma_from_fused);
}
template <typename B> void bind_fields(B& b, VisibilityParams& v) {
  b("w_r", v.w_r); b("w_sigma", v.w_sigma); b("epsilon", v.epsilon);
  b("use_fused", v.use_fused);
}
template <typename B> void bind_fields(B& b, PerceptionParams& p) {
  b("layout", p.layout); b("fusion", p.fusion); b("visibility", p.visibility);
  b("refine_anchor", p.refine_anchor);
}
template <typename B> void bind_fields(B& b, ScorerParams& s) {
  b("noise_mean", s.noise_mean); b("noise_std", s.noise_std);
  b("signal_gain", s.signal_gain); b("distance_ref", s.distance_ref);
  b("coverage_saturation", s.coverage_saturation);
  b("descriptor_dim", s.descriptor_dim); b("rng_seed", s.rng_seed);
}
template <typename B> void bind_fields(B& b, RangeSensorParams& s) {
  b("beams", s.beams); b("fov_rad", s.fov); b("max_range", s.max_range);
}
template <typename B> void bind_fields(B& b, FrontierParams& f) {
  b("min_cells", f.min_cells); b("max_cells", f.max_cells);
}
template <typename B> void bind_fields(B& b, PlanParams& p) {
  b("inflation_cells", p.inflation_cells);
}
template <typename B> void bind_fields(B& b, NavConfig& n) {
  b("dt", n.dt); b("v_max", n.v_max); b("omega_max", n.omega_max);
  b("heading_gain", n.heading_gain); b("lookahead", n.lookahead);
  b("max_drive_error_rad", n.max_drive_error);
  b("alpha", n.alpha); b("lambda", n.lambda);
  b("frontier", n.frontier); b("plan", n.plan);
  b("replan_interval", n.replan_interval);
  b("track_max_deviation_rad", n.track_max_deviation);
  b("keyframe_interval", n.keyframe_interval); b("window_size", n.window_size);
  b("decay", n.decay); b("tau_reid", n.tau_reid);
  b("scan_half_range_rad", n.scan_half_range); b("scan_step_rad", n.scan_step);
  b("fallback_step_rad", n.fallback_step);
  b("heading_tolerance_rad", n.heading_tolerance);
  b("max_failed_searches", n.max_failed_searches);
  b("policy", n.policy);
  b("direction_fusion", n.direction_fusion); b("active_search", n.active_search);
}
template <typename B> void bind_fields(B& b, AblationFlags& f) {
  b("multi_scale", f.multi_scale);
  b("saliency_amplification", f.saliency_amplification);
  b("hierarchical_fusion", f.hierarchical_fusion);
  b("visibility_detection", f.visibility_detection);
  b("direction_fusion", f.direction_fusion); b("active_search", f.active_search);
}
template <typename B> void bind_fields(B& b, OcclusionEvent& e) {
  b("t_start", e.t_start); b("duration", e.duration); b("kind", e.kind);
}
template <typename B> void bind_fields(B& b, EpisodeConfig& c) {
  b("config_version", c.config_version); b("seed", c.seed);
  b("step_budget", c.step_budget); b("world", c.world); b("camera", c.camera);
  b("mount_height", c.mount_height); b("perception", c.perception);
  b("scorer", c.scorer); b("sensor", c.sensor); b("navigator", c.navigator);
  b("flags", c.flags); b("occlusion_script", c.occlusion_script.events);
  b("grid_resolution", c.grid_resolution); b("robot_radius", c.robot_radius);
  b("success_radius", c.success_radius);
  b("min_start_distance", c.min_start_distance);
}
template <typename B> void bind_fields(B& b, WorldGenParams& g) {
  b("width", g.width); b("height", g.height);
  b("start_x_min", g.start_x_min); b("start_x_max", g.start_x_max);
  b("target_x_min", g.target_x_min); b("target_x_max", g.target_x_max);
  b("margin_y", g.margin_y); b("min_start_distance", g.min_start_distance);
  b("camera_height", g.camera_height); b("buildings", g.buildings);
  b("billboards", g.billboards); b("shrubs", g.shrubs);
  b("short_duration", g.short_duration); b("long_duration", g.long_duration);
  b("events_per_episode", g.events_per_episode);
  b("first_event_min", g.first_event_min); b("first_event_max", g.first_event_max);
  b("gap_min", g.gap_min); b("gap_max", g.gap_max);
}

// The perception bench shares camera, perception and scorer settings with the
// episode section; only its own knobs live here.
struct PerceptionBenchSection {
  PerceptionBenchConfig* cfg;
};
template <typename B> void bind_fields(B& b, PerceptionBenchSection& s) {
  b("distances", s.cfg->distances);
  b("trials_per_distance", s.cfg->trials_per_distance);
  b("max_bearing_rad", s.cfg->max_bearing);
  b("target_width_m", s.cfg->target.width_m);
  b("target_height_m", s.cfg->target.height_m);
}

struct BenchSection {
  RunConfig* cfg;
};
template <typename B> void bind_fields(B& b, BenchSection& s) {
  b("episodes_per_suite", s.cfg->episodes_per_suite);
  b("world_gen", s.cfg->world_gen);
  PerceptionBenchSection p{&s.cfg->perception_bench};
  b("perception", p);
}

// Ties the top-level document together: the episode fields plus a "bench"
// section.
struct RunDocument {
  RunConfig* cfg;
};
template <typename B> void bind_fields(B& b, RunDocument& d) {
  bind_fields(b, d.cfg->episode);
  BenchSection bench{d.cfg};
  b("bench", bench);
}

template <typename T>
concept Bindable = requires(Writer& w, T& t) { bind_fields(w, t); };

// --- encode ----------------------------------------------------------------

json encode_enum(Policy p) { return std::string(to_string(p)); }
json encode_enum(OcclusionKind k) { return std::string(to_string(k)); }

template <typename T>
json encode(const T& v) {
  if constexpr (std::is_same_v<T, bool> || std::is_arithmetic_v<T> ||
                std::is_same_v<T, std::string>) {
    if constexpr (std::is_floating_point_v<T>) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kInvalidConfig, "cannot encode a non-finite number");
      }
    }
    return json(v);
  } else if constexpr (std::is_enum_v<T>) {
    return encode_enum(v);
  } else if constexpr (std::is_same_v<T, Vec2>) {
    return json::array({v.x(), v.y()});
  } else if constexpr (std::is_same_v<T, GridShape>) {
    return json::array({v.rows, v.cols});
  } else if constexpr (Bindable<T>) {
    json j = json::object();
    Writer w{j};
    bind_fields(w, const_cast<T&>(v));
    return j;
  } else {
    json a = json::array();
    for (const auto& x : v) a.push_back(encode(x));
    return a;
  }
}

// --- decode ----------------------------------------------------------------

template <typename T>
struct IsVector : std::false_type {};
template <typename T>
struct IsVector<std::vector<T>> : std::true_type {};

template <typename T>
void decode(const json& j, T& out, const Reader& r, const std::string& where) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!j.is_boolean()) r.fail(where, "expected a boolean");
    out = j.get<bool>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!j.is_number_integer()) r.fail(where, "expected an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (j.is_number_unsigned()) {
        out = j.get<T>();
      } else {
        if (j.get<long long>() < 0) r.fail(where, "expected a nonnegative integer");
        out = static_cast<T>(j.get<long long>());
      }
    } else {
      out = j.get<T>();
    }
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!j.is_number()) r.fail(where, "expected a number");
    out = j.get<T>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!j.is_string()) r.fail(where, "expected a string");
    out = j.get<std::string>();
  } else if constexpr (std::is_same_v<T, Policy>) {
    std::string s;
    decode(j, s, r, where);
    out = parse_policy(s);
  } else if constexpr (std::is_same_v<T, OcclusionKind>) {
    std::string s;
    decode(j, s, r, where);
    if (s == "short") {
      out = OcclusionKind::kShort;
    } else if (s == "long") {
      out = OcclusionKind::kLong;
    } else {
      r.fail(where, "expected \"short\" or \"long\"");
    }
  } else if constexpr (std::is_same_v<T, Vec2>) {
    if (!j.is_array() || j.size() != 2) r.fail(where, "expected [x, y]");
    double x = 0.0;
    double y = 0.0;
    decode(j[0], x, r, where);
    decode(j[1], y, r, where);
    out = Vec2(x, y);
  } else if constexpr (std::is_same_v<T, GridShape>) {
    if (!j.is_array() || j.size() != 2) r.fail(where, "expected [rows, cols]");
    decode(j[0], out.rows, r, where);
    decode(j[1], out.cols, r, where);
  } else if constexpr (IsVector<T>::value) {
    if (!j.is_array()) r.fail(where, "expected an array");
    out.clear();
    for (std::size_t i = 0; i < j.size(); ++i) {
      typename T::value_type x{};
      decode(j[i], x, r, where + "[" + std::to_string(i) + "]");
      out.push_back(std::move(x));
    }
  } else {
    Reader sub(j, r.code(), where);
    bind_fields(sub, out);
    sub.finish();
  }
}

template <typename T>
void decode_root(const json& j, T& out, ErrorCode code) {
  Reader r(j, code, "$");
  bind_fields(r, out);
  r.finish();
}

json parse_json(std::string_view text, ErrorCode code) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(code, std::string("invalid JSON: ") + e.what());
  }
}

void sync_perception_bench(RunConfig& cfg) {
  cfg.perception_bench.camera = cfg.episode.camera;
  cfg.perception_bench.mount_height = cfg.episode.mount_height;
  cfg.perception_bench.perception = cfg.episode.perception;
  cfg.perception_bench.scorer = cfg.episode.scorer;
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

// ---------------------------------------------------------------------------
// ScoreGrid files

PyramidLayout ScoreGridFile::layout() const {
  PyramidLayout l;
  l.image_width = image_width;
  l.image_height = image_height;
  for (const auto& g : levels) l.levels.push_back(g.shape());
  return l;
}

ScoreGridFile parse_score_grid(std::string_view text) {
  const json j = parse_json(text, ErrorCode::kMalformedFile);
  const auto fail = [](const std::string& msg) -> void {
    throw Error(ErrorCode::kMalformedFile, msg);
  };
  if (!j.is_object()) fail("top level must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& k = it.key();
    if (k != "version" && k != "image_size" && k != "prompt" && k != "levels") {
      fail("unknown key " + k);
    }
  }
  if (j.contains("version") &&
      (!j["version"].is_number_integer() || j["version"].get<long long>() != kScoreGridVersion)) {
    fail("unsupported version");
  }

  ScoreGridFile out;
  const auto size = j.find("image_size");
  if (size == j.end() || !size->is_array() || size->size() != 2 ||
      !(*size)[0].is_number_integer() || !(*size)[1].is_number_integer()) {
    fail("image_size must be [width, height]");
  }
  out.image_width = (*size)[0].get<int>();
  out.image_height = (*size)[1].get<int>();
  if (out.image_width <= 0 || out.image_height <= 0) fail("image_size must be positive");

  if (j.contains("prompt")) {
    if (!j["prompt"].is_string()) fail("prompt must be a string");
    out.prompt = j["prompt"].get<std::string>();
  }

  const auto levels = j.find("levels");
  if (levels == j.end() || !levels->is_array() || levels->empty()) {
    fail("levels must be a non-empty array");
  }
  for (std::size_t l = 0; l < levels->size(); ++l) {
    const json& lv = (*levels)[l];
    const std::string where = "levels[" + std::to_string(l) + "]";
    if (!lv.is_object()) fail(where + " must be an object");
    for (auto it = lv.begin(); it != lv.end(); ++it) {
      const auto& k = it.key();
      if (k != "rows" && k != "cols" && k != "scores" && k != "descriptors") {
        fail(where + ": unknown key " + k);
      }
    }
    if (!lv.contains("rows") || !lv["rows"].is_number_integer() ||
        !lv.contains("cols") || !lv["cols"].is_number_integer()) {
      fail(where + ": rows and cols must be integers");
    }
    const GridShape shape{lv["rows"].get<int>(), lv["cols"].get<int>()};
    if (shape.rows <= 0 || shape.cols <= 0) fail(where + ": rows and cols must be positive");
    if (!lv.contains("scores") || !lv["scores"].is_array() ||
        lv["scores"].size() != static_cast<std::size_t>(shape.size())) {
      fail(where + ": scores must hold rows*cols numbers");
    }
    std::vector<double> scores;
    scores.reserve(shape.size());
    for (const json& s : lv["scores"]) {
      if (!s.is_number()) fail(where + ": scores must be numbers");
      scores.push_back(s.get<double>());
    }
    ScoreGrid grid{ScoreMatrix(shape, std::move(scores)), {}};
    if (lv.contains("descriptors")) {
      const json& d = lv["descriptors"];
      if (!d.is_array() || d.size() != static_cast<std::size_t>(shape.size())) {
        fail(where + ": descriptors must hold one array per tile");
      }
      for (const json& row : d) {
        if (!row.is_array()) fail(where + ": each descriptor must be an array");
        std::vector<double> v;
        v.reserve(row.size());
        for (const json& x : row) {
          if (!x.is_number()) fail(where + ": descriptor entries must be numbers");
          v.push_back(x.get<double>());
        }
        grid.descriptors.push_back(std::move(v));
      }
    }
    try {
      validate_score_grid(grid);
    } catch (const Error& e) {
      fail(where + ": " + e.what());
    }
    out.levels.push_back(std::move(grid));
  }
  return out;
}

std::string dump_score_grid(const ScoreGridFile& file) {
  json j;
  j["version"] = kScoreGridVersion;
  j["image_size"] = json::array({file.image_width, file.image_height});
  j["prompt"] = file.prompt;
  json levels = json::array();
  for (const auto& g : file.levels) {
    json lv;
    lv["rows"] = g.shape().rows;
    lv["cols"] = g.shape().cols;
    for (double s : g.scores.values()) {
      if (!std::isfinite(s)) {
        throw Error(ErrorCode::kMalformedFile, "cannot write a non-finite score");
      }
    }
    lv["scores"] = g.scores.values();
    if (g.has_descriptors()) lv["descriptors"] = g.descriptors;
    levels.push_back(std::move(lv));
  }
  j["levels"] = std::move(levels);
  return canonical(j);
}

ScoreGridFile read_score_grid(const std::filesystem::path& path) {
  return parse_score_grid(read_text(path));
}

void write_score_grid(const std::filesystem::path& path, const ScoreGridFile& file) {
  write_text(path, dump_score_grid(file));
}

// ---------------------------------------------------------------------------
// Run configs

RunConfig parse_run_config(std::string_view text) {
  const json j = parse_json(text, ErrorCode::kInvalidConfig);
  if (!j.is_object()) throw Error(ErrorCode::kInvalidConfig, "config must be an object");
  if (j.contains("config_version") &&
      !(j["config_version"].is_number_integer() &&
        j["config_version"].get<long long>() == kConfigVersion)) {
    throw Error(ErrorCode::kInvalidConfig,
                "unsupported config_version; this build reads " +
                    std::to_string(kConfigVersion));
  }
  RunConfig cfg;
  RunDocument doc{&cfg};
  try {
    decode_root(j, doc, ErrorCode::kInvalidConfig);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
  sync_perception_bench(cfg);
  return cfg;
}

std::string dump_run_config(const RunConfig& cfg) {
  RunDocument doc{const_cast<RunConfig*>(&cfg)};
  return canonical(encode(doc));
}

RunConfig read_run_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidConfig, e.detail());
  }
  return parse_run_config(text);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMalformedFile, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kInvalidConfig, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kInvalidConfig, "write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Logs and reports

namespace {

json event_json(const NavEvent& e) {
  json j;
  j["kind"] = std::string(to_string(e.kind));
  j["t"] = e.time;
  j["step"] = e.step;
  if (e.kind == EventKind::kModeChange) {
    j["from"] = std::string(to_string(e.from));
    j["to"] = std::string(to_string(e.to));
  }
  if (!e.detail.empty()) j["detail"] = e.detail;
  return j;
}

}  // namespace

std::string trajectory_jsonl(const EpisodeResult& result) {
  std::string out;
  for (const auto& r : result.trajectory) {
    json j;
    j["t"] = r.t;
    j["step"] = r.step;
    j["pose"] = {{"x", r.pose.x}, {"y", r.pose.y}, {"theta", r.pose.theta}};
    j["mode"] = std::string(to_string(r.mode));
    j["visible"] = r.visible;
    j["deciding_level"] = r.deciding_level ? json(*r.deciding_level) : json(nullptr);
    j["live_bearing"] = optional_number(r.live_bearing);
    j["steering_bearing"] = r.steering_bearing;
    j["anchor"] = json::array({r.anchor.row, r.anchor.col});
    j["visibility_fraction"] = r.visibility_fraction;
    j["script_active"] = r.script_active;
    json events = json::array();
    for (const auto& e : r.events) events.push_back(event_json(e));
    j["events"] = std::move(events);
    out += canonical(j);
  }
  return out;
}

std::string events_jsonl(const EpisodeResult& result) {
  std::string out;
  for (const auto& r : result.trajectory) {
    for (const auto& e : r.events) out += canonical(event_json(e));
  }
  return out;
}

std::string episode_summary_json(const EpisodeResult& result) {
  json j;
  j["success"] = result.success;
  j["final_mode"] = std::string(to_string(result.final_mode));
  j["steps"] = result.steps;
  j["path_length"] = result.path_length;
  j["final_distance"] = result.final_distance;
  j["collisions"] = result.collisions;
  j["keyframes"] = result.keyframes;
  json intervals = json::array();
  for (const auto& iv : result.intervals) {
    intervals.push_back({{"t_lost", iv.t_lost},
                         {"t_recovered", optional_number(iv.t_recovered)},
                         {"path_during", iv.path_during},
                         {"censored", iv.censored}});
  }
  j["intervals"] = std::move(intervals);
  const RecoveryStats rs = compute_rsr_rpl(std::span(&result, 1));
  j["rsr_percent"] = optional_number(rs.rsr_percent);
  j["rpl_meters"] = optional_number(rs.rpl_meters);
  return canonical(j);
}

std::string perception_report_json(std::span<const PerceptionVariant> variants) {
  json vs = json::array();
  for (const auto& v : variants) {
    json rows = json::array();
    for (const auto& r : v.rows) {
      rows.push_back({{"distance_m", r.distance_m},
                      {"e_avg_rad", r.e_avg},
                      {"e_avg_deg", r.e_avg * 180.0 / std::numbers::pi},
                      {"detected", r.detected},
                      {"trials", r.trials}});
    }
    vs.push_back({{"name", v.name}, {"flags", encode(v.flags)}, {"rows", std::move(rows)}});
  }
  return canonical(json{{"variants", std::move(vs)}});
}

std::string occlusion_report_json(std::span<const OcclusionVariant> variants) {
  json vs = json::array();
  for (const auto& v : variants) {
    json rows = json::array();
    for (const auto& r : v.rows) {
      rows.push_back({{"suite", std::string(to_string(r.suite))},
                      {"n_episodes", r.n_episodes},
                      {"intervals", r.recovery.intervals},
                      {"recovered", r.recovery.recovered},
                      {"rsr_percent", optional_number(r.recovery.rsr_percent)},
                      {"rpl_meters", optional_number(r.recovery.rpl_meters)},
                      {"sr_percent", r.sr_percent}});
    }
    vs.push_back({{"name", v.name},
                  {"flags", encode(v.flags)},
                  {"policy", std::string(to_string(v.policy))},
                  {"rows", std::move(rows)}});
  }
  return canonical(json{{"variants", std::move(vs)}});
}

namespace {

// Shortest round-trip text of a double, as in the JSON outputs.
std::string num(double x) { return json(x).dump(); }
std::string num(const std::optional<double>& x) { return x ? num(*x) : ""; }

}  // namespace

std::string perception_csv(std::span<const PerceptionVariant> variants) {
  std::string out = "variant,distance_m,e_avg_rad,e_avg_deg,detected,trials\n";
  for (const auto& v : variants) {
    for (const auto& r : v.rows) {
      out += v.name + "," + num(r.distance_m) + "," + num(r.e_avg) + "," +
             num(r.e_avg * 180.0 / std::numbers::pi) + "," +
             std::to_string(r.detected) + "," + std::to_string(r.trials) + "\n";
    }
  }
  return out;
}

std::string occlusion_csv(std::span<const OcclusionVariant> variants) {
  std::string out =
      "variant,policy,suite,n_episodes,intervals,recovered,rsr_percent,"
      "rpl_meters,sr_percent\n";
  for (const auto& v : variants) {
    for (const auto& r : v.rows) {
      out += v.name + "," + std::string(to_string(v.policy)) + "," +
             std::string(to_string(r.suite)) + "," + std::to_string(r.n_episodes) +
             "," + std::to_string(r.recovery.intervals) + "," +
             std::to_string(r.recovery.recovered) + "," +
             num(r.recovery.rsr_percent) + "," + num(r.recovery.rpl_meters) + "," +
             num(r.sr_percent) + "\n";
    }
  }
  return out;
}

std::string dump_manifest(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["config_path"] = m.config_path;
  j["seed"] = m.seed;
  j["args"] = m.args;
  j["output_dir"] = m.output_dir;
  j["tool_version"] = m.tool_version;
  RunDocument doc{const_cast<RunConfig*>(&m.config)};
  j["config"] = encode(doc);
  return canonical(j);
}

}  // namespace eznav
