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

#include "eznav/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "eznav/error.hpp"
#include "eznav/evaluation.hpp"
#include "eznav/io.hpp"
#include "eznav/log.hpp"
#include "eznav/perception.hpp"
#include "json.hpp"

namespace eznav::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::vector<std::string> ablate;
  std::string policy;
  std::string suite;
  std::vector<double> distances;
  bool refine_anchor = false;
  unsigned threads = 0;
  std::optional<int> trials;
  std::optional<int> episodes;
  int index = 0;
  std::string scoregrid_path;
  std::string manifest_path;
};

// Splits "a,b" lists that CLI11 hands over as single tokens.
std::vector<std::string> split_list(const std::vector<std::string>& in) {
  std::vector<std::string> out;
  for (const auto& item : in) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

// A manifest can stand in for a config file; its embedded config is used.
RunConfig load_config(const std::string& path) {
  if (path.empty()) return RunConfig{};
  std::string text;
  try {
    text = read_text(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidConfig, e.detail());
  }
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (!j.is_discarded() && j.is_object() && j.contains("command") &&
      j.contains("config")) {
    return parse_run_config(j["config"].dump());
  }
  return parse_run_config(text);
}

// The arguments after the command name, minus --config and --out, which
// the manifest records separately.
std::vector<std::string> manifest_args(const std::vector<std::string>& args,
                                       std::size_t skip) {
  std::vector<std::string> out;
  for (std::size_t i = skip; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--config" || a == "--out") {
      ++i;
      continue;
    }
    if (a.rfind("--config=", 0) == 0 || a.rfind("--out=", 0) == 0) continue;
    out.push_back(a);
  }
  return out;
}

void prepare_out_dir(const std::string& dir, const RunManifest& m) {
  if (dir.empty()) return;
  fs::create_directories(dir);
  write_text(fs::path(dir) / "manifest.json", dump_manifest(m));
}

AblationFlags apply_ablate(AblationFlags flags, const std::vector<std::string>& names) {
  for (const auto& n : names) flags.set(n, false);
  return flags;
}

// ---------------------------------------------------------------------------

int cmd_perceive(const Options& o, std::ostream& out) {
  const ScoreGridFile file = read_score_grid(o.scoregrid_path);
  const PyramidLayout layout = file.layout();
  validate_layout(layout);  // kNonDyadic / kIndivisible -> exit 2

  PerceptionParams params;
  CameraModel cam = CameraModel::from_hfov(file.image_width, file.image_height,
                                           std::numbers::pi / 2.0);
  AblationFlags flags;
  if (!o.config_path.empty()) {
    const RunConfig cfg = load_config(o.config_path);
    params = cfg.episode.perception;
    cam = cfg.episode.camera;
    flags = cfg.episode.flags;
    if (params.layout.levels != layout.levels ||
        params.layout.image_width != layout.image_width ||
        params.layout.image_height != layout.image_height) {
      throw Error(ErrorCode::kShapeMismatch,
                  "score-grid layout differs from the configured layout");
    }
  }
  params.layout = layout;
  params.refine_anchor = params.refine_anchor || o.refine_anchor;
  flags = apply_ablate(flags, split_list(o.ablate));

  const Pose pose = Pose::level_camera(0.0, 0.0, 0.0, 0.0);
  const PerceptionOutput po = perceive(file.levels, params, flags, cam, pose);

  out << std::fixed << std::setprecision(4);
  out << "image " << file.image_width << "x" << file.image_height;
  if (!file.prompt.empty()) out << " prompt \"" << file.prompt << "\"";
  out << "\n";
  for (const auto& st : po.verdict.stats) {
    const GridShape& g = layout.levels[st.level];
    out << "level " << st.level << " " << g.rows << "x" << g.cols
        << " mean " << st.mean << " std " << st.std << " max " << st.max
        << " ratio " << st.ratio
        << (passes(st, params.visibility) ? " pass" : " fail") << "\n";
  }
  out << "anchor " << po.pyramid.anchor.row << "," << po.pyramid.anchor.col
      << " pixel " << po.anchor_pixel.u << "," << po.anchor_pixel.v << "\n";
  if (po.verdict.visible) {
    const Vec3& d = po.direction.direction;
    out << "verdict visible level " << *po.verdict.deciding_level << "\n";
    out << "direction " << d.x() << " " << d.y() << " " << d.z()
        << " bearing_deg " << po.direction.bearing() * kRadToDeg << "\n";
    return kExitOk;
  }
  out << "verdict not-visible\n";
  return kExitNotVisible;
}

int cmd_episode(const Options& o, const RunManifest& base, std::ostream& out) {
  RunConfig cfg = load_config(o.config_path);
  // The manifest keeps the config as loaded; --suite regenerates the same
  // world from it on rerun.
  const RunConfig loaded = cfg;
  std::uint64_t run_seed = cfg.episode.seed;
  EpisodeConfig& ec = cfg.episode;
  if (!o.suite.empty()) {
    run_seed = o.seed.value_or(ec.seed);
    OcclusionBenchConfig bc;
    bc.base = ec;
    bc.gen = cfg.world_gen;
    ec = occlusion_episode_config(bc, parse_suite(o.suite), o.index, ec.flags,
                                  ec.navigator.policy, run_seed);
  } else if (o.seed) {
    ec.seed = *o.seed;
  }
  if (!o.policy.empty()) ec.navigator.policy = parse_policy(o.policy);
  ec.flags = apply_ablate(ec.flags, split_list(o.ablate));
  ec.perception.refine_anchor = ec.perception.refine_anchor || o.refine_anchor;
  ec.validate();

  if (o.suite.empty()) run_seed = ec.seed;

  RunManifest m = base;
  m.seed = run_seed;
  m.config = o.suite.empty() ? cfg : loaded;
  prepare_out_dir(o.out_dir, m);

  const EpisodeResult r = run_episode(ec);
  if (!o.out_dir.empty()) {
    const fs::path dir(o.out_dir);
    write_text(dir / "trajectory.jsonl", trajectory_jsonl(r));
    write_text(dir / "events.jsonl", events_jsonl(r));
    write_text(dir / "summary.json", episode_summary_json(r));
  }

  const RecoveryStats rs = compute_rsr_rpl(std::span(&r, 1));
  out << std::fixed << std::setprecision(2);
  out << (r.success ? "success" : "failure") << " mode " << to_string(r.final_mode)
      << " steps " << r.steps << " path " << r.path_length << " m"
      << " final_distance " << r.final_distance << " m\n";
  out << "intervals " << rs.intervals << " recovered " << rs.recovered;
  if (rs.rsr_percent) out << " rsr " << *rs.rsr_percent << " %";
  if (rs.rpl_meters) out << " rpl " << *rs.rpl_meters << " m";
  out << "\n";
  return r.success ? kExitOk : kExitNotReached;
}

std::vector<std::pair<std::string, AblationFlags>> variants(
    const std::string& base_name, const AblationFlags& base,
    const std::vector<std::string>& ablate) {
  std::vector<std::pair<std::string, AblationFlags>> v{{base_name, base}};
  for (const auto& n : ablate) {
    AblationFlags f = base;
    f.set(n, false);
    v.emplace_back("no_" + n, f);
  }
  return v;
}

int cmd_bench_perception(const Options& o, const RunManifest& base,
                         std::ostream& out) {
  RunConfig cfg = load_config(o.config_path);
  if (o.seed) cfg.episode.seed = *o.seed;
  PerceptionBenchConfig& pb = cfg.perception_bench;
  if (!o.distances.empty()) pb.distances = o.distances;
  if (o.trials) pb.trials_per_distance = *o.trials;
  if (o.refine_anchor) {
    cfg.episode.perception.refine_anchor = true;
    pb.perception.refine_anchor = true;
  }
  if (pb.trials_per_distance <= 0 || pb.distances.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "need at least one distance and one trial");
  }
  const auto names = split_list(o.ablate);

  RunManifest m = base;
  m.seed = cfg.episode.seed;
  m.config = cfg;
  prepare_out_dir(o.out_dir, m);

  std::vector<PerceptionVariant> results;
  for (const auto& [name, flags] : variants("full", cfg.episode.flags, names)) {
    results.push_back(
        {name, flags, run_perception_bench(pb, flags, cfg.episode.seed, o.threads)});
  }
  if (!o.out_dir.empty()) {
    write_text(fs::path(o.out_dir) / "report.json", perception_report_json(results));
    write_text(fs::path(o.out_dir) / "perception.csv", perception_csv(results));
  }

  // Table: one row per variant, one column per distance (e_avg in degrees).
  out << std::left << std::setw(28) << "variant";
  for (double d : pb.distances) {
    std::ostringstream h;
    h << d << "m";
    out << std::right << std::setw(10) << h.str();
  }
  out << "\n" << std::fixed << std::setprecision(1);
  for (const auto& v : results) {
    out << std::left << std::setw(28) << v.name;
    for (const auto& r : v.rows) out << std::right << std::setw(10) << r.e_avg * kRadToDeg;
    out << "\n";
  }
  out << "(e_avg in degrees; missed detections count as 180)\n";
  return kExitOk;
}

int cmd_bench_occlusion(const Options& o, const RunManifest& base,
                        std::ostream& out) {
  RunConfig cfg = load_config(o.config_path);
  if (o.seed) cfg.episode.seed = *o.seed;
  if (o.episodes) cfg.episodes_per_suite = *o.episodes;
  if (o.refine_anchor) cfg.episode.perception.refine_anchor = true;
  const Policy policy =
      o.policy.empty() ? cfg.episode.navigator.policy : parse_policy(o.policy);
  cfg.episode.navigator.policy = policy;
  std::vector<Suite> suites;
  if (o.suite.empty() || o.suite == "all") {
    suites = {Suite::kShort, Suite::kLong, Suite::kMixed};
  } else {
    suites = {parse_suite(o.suite)};
  }
  const auto names = split_list(o.ablate);

  OcclusionBenchConfig bc;
  bc.base = cfg.episode;
  bc.gen = cfg.world_gen;
  bc.episodes_per_suite = cfg.episodes_per_suite;
  if (bc.episodes_per_suite <= 0) {
    throw Error(ErrorCode::kInvalidConfig, "episodes_per_suite must be positive");
  }

  RunManifest m = base;
  m.seed = cfg.episode.seed;
  m.config = cfg;
  prepare_out_dir(o.out_dir, m);

  std::vector<OcclusionVariant> results;
  const std::string base_name(to_string(policy));
  for (const auto& [name, flags] : variants(base_name, cfg.episode.flags, names)) {
    results.push_back({name, flags, policy,
                       run_occlusion_bench(bc, suites, flags, policy,
                                           cfg.episode.seed, o.threads)});
  }
  if (!o.out_dir.empty()) {
    write_text(fs::path(o.out_dir) / "report.json", occlusion_report_json(results));
    write_text(fs::path(o.out_dir) / "occlusion.csv", occlusion_csv(results));
  }

  out << std::left << std::setw(28) << "variant";
  for (Suite s : suites) {
    const std::string n(to_string(s));
    out << std::right << std::setw(11) << (n + ":RSR") << std::setw(8) << "RPL"
        << std::setw(8) << "SR";
  }
  out << "\n" << std::fixed << std::setprecision(1);
  for (const auto& v : results) {
    out << std::left << std::setw(28) << v.name << std::right;
    for (const auto& r : v.rows) {
      if (r.recovery.rsr_percent) {
        out << std::setw(11) << *r.recovery.rsr_percent;
      } else {
        out << std::setw(11) << "n/a";
      }
      if (r.recovery.rpl_meters) {
        out << std::setw(8) << *r.recovery.rpl_meters;
      } else {
        out << std::setw(8) << "n/a";
      }
      out << std::setw(8) << r.sr_percent;
    }
    out << "\n";
  }
  out << "(RSR and SR in percent, RPL in meters)\n";
  return kExitOk;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kNonDyadic:
    case ErrorCode::kIndivisible:
    case ErrorCode::kShapeMismatch:
      return kExitLayout;
    default:
      return kExitInvalid;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Long-range target perception and occlusion-aware navigation"};
  app.set_version_flag("--version", std::string(EZNAV_VERSION));
  app.require_subcommand(1);
  Options o;

  const auto add_common = [&o](CLI::App* c) {
    c->add_option("--config", o.config_path, "JSON config or run manifest");
    c->add_option("--ablate", o.ablate, "Flags to disable, comma separated")
        ->delimiter(',');
    c->add_flag("--refine-anchor", o.refine_anchor,
                "Descend from the coarse anchor to the finest tile");
  };
  const auto add_run = [&o](CLI::App* c) {
    c->add_option("--seed", o.seed, "Seed override");
    c->add_option("--out", o.out_dir, "Output directory");
    c->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  };

  CLI::App* perceive_cmd = app.add_subcommand("perceive", "Run perception on a ScoreGrid file");
  perceive_cmd->add_option("scoregrid", o.scoregrid_path, "ScoreGrid file")->required();
  add_common(perceive_cmd);

  CLI::App* episode_cmd = app.add_subcommand("episode", "Run one simulated episode");
  add_common(episode_cmd);
  add_run(episode_cmd);
  episode_cmd->add_option("--policy", o.policy, "full | fixed-heading");
  episode_cmd->add_option("--suite", o.suite,
                          "Generate the world and script of a benchmark suite");
  episode_cmd->add_option("--index", o.index, "Episode index within --suite");

  CLI::App* bench_cmd = app.add_subcommand("bench", "Benchmarks");
  bench_cmd->require_subcommand(1);
  CLI::App* bp = bench_cmd->add_subcommand("perception", "Angular error vs distance");
  add_common(bp);
  add_run(bp);
  bp->add_option("--distances", o.distances, "Distances in meters")->delimiter(',');
  bp->add_option("--trials", o.trials, "Trials per distance");
  CLI::App* bo = bench_cmd->add_subcommand("occlusion", "Recovery under scripted occlusion");
  add_common(bo);
  add_run(bo);
  bo->add_option("--policy", o.policy, "full | fixed-heading");
  bo->add_option("--suite", o.suite, "short | long | mixed | all");
  bo->add_option("--episodes", o.episodes, "Episodes per suite");

  CLI::App* rerun_cmd = app.add_subcommand("rerun", "Repeat the run recorded in a manifest");
  rerun_cmd->add_option("manifest", o.manifest_path, "manifest.json")->required();
  rerun_cmd->add_option("--out", o.out_dir, "Output directory");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  RunManifest base;
  base.config_path = o.config_path;
  base.output_dir = o.out_dir;

  try {
    if (*rerun_cmd) {
      const auto j = nlohmann::json::parse(read_text(o.manifest_path));
      std::vector<std::string> again;
      std::stringstream ss(j.at("command").get<std::string>());
      for (std::string w; ss >> w;) again.push_back(w);
      for (const auto& a : j.at("args")) again.push_back(a.get<std::string>());
      again.insert(again.end(), {"--config", o.manifest_path});
      if (!o.out_dir.empty()) again.insert(again.end(), {"--out", o.out_dir});
      return run(again, out, err);
    }
    if (*perceive_cmd) return cmd_perceive(o, out);
    if (*episode_cmd) {
      base.command = "episode";
      base.args = manifest_args(args, 1);
      return cmd_episode(o, base, out);
    }
    if (*bp) {
      base.command = "bench perception";
      base.args = manifest_args(args, 2);
      return cmd_bench_perception(o, base, out);
    }
    if (*bo) {
      base.command = "bench occlusion";
      base.args = manifest_args(args, 2);
      return cmd_bench_occlusion(o, base, out);
    }
  } catch (const Error& e) {
    err << "eznav: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const nlohmann::json::exception& e) {
    err << "eznav: malformed manifest: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const fs::filesystem_error& e) {
    err << "eznav: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace eznav::cli
