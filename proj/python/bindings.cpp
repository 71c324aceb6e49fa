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

// Python module eznav._core.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numbers>
#include <string>
#include <vector>

#include "eznav/episode.hpp"
#include "eznav/error.hpp"
#include "eznav/evaluation.hpp"
#include "eznav/io.hpp"
#include "eznav/perception.hpp"
#include "eznav/saliency_pyramid.hpp"

namespace py = pybind11;

namespace eznav {
namespace {

using Rows = std::vector<std::vector<double>>;

ScoreMatrix to_matrix(const Rows& rows) {
  if (rows.empty() || rows.front().empty()) {
    throw Error(ErrorCode::kEmptyGrid, "matrix has no entries");
  }
  const int r = static_cast<int>(rows.size());
  const int c = static_cast<int>(rows.front().size());
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(r) * c);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != c) {
      throw Error(ErrorCode::kShapeMismatch, "ragged matrix");
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return ScoreMatrix({r, c}, std::move(flat));
}

Rows to_rows(const ScoreMatrix& m) {
  Rows out(static_cast<std::size_t>(m.shape().rows));
  for (int r = 0; r < m.shape().rows; ++r) {
    for (int c = 0; c < m.shape().cols; ++c) out[r].push_back(m.at(r, c));
  }
  return out;
}

py::dict perceive_text(const std::string& text, const std::vector<std::string>& ablate,
                       bool refine_anchor) {
  const ScoreGridFile file = parse_score_grid(text);
  PerceptionParams params;
  params.layout = file.layout();
  validate_layout(params.layout);
  params.refine_anchor = refine_anchor;
  AblationFlags flags;
  for (const auto& n : ablate) flags.set(n, false);
  const CameraModel cam =
      CameraModel::from_hfov(file.image_width, file.image_height, std::numbers::pi / 2.0);
  const PerceptionOutput po =
      perceive(file.levels, params, flags, cam, Pose::level_camera(0.0, 0.0, 0.0, 0.0));

  py::dict d;
  d["visible"] = po.verdict.visible;
  d["deciding_level"] =
      po.verdict.deciding_level ? py::cast(*po.verdict.deciding_level) : py::none();
  d["anchor"] = py::make_tuple(po.pyramid.anchor.row, po.pyramid.anchor.col);
  d["anchor_pixel"] = py::make_tuple(po.anchor_pixel.u, po.anchor_pixel.v);
  const Vec3& v = po.direction.direction;
  d["direction"] = py::make_tuple(v.x(), v.y(), v.z());
  d["bearing"] = po.direction.bearing();
  py::list stats;
  for (const auto& st : po.verdict.stats) {
    py::dict s;
    s["level"] = st.level;
    s["mean"] = st.mean;
    s["std"] = st.std;
    s["max"] = st.max;
    s["ratio"] = st.ratio;
    stats.append(s);
  }
  d["stats"] = stats;
  return d;
}

std::string run_episode_json(const std::string& config_text) {
  const RunConfig cfg = parse_run_config(config_text);
  return episode_summary_json(run_episode(cfg.episode));
}

double angular_error(const std::vector<std::tuple<double, std::optional<double>, double>>& t) {
  std::vector<PerceptionTrial> trials;
  for (const auto& [d, p, truth] : t) trials.push_back({d, p, truth});
  return penalized_angular_error(trials);
}

}  // namespace
}  // namespace eznav

PYBIND11_MODULE(_core, m) {
  using namespace eznav;
  m.doc() = "eznav core bindings";
  m.attr("__version__") = EZNAV_VERSION;

  // what() reads "Code: message".
  py::register_exception<Error>(m, "EznavError", PyExc_ValueError);

  m.def(
      "fuse_step",
      [](const Rows& parent, const Rows& child, double base, int top_k) {
        FusionParams p;
        p.base = base;
        return to_rows(fuse_step(to_matrix(parent), to_matrix(child), p, top_k));
      },
      py::arg("parent"), py::arg("child"), py::arg("base") = 1.5, py::arg("top_k") = 2,
      "One residual fusion step; child must be exactly twice the parent shape.");
  m.def(
      "amplification",
      [](const std::array<double, 4>& children, double base) {
        FusionParams p;
        p.base = base;
        const Amplification a = amplification(children, p);
        return py::make_tuple(a.sigma, a.sigma_hat, a.beta);
      },
      py::arg("children"), py::arg("base") = 1.5,
      "Returns (sigma, sigma_hat, beta) for four child scores.");
  m.def("perceive", &perceive_text, py::arg("scoregrid_json"),
        py::arg("ablate") = std::vector<std::string>{}, py::arg("refine_anchor") = false,
        "Runs perception on a ScoreGrid JSON document.");
  m.def(
      "validate_score_grid",
      [](const std::string& text) {
        const ScoreGridFile f = parse_score_grid(text);
        validate_layout(f.layout());
        return dump_score_grid(f);
      },
      py::arg("scoregrid_json"), "Parses and validates; returns the canonical JSON.");
  m.def("default_config", [] { return dump_run_config(RunConfig{}); },
        "Default run configuration as JSON.");
  m.def("run_episode", &run_episode_json, py::arg("config_json"),
        "Runs one episode; returns the summary JSON.");
  m.def("penalized_angular_error", &angular_error, py::arg("trials"),
        "Mean error over (distance, predicted or None, truth) trials; misses count as pi.");
  m.def("ablation_names", [] { return AblationFlags::names(); });
}
