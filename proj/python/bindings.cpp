// Copyright 2026 The CenterTrack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "centertrack/build_info.hpp"
#include "centertrack/config.hpp"
#include "centertrack/errors.hpp"
#include "centertrack/geometry.hpp"
#include "centertrack/losses.hpp"
#include "centertrack/pipeline.hpp"
#include "centertrack/refine.hpp"
#include "centertrack/targets.hpp"
#include "centertrack/tracker.hpp"

namespace py = pybind11;
using namespace centertrack;

namespace {

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::tuple loss_tuple(const LossValue& v) { return py::make_tuple(v.value, v.gradient); }

py::object run_stage(const std::string& stage, const std::string& config, const std::vector<std::string>& overrides) {
  const RunConfig cfg = load_run_config(config, overrides);
  if (stage == "simulate") return to_python(run_simulate(cfg));
  if (stage == "encode") return to_python(run_encode(cfg));
  if (stage == "decode") return to_python(run_decode(cfg));
  if (stage == "refine") return to_python(run_refine(cfg));
  if (stage == "track") return to_python(run_track(cfg));
  if (stage == "eval") return to_python(run_eval(cfg));
  if (stage == "losses-check") return to_python(run_losses_check(cfg));
  throw ConfigError("unknown stage '" + stage + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Center-based 3D detection and tracking core";
  m.attr("__build__") = CENTERTRACK_BUILD_ID;

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<IoError>(m, "IoError", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<SequenceError>(m, "SequenceError", error.ptr());

  py::class_<Box3D>(m, "Box3D")
      .def(py::init<double, double, double, double, double, double, double>(), py::arg("cx"), py::arg("cy"),
           py::arg("cz"), py::arg("w"), py::arg("l"), py::arg("h"), py::arg("yaw"))
      .def_readonly("cx", &Box3D::cx)
      .def_readonly("cy", &Box3D::cy)
      .def_readonly("cz", &Box3D::cz)
      .def_readonly("w", &Box3D::w)
      .def_readonly("l", &Box3D::l)
      .def_readonly("h", &Box3D::h)
      .def_readonly("yaw", &Box3D::yaw)
      .def("__repr__", [](const Box3D& b) {
        return "Box3D(cx=" + std::to_string(b.cx) + ", cy=" + std::to_string(b.cy) + ", cz=" + std::to_string(b.cz) +
               ", w=" + std::to_string(b.w) + ", l=" + std::to_string(b.l) + ", h=" + std::to_string(b.h) +
               ", yaw=" + std::to_string(b.yaw) + ")";
      });

  m.def("bev_iou", &bev_iou, py::arg("a"), py::arg("b"));
  m.def("iou_3d", &iou_3d, py::arg("a"), py::arg("b"));
  m.def("center_distance_bev", &center_distance_bev, py::arg("a"), py::arg("b"));
  m.def("gaussian_radius", &gaussian_radius, py::arg("l_cells"), py::arg("w_cells"),
        py::arg("min_overlap") = kDefaultMinOverlap, py::arg("min_radius") = kMinGaussianRadius);
  m.def("score_target", &score_target, py::arg("iou3d"));
  m.def("fuse_score", &fuse_score, py::arg("first"), py::arg("second"));

  m.def(
      "focal_loss",
      [](const std::vector<double>& pred, const std::vector<double>& target, double alpha, double beta) {
        return loss_tuple(focal_loss(pred, target, alpha, beta));
      },
      py::arg("pred"), py::arg("target"), py::arg("alpha") = kFocalAlpha, py::arg("beta") = kFocalBeta,
      "Returns (value, gradient).");
  m.def(
      "score_bce", [](double pred, double target) { return loss_tuple(score_bce(pred, target)); }, py::arg("pred"),
      py::arg("target"), "Returns (value, gradient).");

  py::class_<Detection>(m, "Detection")
      .def(py::init([](const Box3D& box, int class_id, double score, std::pair<double, double> velocity) {
             return Detection{box, class_id, score, {velocity.first, velocity.second}};
           }),
           py::arg("box"), py::arg("class_id"), py::arg("score"), py::arg("velocity") = std::pair{0.0, 0.0})
      .def_readonly("box", &Detection::box)
      .def_readonly("class_id", &Detection::class_id)
      .def_readonly("score", &Detection::score);

  py::class_<Track>(m, "Track")
      .def_readonly("id", &Track::id)
      .def_readonly("class_id", &Track::class_id)
      .def_readonly("box", &Track::box)
      .def_readonly("score", &Track::score)
      .def_readonly("age", &Track::age)
      .def_property_readonly("center", [](const Track& t) { return std::pair{t.center.x, t.center.y}; })
      .def_property_readonly("velocity", [](const Track& t) { return std::pair{t.velocity.x, t.velocity.y}; });

  py::class_<Tracker>(m, "Tracker")
      .def(py::init([](std::vector<double> thresholds, int max_age) {
             return Tracker(TrackerConfig{std::move(thresholds), max_age});
           }),
           py::arg("class_thresholds") = std::vector<double>{kVehicleMatchDistance, kPedestrianMatchDistance},
           py::arg("max_age") = kDefaultMaxAge)
      .def(
          "step", [](Tracker& t, const std::vector<Detection>& dets) { return t.step(dets); }, py::arg("detections"))
      .def_property_readonly("tracks", &Tracker::tracks);

  m.def("run", &run_stage, py::arg("stage"), py::arg("config"), py::arg("overrides") = std::vector<std::string>{},
        "Runs one pipeline stage and returns its summary as a dict.");
}
