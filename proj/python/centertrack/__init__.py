# Copyright 2026 The CenterTrack Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Center-based 3D object detection and tracking."""

from centertrack._core import (
    Box3D,
    ConfigError,
    Detection,
    Error,
    IoError,
    ParseError,
    SequenceError,
    Track,
    Tracker,
    __build__,
    bev_iou,
    center_distance_bev,
    fuse_score,
    focal_loss,
    gaussian_radius,
    iou_3d,
    run,
    score_bce,
    score_target,
)

__all__ = [
    "Box3D",
    "ConfigError",
    "Detection",
    "Error",
    "IoError",
    "ParseError",
    "SequenceError",
    "Track",
    "Tracker",
    "bev_iou",
    "center_distance_bev",
    "focal_loss",
    "fuse_score",
    "gaussian_radius",
    "iou_3d",
    "run",
    "score_bce",
    "score_target",
]
