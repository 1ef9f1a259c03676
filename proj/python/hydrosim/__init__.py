# Copyright (c) 2026 The HydroSim Authors
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

"""Headless underwater vehicle simulator: protocol sessions and trajectory metrics."""

from __future__ import annotations

import base64
import json
from typing import Any, Optional

import numpy as np

from ._core import (
    PROTOCOL_VERSION,
    ConfigError,
    Session,
    TrajectoryError,
    read_tum,
    report,
    schlick_phase,
    synth_odometry,
    umeyama_align,
    validate_file,
    write_tum,
)
from ._core import evaluate as _evaluate

__all__ = [
    "PROTOCOL_VERSION",
    "ConfigError",
    "ProtocolError",
    "Session",
    "Simulator",
    "TrajectoryError",
    "decode_pnm",
    "evaluate",
    "read_tum",
    "report",
    "schlick_phase",
    "synth_odometry",
    "umeyama_align",
    "validate_file",
    "write_tum",
]

__version__ = "0.1.0"


class ProtocolError(RuntimeError):
    """Error response from a session; `code` is the protocol error code."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


def evaluate(est, gt, align: str = "sim3", rpe_delta: int = 1, max_dt: float = 0.01) -> dict:
    """APE/RPE of `est` against `gt`, both (N, 8) TUM arrays."""
    return json.loads(_evaluate(np.asarray(est, float), np.asarray(gt, float), align, rpe_delta, max_dt))


def decode_pnm(data: bytes) -> np.ndarray:
    """Decodes a binary P6 (8-bit RGB) or P5 (16-bit big-endian) image."""
    magic, width, height, maxval = data.split(maxsplit=4)[:4]
    header_len = len(b" ".join([magic, width, height, maxval])) + 1
    w, h = int(width), int(height)
    body = data[header_len:]
    if magic == b"P6":
        return np.frombuffer(body, np.uint8, count=w * h * 3).reshape(h, w, 3)
    if magic == b"P5":
        dtype = np.dtype(">u2") if int(maxval) > 255 else np.dtype(np.uint8)
        return np.frombuffer(body, dtype, count=w * h).reshape(h, w)
    raise ValueError(f"unsupported image type {magic!r}")


class Simulator:
    """One in-process session driven through the line protocol."""

    def __init__(self, frame_root: str = "sessions", default_config: Optional[str] = None):
        self._session = Session(frame_root, 1, default_config)
        self._next_id = 0

    def request(self, op: str, payload: Optional[dict] = None) -> dict:
        self._next_id += 1
        line = json.dumps({"v": PROTOCOL_VERSION, "id": self._next_id, "op": op, "payload": payload or {}})
        response = json.loads(self._session.handle_line(line))
        if not response["ok"]:
            raise ProtocolError(response["error"]["code"], response["error"]["message"])
        return response["payload"]

    def configure(self, config: Optional[dict] = None, config_path: Optional[str] = None) -> dict:
        payload: dict[str, Any] = {}
        if config is not None:
            payload["config"] = config
        if config_path is not None:
            payload["config_path"] = str(config_path)
        return self.request("configure", payload)

    def reset(self, seed: Optional[int] = None) -> dict:
        return self.request("reset", {} if seed is None else {"seed": seed})

    def step(self, a1: float, a2: float) -> dict:
        return self.request("step_action", {"a1": a1, "a2": a2})

    def step_thrusters(self, u) -> dict:
        return self.request("step_thrusters", {"u": [float(x) for x in u]})

    def observe(self) -> dict:
        return self.request("observe")

    @staticmethod
    def frame_images(observation: dict) -> tuple[np.ndarray, np.ndarray]:
        """RGB and depth arrays from an observation with inline frames."""
        frame = observation["frame"]
        rgb = decode_pnm(base64.b64decode(frame["rgb_ppm_base64"]))
        depth = decode_pnm(base64.b64decode(frame["depth_pgm_base64"]))
        return rgb, depth
