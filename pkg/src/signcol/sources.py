"""Frame sources standing in for the physical sensor.

Two implementations of the same small interface: a procedural gesture
generator (a stick figure whose right hand traces arc / line / circle /
static trajectories) and a replay source that reads a saved session folder
back as live frames. The synthetic pipeline is a pure function of
(GestureSpec, frame rate, calibration): two runs produce byte-identical
frames.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import NamedTuple, Protocol

import cv2
import numpy as np

from .frames import (
    BACKGROUND_INDEX,
    COLOR_HEIGHT,
    COLOR_WIDTH,
    DEPTH_HEIGHT,
    DEPTH_WIDTH,
    DEPTH_MAX_MM,
    MAX_BODIES,
    BodyIndexFrame,
    ColorFrame,
    DepthFrame,
    FrameBundle,
    InfraredFrame,
    Joint,
    JointType,
    Skeleton,
    TrackingState,
)
from .mapping import (
    DEFAULT_CALIBRATION,
    DeviceCalibration,
    camera_to_color,
    camera_to_depth,
    render_mapped_bodies,
)
from .recording import (
    CAMERA_PARAMETERS_FILE,
    SKELETON_DIR,
    SessionFormatError,
    frame_file_name,
    parse_camera_parameters,
    parse_skeleton_rows,
    read_body_index_frame,
    read_color_frame,
    read_depth_frame,
    read_infrared_frame,
    read_mapped_body_frame,
    read_timestamps,
    validate_session,
)

DEFAULT_FRAME_RATE = 30.0

# Lateral spacing between bodies in a multi-person scene, meters.
BODY_SPACING_M = 0.8

# Rendered joint size in world units; the head is drawn bigger.
JOINT_RADIUS_M = 0.05
HEAD_RADIUS_M = 0.09

BACKGROUND_GRAY = (128, 128, 128)

# One solid RGB color per body slot; none are black or the background gray.
BODY_COLORS = (
    (230, 60, 60),
    (60, 200, 60),
    (70, 90, 230),
    (240, 200, 40),
    (200, 70, 200),
    (60, 210, 210),
)


class MotionKind(Enum):
    ARC = "arc"
    STRAIGHT_LINE = "line"
    CIRCLE = "circle"
    STATIC = "static"


@dataclass(frozen=True)
class GestureSpec:
    """Parameters of one synthetic gesture."""

    motion_kind: MotionKind
    duration_s: float
    body_count: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.duration_s <= 0:
            raise ValueError("duration must be positive")
        if not 1 <= self.body_count <= MAX_BODIES:
            raise ValueError(f"body_count must be in 1..{MAX_BODIES}")


class FrameSource(Protocol):
    """Single-consumer stream of FrameBundles at a nominal rate."""

    @property
    def nominal_rate(self) -> float: ...

    def calibration(self) -> DeviceCalibration: ...

    def next(self) -> FrameBundle | None:
        """Next bundle, or None at end of stream."""
        ...


# -- synthetic skeleton ------------------------------------------------------------

# Canonical standing pose: joint offsets in meters relative to the body origin
# (pelvis height on the optical axis). Right arm entries are overridden by the
# gesture trajectory.
_BASE_POSE = {
    JointType.SpineBase: (0.0, 0.0, 0.0),
    JointType.SpineMid: (0.0, 0.25, 0.0),
    JointType.SpineShoulder: (0.0, 0.45, 0.0),
    JointType.Neck: (0.0, 0.52, 0.0),
    JointType.Head: (0.0, 0.65, 0.0),
    JointType.ShoulderLeft: (-0.18, 0.45, 0.0),
    JointType.ElbowLeft: (-0.28, 0.20, 0.0),
    JointType.WristLeft: (-0.32, -0.02, 0.0),
    JointType.HandLeft: (-0.33, -0.08, 0.0),
    JointType.HandTipLeft: (-0.34, -0.14, 0.0),
    JointType.ThumbLeft: (-0.29, -0.10, 0.02),
    JointType.ShoulderRight: (0.18, 0.45, 0.0),
    JointType.ElbowRight: (0.28, 0.20, 0.0),
    JointType.WristRight: (0.32, -0.02, 0.0),
    JointType.HandRight: (0.33, -0.08, 0.0),
    JointType.HandTipRight: (0.34, -0.14, 0.0),
    JointType.ThumbRight: (0.29, -0.10, 0.02),
    JointType.HipLeft: (-0.09, -0.05, 0.0),
    JointType.KneeLeft: (-0.10, -0.50, 0.0),
    JointType.AnkleLeft: (-0.10, -0.90, 0.0),
    JointType.FootLeft: (-0.10, -0.95, 0.08),
    JointType.HipRight: (0.09, -0.05, 0.0),
    JointType.KneeRight: (0.10, -0.50, 0.0),
    JointType.AnkleRight: (0.10, -0.90, 0.0),
    JointType.FootRight: (0.10, -0.95, 0.08),
}

_TRAJECTORY_RADIUS_M = 0.22


def _body_origin(spec: GestureSpec, body: int, jitter: random.Random) -> tuple[float, float, float]:
    # Bodies spread laterally; wide scenes move back so everyone stays in frame.
    x = (body - (spec.body_count - 1) / 2.0) * BODY_SPACING_M
    z = 2.0 + 0.25 * max(0, spec.body_count - 2)
    return (
        x + jitter.uniform(-0.02, 0.02),
        jitter.uniform(-0.01, 0.01),
        z + jitter.uniform(-0.02, 0.02),
    )


def _wrist_position(
    spec: GestureSpec, origin: tuple[float, float, float], t: float, phase: float
) -> tuple[float, float, float]:
    cx = origin[0] + 0.25
    cy = origin[1] + 0.10
    cz = origin[2] - 0.30
    r = _TRAJECTORY_RADIUS_M
    u = t / spec.duration_s
    if spec.motion_kind is MotionKind.STATIC:
        return (cx, cy, cz)
    if spec.motion_kind is MotionKind.CIRCLE:
        angle = phase + 2.0 * math.pi * u
        return (cx + r * math.cos(angle), cy + r * math.sin(angle), cz)
    if spec.motion_kind is MotionKind.ARC:
        angle = -math.pi / 3 + (2.0 * math.pi / 3) * u
        return (cx + r * math.sin(angle), cy + r * (math.cos(angle) - 1.0), cz)
    # straight line, lower-left to upper-right
    return (cx - 0.18 + 0.36 * u, cy - 0.15 + 0.30 * u, cz)


def synthetic_skeleton(
    spec: GestureSpec,
    body: int,
    t: float,
    calibration: DeviceCalibration = DEFAULT_CALIBRATION,
) -> Skeleton:
    """Deterministic skeleton for (spec.seed, body, t): standing pose, right hand on the trajectory."""
    if not 0 <= body < spec.body_count:
        raise ValueError(f"body {body} out of range for body_count {spec.body_count}")
    if not 0 <= t <= spec.duration_s:
        raise ValueError(f"t={t} outside [0, {spec.duration_s}]")

    jitter = random.Random(spec.seed * 1_000_003 + body * 7919)
    origin = _body_origin(spec, body, jitter)
    phase = jitter.uniform(0.0, 2.0 * math.pi)

    positions = {
        joint_type: (origin[0] + dx, origin[1] + dy, origin[2] + dz)
        for joint_type, (dx, dy, dz) in _BASE_POSE.items()
    }

    wrist = _wrist_position(spec, origin, t, phase)
    shoulder = positions[JointType.ShoulderRight]
    positions[JointType.WristRight] = wrist
    positions[JointType.HandRight] = (wrist[0] + 0.01, wrist[1] - 0.06, wrist[2])
    positions[JointType.HandTipRight] = (wrist[0] + 0.02, wrist[1] - 0.12, wrist[2])
    positions[JointType.ThumbRight] = (wrist[0] - 0.03, wrist[1] - 0.07, wrist[2] + 0.02)
    positions[JointType.ElbowRight] = (
        (shoulder[0] + wrist[0]) / 2 + 0.03,
        (shoulder[1] + wrist[1]) / 2,
        (shoulder[2] + wrist[2]) / 2 + 0.02,
    )

    joints = tuple(
        Joint(
            joint_type=joint_type,
            camera=positions[joint_type],
            depth=camera_to_depth(positions[joint_type], calibration.depth),
            color=camera_to_color(positions[joint_type], calibration),
            tracking_state=TrackingState.Tracked,
        )
        for joint_type in JointType
    )
    return Skeleton(body_index=body, joints=joints)


# -- rasterization ---------------------------------------------------------------------


class RasterizedFrames(NamedTuple):
    color: ColorFrame
    depth: DepthFrame
    infrared: InfraredFrame
    body_index: BodyIndexFrame
    mapped_body: MappedBodyFrame


def _joint_radius_m(joint_type: JointType) -> float:
    return HEAD_RADIUS_M if joint_type == JointType.Head else JOINT_RADIUS_M


def _stamp_depth_disk(zbuf, labels, depth_mm, center, radius, z_mm, body_index):
    cx, cy = center
    x0 = max(0, int(math.floor(cx - radius)))
    x1 = min(DEPTH_WIDTH, int(math.ceil(cx + radius)) + 1)
    y0 = max(0, int(math.floor(cy - radius)))
    y1 = min(DEPTH_HEIGHT, int(math.ceil(cy + radius)) + 1)
    if x0 >= x1 or y0 >= y1:
        return
    yy, xx = np.ogrid[y0:y1, x0:x1]
    disk = (xx - cx) ** 2 + (yy - cy) ** 2 <= radius * radius
    # Strictly nearer samples win; ties keep the earlier body/joint.
    nearer = disk & (zbuf[y0:y1, x0:x1] > z_mm)
    zbuf[y0:y1, x0:x1][nearer] = z_mm
    labels[y0:y1, x0:x1][nearer] = body_index
    depth_mm[y0:y1, x0:x1][nearer] = z_mm


def infrared_from_depth(depth_mm: np.ndarray) -> np.ndarray:
    """Synthetic IR: brighter when closer, zero where depth is invalid."""
    ir = np.zeros(depth_mm.shape, dtype=np.uint8)
    valid = depth_mm > 0
    ir[valid] = np.clip(
        255.0 * (1.0 - depth_mm[valid].astype(np.float64) / DEPTH_MAX_MM), 0, 255
    ).astype(np.uint8)
    return ir


def rasterize(
    skeletons: list[Skeleton] | tuple[Skeleton, ...],
    calibration: DeviceCalibration = DEFAULT_CALIBRATION,
) -> RasterizedFrames:
    """Render skeletons into all five modality frames.

    Bodies are filled joint disks. The depth and body-index images use a
    per-pixel z-buffer (nearer body wins; ties keep the first-drawn body in
    body_index order), the color image paints per-body solid disks far to
    near on a gray background, infrared is a fixed function of depth, and the
    mapped-body image comes from the real reprojection path.
    """
    ordered = sorted(skeletons, key=lambda s: s.body_index)
    if len(ordered) > MAX_BODIES:
        raise ValueError(f"at most {MAX_BODIES} bodies supported")
    if len({s.body_index for s in ordered}) != len(ordered):
        raise ValueError("duplicate body indices")

    zbuf = np.full((DEPTH_HEIGHT, DEPTH_WIDTH), np.inf)
    labels = np.full((DEPTH_HEIGHT, DEPTH_WIDTH), BACKGROUND_INDEX, dtype=np.uint8)
    depth_mm = np.zeros((DEPTH_HEIGHT, DEPTH_WIDTH), dtype=np.uint16)
    color_disks = []

    for skeleton in ordered:
        for joint_type in JointType:
            joint = skeleton.joint(joint_type)
            z = joint.camera[2]
            if z <= 0:
                continue
            world_radius = _joint_radius_m(joint_type)
            z_mm = min(65535, max(1, round(z * 1000)))
            depth_radius = max(1, round(calibration.depth.focal_x * world_radius / z))
            _stamp_depth_disk(zbuf, labels, depth_mm, joint.depth, depth_radius, z_mm, skeleton.body_index)
            color_radius = max(1, round(calibration.color.focal_x * world_radius / z))
            color_disks.append((z, skeleton.body_index, joint_type.value, joint.color, color_radius))

    canvas = np.full((COLOR_HEIGHT, COLOR_WIDTH, 3), BACKGROUND_GRAY, dtype=np.uint8)
    # Painter's order: far disks first so nearer bodies cover them.
    for z, body_index, _, center, radius in sorted(
        color_disks, key=lambda d: (-d[0], d[1], d[2])
    ):
        cv2.circle(
            canvas,
            (int(round(center[0])), int(round(center[1]))),
            radius,
            BODY_COLORS[body_index],
            thickness=-1,
        )

    color = ColorFrame(canvas)
    depth = DepthFrame(depth_mm)
    body_index_frame = BodyIndexFrame(labels)
    return RasterizedFrames(
        color=color,
        depth=depth,
        infrared=InfraredFrame(infrared_from_depth(depth_mm)),
        body_index=body_index_frame,
        mapped_body=render_mapped_bodies(color, depth, body_index_frame, calibration),
    )


# -- sources ----------------------------------------------------------------------------


class SyntheticGestureSource:
    """Generates FrameBundles procedurally; loops the gesture until stopped.

    With ``frame_limit`` set the source ends after that many frames, which
    makes scripted captures finite and reproducible.
    """

    def __init__(
        self,
        spec: GestureSpec,
        rate: float = DEFAULT_FRAME_RATE,
        calibration: DeviceCalibration = DEFAULT_CALIBRATION,
        frame_limit: int | None = None,
    ):
        if rate <= 0:
            raise ValueError("rate must be positive")
        self._spec = spec
        self._rate = rate
        self._calibration = calibration
        self._frame_limit = frame_limit
        self._index = 0

    @property
    def nominal_rate(self) -> float:
        return self._rate

    def calibration(self) -> DeviceCalibration:
        return self._calibration

    def next(self) -> FrameBundle | None:
        if self._frame_limit is not None and self._index >= self._frame_limit:
            return None
        index = self._index
        t = (index / self._rate) % self._spec.duration_s
        skeletons = tuple(
            synthetic_skeleton(self._spec, body, t, self._calibration)
            for body in range(self._spec.body_count)
        )
        frames = rasterize(skeletons, self._calibration)
        self._index += 1
        return FrameBundle(
            frame_index=index,
            timestamp_ms=round(index * 1000 / self._rate),
            color=frames.color,
            depth=frames.depth,
            infrared=frames.infrared,
            body_index=frames.body_index,
            mapped_body=frames.mapped_body,
            skeletons=skeletons,
        )


class SessionReplaySource:
    """Replays a saved session folder as a frame source."""

    def __init__(self, folder: str | Path):
        self._folder = Path(folder)
        self._calibration = parse_camera_parameters(
            (self._folder / CAMERA_PARAMETERS_FILE).read_text()
        )
        self._timestamps = sorted(read_timestamps(self._folder))
        self._position = 0

    @property
    def nominal_rate(self) -> float:
        if len(self._timestamps) >= 2:
            span_ms = self._timestamps[-1][1] - self._timestamps[0][1]
            if span_ms > 0:
                return 1000.0 * (len(self._timestamps) - 1) / span_ms
        return DEFAULT_FRAME_RATE

    def calibration(self) -> DeviceCalibration:
        return self._calibration

    def __len__(self) -> int:
        return len(self._timestamps)

    def next(self) -> FrameBundle | None:
        if self._position >= len(self._timestamps):
            return None
        index, timestamp_ms = self._timestamps[self._position]
        skeleton_path = self._folder / SKELETON_DIR / frame_file_name(index, ".csv")
        try:
            skeleton_text = skeleton_path.read_text()
        except OSError as exc:
            raise SessionFormatError(f"missing skeleton file: {skeleton_path}") from exc
        bundle = FrameBundle(
            frame_index=index,
            timestamp_ms=timestamp_ms,
            color=read_color_frame(self._folder / "color_frames" / frame_file_name(index)),
            depth=read_depth_frame(self._folder / "depth_frames" / frame_file_name(index)),
            infrared=read_infrared_frame(self._folder / "infrared_frames" / frame_file_name(index)),
            body_index=read_body_index_frame(
                self._folder / "bodyindex_frames" / frame_file_name(index)
            ),
            mapped_body=read_mapped_body_frame(
                self._folder / "mapped_frames" / frame_file_name(index)
            ),
            skeletons=tuple(parse_skeleton_rows(skeleton_text)),
        )
        self._position += 1
        return bundle


def open_replay(session_folder: str | Path) -> SessionReplaySource:
    """Open a saved session for replay after validating its on-disk layout."""
    violations = validate_session(session_folder)
    if violations:
        raise SessionFormatError(
            f"cannot replay {session_folder}: " + "; ".join(violations)
        )
    return SessionReplaySource(session_folder)
