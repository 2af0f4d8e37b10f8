"""Frame and skeleton types for one synchronized capture instant.

All image payloads are numpy arrays frozen (made read-only) at construction,
so frames and bundles can be shared between threads without copying.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

# Sensor geometry constants.
COLOR_WIDTH = 1920
COLOR_HEIGHT = 1080
DEPTH_WIDTH = 512
DEPTH_HEIGHT = 424

MAX_BODIES = 6
BACKGROUND_INDEX = 255  # body-index sample meaning "no body"

# Practical operating range of the depth sensor, millimeters. 0 = invalid sample.
DEPTH_MIN_MM = 500
DEPTH_MAX_MM = 8000

JOINT_COUNT = 25


class JointType(IntEnum):
    """The 25 tracked joints. Ordinal values fix the skeleton CSV row order."""

    SpineBase = 0
    SpineMid = 1
    Neck = 2
    Head = 3
    ShoulderLeft = 4
    ElbowLeft = 5
    WristLeft = 6
    HandLeft = 7
    ShoulderRight = 8
    ElbowRight = 9
    WristRight = 10
    HandRight = 11
    HipLeft = 12
    KneeLeft = 13
    AnkleLeft = 14
    FootLeft = 15
    HipRight = 16
    KneeRight = 17
    AnkleRight = 18
    FootRight = 19
    SpineShoulder = 20
    HandTipLeft = 21
    ThumbLeft = 22
    HandTipRight = 23
    ThumbRight = 24


class TrackingState(IntEnum):
    NotTracked = 0
    Inferred = 1
    Tracked = 2


@dataclass(frozen=True)
class Joint:
    """One joint located in camera space (meters), depth image and color image (pixels).

    Camera space: X right, Y up, Z forward from the depth camera. Image
    coordinates may fall outside the frame; out-of-frame is legal and is
    detectable from the coordinates themselves.
    """

    joint_type: JointType
    camera: tuple[float, float, float]
    depth: tuple[float, float]
    color: tuple[float, float]
    tracking_state: TrackingState = TrackingState.Tracked


@dataclass(frozen=True)
class Skeleton:
    """25 joints of one tracked body.

    ``body_index`` is the sensor body slot (0..5). Joints should cover every
    JointType exactly once; violations are reported by :func:`validate_bundle`
    rather than rejected here, so defective data stays representable.
    """

    body_index: int
    joints: tuple[Joint, ...]

    def joint(self, joint_type: JointType) -> Joint:
        for j in self.joints:
            if j.joint_type == joint_type:
                return j
        raise KeyError(joint_type)


def _freeze(pixels: np.ndarray, shape: tuple[int, ...], dtype) -> np.ndarray:
    if pixels.shape != shape:
        raise ValueError(f"expected shape {shape}, got {pixels.shape}")
    if pixels.dtype != dtype:
        raise ValueError(f"expected dtype {np.dtype(dtype)}, got {pixels.dtype}")
    pixels.setflags(write=False)
    return pixels


@dataclass(frozen=True)
class ColorFrame:
    """1920x1080 8-bit RGB image, row-major (height, width, 3)."""

    pixels: np.ndarray

    def __post_init__(self):
        _freeze(self.pixels, (COLOR_HEIGHT, COLOR_WIDTH, 3), np.uint8)

    @classmethod
    def filled(cls, rgb: tuple[int, int, int] = (0, 0, 0)) -> "ColorFrame":
        return cls(np.full((COLOR_HEIGHT, COLOR_WIDTH, 3), rgb, dtype=np.uint8))


@dataclass(frozen=True)
class DepthFrame:
    """512x424 16-bit depth image, millimeters; 0 marks an invalid sample."""

    pixels: np.ndarray

    def __post_init__(self):
        _freeze(self.pixels, (DEPTH_HEIGHT, DEPTH_WIDTH), np.uint16)

    @classmethod
    def blank(cls) -> "DepthFrame":
        return cls(np.zeros((DEPTH_HEIGHT, DEPTH_WIDTH), dtype=np.uint16))


@dataclass(frozen=True)
class InfraredFrame:
    """512x424 8-bit infrared intensity image."""

    pixels: np.ndarray

    def __post_init__(self):
        _freeze(self.pixels, (DEPTH_HEIGHT, DEPTH_WIDTH), np.uint8)

    @classmethod
    def blank(cls) -> "InfraredFrame":
        return cls(np.zeros((DEPTH_HEIGHT, DEPTH_WIDTH), dtype=np.uint8))


@dataclass(frozen=True)
class BodyIndexFrame:
    """512x424 8-bit body label image: 0..5 = body index, 255 = background."""

    pixels: np.ndarray

    def __post_init__(self):
        _freeze(self.pixels, (DEPTH_HEIGHT, DEPTH_WIDTH), np.uint8)

    @classmethod
    def blank(cls) -> "BodyIndexFrame":
        return cls(np.full((DEPTH_HEIGHT, DEPTH_WIDTH), BACKGROUND_INDEX, dtype=np.uint8))


@dataclass(frozen=True)
class MappedBodyFrame:
    """512x424 8-bit RGB image of body color pixels reprojected onto depth geometry."""

    pixels: np.ndarray

    def __post_init__(self):
        _freeze(self.pixels, (DEPTH_HEIGHT, DEPTH_WIDTH, 3), np.uint8)

    @classmethod
    def blank(cls) -> "MappedBodyFrame":
        return cls(np.zeros((DEPTH_HEIGHT, DEPTH_WIDTH, 3), dtype=np.uint8))


@dataclass(frozen=True)
class FrameBundle:
    """All modality frames plus skeletons for one capture instant."""

    frame_index: int
    timestamp_ms: int
    color: ColorFrame
    depth: DepthFrame
    infrared: InfraredFrame
    body_index: BodyIndexFrame
    mapped_body: MappedBodyFrame
    skeletons: tuple[Skeleton, ...] = field(default_factory=tuple)


def validate_bundle(bundle: FrameBundle) -> list[str]:
    """Check every bundle invariant; return one message per violation.

    An empty report means the bundle is valid. Violations are data, not
    errors: defective bundles are representable so that fuzzing and replay
    of damaged sessions stay possible.
    """
    report: list[str] = []

    if bundle.frame_index < 0:
        report.append(f"frame_index: negative value {bundle.frame_index}")
    if bundle.timestamp_ms < 0:
        report.append(f"timestamp_ms: negative value {bundle.timestamp_ms}")

    depth = bundle.depth.pixels
    bad_depth = int(np.count_nonzero((depth != 0) & ((depth < DEPTH_MIN_MM) | (depth > DEPTH_MAX_MM))))
    if bad_depth:
        report.append(
            f"depth: {bad_depth} nonzero sample(s) outside [{DEPTH_MIN_MM}, {DEPTH_MAX_MM}] mm"
        )

    labels = bundle.body_index.pixels
    bad_labels = int(np.count_nonzero((labels >= MAX_BODIES) & (labels != BACKGROUND_INDEX)))
    if bad_labels:
        report.append(f"body_index: {bad_labels} sample(s) outside {{0..5, 255}}")

    mapped = bundle.mapped_body.pixels
    stray = int(np.count_nonzero(mapped.any(axis=2) & (labels == BACKGROUND_INDEX)))
    if stray:
        report.append(f"mapped_body: {stray} non-black pixel(s) outside the body-index mask")

    if len(bundle.skeletons) > MAX_BODIES:
        report.append(f"skeletons: {len(bundle.skeletons)} bodies exceeds {MAX_BODIES}")

    seen: set[int] = set()
    for skeleton in bundle.skeletons:
        tag = f"skeleton body_index={skeleton.body_index}"
        if skeleton.body_index in seen:
            report.append(f"skeletons: duplicate body_index {skeleton.body_index}")
        seen.add(skeleton.body_index)
        if not 0 <= skeleton.body_index < MAX_BODIES:
            report.append(f"{tag}: body_index outside 0..{MAX_BODIES - 1}")
        types = [j.joint_type for j in skeleton.joints]
        if len(types) != JOINT_COUNT or set(types) != set(JointType):
            report.append(f"{tag}: joints do not cover all {JOINT_COUNT} joint types exactly once")
        for joint in skeleton.joints:
            if joint.tracking_state == TrackingState.Tracked and joint.camera[2] <= 0:
                report.append(
                    f"{tag}/{joint.joint_type.name}: tracked joint has non-positive camera Z"
                )

    return report
