"""Pinhole geometry tying camera space, depth image and color image together.

Conventions, fixed across the whole pipeline:
  * camera space is metric, X right, Y up, Z forward from the depth camera;
  * image rows grow downward, so projection flips Y;
  * no lens distortion, which keeps the mapping exactly invertible;
  * nearest-neighbor color sampling, so rendered output is byte-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .frames import (
    BACKGROUND_INDEX,
    COLOR_HEIGHT,
    COLOR_WIDTH,
    DEPTH_HEIGHT,
    DEPTH_WIDTH,
    BodyIndexFrame,
    ColorFrame,
    DepthFrame,
    MappedBodyFrame,
)

# The extrinsic offset between the depth and color cameras is small; anything
# bigger than this is a calibration entry error.
MAX_TRANSLATION_M = 0.2


class ProjectionError(ValueError):
    """Point cannot be projected (non-positive Z in front of the camera)."""


class InvalidDepthError(ValueError):
    """Depth sample is zero/negative and carries no geometry."""


@dataclass(frozen=True)
class CameraIntrinsics:
    """Pinhole parameters of one camera, all in pixels."""

    focal_x: float
    focal_y: float
    principal_x: float
    principal_y: float
    width: int
    height: int

    def __post_init__(self):
        if self.focal_x <= 0 or self.focal_y <= 0:
            raise ValueError("focal lengths must be positive")
        if not (0 < self.principal_x < self.width and 0 < self.principal_y < self.height):
            raise ValueError("principal point must lie inside the image")


@dataclass(frozen=True)
class DeviceCalibration:
    """Depth + color intrinsics and the depth-to-color extrinsic translation (meters)."""

    depth: CameraIntrinsics
    color: CameraIntrinsics
    depth_to_color_translation: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if (self.depth.width, self.depth.height) != (DEPTH_WIDTH, DEPTH_HEIGHT):
            raise ValueError(f"depth camera must be {DEPTH_WIDTH}x{DEPTH_HEIGHT}")
        if (self.color.width, self.color.height) != (COLOR_WIDTH, COLOR_HEIGHT):
            raise ValueError(f"color camera must be {COLOR_WIDTH}x{COLOR_HEIGHT}")
        if math.hypot(*self.depth_to_color_translation) >= MAX_TRANSLATION_M:
            raise ValueError(f"translation magnitude must be < {MAX_TRANSLATION_M} m")


# Plausible device-like defaults for the synthetic pipeline. Configuration,
# not ground truth for any physical sensor.
DEFAULT_DEPTH_INTRINSICS = CameraIntrinsics(365.0, 365.0, 256.0, 212.0, DEPTH_WIDTH, DEPTH_HEIGHT)
DEFAULT_COLOR_INTRINSICS = CameraIntrinsics(1060.0, 1060.0, 960.0, 540.0, COLOR_WIDTH, COLOR_HEIGHT)
DEFAULT_CALIBRATION = DeviceCalibration(
    depth=DEFAULT_DEPTH_INTRINSICS,
    color=DEFAULT_COLOR_INTRINSICS,
    depth_to_color_translation=(-0.052, 0.0, 0.0),
)


def camera_to_depth(
    point: tuple[float, float, float], intrinsics: CameraIntrinsics
) -> tuple[float, float]:
    """Project a camera-space point (meters) to image pixels.

    The result may lie outside the image; use :func:`in_frame` to flag that.
    """
    x, y, z = point
    if z <= 0:
        raise ProjectionError(f"cannot project point with Z={z}")
    return (
        intrinsics.focal_x * x / z + intrinsics.principal_x,
        intrinsics.principal_y - intrinsics.focal_y * y / z,
    )


def depth_to_camera(
    pixel: tuple[float, float], depth_mm: float, intrinsics: CameraIntrinsics
) -> tuple[float, float, float]:
    """Back-project a depth pixel with its depth (millimeters) into camera space."""
    if depth_mm <= 0:
        raise InvalidDepthError(f"depth must be positive, got {depth_mm}")
    z = depth_mm / 1000.0
    u, v = pixel
    return (
        (u - intrinsics.principal_x) * z / intrinsics.focal_x,
        (intrinsics.principal_y - v) * z / intrinsics.focal_y,
        z,
    )


def camera_to_color(
    point: tuple[float, float, float], calibration: DeviceCalibration
) -> tuple[float, float]:
    """Project a depth-camera-space point into the color image."""
    tx, ty, tz = calibration.depth_to_color_translation
    x, y, z = point
    return camera_to_depth((x + tx, y + ty, z + tz), calibration.color)


def depth_pixel_to_color(
    pixel: tuple[float, float], depth_mm: float, calibration: DeviceCalibration
) -> tuple[float, float]:
    """Map a depth pixel with known depth to color-image pixels."""
    return camera_to_color(depth_to_camera(pixel, depth_mm, calibration.depth), calibration)


def in_frame(pixel: tuple[float, float], intrinsics: CameraIntrinsics) -> bool:
    u, v = pixel
    return 0 <= u < intrinsics.width and 0 <= v < intrinsics.height


def render_mapped_bodies(
    color: ColorFrame,
    depth: DepthFrame,
    body_index: BodyIndexFrame,
    calibration: DeviceCalibration,
) -> MappedBodyFrame:
    """Reproject body color pixels onto depth-image geometry.

    Every depth pixel labeled as a body and holding valid depth samples the
    color frame (nearest neighbor) at its mapped color coordinate; all other
    pixels stay black, as do pixels whose mapping is undefined or lands
    outside the color image. Vectorized, but arithmetic matches
    :func:`depth_pixel_to_color` exactly.
    """
    out = np.zeros((DEPTH_HEIGHT, DEPTH_WIDTH, 3), dtype=np.uint8)
    mask = (body_index.pixels != BACKGROUND_INDEX) & (depth.pixels != 0)
    if not mask.any():
        return MappedBodyFrame(out)

    d, c = calibration.depth, calibration.color
    tx, ty, tz = calibration.depth_to_color_translation

    vs, us = np.nonzero(mask)
    z = depth.pixels[vs, us].astype(np.float64) / 1000.0
    x = (us - d.principal_x) * z / d.focal_x + tx
    y = (d.principal_y - vs) * z / d.focal_y + ty
    z = z + tz

    ok = z > 0
    cu = np.full(len(z), -1, dtype=np.int64)
    cv = np.full(len(z), -1, dtype=np.int64)
    cu[ok] = np.rint(c.focal_x * x[ok] / z[ok] + c.principal_x).astype(np.int64)
    cv[ok] = np.rint(c.principal_y - c.focal_y * y[ok] / z[ok]).astype(np.int64)
    ok &= (cu >= 0) & (cu < COLOR_WIDTH) & (cv >= 0) & (cv < COLOR_HEIGHT)

    out[vs[ok], us[ok]] = color.pixels[cv[ok], cu[ok]]
    return MappedBodyFrame(out)
