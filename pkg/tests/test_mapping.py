import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from signcol.frames import (
    BACKGROUND_INDEX,
    DEPTH_HEIGHT,
    DEPTH_WIDTH,
    BodyIndexFrame,
    ColorFrame,
    DepthFrame,
)
from signcol.mapping import (
    DEFAULT_CALIBRATION,
    CameraIntrinsics,
    DeviceCalibration,
    InvalidDepthError,
    ProjectionError,
    camera_to_depth,
    depth_pixel_to_color,
    depth_to_camera,
    in_frame,
    render_mapped_bodies,
)

DEPTH_INTR = DEFAULT_CALIBRATION.depth


def degenerate_calibration(intrinsics=DEPTH_INTR):
    """Depth and color cameras identical, zero translation.

    Such a rig violates the DeviceCalibration dimension invariant, so it
    cannot be built through the validating constructor; tests assemble it
    directly to exercise the pure mapping math.
    """
    calib = object.__new__(DeviceCalibration)
    object.__setattr__(calib, "depth", intrinsics)
    object.__setattr__(calib, "color", intrinsics)
    object.__setattr__(calib, "depth_to_color_translation", (0.0, 0.0, 0.0))
    return calib


def test_optical_axis_projects_to_principal_point():
    assert camera_to_depth((0.0, 0.0, 2.0), DEPTH_INTR) == (256.0, 212.0)


def test_pinhole_projection_hand_computed_value():
    # 365 * 0.5 / 1.0 + 256 = 438.5, independent scalar computation
    x, y = camera_to_depth((0.5, 0.0, 1.0), DEPTH_INTR)
    assert x == pytest.approx(438.5, abs=1e-12)
    assert y == pytest.approx(212.0, abs=1e-12)


def test_positive_y_maps_to_smaller_row():
    # camera +Y is up; image rows grow downward
    _, v = camera_to_depth((0.0, 0.5, 2.0), DEPTH_INTR)
    assert v < 212.0


def test_zero_depth_projection_is_an_error():
    with pytest.raises(ProjectionError):
        camera_to_depth((0.0, 0.0, 0.0), DEPTH_INTR)
    with pytest.raises(ProjectionError):
        camera_to_depth((0.1, 0.1, -1.0), DEPTH_INTR)


def test_principal_point_back_projects_to_optical_axis():
    assert depth_to_camera((256.0, 212.0), 2000, DEPTH_INTR) == (0.0, 0.0, 2.0)


def test_zero_depth_back_projection_is_an_error():
    with pytest.raises(InvalidDepthError):
        depth_to_camera((100.0, 100.0), 0, DEPTH_INTR)


@given(
    u=st.floats(0, DEPTH_WIDTH - 1e-9),
    v=st.floats(0, DEPTH_HEIGHT - 1e-9),
    depth_mm=st.integers(500, 8000),
)
@settings(max_examples=300)
def test_round_trip_depth_camera_depth(u, v, depth_mm):
    point = depth_to_camera((u, v), depth_mm, DEPTH_INTR)
    u2, v2 = camera_to_depth(point, DEPTH_INTR)
    assert abs(u2 - u) < 1e-6
    assert abs(v2 - v) < 1e-6


@given(
    x=st.floats(-3, 3),
    y=st.floats(-3, 3),
    z=st.floats(0.5, 8.0),
    scale=st.floats(0.01, 100.0),
)
@settings(max_examples=300)
def test_projection_is_scale_invariant_along_rays(x, y, z, scale):
    u1, v1 = camera_to_depth((x, y, z), DEPTH_INTR)
    u2, v2 = camera_to_depth((x * scale, y * scale, z * scale), DEPTH_INTR)
    assert abs(u2 - u1) <= 1e-9 * max(1.0, abs(u1))
    assert abs(v2 - v1) <= 1e-9 * max(1.0, abs(v1))


def test_depth_to_color_proportional_intrinsics():
    # color focal = depth focal * 1920/512 and aligned principal points, zero
    # translation: color x moves 3.75 px per depth px about the principal point.
    ratio = 1920 / 512  # 3.75
    depth = CameraIntrinsics(365.0, 365.0, 256.0, 212.0, 512, 424)
    color = CameraIntrinsics(365.0 * ratio, 365.0 * ratio, 960.0, 540.0, 1920, 1080)
    calib = DeviceCalibration(depth=depth, color=color, depth_to_color_translation=(0.0, 0.0, 0.0))
    for u in (0.0, 100.0, 256.0, 400.0, 511.0):
        cx, cy = depth_pixel_to_color((u, 212.0), 1700, calib)
        assert cx == pytest.approx(960.0 + ratio * (u - 256.0), abs=1e-9)
        assert cy == pytest.approx(540.0, abs=1e-9)


def test_identity_calibration_maps_pixel_to_itself():
    calib = degenerate_calibration()
    for pixel in ((256.0, 212.0), (10.5, 40.25), (500.0, 400.0)):
        mapped = depth_pixel_to_color(pixel, 1234, calib)
        assert mapped[0] == pytest.approx(pixel[0], abs=1e-9)
        assert mapped[1] == pytest.approx(pixel[1], abs=1e-9)


def test_depth_pixel_to_color_rejects_invalid_depth():
    with pytest.raises(InvalidDepthError):
        depth_pixel_to_color((100.0, 100.0), 0, DEFAULT_CALIBRATION)


def test_in_frame_boundaries():
    assert in_frame((0.0, 0.0), DEPTH_INTR)
    assert in_frame((511.999, 423.999), DEPTH_INTR)
    assert not in_frame((512.0, 0.0), DEPTH_INTR)
    assert not in_frame((-0.001, 10.0), DEPTH_INTR)


def test_intrinsics_invariants_enforced():
    with pytest.raises(ValueError):
        CameraIntrinsics(-1.0, 365.0, 256.0, 212.0, 512, 424)
    with pytest.raises(ValueError):
        CameraIntrinsics(365.0, 365.0, 600.0, 212.0, 512, 424)
    with pytest.raises(ValueError):
        DeviceCalibration(
            depth=DEPTH_INTR,
            color=DEFAULT_CALIBRATION.color,
            depth_to_color_translation=(0.3, 0.0, 0.0),
        )


# -- render_mapped_bodies -------------------------------------------------------


def test_all_background_renders_black():
    mapped = render_mapped_bodies(
        ColorFrame.filled((200, 10, 10)),
        DepthFrame.blank(),
        BodyIndexFrame.blank(),
        DEFAULT_CALIBRATION,
    )
    assert not mapped.pixels.any()


def test_identity_calibration_copies_the_single_body_pixel():
    calib = degenerate_calibration()
    red = ColorFrame.filled((255, 0, 0))
    depth = np.zeros((DEPTH_HEIGHT, DEPTH_WIDTH), dtype=np.uint16)
    labels = np.full((DEPTH_HEIGHT, DEPTH_WIDTH), BACKGROUND_INDEX, dtype=np.uint8)
    depth[100, 200] = 1500
    labels[100, 200] = 0
    mapped = render_mapped_bodies(red, DepthFrame(depth), BodyIndexFrame(labels), calib)
    assert tuple(mapped.pixels[100, 200]) == (255, 0, 0)
    others = mapped.pixels.copy()
    others[100, 200] = 0
    assert not others.any()


def test_body_pixel_with_invalid_depth_stays_black():
    calib = degenerate_calibration()
    labels = np.full((DEPTH_HEIGHT, DEPTH_WIDTH), BACKGROUND_INDEX, dtype=np.uint8)
    labels[50, 50] = 2  # no depth sample underneath
    mapped = render_mapped_bodies(
        ColorFrame.filled((9, 9, 9)), DepthFrame.blank(), BodyIndexFrame(labels), calib
    )
    assert not mapped.pixels.any()


def test_mapped_support_is_subset_of_mask_random_scene(rng):
    depth = np.zeros((DEPTH_HEIGHT, DEPTH_WIDTH), dtype=np.uint16)
    labels = np.full((DEPTH_HEIGHT, DEPTH_WIDTH), BACKGROUND_INDEX, dtype=np.uint8)
    ys = rng.integers(0, DEPTH_HEIGHT, 4000)
    xs = rng.integers(0, DEPTH_WIDTH, 4000)
    depth[ys, xs] = rng.integers(500, 8001, 4000)
    labels[ys, xs] = rng.integers(0, 6, 4000)
    color = ColorFrame(rng.integers(0, 256, (1080, 1920, 3), dtype=np.uint8).astype(np.uint8))
    mapped = render_mapped_bodies(ColorFrame(color.pixels), DepthFrame(depth), BodyIndexFrame(labels), DEFAULT_CALIBRATION)
    support = mapped.pixels.any(axis=2)
    mask = labels != BACKGROUND_INDEX
    assert not (support & ~mask).any()


def test_mapped_pixels_match_scalar_oracle(rng):
    """Vectorized renderer must agree per pixel with the scalar mapping chain."""
    depth = np.zeros((DEPTH_HEIGHT, DEPTH_WIDTH), dtype=np.uint16)
    labels = np.full((DEPTH_HEIGHT, DEPTH_WIDTH), BACKGROUND_INDEX, dtype=np.uint8)
    ys = rng.integers(0, DEPTH_HEIGHT, 500)
    xs = rng.integers(0, DEPTH_WIDTH, 500)
    depth[ys, xs] = rng.integers(500, 8001, 500)
    labels[ys, xs] = rng.integers(0, 6, 500)
    color_pixels = rng.integers(0, 256, (1080, 1920, 3), dtype=np.uint8).astype(np.uint8)
    color = ColorFrame(color_pixels)
    mapped = render_mapped_bodies(
        color, DepthFrame(depth), BodyIndexFrame(labels), DEFAULT_CALIBRATION
    )

    for v, u in np.argwhere((labels != BACKGROUND_INDEX) & (depth != 0)):
        expected = (0, 0, 0)
        try:
            cu, cv = depth_pixel_to_color((float(u), float(v)), int(depth[v, u]), DEFAULT_CALIBRATION)
            cu, cv = round(cu), round(cv)
            if 0 <= cu < 1920 and 0 <= cv < 1080:
                expected = tuple(color_pixels[cv, cu])
        except (ProjectionError, InvalidDepthError):
            pass
        assert tuple(mapped.pixels[v, u]) == expected
