"""Session lifecycle and synchronized on-disk persistence.

One saved session is a self-contained folder:

    <root>/<Language>_<catN>_<Item>_<Performer>_<suffix>/
      camera_parameters.txt
      color_frames/frame_000000.png ...      8-bit RGB
      depth_frames/frame_000000.png ...      16-bit grayscale, millimeters
      infrared_frames/frame_000000.png ...   8-bit grayscale
      bodyindex_frames/frame_000000.png ...  8-bit grayscale
      mapped_frames/frame_000000.png ...     8-bit RGB
      skeleton/frame_000000.csv ...          25 rows per tracked body
      timing/timestamps.csv                  one "<index>,<timestamp_ms>" row per frame

PNG keeps every modality lossless (16-bit depth included), so a saved session
replays byte-exactly.
"""

from __future__ import annotations

import random
import re
import shutil
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import cv2
import numpy as np

from .catalog import SignCategory
from .frames import (
    BodyIndexFrame,
    ColorFrame,
    DepthFrame,
    FrameBundle,
    InfraredFrame,
    Joint,
    JointType,
    MappedBodyFrame,
    Skeleton,
    TrackingState,
)
from .mapping import CameraIntrinsics, DeviceCalibration

CAMERA_PARAMETERS_FILE = "camera_parameters.txt"
TIMING_DIR = "timing"
TIMING_FILE = "timestamps.csv"
SKELETON_DIR = "skeleton"
IMAGE_DIRS = (
    "color_frames",
    "depth_frames",
    "infrared_frames",
    "bodyindex_frames",
    "mapped_frames",
)
SESSION_SUBDIRS = IMAGE_DIRS + (SKELETON_DIR, TIMING_DIR)

FOLDER_NAME_RE = re.compile(r"^[A-Za-z0-9-]+_cat[1-8]_[A-Za-z0-9-]+_[A-Za-z0-9-]+_[0-9]{6}$")

MAX_SUFFIX = 1_000_000  # suffixes are 6-digit zero-padded decimals
_COLLISION_ATTEMPTS = 10

# PNG is lossless at any compression level; low level keeps capture fast.
_PNG_PARAMS = [cv2.IMWRITE_PNG_COMPRESSION, 1]


class InvalidNameError(ValueError):
    """Name component is empty after sanitization."""


class SessionStateError(RuntimeError):
    """Operation not legal in the session's current state."""


class SuffixCollisionError(RuntimeError):
    """Could not find a free folder name after the maximum number of attempts."""


class SessionFormatError(ValueError):
    """On-disk session data is missing or malformed."""


class SessionState(Enum):
    INITIALIZED = "initialized"
    RECORDING = "recording"
    STOPPED = "stopped"
    SAVED = "saved"
    DISCARDED = "discarded"


# -- folder naming policy ------------------------------------------------------


def sanitize_name(name: str) -> str:
    """Interior whitespace (str.isspace) becomes hyphens, boundary whitespace is
    trimmed, anything outside [A-Za-z0-9-] is dropped."""
    hyphened = "".join("-" if ch.isspace() else ch for ch in name.strip())
    cleaned = re.sub(r"[^A-Za-z0-9-]", "", hyphened)
    if not cleaned:
        raise InvalidNameError(f"name {name!r} is empty after sanitization")
    return cleaned


def session_folder_name(
    language: str, category: SignCategory, item: str, performer: str, random_suffix: int
) -> str:
    """Build ``<Language>_<catN>_<Item>_<Performer>_<suffix>`` per the folder policy."""
    if not 0 <= random_suffix < MAX_SUFFIX:
        raise ValueError(f"suffix must be in [0, {MAX_SUFFIX}), got {random_suffix}")
    category = SignCategory.parse(category)
    return (
        f"{sanitize_name(language)}_{category.label}_{sanitize_name(item)}"
        f"_{sanitize_name(performer)}_{random_suffix:06d}"
    )


# -- image files ----------------------------------------------------------------


def _write_png(path: Path, array: np.ndarray):
    # cv2 expects BGR channel order for 3-channel images.
    data = array[:, :, ::-1] if array.ndim == 3 else array
    if not cv2.imwrite(str(path), data, _PNG_PARAMS):
        raise OSError(f"failed to write {path}")


def _read_png(path: Path, ndim: int, dtype) -> np.ndarray:
    array = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if array is None:
        raise SessionFormatError(f"missing or unreadable image: {path}")
    if array.ndim != ndim or array.dtype != dtype:
        raise SessionFormatError(f"unexpected image format in {path}")
    return array[:, :, ::-1].copy() if ndim == 3 else array


def read_color_frame(path: Path) -> ColorFrame:
    return ColorFrame(_read_png(path, 3, np.uint8))


def read_depth_frame(path: Path) -> DepthFrame:
    return DepthFrame(_read_png(path, 2, np.uint16))


def read_infrared_frame(path: Path) -> InfraredFrame:
    return InfraredFrame(_read_png(path, 2, np.uint8))


def read_body_index_frame(path: Path) -> BodyIndexFrame:
    return BodyIndexFrame(_read_png(path, 2, np.uint8))


def read_mapped_body_frame(path: Path) -> MappedBodyFrame:
    return MappedBodyFrame(_read_png(path, 3, np.uint8))


def frame_file_name(index: int, extension: str = ".png") -> str:
    return f"frame_{index:06d}{extension}"


# -- skeleton CSV -----------------------------------------------------------------


def serialize_skeleton_rows(skeletons: tuple[Skeleton, ...] | list[Skeleton]) -> str:
    """Serialize skeletons to CSV text: 25 rows per body, bodies in body_index order.

    Rows follow joint ordinal order; every number carries 6 decimal places and
    lines end with LF. Tracking state is not part of the format.
    """
    lines = []
    for skeleton in sorted(skeletons, key=lambda s: s.body_index):
        for joint_type in JointType:
            j = skeleton.joint(joint_type)
            cx, cy, cz = j.camera
            dx, dy = j.depth
            ox, oy = j.color
            lines.append(
                f"JointType:,{joint_type.name},"
                f"CameraSpacePoint:,X:{cx:.6f} Y:{cy:.6f} Z:{cz:.6f},"
                f"DepthSpacePoint:,X:{dx:.6f} Y:{dy:.6f},"
                f"ColorSpacePoint:,X:{ox:.6f} Y:{oy:.6f}"
            )
    return "".join(line + "\n" for line in lines)


_SKELETON_ROW_RE = re.compile(
    r"^JointType:,(?P<name>[A-Za-z]+),"
    r"CameraSpacePoint:,X:(?P<cx>\S+) Y:(?P<cy>\S+) Z:(?P<cz>\S+),"
    r"DepthSpacePoint:,X:(?P<dx>\S+) Y:(?P<dy>\S+),"
    r"ColorSpacePoint:,X:(?P<ox>\S+) Y:(?P<oy>\S+)$"
)


def parse_skeleton_rows(text: str) -> list[Skeleton]:
    """Inverse of :func:`serialize_skeleton_rows`.

    Bodies are assigned sequential body indices 0..k-1 (the CSV format does
    not carry the original slot numbers), preserving file order so a parsed
    skeleton list re-serializes byte-identically.
    """
    lines = text.splitlines()
    if len(lines) % 25 != 0:
        raise SessionFormatError(f"skeleton CSV has {len(lines)} rows, not a multiple of 25")
    skeletons = []
    for body, start in enumerate(range(0, len(lines), 25)):
        joints = []
        for line in lines[start : start + 25]:
            match = _SKELETON_ROW_RE.match(line)
            if match is None:
                raise SessionFormatError(f"malformed skeleton row: {line!r}")
            try:
                joint_type = JointType[match["name"]]
            except KeyError as exc:
                raise SessionFormatError(f"unknown joint type {match['name']!r}") from exc
            try:
                joints.append(
                    Joint(
                        joint_type=joint_type,
                        camera=(float(match["cx"]), float(match["cy"]), float(match["cz"])),
                        depth=(float(match["dx"]), float(match["dy"])),
                        color=(float(match["ox"]), float(match["oy"])),
                        tracking_state=TrackingState.Tracked,
                    )
                )
            except ValueError as exc:
                raise SessionFormatError(f"malformed number in skeleton row: {line!r}") from exc
        skeletons.append(Skeleton(body_index=body, joints=tuple(joints)))
    return skeletons


# -- camera parameters file ----------------------------------------------------------

_CAMERA_KEYS = (
    "depth.fx",
    "depth.fy",
    "depth.cx",
    "depth.cy",
    "depth.width",
    "depth.height",
    "color.fx",
    "color.fy",
    "color.cx",
    "color.cy",
    "color.width",
    "color.height",
    "t.x",
    "t.y",
    "t.z",
)


def write_camera_parameters(calibration: DeviceCalibration) -> str:
    """Render calibration as line-oriented key=value text (LF endings)."""
    values = {
        "depth.fx": f"{calibration.depth.focal_x:.6f}",
        "depth.fy": f"{calibration.depth.focal_y:.6f}",
        "depth.cx": f"{calibration.depth.principal_x:.6f}",
        "depth.cy": f"{calibration.depth.principal_y:.6f}",
        "depth.width": str(calibration.depth.width),
        "depth.height": str(calibration.depth.height),
        "color.fx": f"{calibration.color.focal_x:.6f}",
        "color.fy": f"{calibration.color.focal_y:.6f}",
        "color.cx": f"{calibration.color.principal_x:.6f}",
        "color.cy": f"{calibration.color.principal_y:.6f}",
        "color.width": str(calibration.color.width),
        "color.height": str(calibration.color.height),
        "t.x": f"{calibration.depth_to_color_translation[0]:.6f}",
        "t.y": f"{calibration.depth_to_color_translation[1]:.6f}",
        "t.z": f"{calibration.depth_to_color_translation[2]:.6f}",
    }
    return "".join(f"{key}={values[key]}\n" for key in _CAMERA_KEYS)


def parse_camera_parameters(text: str) -> DeviceCalibration:
    """Inverse of :func:`write_camera_parameters`."""
    values: dict[str, str] = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise SessionFormatError(f"malformed camera parameter line: {line!r}")
        values[key.strip()] = value.strip()
    missing = [key for key in _CAMERA_KEYS if key not in values]
    if missing:
        raise SessionFormatError(f"camera parameters missing keys: {', '.join(missing)}")
    try:
        depth = CameraIntrinsics(
            float(values["depth.fx"]),
            float(values["depth.fy"]),
            float(values["depth.cx"]),
            float(values["depth.cy"]),
            int(values["depth.width"]),
            int(values["depth.height"]),
        )
        color = CameraIntrinsics(
            float(values["color.fx"]),
            float(values["color.fy"]),
            float(values["color.cx"]),
            float(values["color.cy"]),
            int(values["color.width"]),
            int(values["color.height"]),
        )
        translation = (float(values["t.x"]), float(values["t.y"]), float(values["t.z"]))
        return DeviceCalibration(depth=depth, color=color, depth_to_color_translation=translation)
    except ValueError as exc:
        raise SessionFormatError(f"invalid camera parameters: {exc}") from exc


# -- session lifecycle -------------------------------------------------------------------


@dataclass(frozen=True)
class SaveResult:
    """Registration payload returned by :meth:`Session.save`."""

    folder: Path
    item: str
    performer: str
    frame_count: int


class Session:
    """One capture session owning one folder.

    State machine: INITIALIZED -> RECORDING -> STOPPED -> SAVED | DISCARDED.
    Stop is final: a stopped session can only be saved or discarded. Frames
    may only be appended while RECORDING; one writer thread at a time.
    """

    def __init__(
        self,
        language: str,
        category: SignCategory,
        item: str,
        performer: str,
        random_suffix: int,
        folder: Path,
        calibration: DeviceCalibration,
    ):
        self.language = language
        self.category = category
        self.item = item
        self.performer = performer
        self.random_suffix = random_suffix
        self.folder = folder
        self.calibration = calibration
        self.state = SessionState.INITIALIZED
        self.frames_written = 0

    @property
    def id(self) -> str:
        return self.folder.name

    def _require(self, state: SessionState, action: str):
        if self.state != state:
            raise SessionStateError(
                f"cannot {action} in state {self.state.value!r} (requires {state.value!r})"
            )

    def start(self):
        self._require(SessionState.INITIALIZED, "start")
        self.state = SessionState.RECORDING

    def append_frame(self, bundle: FrameBundle) -> int:
        """Persist every modality of one bundle; returns the frame index written.

        On a write failure the partially written files of this frame are
        removed, the counter is untouched and the session stays RECORDING.
        """
        self._require(SessionState.RECORDING, "append a frame")
        index = self.frames_written
        image_name = frame_file_name(index)
        written: list[Path] = []
        try:
            for directory, array in (
                ("color_frames", bundle.color.pixels),
                ("depth_frames", bundle.depth.pixels),
                ("infrared_frames", bundle.infrared.pixels),
                ("bodyindex_frames", bundle.body_index.pixels),
                ("mapped_frames", bundle.mapped_body.pixels),
            ):
                path = self.folder / directory / image_name
                _write_png(path, array)
                written.append(path)
            skeleton_path = self.folder / SKELETON_DIR / frame_file_name(index, ".csv")
            skeleton_path.write_text(serialize_skeleton_rows(bundle.skeletons))
            written.append(skeleton_path)
            with open(self.folder / TIMING_DIR / TIMING_FILE, "a") as timing:
                timing.write(f"{index},{bundle.timestamp_ms}\n")
        except Exception:
            for path in written:
                path.unlink(missing_ok=True)
            raise
        self.frames_written += 1
        return index

    def stop(self):
        self._require(SessionState.RECORDING, "stop")
        self.state = SessionState.STOPPED

    def save(self) -> SaveResult:
        self._require(SessionState.STOPPED, "save")
        self.state = SessionState.SAVED
        return SaveResult(
            folder=self.folder,
            item=self.item,
            performer=self.performer,
            frame_count=self.frames_written,
        )

    def discard(self):
        """Delete the session folder recursively and mark the session discarded."""
        self._require(SessionState.STOPPED, "discard")
        shutil.rmtree(self.folder)
        self.state = SessionState.DISCARDED


def create_session(
    language: str,
    category: SignCategory,
    item: str,
    performer: str,
    output_root: str | Path,
    calibration: DeviceCalibration,
    rng: random.Random | None = None,
) -> Session:
    """Create the session folder (fresh random suffix, re-drawn on collision) and scaffold it."""
    rng = rng if rng is not None else random.Random()
    output_root = Path(output_root)
    output_root.mkdir(parents=True, exist_ok=True)

    category = SignCategory.parse(category)
    for _ in range(_COLLISION_ATTEMPTS):
        suffix = rng.randrange(MAX_SUFFIX)
        folder = output_root / session_folder_name(language, category, item, performer, suffix)
        try:
            folder.mkdir()
        except FileExistsError:
            continue
        for subdir in SESSION_SUBDIRS:
            (folder / subdir).mkdir()
        (folder / CAMERA_PARAMETERS_FILE).write_text(write_camera_parameters(calibration))
        (folder / TIMING_DIR / TIMING_FILE).touch()
        return Session(language, category, item, performer, suffix, folder, calibration)
    raise SuffixCollisionError(
        f"no free folder name after {_COLLISION_ATTEMPTS} suffix draws under {output_root}"
    )


# -- validation ------------------------------------------------------------------------------


def _indexed_files(directory: Path, extension: str) -> dict[int, Path]:
    pattern = re.compile(r"^frame_(\d{6})" + re.escape(extension) + "$")
    found = {}
    for path in directory.iterdir():
        match = pattern.match(path.name)
        if match:
            found[int(match.group(1))] = path
    return found


def validate_session(folder: str | Path) -> list[str]:
    """Check a session folder against the on-disk contract; one message per violation."""
    folder = Path(folder)
    if not folder.is_dir():
        return [f"{folder} is not a directory"]

    report: list[str] = []
    if not FOLDER_NAME_RE.match(folder.name):
        report.append(f"folder name {folder.name!r} violates the naming policy")

    missing = [sub for sub in SESSION_SUBDIRS if not (folder / sub).is_dir()]
    for sub in missing:
        report.append(f"missing subdirectory: {sub}")

    counts: dict[str, dict[int, Path]] = {}
    for sub in IMAGE_DIRS:
        if sub not in missing:
            counts[sub] = _indexed_files(folder / sub, ".png")
    if SKELETON_DIR not in missing:
        counts[SKELETON_DIR] = _indexed_files(folder / SKELETON_DIR, ".csv")

    sizes = {sub: len(files) for sub, files in counts.items()}
    if len(set(sizes.values())) > 1:
        report.append(f"modality file counts differ: {sizes}")
    for sub, files in counts.items():
        if files and set(files) != set(range(len(files))):
            report.append(f"{sub}: frame indices are not a gapless 0..N-1 sequence")

    if SKELETON_DIR in counts:
        for index in sorted(counts[SKELETON_DIR]):
            path = counts[SKELETON_DIR][index]
            rows = len(path.read_text().splitlines())
            if rows % 25 != 0:
                report.append(f"{SKELETON_DIR}/{path.name}: {rows} rows is not a multiple of 25")

    frame_count = sizes.get("color_frames", 0) if len(set(sizes.values())) == 1 else None
    timing_path = folder / TIMING_DIR / TIMING_FILE
    if TIMING_DIR not in missing:
        if not timing_path.is_file():
            report.append(f"missing timing file: {TIMING_DIR}/{TIMING_FILE}")
        else:
            rows = timing_path.read_text().splitlines()
            for line in rows:
                parts = line.split(",")
                if len(parts) != 2 or not all(p.lstrip("-").isdigit() for p in parts):
                    report.append(f"timing file row malformed: {line!r}")
                    break
            if frame_count is not None and len(rows) != frame_count:
                report.append(f"timing file has {len(rows)} rows for {frame_count} frames")

    params_path = folder / CAMERA_PARAMETERS_FILE
    if not params_path.is_file():
        report.append(f"missing {CAMERA_PARAMETERS_FILE}")
    else:
        try:
            parse_camera_parameters(params_path.read_text())
        except (SessionFormatError, ValueError) as exc:
            report.append(f"{CAMERA_PARAMETERS_FILE}: {exc}")

    return report


def read_timestamps(folder: str | Path) -> list[tuple[int, int]]:
    """Read the (index, timestamp_ms) rows of a session's timing file."""
    path = Path(folder) / TIMING_DIR / TIMING_FILE
    if not path.is_file():
        raise SessionFormatError(f"missing timing file: {path}")
    rows = []
    for line in path.read_text().splitlines():
        parts = line.split(",")
        try:
            rows.append((int(parts[0]), int(parts[1])))
        except (IndexError, ValueError) as exc:
            raise SessionFormatError(f"malformed timing row {line!r} in {path}") from exc
    return rows
