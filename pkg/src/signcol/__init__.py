"""signcol: sign-language gesture collection toolkit.

Synthetic and replay frame sources feed a synchronized multi-modality
recorder; an embedded catalog tracks languages, items, performers and
recordings; a small HTTP service plus CLI drive live capture sessions.
"""

from .catalog import (
    Catalog,
    CategoryStats,
    Language,
    Performer,
    RecordingEntry,
    SignCategory,
    SignItem,
)
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
    validate_bundle,
)
from .mapping import (
    DEFAULT_CALIBRATION,
    CameraIntrinsics,
    DeviceCalibration,
    camera_to_color,
    camera_to_depth,
    depth_pixel_to_color,
    depth_to_camera,
    render_mapped_bodies,
)
from .recording import (
    Session,
    SessionState,
    create_session,
    serialize_skeleton_rows,
    session_folder_name,
    validate_session,
    write_camera_parameters,
)
from .sources import (
    FrameSource,
    GestureSpec,
    MotionKind,
    SessionReplaySource,
    SyntheticGestureSource,
    open_replay,
    rasterize,
    synthetic_skeleton,
)

__version__ = "0.1.0"
