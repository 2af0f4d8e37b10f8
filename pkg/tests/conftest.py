import numpy as np
import pytest

from signcol.frames import (
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


def make_skeleton(body_index: int = 0, z: float = 2.0) -> Skeleton:
    """A minimal valid skeleton: every joint tracked at depth z on the optical axis."""
    joints = tuple(
        Joint(
            joint_type=jt,
            camera=(0.01 * jt.value, 0.0, z),
            depth=(256.0, 212.0),
            color=(960.0, 540.0),
            tracking_state=TrackingState.Tracked,
        )
        for jt in JointType
    )
    return Skeleton(body_index=body_index, joints=joints)


def blank_bundle(frame_index: int = 0, skeletons=()) -> FrameBundle:
    return FrameBundle(
        frame_index=frame_index,
        timestamp_ms=0,
        color=ColorFrame.filled(),
        depth=DepthFrame.blank(),
        infrared=InfraredFrame.blank(),
        body_index=BodyIndexFrame.blank(),
        mapped_body=MappedBodyFrame.blank(),
        skeletons=tuple(skeletons),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
