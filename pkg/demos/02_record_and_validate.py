"""Record a scripted capture session and validate its on-disk layout.

Shows the session lifecycle (create -> start -> append -> stop -> save), the
folder policy, and what the validator reports when a file goes missing.
"""

import random
from pathlib import Path

from signcol.catalog import SignCategory
from signcol.mapping import DEFAULT_CALIBRATION
from signcol.recording import create_session, validate_session
from signcol.sources import GestureSpec, MotionKind, SyntheticGestureSource

root = Path("demo_output/sessions")

session = create_session(
    "English", SignCategory.CAT7, "I love you", "Ann",
    root, DEFAULT_CALIBRATION, rng=random.Random(1),
)
print(f"session folder: {session.folder.name}")

source = SyntheticGestureSource(
    GestureSpec(MotionKind.ARC, 4.0, body_count=1, seed=1), rate=30.0, frame_limit=30
)
session.start()
while (bundle := source.next()) is not None:
    session.append_frame(bundle)
session.stop()
result = session.save()
print(f"saved {result.frame_count} frames ({result.item} by {result.performer})")

report = validate_session(session.folder)
print(f"validation report: {report or 'clean'}")

# Now damage the session and watch the validator notice.
victim = session.folder / "depth_frames" / "frame_000010.png"
victim.unlink()
print(f"\nremoved {victim.name}; re-validating:")
for violation in validate_session(session.folder):
    print(f"  - {violation}")
