"""Command-line entry point: serve the API, manage the catalog, run scripted
captures, validate and replay saved sessions.

Exit codes: 0 success, 1 validation/domain failure, 2 usage error.
"""

from __future__ import annotations

import json as json_module
import random
import sys
from pathlib import Path

import click

from .catalog import Catalog, CatalogError, SignCategory, DEFAULT_DB_FILENAME
from .mapping import DEFAULT_CALIBRATION
from .recording import SessionFormatError, create_session, validate_session
from .service import DEFAULT_PORT, ServiceConfig, StartupError, serve as run_service
from .sources import (
    DEFAULT_FRAME_RATE,
    GestureSpec,
    MotionKind,
    SyntheticGestureSource,
    open_replay,
)

MOTION_CHOICES = {kind.value: kind for kind in MotionKind}


def fail(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


@click.group()
@click.option("--db", type=click.Path(path_type=Path), default=None,
              help=f"Catalog database file (default <data-dir>/{DEFAULT_DB_FILENAME}).")
@click.option("--data-dir", type=click.Path(path_type=Path), default=Path("signcol_data"),
              show_default=True, help="Directory for the database and recordings.")
@click.pass_context
def main(ctx, db, data_dir):
    """Sign-language gesture collection toolkit."""
    ctx.ensure_object(dict)
    ctx.obj["db"] = db
    ctx.obj["data_dir"] = data_dir


def open_catalog(obj) -> Catalog:
    db = obj["db"] if obj["db"] is not None else obj["data_dir"] / DEFAULT_DB_FILENAME
    db.parent.mkdir(parents=True, exist_ok=True)
    return Catalog(db)


def emit(rows: list[dict], columns: list[str], as_json: bool):
    if as_json:
        click.echo(json_module.dumps(rows, indent=2))
        return
    widths = {c: max(len(c), *(len(str(r.get(c, ""))) for r in rows)) if rows else len(c) for c in columns}
    click.echo("  ".join(c.ljust(widths[c]) for c in columns))
    for row in rows:
        click.echo("  ".join(str(row.get(c, "")).ljust(widths[c]) for c in columns))


# -- serve ----------------------------------------------------------------------


@main.command()
@click.option("--port", default=DEFAULT_PORT, show_default=True)
@click.option("--output-root", type=click.Path(path_type=Path), default=None,
              help="Where session folders are written (default <data-dir>/recordings).")
@click.option("--source", default="synthetic", show_default=True,
              help="Frame source: 'synthetic' or 'replay:<session folder>'.")
@click.option("--rate", default=DEFAULT_FRAME_RATE, show_default=True, help="Frames per second.")
@click.option("--seed", default=0, show_default=True)
@click.option("--motion", type=click.Choice(sorted(MOTION_CHOICES)), default="circle", show_default=True)
@click.option("--bodies", default=1, show_default=True)
@click.option("--duration", default=4.0, show_default=True, help="Gesture period, seconds.")
@click.option("--frontend", type=click.Path(path_type=Path), default=None,
              help="Optional directory of operator-console static files to host at /.")
@click.pass_obj
def serve(obj, port, output_root, source, rate, seed, motion, bodies, duration, frontend):
    """Run the HTTP capture service."""
    config = ServiceConfig(
        data_dir=obj["data_dir"],
        db_path=obj["db"],
        output_root=output_root,
        source=source,
        rate=rate,
        port=port,
        seed=seed,
        motion=MOTION_CHOICES[motion],
        body_count=bodies,
        duration_s=duration,
        frontend_dir=frontend,
    )
    try:
        run_service(config)
    except (StartupError, ValueError, SessionFormatError) as exc:
        fail(str(exc))


# -- definitions ------------------------------------------------------------------


@main.group()
def define():
    """Define languages, items and performers."""


@define.command("language")
@click.argument("name")
@click.pass_obj
def define_language(obj, name):
    try:
        with open_catalog(obj) as catalog:
            row = catalog.define_language(name)
    except CatalogError as exc:
        fail(str(exc))
    click.echo(f"language {row.id}: {row.name}")


@define.command("item")
@click.argument("name")
@click.option("--category", required=True, help="cat1..cat8 or 1..8.")
@click.option("--language-id", required=True, type=int)
@click.pass_obj
def define_item(obj, name, category, language_id):
    try:
        with open_catalog(obj) as catalog:
            row = catalog.define_item(name, SignCategory.parse(category), language_id)
    except CatalogError as exc:
        fail(str(exc))
    click.echo(f"item {row.id}: {row.name} [{row.category.label}]")


@define.command("performer")
@click.argument("name")
@click.option("--age", required=True, type=int)
@click.option("--phone", default="")
@click.pass_obj
def define_performer(obj, name, age, phone):
    try:
        with open_catalog(obj) as catalog:
            row = catalog.define_performer(name, age, phone)
    except CatalogError as exc:
        fail(str(exc))
    click.echo(f"performer {row.id}: {row.name}")


# -- listings --------------------------------------------------------------------------


@main.group("list")
def list_group():
    """List catalog contents."""


@list_group.command("languages")
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def list_languages(obj, as_json):
    with open_catalog(obj) as catalog:
        rows = [{"id": l.id, "name": l.name} for l in catalog.languages()]
    emit(rows, ["id", "name"], as_json)


@list_group.command("items")
@click.option("--category", default=None, help="cat1..cat8 or 1..8.")
@click.option("--search", default="")
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def list_items(obj, category, search, as_json):
    try:
        categories = [SignCategory.parse(category)] if category else list(SignCategory)
    except CatalogError as exc:
        fail(str(exc))
    with open_catalog(obj) as catalog:
        rows = []
        for one in categories:
            rows.extend(
                {
                    "id": item.id,
                    "name": item.name,
                    "category": item.category.label,
                    "language_id": item.language_id,
                    "recordings": count,
                }
                for item, count in catalog.list_items(one, search)
            )
    rows.sort(key=lambda r: r["name"])
    emit(rows, ["id", "name", "category", "language_id", "recordings"], as_json)


@list_group.command("performers")
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def list_performers(obj, as_json):
    with open_catalog(obj) as catalog:
        rows = [
            {"id": p.id, "name": p.name, "age": p.age, "phone": p.phone}
            for p in catalog.performers()
        ]
    emit(rows, ["id", "name", "age", "phone"], as_json)


@list_group.command("recordings")
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def list_recordings(obj, as_json):
    with open_catalog(obj) as catalog:
        rows = [
            {
                "id": r.id,
                "folder_path": r.folder_path,
                "item_id": r.item_id,
                "performer_id": r.performer_id,
                "frame_count": r.frame_count,
            }
            for r in catalog.recordings()
        ]
    emit(rows, ["id", "folder_path", "item_id", "performer_id", "frame_count"], as_json)


# -- statistics ---------------------------------------------------------------------------


@main.command()
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def stats(obj, as_json):
    """Show item and recording counts for the eight sign categories."""
    with open_catalog(obj) as catalog:
        rows = catalog.category_stats().as_rows()
    if as_json:
        click.echo(json_module.dumps({"categories": rows}, indent=2))
        return
    emit(rows, ["category", "description", "defined_item_count", "recording_count"], False)


# -- scripted capture ------------------------------------------------------------------------


def run_capture(session, source) -> int:
    session.start()
    while (bundle := source.next()) is not None:
        session.append_frame(bundle)
    session.stop()
    return session.frames_written


@main.command()
@click.option("--item", "item_id", required=True, type=int)
@click.option("--performer", "performer_id", required=True, type=int)
@click.option("--frames", required=True, type=int)
@click.option("--seed", default=0, show_default=True)
@click.option("--rate", default=DEFAULT_FRAME_RATE, show_default=True)
@click.option("--motion", type=click.Choice(sorted(MOTION_CHOICES)), default="circle", show_default=True)
@click.option("--bodies", default=1, show_default=True)
@click.option("--duration", default=4.0, show_default=True)
@click.option("--output-root", type=click.Path(path_type=Path), default=None)
@click.pass_obj
def record(obj, item_id, performer_id, frames, seed, rate, motion, bodies, duration, output_root):
    """Run a full synthetic capture session and register it in the catalog."""
    if frames <= 0:
        fail("--frames must be positive")
    output_root = output_root if output_root is not None else obj["data_dir"] / "recordings"
    try:
        with open_catalog(obj) as catalog:
            item = catalog.get_item(item_id)
            if item is None:
                fail(f"item id {item_id} does not exist")
            performer = catalog.get_performer(performer_id)
            if performer is None:
                fail(f"performer id {performer_id} does not exist")
            language = catalog.get_language(item.language_id)

            spec = GestureSpec(MOTION_CHOICES[motion], duration, body_count=bodies, seed=seed)
            source = SyntheticGestureSource(
                spec, rate=rate, calibration=DEFAULT_CALIBRATION, frame_limit=frames
            )
            session = create_session(
                language.name, item.category, item.name, performer.name,
                output_root, DEFAULT_CALIBRATION, rng=random.Random(seed),
            )
            written = run_capture(session, source)
            result = session.save()
            entry = catalog.register_recording(
                str(result.folder), item.id, performer.id, result.frame_count
            )
    except (CatalogError, OSError, ValueError) as exc:
        fail(str(exc))
    click.echo(f"recorded {written} frames to {result.folder}")
    click.echo(f"recording {entry.id} registered")


# -- session folders ------------------------------------------------------------------------------


@main.command()
@click.argument("folder", type=click.Path(path_type=Path))
def validate(folder):
    """Check a session folder against the on-disk contract."""
    report = validate_session(folder)
    if report:
        for violation in report:
            click.echo(violation, err=True)
        sys.exit(1)
    click.echo(f"{folder}: valid session")


@main.command()
@click.argument("folder", type=click.Path(path_type=Path))
@click.option("--output-root", type=click.Path(path_type=Path), required=True,
              help="Root for the re-recorded session folder.")
@click.option("--seed", default=0, show_default=True, help="Seed for the new folder suffix.")
def replay(folder, output_root, seed):
    """Replay a saved session and re-record it into a new session folder."""
    try:
        source = open_replay(folder)
    except SessionFormatError as exc:
        fail(str(exc))
    language, category, item, performer, _ = folder.name.split("_")
    try:
        session = create_session(
            language, SignCategory.parse(category), item, performer,
            output_root, source.calibration(), rng=random.Random(seed),
        )
        written = run_capture(session, source)
        session.save()
    except (SessionFormatError, OSError, ValueError) as exc:
        fail(str(exc))
    click.echo(f"replayed {written} frames into {session.folder}")


if __name__ == "__main__":
    main()
