import json
import re
from pathlib import Path

import pytest
from click.testing import CliRunner

from signcol.cli import main
from signcol.recording import IMAGE_DIRS


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, tmp_path, *args):
    return runner.invoke(main, ["--data-dir", str(tmp_path / "data"), *args], catch_exceptions=False)


def seed_catalog(runner, tmp_path):
    assert invoke(runner, tmp_path, "define", "language", "English").exit_code == 0
    result = invoke(runner, tmp_path, "define", "item", "Mom", "--category", "cat4", "--language-id", "1")
    assert result.exit_code == 0
    assert invoke(runner, tmp_path, "define", "performer", "Rita", "--age", "30").exit_code == 0


def test_stats_on_empty_catalog_prints_eight_rows(runner, tmp_path):
    result = invoke(runner, tmp_path, "stats")
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert len(lines) == 9  # header + 8 categories
    assert "cat1" in lines[1] and "cat8" in lines[8]
    assert all(re.search(r"\b0\b", line) for line in lines[1:])


def test_stats_json_output(runner, tmp_path):
    result = invoke(runner, tmp_path, "stats", "--json")
    body = json.loads(result.output)
    assert len(body["categories"]) == 8
    assert body["categories"][3] == {
        "category": "cat4",
        "description": "Word by a Sign",
        "defined_item_count": 0,
        "recording_count": 0,
    }


def test_define_and_list_round_trip(runner, tmp_path):
    seed_catalog(runner, tmp_path)
    items = json.loads(invoke(runner, tmp_path, "list", "items", "--json").output)
    assert items == [
        {"id": 1, "name": "Mom", "category": "cat4", "language_id": 1, "recordings": 0}
    ]
    performers = json.loads(invoke(runner, tmp_path, "list", "performers", "--json").output)
    assert performers[0]["name"] == "Rita"


def test_duplicate_definition_fails_with_exit_1(runner, tmp_path):
    seed_catalog(runner, tmp_path)
    result = invoke(runner, tmp_path, "define", "language", "English")
    assert result.exit_code == 1
    assert "error" in result.output or "error" in (result.stderr or "")


def test_usage_error_exits_2(runner, tmp_path):
    result = invoke(runner, tmp_path, "define", "item", "X", "--category", "cat4")
    assert result.exit_code == 2  # missing --language-id


def test_record_writes_session_and_registers(runner, tmp_path):
    seed_catalog(runner, tmp_path)
    result = invoke(
        runner, tmp_path, "record",
        "--item", "1", "--performer", "1", "--frames", "4", "--seed", "7",
    )
    assert result.exit_code == 0, result.output
    recordings = json.loads(invoke(runner, tmp_path, "list", "recordings", "--json").output)
    assert len(recordings) == 1
    assert recordings[0]["frame_count"] == 4
    folder = Path(recordings[0]["folder_path"])
    assert folder.name.startswith("English_cat4_Mom_Rita_")
    validation = invoke(runner, tmp_path, "validate", str(folder))
    assert validation.exit_code == 0

    stats = json.loads(invoke(runner, tmp_path, "stats", "--json").output)
    cat4 = next(r for r in stats["categories"] if r["category"] == "cat4")
    assert cat4["recording_count"] == 1


def test_record_unknown_item_fails(runner, tmp_path):
    seed_catalog(runner, tmp_path)
    result = invoke(runner, tmp_path, "record", "--item", "99", "--performer", "1", "--frames", "2")
    assert result.exit_code == 1


def test_record_is_deterministic_across_roots(runner, tmp_path):
    seed_catalog(runner, tmp_path)
    roots = [tmp_path / "out_a", tmp_path / "out_b"]
    for root in roots:
        result = invoke(
            runner, tmp_path, "record",
            "--item", "1", "--performer", "1", "--frames", "3", "--seed", "21",
            "--output-root", str(root),
        )
        assert result.exit_code == 0, result.output

    folders = [next(root.iterdir()) for root in roots]
    assert folders[0].name == folders[1].name  # suffix included

    for sub in ("skeleton", "timing"):
        files_a = sorted((folders[0] / sub).iterdir())
        files_b = sorted((folders[1] / sub).iterdir())
        assert [f.name for f in files_a] == [f.name for f in files_b]
        for a, b in zip(files_a, files_b):
            assert a.read_bytes() == b.read_bytes()
    for sub in IMAGE_DIRS:
        for a in sorted((folders[0] / sub).iterdir()):
            b = folders[1] / sub / a.name
            assert a.read_bytes() == b.read_bytes()


def test_validate_tampered_folder_exits_1(runner, tmp_path):
    seed_catalog(runner, tmp_path)
    invoke(runner, tmp_path, "record", "--item", "1", "--performer", "1", "--frames", "2")
    recordings = json.loads(invoke(runner, tmp_path, "list", "recordings", "--json").output)
    folder = Path(recordings[0]["folder_path"])
    (folder / "depth_frames" / "frame_000001.png").unlink()
    result = runner.invoke(main, ["validate", str(folder)])
    assert result.exit_code == 1
    assert "counts differ" in result.output


def test_validate_missing_folder_exits_1(runner, tmp_path):
    result = runner.invoke(main, ["validate", str(tmp_path / "missing")])
    assert result.exit_code == 1


def test_replay_rerecords_identical_skeletons(runner, tmp_path):
    seed_catalog(runner, tmp_path)
    invoke(runner, tmp_path, "record", "--item", "1", "--performer", "1", "--frames", "3", "--seed", "5")
    recordings = json.loads(invoke(runner, tmp_path, "list", "recordings", "--json").output)
    original = Path(recordings[0]["folder_path"])

    out = tmp_path / "replayed"
    result = runner.invoke(
        main, ["replay", str(original), "--output-root", str(out), "--seed", "5"],
        catch_exceptions=False,
    )
    assert result.exit_code == 0, result.output
    copy = next(out.iterdir())
    for csv in sorted((original / "skeleton").iterdir()):
        assert (copy / "skeleton" / csv.name).read_bytes() == csv.read_bytes()
    for png in sorted((original / "depth_frames").iterdir()):
        assert (copy / "depth_frames" / png.name).read_bytes() == png.read_bytes()


def test_replay_of_invalid_folder_fails(runner, tmp_path):
    result = runner.invoke(
        main, ["replay", str(tmp_path), "--output-root", str(tmp_path / "out")]
    )
    assert result.exit_code == 1


def test_cli_and_api_capture_produce_identical_sessions(runner, tmp_path):
    """Same parameters + seed: scripted and API-driven capture agree byte-for-byte."""
    import time

    from fastapi.testclient import TestClient

    from signcol.service import ServiceConfig, create_app
    from signcol.sources import MotionKind

    seed, frames = 21, 3

    seed_catalog(runner, tmp_path)
    cli_root = tmp_path / "cli_out"
    result = invoke(
        runner, tmp_path, "record",
        "--item", "1", "--performer", "1", "--frames", str(frames),
        "--seed", str(seed), "--rate", "30", "--motion", "circle",
        "--output-root", str(cli_root),
    )
    assert result.exit_code == 0, result.output
    cli_folder = next(cli_root.iterdir())

    config = ServiceConfig(
        data_dir=tmp_path / "api_data",
        rate=30.0,
        seed=seed,
        motion=MotionKind.CIRCLE,
        body_count=1,
    )
    with TestClient(create_app(config)) as client:
        language = client.post("/api/languages", json={"name": "English"}).json()
        item = client.post(
            "/api/items", json={"name": "Mom", "category": "cat4", "language_id": language["id"]}
        ).json()
        performer = client.post("/api/performers", json={"name": "Rita", "age": 30}).json()
        sid = client.post(
            "/api/sessions", json={"item_id": item["id"], "performer_id": performer["id"]}
        ).json()["id"]
        client.post(f"/api/sessions/{sid}/start")
        deadline = time.monotonic() + 20
        while time.monotonic() < deadline:
            if client.get(f"/api/sessions/{sid}").json()["frames_written"] >= frames:
                break
            time.sleep(0.02)
        client.post(f"/api/sessions/{sid}/stop")
        client.post(f"/api/sessions/{sid}/save")
        api_folder = Path(client.get("/api/recordings").json()[0]["folder_path"])

    assert api_folder.name == cli_folder.name  # suffix included
    assert (api_folder / "camera_parameters.txt").read_bytes() == (
        cli_folder / "camera_parameters.txt"
    ).read_bytes()
    # The API session may have written extra frames before stop; the common
    # prefix must agree exactly.
    for sub in (*IMAGE_DIRS, "skeleton"):
        extension = ".csv" if sub == "skeleton" else ".png"
        for index in range(frames):
            name = f"frame_{index:06d}{extension}"
            assert (api_folder / sub / name).read_bytes() == (
                cli_folder / sub / name
            ).read_bytes(), f"{sub}/{name} differs"
    cli_timing = (cli_folder / "timing" / "timestamps.csv").read_text().splitlines()
    api_timing = (api_folder / "timing" / "timestamps.csv").read_text().splitlines()
    assert api_timing[:frames] == cli_timing[:frames]
