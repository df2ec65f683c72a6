"""Scripted curation session over the HTTP API, exactly as the browser UI
drives it: ingest two synthetic videos, generate candidates, select via
POST, export, then re-evaluate the exported pairs and compare with the
export report."""

import json

from fastapi.testclient import TestClient

from snowgt.lowrank import BandpassSpec, QRule
from snowgt.metrics import LossWeights, evaluate_pair
from snowgt.server import build_app
from snowgt.video_tensor import load_image
from snowgt.workspace import DesnowParams, Workspace

from test_workspace import make_video_dir

PARAMS = DesnowParams(band=BandpassSpec(0.0, 0.2), q_rule=QRule.energy(1.0))


def test_scripted_session_end_to_end(tmp_path):
    ws = Workspace(tmp_path / "ws")
    for name, seed in (("vid_a", 6), ("vid_b", 7)):
        clip = make_video_dir(tmp_path, name, seed=seed)
        ws.ingest([clip])
        ws.generate_candidates(name, [PARAMS])

    client = TestClient(build_app(ws))

    videos = client.get("/api/videos").json()
    assert [v["status"] for v in videos] == ["pending", "pending"]

    for video, frame in (("vid_a", 2), ("vid_b", 6)):
        response = client.post(
            f"/api/videos/{video}/selection", json={"frame": frame, "note": "ui"}
        )
        assert response.status_code == 200

    export = client.post("/api/export", json={}).json()
    assert export["pairs"] == 2
    report = json.loads((ws.root / "exports" / "report.json").read_text())
    assert len(report["per_image"]) == 2

    # re-evaluate each exported pair from the files alone
    weights = LossWeights()
    for row in report["per_image"]:
        gt = load_image(ws.root / "exports" / f"{row['name']}_gt.png")
        snowy = load_image(ws.root / "exports" / f"{row['name']}_snowy.png")
        again = evaluate_pair(row["name"], gt, snowy, weights=weights)
        for field in ("psnr", "ssim", "l1", "gradient_l1"):
            assert abs(getattr(again, field) - row[field]) < 1e-9, field

    # every status combination survives a hard refresh: the listing is
    # rebuilt purely from server state
    client.post("/api/videos/vid_b/rejection", json={"note": "parallax"})
    # (vid_b had a selection; rejection must be refused, keeping it selected)
    listing = {v["id"]: v for v in client.get("/api/videos").json()}
    assert listing["vid_a"]["status"] == "selected"
    assert listing["vid_a"]["selection"]["frame"] == 2
    assert listing["vid_b"]["status"] == "selected"

    fresh = Workspace(ws.root)
    fresh_client = TestClient(build_app(fresh))
    assert fresh_client.get("/api/videos").json() == client.get("/api/videos").json()


def test_all_status_combinations_reconstructible(tmp_path):
    ws = Workspace(tmp_path / "ws")
    for i, status in enumerate(("pending", "selected", "rejected")):
        clip = make_video_dir(tmp_path, f"vid_{status}", seed=20 + i)
        ws.ingest([clip])
        ws.generate_candidates(f"vid_{status}", [PARAMS])
    client = TestClient(build_app(ws))
    client.post("/api/videos/vid_selected/selection", json={"frame": 1})
    client.post("/api/videos/vid_rejected/rejection", json={"note": "dup"})

    snapshot = client.get("/api/videos").json()
    assert {v["id"]: v["status"] for v in snapshot} == {
        "vid_pending": "pending",
        "vid_selected": "selected",
        "vid_rejected": "rejected",
    }
    # hard refresh: a brand-new process sees the identical listing
    reopened = TestClient(build_app(Workspace(ws.root)))
    assert reopened.get("/api/videos").json() == snapshot
