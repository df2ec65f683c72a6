"""Persistent record of ingested videos, desnow candidates, selections, and exports.

The manifest is a single canonical-form JSON document: keys sorted,
two-space indent, trailing newline. Serializing a loaded manifest always
reproduces the file byte-for-byte, so hashes and diffs are stable. Writes
go through a temp file plus atomic rename; a crash leaves either the old
or the new manifest, never a partial one.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from .errors import ConflictError, NotFoundError, ParameterError

MANIFEST_VERSION = 1

STATUS_PENDING = "pending"
STATUS_SELECTED = "selected"
STATUS_REJECTED = "rejected"


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class VideoRecord:
    id: str
    source: str
    frames: int
    rows: int
    cols: int
    channels: int
    lineage: Optional[dict] = None  # {"parent": id, "quadrant": 0..3}

    def to_dict(self) -> dict:
        return {
            "id": self.id, "source": self.source, "frames": self.frames,
            "rows": self.rows, "cols": self.cols, "channels": self.channels,
            "lineage": self.lineage,
        }


@dataclass
class CandidateRecord:
    frame: int
    tag: str
    path: str  # relative to the workspace root
    params: dict

    def to_dict(self) -> dict:
        return {"frame": self.frame, "tag": self.tag, "path": self.path, "params": self.params}


@dataclass
class SelectionRecord:
    frame: int
    note: str
    timestamp: str

    def to_dict(self) -> dict:
        return {"frame": self.frame, "note": self.note, "timestamp": self.timestamp}


@dataclass
class RejectionRecord:
    note: str
    timestamp: str

    def to_dict(self) -> dict:
        return {"note": self.note, "timestamp": self.timestamp}


@dataclass
class ExportRecord:
    pair_id: str
    video: str
    frame: int
    snowy: str
    gt: str
    metrics: dict

    def to_dict(self) -> dict:
        return {
            "pair_id": self.pair_id, "video": self.video, "frame": self.frame,
            "snowy": self.snowy, "gt": self.gt, "metrics": self.metrics,
        }


@dataclass
class Manifest:
    version: int = MANIFEST_VERSION
    revision: int = 0
    videos: dict = field(default_factory=dict)  # id -> VideoRecord
    candidates: dict = field(default_factory=dict)  # id -> [CandidateRecord]
    selections: dict = field(default_factory=dict)  # id -> SelectionRecord
    rejections: dict = field(default_factory=dict)  # id -> RejectionRecord
    exports: list = field(default_factory=list)  # [ExportRecord]

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "revision": self.revision,
            "videos": {vid: rec.to_dict() for vid, rec in self.videos.items()},
            "candidates": {
                vid: [c.to_dict() for c in recs] for vid, recs in self.candidates.items()
            },
            "selections": {vid: s.to_dict() for vid, s in self.selections.items()},
            "rejections": {vid: r.to_dict() for vid, r in self.rejections.items()},
            "exports": [e.to_dict() for e in self.exports],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Manifest":
        return cls(
            version=d.get("version", MANIFEST_VERSION),
            revision=d.get("revision", 0),
            videos={vid: VideoRecord(**rec) for vid, rec in d.get("videos", {}).items()},
            candidates={
                vid: [CandidateRecord(**c) for c in recs]
                for vid, recs in d.get("candidates", {}).items()
            },
            selections={
                vid: SelectionRecord(**s) for vid, s in d.get("selections", {}).items()
            },
            rejections={
                vid: RejectionRecord(**r) for vid, r in d.get("rejections", {}).items()
            },
            exports=[ExportRecord(**e) for e in d.get("exports", [])],
        )

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Manifest":
        return cls.from_dict(json.loads(text))

    def status(self, video_id: str) -> str:
        if video_id in self.selections:
            return STATUS_SELECTED
        if video_id in self.rejections:
            return STATUS_REJECTED
        return STATUS_PENDING


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def add_video(manifest: Manifest, record: VideoRecord) -> None:
    if record.id in manifest.videos:
        raise ConflictError(f"video id {record.id!r} already ingested")
    manifest.videos[record.id] = record
    manifest.revision += 1


def set_candidates(manifest: Manifest, video_id: str, tag: str, records: list) -> None:
    """Replace the candidate records carrying ``tag`` for one video."""
    if video_id not in manifest.videos:
        raise NotFoundError(f"unknown video {video_id!r}")
    existing = [c for c in manifest.candidates.get(video_id, []) if c.tag != tag]
    merged = existing + list(records)
    merged.sort(key=lambda c: (c.tag, c.frame))
    manifest.candidates[video_id] = merged
    manifest.revision += 1


def candidates_for_frame(manifest: Manifest, video_id: str, frame: int) -> list:
    """Candidate records at one frame, ordered by tag."""
    return [c for c in manifest.candidates.get(video_id, []) if c.frame == frame]


def record_selection(manifest: Manifest, video_id: str, frame: int, note: str = "",
                     timestamp: Optional[str] = None) -> None:
    """Store the curator's chosen frame; replaces any prior selection."""
    if video_id not in manifest.videos:
        raise NotFoundError(f"unknown video {video_id!r}")
    if video_id in manifest.rejections:
        raise ConflictError(f"video {video_id!r} is rejected; rejection is final")
    if not candidates_for_frame(manifest, video_id, frame):
        raise NotFoundError(f"no candidate for video {video_id!r} frame {frame}")
    manifest.selections[video_id] = SelectionRecord(
        frame=frame, note=note, timestamp=timestamp or utc_now()
    )
    manifest.revision += 1


def record_rejection(manifest: Manifest, video_id: str, note: str = "",
                     timestamp: Optional[str] = None) -> None:
    """Mark a video as unusable; only pending videos may be rejected."""
    if video_id not in manifest.videos:
        raise NotFoundError(f"unknown video {video_id!r}")
    if video_id in manifest.selections:
        raise ConflictError(f"video {video_id!r} already selected")
    manifest.rejections[video_id] = RejectionRecord(
        note=note, timestamp=timestamp or utc_now()
    )
    manifest.revision += 1


def set_exports(manifest: Manifest, records: list) -> None:
    manifest.exports = list(records)
    manifest.revision += 1


def check_integrity(manifest: Manifest) -> list[str]:
    """Return all referential-integrity violations (empty list when sound)."""
    problems = []
    for vid in manifest.candidates:
        if vid not in manifest.videos:
            problems.append(f"candidates for unknown video {vid!r}")
    for vid, sel in manifest.selections.items():
        if vid not in manifest.videos:
            problems.append(f"selection for unknown video {vid!r}")
        elif not candidates_for_frame(manifest, vid, sel.frame):
            problems.append(f"selection for {vid!r} frame {sel.frame} has no candidate")
        if vid in manifest.rejections:
            problems.append(f"video {vid!r} is both selected and rejected")
    for vid in manifest.rejections:
        if vid not in manifest.videos:
            problems.append(f"rejection for unknown video {vid!r}")
    for exp in manifest.exports:
        if exp.video not in manifest.selections:
            problems.append(f"export {exp.pair_id} references unselected video {exp.video!r}")
    for vid, recs in manifest.candidates.items():
        video = manifest.videos.get(vid)
        if video is None:
            continue
        for c in recs:
            if not 0 <= c.frame < video.frames:
                problems.append(f"candidate frame {c.frame} out of range for {vid!r}")
    return problems


def save_manifest(manifest: Manifest, path) -> None:
    """Atomically persist: write a sibling temp file, fsync, rename over."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = manifest.to_json()
    fd, tmp_name = tempfile.mkstemp(
        dir=path.parent, prefix=path.name + ".", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def load_manifest(path) -> Manifest:
    path = Path(path)
    if not path.exists():
        raise NotFoundError(f"no manifest at {path}")
    text = path.read_text(encoding="utf-8")
    manifest = Manifest.from_json(text)
    if manifest.version != MANIFEST_VERSION:
        raise ParameterError(
            f"manifest version {manifest.version} not supported (expected {MANIFEST_VERSION})"
        )
    return manifest
