"""Filesystem workspace driving the ground-truth dataset workflow.

Layout under the workspace root:

    manifest.json          canonical manifest (atomic writes)
    frames/<id>/           frame data for quadrant children
    candidates/<id>/<tag>/ desnowed candidate frames per parameter set
    exports/               default pair output directory

Source videos ingested without splitting are referenced in place.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import manifest as mf
from .degrade import binarize, residual
from .errors import (
    ConflictError,
    NotFoundError,
    NumericFailureError,
    ParameterError,
    SnowgtError,
)
from .lowrank import DEFAULT_BAND, DEFAULT_Q_RULE, BandpassSpec, QRule, desnow_video
from .metrics import LossWeights, aggregate_report, evaluate_pair
from .video_tensor import (
    VideoTensor,
    list_frame_files,
    load_frames,
    load_image,
    probe_channels,
    save_frames,
    save_image,
    split_quadrants,
)

QUADRANT_NAMES = ("q0", "q1", "q2", "q3")  # tl, tr, bl, br


@dataclass(frozen=True)
class DesnowParams:
    """One desnowing parameter set, with a filesystem/URL-safe tag."""

    mode: str = "horizontal"
    q_rule: QRule = DEFAULT_Q_RULE
    band: BandpassSpec = DEFAULT_BAND
    drop_noise: bool = False

    @property
    def tag(self) -> str:
        parts = [
            self.mode,
            str(self.q_rule).replace(":", ""),
            f"band{self.band.low:g}-{self.band.high:g}",
        ]
        if self.drop_noise:
            parts.append("nonoise")
        return "_".join(parts)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "q": str(self.q_rule),
            "band": str(self.band),
            "drop_noise": self.drop_noise,
        }


@dataclass
class IngestReport:
    ingested: list = field(default_factory=list)
    failures: list = field(default_factory=list)  # [{path, code, error}]


@dataclass
class CandidateReport:
    video: str
    generated: list = field(default_factory=list)  # tags
    failures: list = field(default_factory=list)  # [{tag, code, error}]


@dataclass
class ExportResult:
    pairs: list = field(default_factory=list)  # pair ids
    failures: list = field(default_factory=list)  # [{video, error}]
    report_path: str = ""
    out_dir: str = ""


class Workspace:
    """Owns one manifest and its artifact directories.

    Mutations are serialized by an internal lock and persisted atomically
    before returning, so a crash after any public call never loses the
    acknowledged state.
    """

    def __init__(self, root):
        self.root = Path(root)
        self.manifest_path = self.root / "manifest.json"
        self._lock = threading.Lock()
        if self.manifest_path.exists():
            self.manifest = mf.load_manifest(self.manifest_path)
        else:
            self.root.mkdir(parents=True, exist_ok=True)
            self.manifest = mf.Manifest()
            mf.save_manifest(self.manifest, self.manifest_path)

    # -- paths -----------------------------------------------------------

    def frames_dir(self, video_id: str) -> Path:
        return self.root / "frames" / video_id

    def candidates_dir(self, video_id: str, tag: str) -> Path:
        return self.root / "candidates" / video_id / tag

    def _persist(self):
        mf.save_manifest(self.manifest, self.manifest_path)

    def reload(self):
        with self._lock:
            self.manifest = mf.load_manifest(self.manifest_path)

    # -- ingest ----------------------------------------------------------

    def ingest(self, video_dirs, quadrant_split: bool = False) -> IngestReport:
        """Register frame directories; optionally split into four sub-videos.

        Per-video failures (unreadable data, duplicate ids) are reported
        without blocking the rest of the batch.
        """
        report = IngestReport()
        with self._lock:
            for raw in video_dirs:
                # external sources are stored absolute; only workspace-managed
                # children (quadrants) use root-relative paths
                path = Path(raw).resolve()
                base_id = path.name
                try:
                    self._ingest_one(path, base_id, quadrant_split, report)
                except SnowgtError as exc:
                    report.failures.append(
                        {"path": str(path), "code": exc.code, "error": str(exc)}
                    )
            self._persist()
        return report

    def _ingest_one(self, path: Path, base_id: str, quadrant_split: bool, report: IngestReport):
        channels = probe_channels(path)
        tensor = load_frames(path, channels=channels)
        if not quadrant_split:
            mf.add_video(
                self.manifest,
                mf.VideoRecord(
                    id=base_id,
                    source=str(path),
                    frames=tensor.frames,
                    rows=tensor.rows,
                    cols=tensor.cols,
                    channels=tensor.channels,
                ),
            )
            report.ingested.append(base_id)
            return
        if tensor.rows < 4 or tensor.cols < 4:
            raise ParameterError(
                f"{base_id}: quadrant split needs at least 4x4 frames, got "
                f"{tensor.rows}x{tensor.cols}"
            )
        child_ids = [f"{base_id}_{q}" for q in QUADRANT_NAMES]
        for child in child_ids:
            if child in self.manifest.videos:
                raise ConflictError(f"video id {child!r} already ingested")
        # Write all four children before touching the manifest so a failed
        # write cannot leave a partially registered video.
        children = []
        for qi, child in enumerate(child_ids):
            pieces = [split_quadrants(tensor.frame(t))[qi] for t in range(tensor.frames)]
            # stacking on axis 2 yields (rows, cols, frames[, channels])
            child_tensor = VideoTensor.from_array(np.stack(pieces, axis=2))
            child_dir = self.frames_dir(child)
            save_frames(child_tensor, child_dir)
            children.append((qi, child, child_tensor, child_dir))
        for qi, child, child_tensor, child_dir in children:
            mf.add_video(
                self.manifest,
                mf.VideoRecord(
                    id=child,
                    source=str(child_dir.relative_to(self.root)),
                    frames=child_tensor.frames,
                    rows=child_tensor.rows,
                    cols=child_tensor.cols,
                    channels=child_tensor.channels,
                    lineage={"parent": base_id, "quadrant": qi},
                ),
            )
            report.ingested.append(child)

    def _video(self, video_id: str) -> mf.VideoRecord:
        record = self.manifest.videos.get(video_id)
        if record is None:
            raise NotFoundError(f"unknown video {video_id!r}")
        return record

    def source_dir(self, video_id: str) -> Path:
        source = Path(self._video(video_id).source)
        return source if source.is_absolute() else self.root / source

    def load_video(self, video_id: str) -> VideoTensor:
        record = self._video(video_id)
        return load_frames(self.source_dir(video_id), channels=record.channels)

    # -- candidates ------------------------------------------------------

    def generate_candidates(self, video_id: str, param_sets) -> CandidateReport:
        """Run the desnowing pass once per parameter set and store every frame.

        A numeric failure in one parameter set is recorded and the others
        still run.
        """
        record = self._video(video_id)
        tensor = self.load_video(video_id)
        report = CandidateReport(video=video_id)
        with self._lock:
            for params in param_sets:
                tag = params.tag
                try:
                    cleaned = desnow_video(
                        tensor,
                        mode=params.mode,
                        q_rule=params.q_rule,
                        spec=params.band,
                        drop_noise=params.drop_noise,
                    )
                except NumericFailureError as exc:
                    report.failures.append(
                        {"tag": tag, "code": exc.code, "error": str(exc)}
                    )
                    continue
                out_dir = self.candidates_dir(video_id, tag)
                paths = save_frames(cleaned, out_dir)
                records = [
                    mf.CandidateRecord(
                        frame=t,
                        tag=tag,
                        path=str(p.relative_to(self.root)),
                        params=params.to_dict(),
                    )
                    for t, p in enumerate(paths)
                ]
                mf.set_candidates(self.manifest, video_id, tag, records)
                report.generated.append(tag)
            self._persist()
        return report

    # -- curation --------------------------------------------------------

    def record_selection(self, video_id: str, frame: int, note: str = "") -> int:
        """Durably store a selection; returns the new manifest revision."""
        with self._lock:
            mf.record_selection(self.manifest, video_id, frame, note)
            self._persist()
            return self.manifest.revision

    def record_rejection(self, video_id: str, note: str = "") -> int:
        with self._lock:
            mf.record_rejection(self.manifest, video_id, note)
            self._persist()
            return self.manifest.revision

    # -- export ----------------------------------------------------------

    def export_pairs(self, out_dir=None, weights: LossWeights = LossWeights()) -> ExportResult:
        """Write (snowy, ground-truth) image pairs for every selected video.

        Pair ids are pair_00000, ... in video-id order, so the same
        manifest always produces byte-identical files and report.
        """
        if not self.manifest.selections:
            raise NotFoundError("nothing selected")
        out = Path(out_dir) if out_dir is not None else self.root / "exports"
        out.mkdir(parents=True, exist_ok=True)
        result = ExportResult(out_dir=str(out))
        rows = []
        export_records = []
        with self._lock:
            for pair_index, video_id in enumerate(sorted(self.manifest.selections)):
                selection = self.manifest.selections[video_id]
                pair_id = f"pair_{pair_index:05d}"
                try:
                    record = self._export_one(
                        video_id, selection.frame, pair_id, out, weights, rows
                    )
                except (SnowgtError, OSError) as exc:
                    result.failures.append({"video": video_id, "error": str(exc)})
                    continue
                export_records.append(record)
                result.pairs.append(pair_id)
            report = aggregate_report(rows, weights)
            report_path = out / "report.json"
            report_path.write_text(mf.canonical_json(report), encoding="utf-8")
            result.report_path = str(report_path)
            metrics_by_pair = {r["name"]: r for r in report["per_image"]}
            for record in export_records:
                record.metrics = metrics_by_pair.get(record.pair_id, {})
            mf.set_exports(self.manifest, export_records)
            self._persist()
        return result

    def _export_one(self, video_id, frame, pair_id, out, weights, rows):
        candidates = mf.candidates_for_frame(self.manifest, video_id, frame)
        if not candidates:
            raise NotFoundError(f"no candidate for {video_id!r} frame {frame}")
        candidate = candidates[0]  # records are kept sorted by tag
        gt_path = self.root / candidate.path
        if not gt_path.exists():
            raise NotFoundError(f"candidate file missing: {gt_path}")
        snowy = self._load_frame_image(video_id, frame)
        gt = load_image(gt_path)
        if snowy.shape != gt.shape:
            raise ParameterError(
                f"pair shapes differ for {video_id!r}: {snowy.shape} vs {gt.shape}"
            )
        snowy_file = out / f"{pair_id}_snowy.png"
        gt_file = out / f"{pair_id}_gt.png"
        save_image(snowy, snowy_file)
        save_image(gt, gt_file)
        rows.append(evaluate_pair(pair_id, gt, snowy, weights=weights))
        return mf.ExportRecord(
            pair_id=pair_id,
            video=video_id,
            frame=frame,
            snowy=snowy_file.name,
            gt=gt_file.name,
            metrics={},
        )

    # -- frame access (CLI + HTTP service) --------------------------------

    def frame_file(self, video_id: str, frame: int, kind: str = "snowy",
                   tag: Optional[str] = None) -> Path:
        """Path of one stored frame image (snowy source or candidate)."""
        record = self._video(video_id)
        if not 0 <= frame < record.frames:
            raise NotFoundError(f"frame {frame} out of range [0, {record.frames})")
        if kind == "snowy":
            files = list_frame_files(self.source_dir(video_id))
            if frame >= len(files):
                raise NotFoundError(f"missing source frame {frame} for {video_id!r}")
            return files[frame]
        if kind == "candidate":
            candidates = mf.candidates_for_frame(self.manifest, video_id, frame)
            if tag is not None:
                candidates = [c for c in candidates if c.tag == tag]
            if not candidates:
                raise NotFoundError(
                    f"no candidate for {video_id!r} frame {frame}"
                    + (f" tag {tag!r}" if tag else "")
                )
            return self.root / candidates[0].path
        raise ParameterError(f"unknown frame kind {kind!r}")

    def _load_frame_image(self, video_id, frame):
        return load_image(self.frame_file(video_id, frame, "snowy"))

    def residual_overlay(self, video_id: str, frame: int, tau: float = 0.05,
                         tag: Optional[str] = None) -> np.ndarray:
        """Snowy frame in grayscale with binarized residual pixels in red."""
        snowy = load_image(self.frame_file(video_id, frame, "snowy"))
        candidate = load_image(self.frame_file(video_id, frame, "candidate", tag))
        mask = binarize(residual(snowy, candidate), tau).data
        gray = snowy if snowy.ndim == 2 else snowy.mean(axis=2)
        overlay = np.stack([gray, gray, gray], axis=2)
        overlay[mask] = (1.0, 0.0, 0.0)
        return overlay

    def candidate_tags(self, video_id: str) -> list[str]:
        return sorted({c.tag for c in self.manifest.candidates.get(video_id, [])})
