"""Command-line interface: synthesis, desnowing, evaluation, and curation.

One binary, eight subcommands:

    snowgt synth snow|rain ...   generate degraded test data with masks
    snowgt desnow ...            low-rank temporal desnowing of a frame dir
    snowgt eval ...              image-pair metrics report
    snowgt ingest ...            register videos in a workspace
    snowgt candidates ...        generate desnowed candidate frames
    snowgt select ...            record a curator selection
    snowgt export ...            write snowy/ground-truth pairs + report
    snowgt serve ...             run the curation API (and UI, if built)
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import manifest as mf
from .degrade import synth_rain_streaks, synth_snow_video
from .errors import NumericFailureError, SnowgtError
from .lowrank import BandpassSpec, QRule, desnow_video
from .metrics import LossWeights, aggregate_report, evaluate_pair
from .video_tensor import (
    list_frame_files,
    load_frames,
    load_image,
    probe_channels,
    save_frames,
    save_image,
)
from .workspace import DesnowParams, Workspace

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NUMERIC = 2


def _parse_range(text: str) -> tuple[float, float]:
    lo, _, hi = text.partition(":")
    return float(lo), float(hi) if hi else float(lo)


def _add_desnow_params(parser):
    parser.add_argument("--mode", choices=["horizontal", "lateral"], default="horizontal")
    parser.add_argument("--q", default="energy:0.999", help="energy:FRACTION or fixed:RANK")
    parser.add_argument("--band", default="0.0:0.1", help="temporal pass band LOW:HIGH of Nyquist")
    parser.add_argument("--drop-noise", action="store_true",
                        help="omit the noise tail from the reconstruction")


def _desnow_params(args) -> DesnowParams:
    return DesnowParams(
        mode=args.mode,
        q_rule=QRule.parse(args.q),
        band=BandpassSpec.parse(args.band),
        drop_noise=args.drop_noise,
    )


def cmd_synth(args) -> int:
    background = load_image(args.background)
    out = Path(args.out)
    if args.kind == "snow":
        result = synth_snow_video(
            background,
            frames=args.frames,
            density=args.density,
            size_range=_parse_range(args.size),
            opacity_range=_parse_range(args.opacity),
            fall_speed=args.speed,
            seed=args.seed,
        )
        save_frames(result.video, out / "frames")
        for t, mask in enumerate(result.masks):
            save_image(mask.data.astype(float), out / "masks" / f"mask_{t:06d}.png")
        particles = [p.to_dict() for p in result.particles]
    else:
        result = synth_rain_streaks(
            background,
            orientation_deg=args.orientation,
            length_px=args.length,
            density=args.density,
            opacity=float(args.opacity.split(":")[0]),
            seed=args.seed,
        )
        save_image(result.image, out / "degraded.png")
        save_image(result.mask.data.astype(float), out / "mask.png")
        particles = [p.to_dict() for p in result.layer.particles]
    (out / "particles.json").write_text(
        mf.canonical_json({"kind": args.kind, "seed": args.seed, "particles": particles}),
        encoding="utf-8",
    )
    print(f"wrote {args.kind} synthesis to {out}")
    return EXIT_OK


def cmd_desnow(args) -> int:
    channels = args.channels or probe_channels(args.input)
    tensor = load_frames(args.input, channels=channels)
    params = _desnow_params(args)
    try:
        cleaned = desnow_video(
            tensor,
            mode=params.mode,
            q_rule=params.q_rule,
            spec=params.band,
            drop_noise=params.drop_noise,
        )
    except NumericFailureError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    save_frames(cleaned, args.output)
    print(f"desnowed {tensor.frames} frames -> {args.output}")
    return EXIT_OK


def _load_dir_images(directory) -> dict:
    return {p.name: p for p in list_frame_files(directory)}


def cmd_eval(args) -> int:
    weights = LossWeights(tau=args.tau)
    pred = _load_dir_images(args.pred)
    gt = _load_dir_images(args.gt)
    names = sorted(set(pred) & set(gt))
    if not names:
        print("no matching filenames between --pred and --gt", file=sys.stderr)
        return EXIT_ERROR
    degraded = _load_dir_images(args.degraded) if args.degraded else {}
    rows = []
    for name in names:
        deg = load_image(degraded[name]) if name in degraded else None
        rows.append(
            evaluate_pair(name, load_image(pred[name]), load_image(gt[name]), deg, weights)
        )
    report = aggregate_report(rows, weights)
    Path(args.report).parent.mkdir(parents=True, exist_ok=True)
    Path(args.report).write_text(mf.canonical_json(report), encoding="utf-8")
    mean = report["mean"]
    print(f"evaluated {len(rows)} pairs: psnr={mean['psnr']} ssim={mean['ssim']}")
    print(f"report -> {args.report}")
    return EXIT_OK


def cmd_ingest(args) -> int:
    ws = Workspace(args.workspace)
    report = ws.ingest(args.videos, quadrant_split=args.quadrant_split)
    for vid in report.ingested:
        print(f"ingested {vid}")
    for failure in report.failures:
        print(f"failed {failure['path']}: [{failure['code']}] {failure['error']}",
              file=sys.stderr)
    return EXIT_OK if not report.failures else EXIT_ERROR


def cmd_candidates(args) -> int:
    ws = Workspace(args.workspace)
    report = ws.generate_candidates(args.video, [_desnow_params(args)])
    for tag in report.generated:
        print(f"generated candidates {args.video}/{tag}")
    for failure in report.failures:
        print(f"failed {failure['tag']}: {failure['error']}", file=sys.stderr)
    if report.failures and not report.generated:
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_select(args) -> int:
    ws = Workspace(args.workspace)
    revision = ws.record_selection(args.video, args.frame, args.note)
    print(f"selected {args.video} frame {args.frame} (revision {revision})")
    return EXIT_OK


def cmd_export(args) -> int:
    ws = Workspace(args.workspace)
    result = ws.export_pairs(args.out)
    print(f"exported {len(result.pairs)} pairs -> {result.out_dir}")
    for failure in result.failures:
        print(f"failed {failure['video']}: {failure['error']}", file=sys.stderr)
    print(f"report -> {result.report_path}")
    return EXIT_OK if not result.failures else EXIT_ERROR


def cmd_serve(args) -> int:
    from .server import serve  # deferred: uvicorn import is slow

    ws = Workspace(args.workspace)
    serve(ws, bind=args.bind, ui_dir=Path(args.ui) if args.ui else None)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="snowgt", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate degraded test data")
    p.add_argument("kind", choices=["snow", "rain"])
    p.add_argument("--background", required=True, help="clean background image")
    p.add_argument("--out", required=True)
    p.add_argument("--frames", type=int, default=32)
    p.add_argument("--density", type=float, default=0.01)
    p.add_argument("--size", default="1:3", help="particle diameter range LO:HI px")
    p.add_argument("--opacity", default="0.6:1.0", help="opacity range LO:HI (rain: single value)")
    p.add_argument("--speed", type=float, default=2.0, help="mean fall speed px/frame")
    p.add_argument("--orientation", type=float, default=90.0, help="rain angle, 90 = vertical")
    p.add_argument("--length", type=float, default=9.0, help="rain streak length px")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("desnow", help="low-rank temporal desnowing")
    p.add_argument("--input", required=True, help="frame directory")
    p.add_argument("--output", required=True)
    p.add_argument("--channels", type=int, choices=[1, 3], default=None,
                   help="default: probe the first frame")
    _add_desnow_params(p)
    p.set_defaults(func=cmd_desnow)

    p = sub.add_parser("eval", help="image-pair metrics report")
    p.add_argument("--pred", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--degraded", default=None,
                   help="degraded source dir; enables the F-measure mask metrics")
    p.add_argument("--report", required=True)
    p.add_argument("--tau", type=float, default=0.05)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("ingest", help="register frame directories in a workspace")
    p.add_argument("--workspace", required=True)
    p.add_argument("--videos", nargs="*", default=[])
    p.add_argument("--quadrant-split", action="store_true")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("candidates", help="generate desnowed candidate frames")
    p.add_argument("--workspace", required=True)
    p.add_argument("--video", required=True)
    _add_desnow_params(p)
    p.set_defaults(func=cmd_candidates)

    p = sub.add_parser("select", help="record a curator selection")
    p.add_argument("--workspace", required=True)
    p.add_argument("--video", required=True)
    p.add_argument("--frame", type=int, required=True)
    p.add_argument("--note", default="")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("export", help="write snowy/ground-truth pairs")
    p.add_argument("--workspace", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="run the curation API")
    p.add_argument("--workspace", required=True)
    p.add_argument("--bind", default="127.0.0.1:8641")
    p.add_argument("--ui", default=None, help="directory of built UI assets to host at /")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SnowgtError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
