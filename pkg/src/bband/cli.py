"""Command-line front end: analyze videos, evaluate scores, make fixtures.

Exit codes: 0 success, 1 internal error, 2 unreadable input, 3 invalid
configuration or malformed tabular input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .config import BbandConfig, ConfigError
from .evaluation import (
    SyntheticBandingSpec,
    evaluate_items,
    generate_banding_fixture,
    read_scores_csv,
)
from .pipeline import analyze_video
from .video_io import VideoFormatError, VideoStream, read_raw_yuv, read_y4m, write_y4m

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2
EXIT_CONFIG = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bband",
        description="No-reference banding (false contour) detector for video.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser(
        "analyze", help="score a video and write scores.json plus optional maps"
    )
    analyze.add_argument("--input", required=True, help="video file to score")
    analyze.add_argument(
        "--format", choices=("y4m", "raw"), default="y4m",
        help="input container (raw means planar YUV without headers)",
    )
    analyze.add_argument("--width", type=int, help="frame width (raw mode)")
    analyze.add_argument("--height", type=int, help="frame height (raw mode)")
    analyze.add_argument(
        "--subsampling", choices=("420", "422", "444"), default="420",
        help="chroma subsampling of raw input",
    )
    analyze.add_argument("--out", default=".", help="output directory")
    analyze.add_argument(
        "--emit-bvm", action="store_true",
        help="write a visibility-map PGM (with scale sidecar) per frame",
    )
    analyze.add_argument(
        "--emit-bem", action="store_true",
        help="write an edge-label PGM per frame",
    )
    analyze.add_argument(
        "--emit-csv", action="store_true",
        help="write frames.csv and a score-timeline PNG",
    )
    analyze.add_argument("--config", help="flat key=value config file")
    analyze.add_argument(
        "--set", dest="overrides", action="append", default=[],
        metavar="KEY=VALUE", help="override one config value (repeatable)",
    )
    analyze.add_argument(
        "--frames", metavar="A..B",
        help="analyze only frames A through B (inclusive, 0-based)",
    )
    analyze.add_argument("--workers", type=int, help="worker thread count")
    analyze.set_defaults(handler=run_analyze)

    evaluate = sub.add_parser(
        "eval", help="correlate predicted scores with MOS from a CSV table"
    )
    evaluate.add_argument(
        "--input", required=True,
        help="CSV with columns item_id, predicted, mos",
    )
    evaluate.add_argument("--out", default=".", help="output directory")
    evaluate.set_defaults(handler=run_eval)

    generate = sub.add_parser(
        "generate", help="write a synthetic quantized-gradient Y4M fixture"
    )
    generate.add_argument("--out", required=True, help="output Y4M path")
    generate.add_argument("--width", type=int, default=256)
    generate.add_argument("--height", type=int, default=128)
    generate.add_argument(
        "--direction", choices=("horizontal", "vertical"), default="horizontal",
        help="axis along which the luma ramp runs",
    )
    generate.add_argument("--low", type=float, default=0.0, help="ramp start luma")
    generate.add_argument("--high", type=float, default=255.0, help="ramp end luma")
    generate.add_argument("--q", type=int, default=16, help="quantization step")
    generate.add_argument(
        "--dither", type=int, default=0,
        help="uniform noise amplitude added after quantization",
    )
    generate.add_argument("--frame-count", type=int, default=1)
    generate.add_argument("--seed", type=int, default=0, help="dither noise seed")
    generate.set_defaults(handler=run_generate)
    return parser


def _load_config(args: argparse.Namespace) -> BbandConfig:
    config = BbandConfig.from_file(args.config) if args.config else BbandConfig()
    for override in args.overrides:
        if "=" not in override:
            raise ConfigError(f"--set expects KEY=VALUE, got {override!r}")
        key, _, value = override.partition("=")
        config.apply_override(key.strip(), value.strip())
    if args.workers is not None:
        config.workers = args.workers
    config.validate()
    return config


def _read_stream(args: argparse.Namespace) -> VideoStream:
    if args.format == "raw":
        if args.width is None or args.height is None:
            raise ConfigError("raw input requires --width and --height")
        return read_raw_yuv(
            args.input, width=args.width, height=args.height,
            subsampling=args.subsampling,
        )
    return read_y4m(args.input)


def _select_frames(stream: VideoStream, selection: str | None) -> VideoStream:
    if selection is None:
        return stream
    parts = selection.split("..")
    try:
        first, last = int(parts[0]), int(parts[1])
    except (IndexError, ValueError) as exc:
        raise ConfigError(f"--frames expects A..B, got {selection!r}") from exc
    if first < 0 or last < first:
        raise ConfigError(f"bad frame range {selection!r}")
    if first >= stream.frame_count:
        raise ConfigError(
            f"frame range {selection!r} starts past the last frame "
            f"({stream.frame_count - 1})"
        )
    frames = stream.frames[first:last + 1]
    return VideoStream(frames=frames, frame_rate=stream.frame_rate)


def run_analyze(args: argparse.Namespace) -> int:
    from . import reports

    config = _load_config(args)
    stream = _select_frames(_read_stream(args), args.frames)
    analysis = analyze_video(stream, config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    reports.write_scores_json(
        out_dir / "scores.json", analysis, config, str(args.input)
    )
    if args.emit_csv:
        from .plots import render_frame_timeline

        reports.write_frames_csv(out_dir / "frames.csv", analysis)
        render_frame_timeline(out_dir / "frames.png", analysis)
    if args.emit_bvm or args.emit_bem:
        for frame in analysis.frames:
            stem = f"{frame.frame_index:04d}"
            if args.emit_bvm:
                reports.write_bvm_map(out_dir / f"bvm_{stem}.pgm", frame.bvm.values)
            if args.emit_bem:
                reports.write_bem_map(
                    out_dir / f"bem_{stem}.pgm", frame.bem.label_image
                )
    print(f"video score {analysis.video.score:.6f} "
          f"({len(analysis.frames)} frames) -> {out_dir / 'scores.json'}")
    return EXIT_OK


def run_eval(args: argparse.Namespace) -> int:
    from .plots import render_eval_scatter

    items = read_scores_csv(args.input)
    report = evaluate_items(items)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    payload = {
        "srcc": report.srcc,
        "krcc": report.krcc,
        "plcc": report.plcc,
        "rmse": report.rmse,
        "logistic_params": {
            "beta1": report.logistic_params.beta1,
            "beta2": report.logistic_params.beta2,
            "beta3": report.logistic_params.beta3,
            "beta4": report.logistic_params.beta4,
        },
        "items": len(items),
    }
    report_path = out_dir / "eval_report.json"
    with open(report_path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
    render_eval_scatter(out_dir / "eval_scatter.png", items, report)
    print(f"srcc {report.srcc:.4f} krcc {report.krcc:.4f} "
          f"plcc {report.plcc:.4f} rmse {report.rmse:.4f} -> {report_path}")
    return EXIT_OK


def run_generate(args: argparse.Namespace) -> int:
    try:
        spec = SyntheticBandingSpec(
            width=args.width,
            height=args.height,
            direction=args.direction,
            low=args.low,
            high=args.high,
            q=args.q,
            dither_amplitude=args.dither,
            frame_count=args.frame_count,
            seed=args.seed,
        )
        stream = generate_banding_fixture(spec)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    out = Path(args.out)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    write_y4m(stream, out)
    print(f"wrote {spec.frame_count}-frame {spec.width}x{spec.height} "
          f"fixture (q={spec.q}) -> {out}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except VideoFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        # Precondition violations from evaluation and pipeline inputs.
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
