"""Command-line interface: gradient / canny / compare / kernels.

Every image-processing run writes, next to its artifacts, a manifest JSON
recording the fully resolved configuration and the SHA-256 of each input.
Re-running the same command — or feeding the manifest to `replay_manifest` —
reproduces every artifact byte for byte: no timestamps, no environment
dependence, atomic writes.

Exit codes: 0 success, 2 usage or input error, 3 processing error (an image
without enough contrast to threshold).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    STATS_CSV_COLUMNS,
    compare_operators,
    diff_composite,
    diff_maps,
    label_components,
)
from .canny import CannyConfig, NoContrastError, canny_pipeline, gradient
from .image import gaussian_blur
from .image_io import load_image, save_csv, save_image, save_json, sha256_file
from .kernels import (
    KERNEL_SIZES,
    OPERATOR_NAMES,
    kernel_derivation_report,
    list_kernels,
    registry_get,
)

__all__ = ["main", "build_parser", "replay_manifest"]

_IMAGE_SUFFIXES = (".png", ".pgm")


def _add_pipeline_flags(parser: argparse.ArgumentParser, with_min_size: bool) -> None:
    parser.add_argument("input", help="input image (PNG or PGM)")
    parser.add_argument("--operator", choices=OPERATOR_NAMES, default="proposed_a",
                        help="derivative operator (default: %(default)s)")
    parser.add_argument("--size", type=int, choices=KERNEL_SIZES, default=3,
                        help="kernel side length (default: %(default)s)")
    parser.add_argument("--gaussian-sigma", type=float, default=1.4,
                        help="blur sigma (default: %(default)s)")
    parser.add_argument("--gaussian-radius", type=int, default=2,
                        help="blur kernel radius (default: %(default)s)")
    parser.add_argument("--sigma-fraction", type=float, default=0.33,
                        help="threshold band half-width as a fraction of the "
                             "Otsu value (default: %(default)s)")
    parser.add_argument("--norm", choices=("l1", "l2"), default="l2",
                        help="gradient magnitude norm (default: %(default)s)")
    parser.add_argument("--otsu-source", choices=("magnitude", "blurred-input"),
                        default="magnitude",
                        help="field the threshold search runs on "
                             "(default: %(default)s)")
    parser.add_argument("--padding", choices=("replicate", "reflect", "zero"),
                        default="replicate",
                        help="convolution border handling (default: %(default)s)")
    if with_min_size:
        parser.add_argument("--min-edge-size", type=int, default=1,
                            help="drop edge components smaller than this "
                                 "(default: %(default)s)")
    parser.add_argument("--out", default="edgeforge_out",
                        help="output directory (default: %(default)s)")
    parser.add_argument("--format", choices=("png", "pgm"), default="png",
                        dest="image_format",
                        help="output image format (default: %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edgeforge",
        description="Gradient-operator edge detection with automatic "
                    "threshold discovery.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_grad = sub.add_parser("gradient", help="write the normalized gradient "
                                             "magnitude of an image")
    _add_pipeline_flags(p_grad, with_min_size=False)

    p_canny = sub.add_parser("canny", help="run the full edge-detection "
                                           "pipeline on an image")
    _add_pipeline_flags(p_canny, with_min_size=True)

    p_cmp = sub.add_parser("compare", help="run two operators over an image "
                                           "or directory and tabulate stats")
    _add_pipeline_flags(p_cmp, with_min_size=True)
    p_cmp.add_argument("--op-a", choices=OPERATOR_NAMES, default="proposed_a",
                       help="first operator (default: %(default)s)")
    p_cmp.add_argument("--op-b", choices=OPERATOR_NAMES, default="sobel",
                       help="second operator (default: %(default)s)")

    p_kern = sub.add_parser("kernels", help="print registry kernels as JSON")
    p_kern.add_argument("--name", choices=OPERATOR_NAMES,
                        help="restrict to one operator family")
    p_kern.add_argument("--size", type=int, choices=KERNEL_SIZES,
                        help="restrict to one kernel size")
    p_kern.add_argument("--derive", action="store_true",
                        help="also derive each kernel from its weight scheme "
                             "and report match/mismatch")
    return parser


def _canny_config(args) -> CannyConfig:
    return CannyConfig(
        gaussian_sigma=args.gaussian_sigma,
        gaussian_radius=args.gaussian_radius,
        sigma_fraction=args.sigma_fraction,
        norm=args.norm,
        otsu_source=args.otsu_source,
        padding=args.padding,
    )


def _config_dict(args, command: str) -> dict:
    resolved = {
        "operator": args.operator,
        "size": args.size,
        "gaussian_sigma": args.gaussian_sigma,
        "gaussian_radius": args.gaussian_radius,
        "sigma_fraction": args.sigma_fraction,
        "norm": args.norm,
        "otsu_source": args.otsu_source,
        "padding": args.padding,
        "format": args.image_format,
    }
    if hasattr(args, "min_edge_size"):
        resolved["min_edge_size"] = args.min_edge_size
    if command == "compare":
        resolved["op_a"] = args.op_a
        resolved["op_b"] = args.op_b
    return resolved


def _write_manifest(out_dir: Path, command: str, args, inputs: list,
                    outputs: list) -> None:
    manifest = {
        "command": command,
        "config": _config_dict(args, command),
        "input": str(Path(args.input).resolve()),
        "input_hashes": {str(Path(p).resolve()): sha256_file(p) for p in inputs},
        "outputs": sorted(str(name) for name in outputs),
    }
    save_json(out_dir / f"{command}_manifest.json", manifest)


def _cmd_gradient(args) -> int:
    image = load_image(args.input)
    blurred = gaussian_blur(image, sigma=args.gaussian_sigma,
                            radius=args.gaussian_radius, padding=args.padding)
    kx, ky = registry_get(args.operator, args.size)
    field = gradient(blurred, kx, ky, norm=args.norm, padding=args.padding)

    out_dir = Path(args.out)
    stem = Path(args.input).stem
    magnitude_name = f"{stem}_magnitude.{args.image_format}"
    save_image(out_dir / magnitude_name, field.magnitude,
               format=args.image_format)
    _write_manifest(out_dir, "gradient", args, [args.input], [magnitude_name])
    print(f"wrote {out_dir / magnitude_name}")
    return 0


def _filtered_edges(edges, min_size: int):
    if min_size <= 1:
        return edges
    labeling = label_components(edges)
    keep = {cid + 1 for cid, size in enumerate(labeling.component_sizes)
            if size >= min_size}
    lookup = np.zeros(labeling.component_count + 1, dtype=bool)
    for cid in keep:
        lookup[cid] = True
    return lookup[labeling.labels]


def _cmd_canny(args) -> int:
    image = load_image(args.input)
    result = canny_pipeline(image, operator=args.operator, size=args.size,
                            config=_canny_config(args))
    edges = _filtered_edges(result.edges, args.min_edge_size)

    out_dir = Path(args.out)
    stem = Path(args.input).stem
    edges_name = f"{stem}_edges.{args.image_format}"
    diag_name = f"{stem}_diagnostics.json"
    save_image(out_dir / edges_name, edges, format=args.image_format)
    diagnostics = {
        "otsu": result.otsu.threshold,
        "low": result.thresholds.low,
        "high": result.thresholds.high,
        "edge_pixels": int(edges.sum()),
    }
    save_json(out_dir / diag_name, diagnostics)
    _write_manifest(out_dir, "canny", args, [args.input],
                    [edges_name, diag_name])
    print(f"wrote {out_dir / edges_name} "
          f"(otsu {diagnostics['otsu']}, low {diagnostics['low']}, "
          f"high {diagnostics['high']}, {diagnostics['edge_pixels']} edge pixels)")
    return 0


def _corpus_from_input(input_path: str) -> list:
    path = Path(input_path)
    if path.is_dir():
        corpus = sorted(p for p in path.iterdir()
                        if p.suffix.lower() in _IMAGE_SUFFIXES)
        if not corpus:
            raise ValueError(f"no images (PNG/PGM) found in directory {path}")
        return corpus
    if not path.is_file():
        raise FileNotFoundError(f"no such file or directory: {path}")
    return [path]


def _cmd_compare(args) -> int:
    corpus = _corpus_from_input(args.input)
    report = compare_operators(
        corpus, op_a=args.op_a, op_b=args.op_b, size=args.size,
        config=_canny_config(args), min_size=args.min_edge_size,
        keep_maps=True,
    )

    out_dir = Path(args.out)
    csv_rows = [[row[c] for c in STATS_CSV_COLUMNS] for row in report.rows]
    save_csv(out_dir / "compare_stats.csv", STATS_CSV_COLUMNS, csv_rows)
    save_json(out_dir / "compare_summary.json",
              {"summary": report.summary, "failures": report.failures})
    outputs = ["compare_stats.csv", "compare_summary.json"]
    for name, edges_a, edges_b in report.maps:
        composite = diff_composite(diff_maps(edges_a, edges_b))
        diff_name = f"{Path(name).stem}_diff.png"
        save_image(out_dir / diff_name, composite, format="png")
        outputs.append(diff_name)
    _write_manifest(out_dir, "compare", args, corpus, outputs)

    s = report.summary
    print(f"compared {s['images_compared']} image(s): "
          f"{s['op_a']} had more edge pixels on "
          f"{s['a_more_edge_pixels']}/{s['images_compared']}, "
          f"greater avg pixels per edge on "
          f"{s['a_greater_avg_pixels_per_edge']}/{s['images_compared']}"
          + (f"; {s['images_failed']} failure(s)" if s["images_failed"] else ""))
    return 0


def _cmd_kernels(args) -> int:
    if args.name is not None and args.size is not None:
        entries = [{"name": args.name, "size": args.size}]
    elif args.name is not None:
        entries = [{"name": args.name, "size": s} for s in KERNEL_SIZES]
    elif args.size is not None:
        entries = [e for e in list_kernels() if e["size"] == args.size]
    else:
        entries = list_kernels()

    if args.derive:
        payload = [kernel_derivation_report(e["name"], e["size"])
                   for e in entries]
    elif args.name is not None:
        payload = []
        for e in entries:
            gx, gy = registry_get(e["name"], e["size"])
            payload.append({"name": e["name"], "size": e["size"],
                            "gx": gx.as_dict(), "gy": gy.as_dict()})
    else:
        payload = entries
    print(json.dumps({"kernels": payload}, indent=2))
    return 0


def replay_manifest(manifest_path, out_dir=None) -> int:
    """Re-run the command a manifest describes; artifacts land in ``out_dir``
    (default: the manifest's own directory) and reproduce the originals
    byte for byte."""
    manifest = json.loads(Path(manifest_path).read_text())
    config = manifest["config"]
    target = str(out_dir) if out_dir is not None else str(Path(manifest_path).parent)
    argv = [manifest["command"], manifest["input"], "--out", target]
    flag_names = {
        "operator": "--operator", "size": "--size",
        "gaussian_sigma": "--gaussian-sigma",
        "gaussian_radius": "--gaussian-radius",
        "sigma_fraction": "--sigma-fraction", "norm": "--norm",
        "otsu_source": "--otsu-source", "padding": "--padding",
        "format": "--format", "min_edge_size": "--min-edge-size",
        "op_a": "--op-a", "op_b": "--op-b",
    }
    for key, flag in flag_names.items():
        if key in config:
            argv.extend([flag, str(config[key])])
    return main(argv)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "gradient": _cmd_gradient,
        "canny": _cmd_canny,
        "compare": _cmd_compare,
        "kernels": _cmd_kernels,
    }
    try:
        return handlers[args.command](args)
    except NoContrastError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (FileNotFoundError, IsADirectoryError, PermissionError,
            KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
