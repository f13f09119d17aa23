"""Edge-map statistics and pairwise operator comparison.

Connected components are found with a two-pass union-find labeling under
8-neighbor adjacency (diagonals connect). Component ids are dense, starting
at 1, ordered by each component's first pixel in raster-scan order; 0 is
background. Union-find was chosen over recursive flood fill so stack depth
stays bounded on large images — the tests keep an independent flood-fill
implementation as the oracle.

`compare_operators` runs the full detection pipeline with two operators over
an image corpus and tabulates edge_pixels / num_edges / avg_pixels_per_edge
per image, the shape of evidence used to argue one operator finds more and
longer edges than another. Unreadable corpus entries become failure records;
the run continues.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dataclass_field
from typing import NamedTuple

import numpy as np

from .canny import CannyConfig, canny_pipeline
from .image_io import load_image

__all__ = [
    "ComponentLabeling",
    "EdgeStats",
    "DiffMaps",
    "CompareReport",
    "label_components",
    "edge_stats",
    "diff_maps",
    "diff_composite",
    "compare_operators",
    "thread_budget",
    "STATS_CSV_COLUMNS",
]

#: Exact column order of the comparison CSV.
STATS_CSV_COLUMNS = ["image", "operator", "edge_pixels", "num_edges",
                     "avg_pixels_per_edge"]


@dataclass(frozen=True)
class ComponentLabeling:
    """Dense per-pixel component ids (0 = background) plus size bookkeeping."""

    labels: np.ndarray = dataclass_field(repr=False)
    component_count: int = 0
    component_sizes: tuple = ()

    def size_of(self, component_id: int) -> int:
        return self.component_sizes[component_id - 1]


class EdgeStats(NamedTuple):
    edge_pixels: int
    num_edges: int
    avg_pixels_per_edge: float


@dataclass(frozen=True)
class DiffMaps:
    """Pixelwise set split of two edge maps: a-only, b-only, intersection."""

    only_in_a: np.ndarray = dataclass_field(repr=False)
    only_in_b: np.ndarray = dataclass_field(repr=False)
    in_both: np.ndarray = dataclass_field(repr=False)


@dataclass(frozen=True)
class CompareReport:
    """Per-image stats rows, failure records, and the directional summary."""

    rows: list
    failures: list
    summary: dict
    maps: list = dataclass_field(default_factory=list, repr=False)


def label_components(edges) -> ComponentLabeling:
    """Label 8-connected components of a boolean edge map.

    Two-pass union-find: the first raster scan assigns provisional labels and
    merges across the four already-visited neighbors (W, NW, N, NE); the
    second pass flattens to dense ids 1..n ordered by first raster occurrence.
    """
    mask = np.asarray(edges)
    if mask.ndim != 2:
        raise ValueError(f"edge map must be 2-D, got {mask.ndim}-D")
    mask = mask.astype(bool)
    height, width = mask.shape
    grid = mask.tolist()
    labels = [[0] * width for _ in range(height)]
    parent = [0]  # parent[i] of provisional label i; parent[i] == i at roots

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:  # path compression
            parent[x], x = root, parent[x]
        return root

    for r in range(height):
        row = grid[r]
        label_row = labels[r]
        above = labels[r - 1] if r > 0 else None
        for c in range(width):
            if not row[c]:
                continue
            merged = 0
            if c > 0 and label_row[c - 1]:
                merged = label_row[c - 1]
            if above is not None:
                for cc in (c - 1, c, c + 1):
                    if 0 <= cc < width and above[cc]:
                        neighbor = above[cc]
                        if merged and neighbor != merged:
                            ra, rb = find(merged), find(neighbor)
                            if ra != rb:
                                parent[max(ra, rb)] = min(ra, rb)
                        else:
                            merged = neighbor
            if merged:
                label_row[c] = merged
            else:
                parent.append(len(parent))
                label_row[c] = len(parent) - 1

    # Provisional labels were created in raster order, and each component's
    # raster-first pixel necessarily started a fresh label, so numbering the
    # roots in provisional order yields ids ordered by first occurrence.
    dense = [0] * len(parent)
    count = 0
    for provisional in range(1, len(parent)):
        root = find(provisional)
        if dense[root] == 0:
            count += 1
            dense[root] = count
    lookup = np.array(
        [0] + [dense[find(p)] for p in range(1, len(parent))], dtype=np.int32
    )
    label_array = lookup[np.array(labels, dtype=np.int32)]
    sizes = np.bincount(label_array.ravel(), minlength=count + 1)[1:]
    return ComponentLabeling(
        labels=label_array,
        component_count=count,
        component_sizes=tuple(int(s) for s in sizes),
    )


def edge_stats(edges, min_size: int = 1) -> EdgeStats:
    """Edge pixel count, component count, and mean component size.

    Components smaller than ``min_size`` are excluded from every figure. An
    empty map (or one with no surviving components) reports (0, 0, 0.0).
    """
    if min_size < 1:
        raise ValueError(f"min_size must be >= 1, got {min_size}")
    labeling = label_components(edges)
    kept = [s for s in labeling.component_sizes if s >= min_size]
    pixels = int(sum(kept))
    count = len(kept)
    return EdgeStats(
        edge_pixels=pixels,
        num_edges=count,
        avg_pixels_per_edge=pixels / count if count else 0.0,
    )


def diff_maps(a, b) -> DiffMaps:
    """Split two edge maps into a-only / b-only / both (pairwise disjoint;
    union of the three equals the union of the inputs)."""
    map_a = np.asarray(a).astype(bool)
    map_b = np.asarray(b).astype(bool)
    if map_a.shape != map_b.shape:
        raise ValueError(
            f"edge maps differ in shape: {map_a.shape} vs {map_b.shape}"
        )
    return DiffMaps(
        only_in_a=map_a & ~map_b,
        only_in_b=map_b & ~map_a,
        in_both=map_a & map_b,
    )


def diff_composite(diff: DiffMaps) -> np.ndarray:
    """Render a DiffMaps as one RGB image: red = a-only, green = b-only,
    blue = both."""
    height, width = diff.only_in_a.shape
    rgb = np.zeros((height, width, 3), dtype=np.uint8)
    rgb[..., 0] = diff.only_in_a * np.uint8(255)
    rgb[..., 1] = diff.only_in_b * np.uint8(255)
    rgb[..., 2] = diff.in_both * np.uint8(255)
    return rgb


def thread_budget(threads: int | None = None) -> int:
    """Worker count for batch runs: the EDGEFORGE_THREADS environment
    variable caps it; unset means serial."""
    if threads is None:
        raw = os.environ.get("EDGEFORGE_THREADS", "")
        try:
            threads = int(raw) if raw.strip() else 1
        except ValueError:
            raise ValueError(
                f"EDGEFORGE_THREADS must be an integer, got {raw!r}"
            ) from None
    return max(1, threads)


def _operator_label(name: str, size: int) -> str:
    return f"{name}_{size}x{size}"


def compare_operators(corpus, op_a: str = "proposed_a", op_b: str = "sobel",
                      size: int = 3, config: CannyConfig | None = None,
                      min_size: int = 1, threads: int | None = None,
                      keep_maps: bool = False) -> CompareReport:
    """Run the pipeline with two operators over a corpus of image paths.

    Emits two stats rows per readable image (operator a first), in corpus
    order regardless of worker scheduling. Unreadable or unprocessable
    entries produce one failure record each and do not abort the run. The
    summary counts the images where operator a found strictly more edge
    pixels, and strictly greater avg_pixels_per_edge, than operator b.

    With ``keep_maps`` the per-image boolean edge maps are retained on the
    report (name, edges_a, edges_b) for rendering difference composites.
    """
    paths = list(corpus)
    if not paths:
        raise ValueError("corpus is empty")
    cfg = config if config is not None else CannyConfig()

    def process(path):
        name = os.path.basename(str(path))
        try:
            image = load_image(path)
            result_a = canny_pipeline(image, operator=op_a, size=size, config=cfg)
            result_b = canny_pipeline(image, operator=op_b, size=size, config=cfg)
            stats_a = edge_stats(result_a.edges, min_size=min_size)
            stats_b = edge_stats(result_b.edges, min_size=min_size)
        except Exception as exc:
            return name, None, str(exc)
        return name, ((stats_a, result_a.edges), (stats_b, result_b.edges)), None

    workers = thread_budget(threads)
    if workers == 1:
        outcomes = [process(p) for p in paths]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(process, paths))

    rows = []
    failures = []
    maps = []
    a_more_pixels = 0
    a_longer_edges = 0
    compared = 0
    for name, payload, error in outcomes:
        if error is not None:
            failures.append({"image": name, "error": error})
            continue
        (stats_a, edges_a), (stats_b, edges_b) = payload
        compared += 1
        for label, stats in ((_operator_label(op_a, size), stats_a),
                             (_operator_label(op_b, size), stats_b)):
            rows.append({
                "image": name,
                "operator": label,
                "edge_pixels": stats.edge_pixels,
                "num_edges": stats.num_edges,
                "avg_pixels_per_edge": stats.avg_pixels_per_edge,
            })
        if stats_a.edge_pixels > stats_b.edge_pixels:
            a_more_pixels += 1
        if stats_a.avg_pixels_per_edge > stats_b.avg_pixels_per_edge:
            a_longer_edges += 1
        if keep_maps:
            maps.append((name, edges_a, edges_b))

    summary = {
        "op_a": _operator_label(op_a, size),
        "op_b": _operator_label(op_b, size),
        "images_compared": compared,
        "images_failed": len(failures),
        "a_more_edge_pixels": a_more_pixels,
        "a_greater_avg_pixels_per_edge": a_longer_edges,
    }
    return CompareReport(rows=rows, failures=failures, summary=summary, maps=maps)
