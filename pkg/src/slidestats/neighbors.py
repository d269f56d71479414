"""Exact nearest-neighbor distance profiles for point clouds in R^m.

Two interchangeable engines are provided: a k-d tree (median splits, leaf
size 16) for moderate dimensions and a blocked brute-force kernel for high
dimensions such as deep return embeddings.  Both are exact; `auto` picks the
tree for m <= 10 and brute force above.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from .errors import DuplicatePoint, ParseError, TooFewPoints
from .profiles import DistanceProfile, make_profile

KDTREE_MAX_DIM = 10
KDTREE_LEAF_SIZE = 16
BRUTE_BLOCK_ROWS = 256


@dataclass(frozen=True)
class PointCloud:
    """k distinct points in R^m under the Euclidean metric, k >= 2.

    Distinctness is checked lazily: a zero nearest-neighbor distance raises
    DuplicatePoint at query time.
    """

    points: np.ndarray

    @property
    def k(self) -> int:
        return self.points.shape[0]

    @property
    def m(self) -> int:
        return self.points.shape[1]


def make_cloud(points) -> PointCloud:
    """Validate coordinates into a PointCloud; 1-D input becomes a column."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2:
        raise ValueError("points must be a (k, m) array")
    if pts.shape[0] < 2:
        raise TooFewPoints(f"need at least 2 points, got {pts.shape[0]}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("coordinates must be finite")
    pts = pts.copy()
    pts.flags.writeable = False
    return PointCloud(pts)


def dedupe_points(points) -> np.ndarray:
    """Collapse exactly coincident rows (opt-in; distinctness is the default)."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    return np.unique(pts, axis=0)


def nn_distances_1d(xs, mode: str = "nearest") -> DistanceProfile:
    """Distance profile of a 1-D point set from one sort.

    mode="nearest": each point's distance to its nearest neighbor (the
    smaller of its two adjacent gaps).  mode="consecutive": the k-1 adjacent
    gaps themselves, a variant with better convergence for some 1-D
    processes.
    """
    x = np.sort(np.asarray(xs, dtype=float).ravel())
    if x.size < 2:
        raise TooFewPoints(f"need at least 2 points, got {x.size}")
    gaps = np.diff(x)
    if np.any(gaps == 0.0):
        raise DuplicatePoint("two points coincide (zero gap)")
    if mode == "consecutive":
        return make_profile(gaps)
    if mode != "nearest":
        raise ValueError(f"unknown mode {mode!r}")
    nn = np.empty(x.size)
    nn[0] = gaps[0]
    nn[-1] = gaps[-1]
    if x.size > 2:
        nn[1:-1] = np.minimum(gaps[:-1], gaps[1:])
    return make_profile(nn)


def nn_profile_matrix_1d(xs_rows: np.ndarray) -> np.ndarray:
    """Row-wise 1-D nearest-neighbor distances, each row sorted descending.

    Vectorized over replicates for the Monte Carlo harness; semantics match
    nn_distances_1d(..., mode="nearest") row by row.
    """
    x = np.sort(np.asarray(xs_rows, dtype=float), axis=1)
    gaps = np.diff(x, axis=1)
    if np.any(gaps == 0.0):
        raise DuplicatePoint("a replicate contains coincident points")
    nn = np.empty_like(x)
    nn[:, 0] = gaps[:, 0]
    nn[:, -1] = gaps[:, -1]
    if x.shape[1] > 2:
        nn[:, 1:-1] = np.minimum(gaps[:, :-1], gaps[:, 1:])
    return -np.sort(-nn, axis=1)


def _nn_kdtree(pts: np.ndarray, workers: int) -> np.ndarray:
    tree = cKDTree(pts, leafsize=KDTREE_LEAF_SIZE, balanced_tree=True)
    dist, _ = tree.query(pts, k=2, workers=workers)
    return dist[:, 1]


def _nn_brute(pts: np.ndarray) -> np.ndarray:
    k = pts.shape[0]
    nn = np.empty(k)
    for start in range(0, k, BRUTE_BLOCK_ROWS):
        stop = min(start + BRUTE_BLOCK_ROWS, k)
        block = cdist(pts[start:stop], pts)
        block[np.arange(stop - start), np.arange(start, stop)] = np.inf
        nn[start:stop] = block.min(axis=1)
    return nn


def nn_distances(pc: PointCloud, engine: str = "auto",
                 workers: int = 1) -> DistanceProfile:
    """Exact nearest-neighbor distance profile of a point cloud.

    Parameters
    ----------
    pc : PointCloud
    engine : "auto" | "kdtree" | "brute"
        auto uses the k-d tree up to KDTREE_MAX_DIM dimensions, brute force
        above.  Engines agree to within summation-order roundoff.
    workers : int
        Parallel query workers for the tree engine (-1 uses all cores).

    Raises DuplicatePoint if any nearest-neighbor distance is zero.
    """
    if engine == "auto":
        engine = "kdtree" if pc.m <= KDTREE_MAX_DIM else "brute"
    if engine == "kdtree":
        nn = _nn_kdtree(pc.points, workers)
    elif engine == "brute":
        nn = _nn_brute(pc.points)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    if np.any(nn == 0.0):
        raise DuplicatePoint("cloud contains coincident points")
    return make_profile(nn)


def load_cloud(path, dedupe: bool = False, expect_dim: int | None = None) -> PointCloud:
    """Read a point cloud from CSV: one point per row, optional header.

    The header is auto-detected (a first row that does not parse as numbers
    is skipped).  Raises ParseError with the 1-based line number on
    malformed rows, and on a column-count mismatch with expect_dim.
    """
    rows = []
    width = None
    with open(path, newline="") as fh:
        for lineno, rec in enumerate(csv.reader(fh), start=1):
            if not rec or all(cell.strip() == "" for cell in rec):
                continue
            try:
                vals = [float(cell) for cell in rec]
            except ValueError:
                if lineno == 1:
                    continue  # header row
                raise ParseError(f"non-numeric row {rec!r}", line=lineno) from None
            if width is None:
                width = len(vals)
            elif len(vals) != width:
                raise ParseError(
                    f"expected {width} columns, got {len(vals)}", line=lineno
                )
            rows.append(vals)
    if not rows:
        raise ParseError(f"no numeric rows in {path}")
    pts = np.asarray(rows, dtype=float)
    if expect_dim is not None and pts.shape[1] != expect_dim:
        raise ParseError(
            f"file has {pts.shape[1]} coordinate columns, expected {expect_dim}"
        )
    if dedupe:
        pts = dedupe_points(pts)
    return make_cloud(pts)
