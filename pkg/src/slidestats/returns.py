"""Price ingestion, log returns, delay embeddings and rho curves.

A return series U_i = ln(X_{i+1}/X_i) is turned into the point sets
T_n = {(U_1..U_n), (U_2..U_{n+1}), ...} of overlapping windows in R^n; the
slide statistics of T_n as a function of n form the curves used to compare
empirical returns against candidate models.  Both statistics are affinely
invariant in the returns, so location and scale never matter.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import NonPositivePrice, ParseError, SeriesTooShort
from .neighbors import PointCloud, make_cloud, nn_distances, nn_distances_1d
from .slide import slide_pair


@dataclass(frozen=True)
class ReturnSeries:
    """Log returns with a free-text label for reports."""

    u: np.ndarray
    label: str = ""

    def __len__(self) -> int:
        return self.u.size


@dataclass(frozen=True)
class RhoCurve:
    """Per-depth slide statistics: rows (n, rho1, rho2, windows)."""

    n: np.ndarray
    rho1: np.ndarray
    rho2: np.ndarray
    windows: np.ndarray
    label: str = ""

    def rows(self):
        for j in range(self.n.size):
            yield (int(self.n[j]), float(self.rho1[j]), float(self.rho2[j]),
                   int(self.windows[j]))


def load_prices(path, price_col=None, skip_header: bool | None = None) -> np.ndarray:
    """Read a positive price series from CSV, in file order.

    price_col selects the price column by 0-based index or by header name;
    with a single column it may be omitted.  skip_header=None auto-detects a
    header row.  Raises ParseError (malformed input) or NonPositivePrice,
    both carrying the offending line number.
    """
    with open(path, newline="") as fh:
        records = [(lineno, rec) for lineno, rec in enumerate(csv.reader(fh), start=1)
                   if rec and any(cell.strip() != "" for cell in rec)]
    if not records:
        raise ParseError(f"no rows in {path}")

    header = None
    first_line, first = records[0]
    if skip_header is None:
        try:
            [float(c) for c in first]
        except ValueError:
            header = [c.strip().lower() for c in first]
            records = records[1:]
    elif skip_header:
        header = [c.strip().lower() for c in first]
        records = records[1:]
    if not records:
        raise ParseError(f"no data rows in {path}")

    ncols = len(records[0][1])
    if isinstance(price_col, str):
        if header is None or price_col.strip().lower() not in header:
            raise ParseError(f"no column named {price_col!r} in header")
        col = header.index(price_col.strip().lower())
    elif price_col is not None:
        col = int(price_col)
        if not 0 <= col < ncols:
            raise ParseError(f"column index {col} out of range for {ncols} columns")
    elif ncols == 1:
        col = 0
    elif header is not None and "close" in header:
        col = header.index("close")
    else:
        raise ParseError(
            f"{ncols} columns and no price column selected; pass price_col"
        )

    prices = np.empty(len(records))
    for j, (lineno, rec) in enumerate(records):
        if len(rec) != ncols:
            raise ParseError(f"expected {ncols} columns, got {len(rec)}", line=lineno)
        try:
            prices[j] = float(rec[col])
        except ValueError:
            raise ParseError(f"bad price {rec[col]!r}", line=lineno) from None
        if not prices[j] > 0.0:
            raise NonPositivePrice(f"price {prices[j]!r} is not positive",
                                   line=lineno)
    return prices


def log_returns(prices, label: str = "") -> ReturnSeries:
    """u_i = ln(x_{i+1}/x_i) for consecutive prices."""
    x = np.asarray(prices, dtype=float).ravel()
    if x.size < 2:
        raise SeriesTooShort("need at least 2 prices")
    if np.any(x <= 0.0):
        raise NonPositivePrice("prices must be positive")
    return ReturnSeries(np.diff(np.log(x)), label=label)


def delay_embed(rs: ReturnSeries, n: int, windows: int | None = None) -> PointCloud:
    """Overlapping length-n windows of the series as points in R^n.

    windows=None takes every maximal window (len - n + 1 of them); an
    explicit count takes the first `windows` windows and requires
    len >= n + windows - 1.
    """
    if n < 1:
        raise ValueError("embedding depth must be >= 1")
    length = rs.u.size
    available = length - n + 1
    r = available if windows is None else int(windows)
    if r < 2 or r > available:
        raise SeriesTooShort(
            f"series of length {length} supports {max(available, 0)} windows "
            f"of depth {n}; requested {r}"
        )
    return make_cloud(sliding_window_view(rs.u, n)[:r].copy())


def _stat_pair_for_depth(rs: ReturnSeries, n: int, windows=None,
                         engine: str = "auto") -> tuple[float, float, int]:
    cloud = delay_embed(rs, n, windows)
    if n == 1:
        prof = nn_distances_1d(cloud.points[:, 0])
    else:
        prof = nn_distances(cloud, engine=engine)
    r1, r2 = slide_pair(prof)
    return r1, r2, cloud.k


def rho_curve(rs: ReturnSeries, n_values, windows: int | None = None,
              engine: str = "auto") -> RhoCurve:
    """Slide statistics of T_n for each depth in n_values."""
    n_values = np.asarray(list(n_values), dtype=int)
    if n_values.size == 0 or np.any(np.diff(n_values) <= 0):
        raise ValueError("n_values must be strictly increasing and non-empty")
    r1 = np.empty(n_values.size)
    r2 = np.empty(n_values.size)
    wins = np.empty(n_values.size, dtype=int)
    for j, n in enumerate(n_values):
        r1[j], r2[j], wins[j] = _stat_pair_for_depth(rs, int(n), windows, engine)
    return RhoCurve(n_values, r1, r2, wins, label=rs.label)


def scatter_point(rs: ReturnSeries, n: int = 3,
                  windows: int | None = None) -> tuple[float, float]:
    """The (rho2, rho1) pair of the depth-n embedding, for scatter plots."""
    r1, r2, _ = _stat_pair_for_depth(rs, n, windows)
    return r2, r1
