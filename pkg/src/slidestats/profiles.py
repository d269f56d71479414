"""Distance profiles and piecewise-constant corner densities.

A distance profile is a descending sequence of positive nearest-neighbor
distances.  Two step densities are derived from it: the normalized profile
density on [0, 1) (value d_i / mean on the i-th cell) and the complementary
ECDF density on [0, d_1/mean).  Both are corner densities: monotone
decreasing, unit mass, domain anchored at zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveDistance, NotNormalized, TooFewPoints

MASS_TOL = 1e-12


@dataclass(frozen=True)
class DistanceProfile:
    """Positive distances sorted in descending order, length >= 2."""

    d: np.ndarray

    @property
    def n(self) -> int:
        return self.d.size

    def scaled(self, lam: float) -> "DistanceProfile":
        """Profile with every distance multiplied by lam > 0."""
        return make_profile(self.d * lam)

    def powered(self, r: float) -> "DistanceProfile":
        """Profile with every distance raised to the power r > 0."""
        return make_profile(self.d ** r)


def make_profile(ds) -> DistanceProfile:
    """Validate and sort a distance sequence into a DistanceProfile.

    Raises TooFewPoints for length < 2 and NonPositiveDistance if any entry
    is not strictly positive (a zero distance signals duplicate points
    upstream).  Ties are kept as repeated values.
    """
    arr = np.asarray(ds, dtype=float).ravel()
    if arr.size < 2:
        raise TooFewPoints(f"need at least 2 distances, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise NonPositiveDistance("distances must be finite")
    if np.any(arr <= 0.0):
        raise NonPositiveDistance(
            "all distances must be > 0 (zero distance means duplicate points)"
        )
    out = np.sort(arr)[::-1].copy()
    out.flags.writeable = False
    return DistanceProfile(out)


@dataclass(frozen=True)
class StepDensity:
    """Piecewise-constant corner density.

    breakpoints: 0 = t_0 < t_1 < ... < t_m (strictly increasing after
    merging); values: e_1 > e_2 > ... > e_m > 0 on the cells
    [t_{i-1}, t_i).  `normalized` is set when the total mass is 1 within
    MASS_TOL.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    normalized: bool

    @property
    def mass(self) -> float:
        return float(np.sum(self.values * np.diff(self.breakpoints)))

    def dilated(self, lam: float) -> "StepDensity":
        """The density z -> f(z/lam)/lam on the lam-stretched domain."""
        if lam <= 0:
            raise ValueError("dilation factor must be > 0")
        return make_step_density(self.breakpoints * lam, self.values / lam)

    def __call__(self, x) -> np.ndarray:
        """Evaluate pointwise (0 outside the support); handy for quadrature."""
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.breakpoints, x, side="right") - 1
        inside = (idx >= 0) & (idx < self.values.size) & (x < self.breakpoints[-1])
        out = np.zeros_like(x, dtype=float)
        out[inside] = self.values[idx[inside]]
        return out if out.ndim else float(out)


def make_step_density(breakpoints, values) -> StepDensity:
    """Build a StepDensity, dropping zero-width cells and merging equal runs.

    After merging, values must be strictly decreasing and positive.
    """
    t = np.asarray(breakpoints, dtype=float).ravel()
    v = np.asarray(values, dtype=float).ravel()
    if t.size != v.size + 1:
        raise ValueError("need one more breakpoint than values")
    if t[0] != 0.0:
        raise ValueError("domain must be anchored at 0")
    if np.any(np.diff(t) < 0):
        raise ValueError("breakpoints must be nondecreasing")
    if np.any(v <= 0.0) or not np.all(np.isfinite(v)):
        raise ValueError("values must be finite and > 0")

    width = np.diff(t)
    keep = width > 0.0
    v = v[keep]
    t = np.concatenate(([t[0]], t[1:][keep]))
    if v.size == 0:
        raise ValueError("density has empty support")

    # merge runs of equal adjacent values into single cells
    run_end = np.flatnonzero(np.diff(v) != 0.0)
    run_end = np.concatenate((run_end, [v.size - 1]))
    merged_v = v[run_end]
    merged_t = np.concatenate(([t[0]], t[run_end + 1]))
    if np.any(np.diff(merged_v) >= 0.0):
        raise ValueError("values must be monotone decreasing")

    merged_t.flags.writeable = False
    merged_v.flags.writeable = False
    mass = float(np.sum(merged_v * np.diff(merged_t)))
    return StepDensity(merged_t, merged_v, abs(mass - 1.0) <= MASS_TOL)


def profile_density(p: DistanceProfile) -> StepDensity:
    """Normalized profile density on [0, 1): value d_i/mean on cell i."""
    n = p.n
    mu = float(p.d.mean())
    return make_step_density(np.arange(n + 1) / n, p.d / mu)


def complement_ecdf_density(p: DistanceProfile) -> StepDensity:
    """Complementary-ECDF corner density of the normalized profile.

    One minus the empirical CDF of the mean-normalized distances, restricted
    to [0, infinity); it carries the same entropy as the profile density.
    """
    s = profile_density(p)
    e = s.values                # e_1 > ... > e_m
    t_hi = s.breakpoints[1:]    # t_1 < ... < t_m = 1
    breaks = np.concatenate(([0.0], e[::-1]))
    return make_step_density(breaks, t_hi[::-1])


def require_normalized(s: StepDensity) -> None:
    if not s.normalized:
        raise NotNormalized(f"step density mass is {s.mass!r}, expected 1")
