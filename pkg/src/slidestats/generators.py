"""Seedable samplers and deterministic sequences for the simulation tables.

Random kinds draw from independent, reproducible streams: the stream for
replicate i is derived from (seed, i) through numpy's SeedSequence spawning,
so results do not depend on how work is distributed across workers.
cos-walk and primes are deterministic and ignore the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import BadSpec, DuplicatePoint
from .neighbors import PointCloud, make_cloud

KINDS = (
    "uniform-cube",
    "normal",
    "bivariate-normal",
    "exponential",
    "sqrt-power",
    "laplace",
    "cauchy",
    "stable",
    "cantor",
    "sierpinski",
    "cos-walk",
    "primes",
)
DETERMINISTIC_KINDS = ("cos-walk", "primes")

_SIERPINSKI_VERTICES = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3.0) / 2.0]])
_CANTOR_DIGITS = 40
_CANTOR_REDRAW_LIMIT = 100


@dataclass(frozen=True)
class SourceSpec:
    """One sampling request: kind, size, seed and kind-specific parameters.

    m is the cube dimension for uniform-cube; alpha/beta parameterize the
    stable family and may be left None in a template (they are then filled
    by the caller, e.g. drawn at random for scatter clouds).
    """

    kind: str
    size: int
    seed: int | None = None
    m: int = 1
    alpha: float | None = None
    beta: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BadSpec(f"unknown kind {self.kind!r}")
        if self.size < 2:
            raise BadSpec("size must be >= 2")
        if self.kind == "uniform-cube" and self.m < 1:
            raise BadSpec("uniform-cube needs m >= 1")
        if self.alpha is not None and not 0.0 < self.alpha <= 2.0:
            raise BadSpec("stable alpha must be in (0, 2]")
        if self.beta is not None and not -1.0 <= self.beta <= 1.0:
            raise BadSpec("stable beta must be in [-1, 1]")

    @property
    def deterministic(self) -> bool:
        return self.kind in DETERMINISTIC_KINDS


def stream_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Generator for one stream of a seeded family of independent streams."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))


def derive_seed(seed: int, index: int) -> int:
    """A 64-bit child seed for replicate `index`, stable across workers."""
    ss = np.random.SeedSequence(seed, spawn_key=(index,))
    return int(ss.generate_state(1, np.uint64)[0])


def sample(spec: SourceSpec) -> PointCloud:
    """Draw the point cloud described by spec; deterministic given the spec."""
    k = spec.size
    if spec.deterministic:
        return cos_walk(k) if spec.kind == "cos-walk" else primes(k)
    if spec.seed is None:
        raise BadSpec(f"kind {spec.kind!r} needs a seed")
    if spec.kind == "cantor":
        return cantor_points(k, spec.seed)
    if spec.kind == "sierpinski":
        return sierpinski_points(k, spec.seed)
    if spec.kind == "stable":
        if spec.alpha is None or spec.beta is None:
            raise BadSpec("stable sampling needs alpha and beta")
        return sample_stable(spec.alpha, spec.beta, k, spec.seed)

    rng = stream_rng(spec.seed)
    if spec.kind == "uniform-cube":
        pts = rng.random((k, spec.m))
    elif spec.kind == "normal":
        pts = rng.standard_normal((k, 1))
    elif spec.kind == "bivariate-normal":
        pts = rng.standard_normal((k, 2))
    elif spec.kind == "exponential":
        pts = rng.standard_exponential((k, 1))
    elif spec.kind == "sqrt-power":
        # density 1/(2 sqrt(x)) on [0,1]; inverse CDF is the square
        pts = rng.random((k, 1)) ** 2
    elif spec.kind == "laplace":
        pts = (rng.standard_exponential((k, 1))
               - rng.standard_exponential((k, 1)))
    elif spec.kind == "cauchy":
        pts = rng.standard_cauchy((k, 1))
    else:  # pragma: no cover - guarded by KINDS
        raise BadSpec(f"unhandled kind {spec.kind!r}")
    return make_cloud(pts)


def with_params(spec: SourceSpec, **kw) -> SourceSpec:
    """Copy of spec with fields replaced (size, seed, alpha, ...)."""
    return replace(spec, **kw)


def sample_stable(alpha: float, beta: float, k: int, seed: int) -> PointCloud:
    """Stable S(alpha, beta, 1, 0) sample via the Chambers-Mallows-Stuck map.

    A uniform angle on (-pi/2, pi/2) and a unit exponential are transformed
    into one stable variate.  alpha = 2 reduces to a centered normal with
    standard deviation sqrt(2); alpha = 1, beta = 0 is standard Cauchy.
    """
    if not 0.0 < alpha <= 2.0:
        raise BadSpec("stable alpha must be in (0, 2]")
    if not -1.0 <= beta <= 1.0:
        raise BadSpec("stable beta must be in [-1, 1]")
    if k < 2:
        raise BadSpec("size must be >= 2")
    rng = stream_rng(seed)
    v = (rng.random(k) - 0.5) * math.pi
    w = rng.standard_exponential(k)
    if alpha == 1.0:
        half_pi = math.pi / 2.0
        shifted = half_pi + beta * v
        x = (shifted * np.tan(v)
             - beta * np.log((half_pi * w * np.cos(v)) / shifted)) / half_pi
    else:
        ta = beta * math.tan(math.pi * alpha / 2.0)
        b0 = math.atan(ta) / alpha
        scale = (1.0 + ta * ta) ** (1.0 / (2.0 * alpha))
        x = (scale
             * np.sin(alpha * (v + b0)) / np.cos(v) ** (1.0 / alpha)
             * (np.cos(v - alpha * (v + b0)) / w) ** ((1.0 - alpha) / alpha))
    return make_cloud(x[:, None])


def cantor_points(k: int, seed: int) -> PointCloud:
    """Random Cantor-set points: sum of a_i / 3^i, a_i in {0, 2}, 40 digits.

    Exact collisions (probability ~ k^2 2^-41) are resolved by redrawing the
    colliding points, up to a fixed attempt budget.
    """
    if k < 2:
        raise BadSpec("size must be >= 2")
    rng = stream_rng(seed)
    weights = 2.0 / 3.0 ** np.arange(1, _CANTOR_DIGITS + 1)

    def draw(count):
        return (rng.integers(0, 2, size=(count, _CANTOR_DIGITS)) * weights).sum(axis=1)

    pts = draw(k)
    for _ in range(_CANTOR_REDRAW_LIMIT):
        _, first = np.unique(pts, return_index=True)
        if first.size == k:
            break
        dup = np.ones(k, dtype=bool)
        dup[first] = False
        pts[dup] = draw(int(dup.sum()))
    else:
        raise DuplicatePoint("cantor sampling exhausted its redraw budget")
    return make_cloud(pts[:, None])


def sierpinski_points(k: int, seed: int, burn_in: int = 100) -> PointCloud:
    """Sierpinski triangle points by the chaos game on a unit triangle.

    Repeatedly steps halfway toward a uniformly chosen vertex, discarding
    the first burn_in iterates.
    """
    if k < 2:
        raise BadSpec("size must be >= 2")
    rng = stream_rng(seed)
    choices = rng.integers(0, 3, size=burn_in + k)
    pos = _SIERPINSKI_VERTICES.mean(axis=0)
    out = np.empty((k, 2))
    for j, c in enumerate(choices):
        pos = 0.5 * (pos + _SIERPINSKI_VERTICES[c])
        if j >= burn_in:
            out[j - burn_in] = pos
    return make_cloud(out)


def cos_walk(k: int) -> PointCloud:
    """First k iterates of x_{i+1} = x_i + cos(i) with x_0 = 0 (radians)."""
    if k < 2:
        raise BadSpec("size must be >= 2")
    x = np.concatenate(([0.0], np.cumsum(np.cos(np.arange(k - 1, dtype=float)))))
    return make_cloud(x[:, None])


def primes(k: int) -> PointCloud:
    """The first k primes, as reals, via a segmented sieve."""
    if k < 2:
        raise BadSpec("size must be >= 2")
    return make_cloud(np.asarray(_first_primes(k), dtype=float)[:, None])


def _first_primes(k: int) -> np.ndarray:
    if k < 6:
        bound = 13
    else:
        # Rosser: p_k < k (ln k + ln ln k) for k >= 6
        bound = int(k * (math.log(k) + math.log(math.log(k)))) + 10
    base_limit = math.isqrt(bound) + 1
    base = np.ones(base_limit + 1, dtype=bool)
    base[:2] = False
    for p in range(2, math.isqrt(base_limit) + 1):
        if base[p]:
            base[p * p:: p] = False
    base_primes = np.flatnonzero(base)

    found = []
    seg = 1 << 20
    lo = 2
    while len(found) < k and lo <= bound:
        hi = min(lo + seg, bound + 1)
        mark = np.ones(hi - lo, dtype=bool)
        for p in base_primes:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            mark[start - lo:: p] = False
        found.extend((np.flatnonzero(mark) + lo).tolist())
        lo = hi
    if len(found) < k:  # pragma: no cover - bound is provably sufficient
        raise RuntimeError("prime sieve bound too small")
    return np.asarray(found[:k])
