"""Monte Carlo experiment runner: tables, scatter clouds, normality test.

Replicates are independent tasks seeded by (seed, replicate-index) streams
and reduced in index order, so summaries are identical no matter how many
workers run them.  Desk-scale defaults (100 replicates of size 10^4) trade
the reference tables' 1000 replicates for speed; standard errors scale
accordingly.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import BadSpec, NonNegativeRho2, ParseError
from .generators import (
    DETERMINISTIC_KINDS,
    SourceSpec,
    derive_seed,
    sample,
    stream_rng,
    with_params,
)
from .neighbors import nn_distances, nn_distances_1d, nn_profile_matrix_1d
from .returns import ReturnSeries, delay_embed
from .slide import (
    TangibilityTarget,
    dimension_from_rho2,
    slide_pair,
    slide_pair_batch,
    tangible_target,
)

# the ten simulation-table rows, in report order
TABLE_ROWS = (
    SourceSpec("uniform-cube", 2, m=1),
    SourceSpec("normal", 2),
    SourceSpec("exponential", 2),
    SourceSpec("sqrt-power", 2),
    SourceSpec("uniform-cube", 2, m=2),
    SourceSpec("uniform-cube", 2, m=3),
    SourceSpec("uniform-cube", 2, m=4),
    SourceSpec("bivariate-normal", 2),
    SourceSpec("cantor", 2),
    SourceSpec("sierpinski", 2),
)

SUMMARY_FIELDS = ("kind", "m", "size", "reps", "mu1", "sigma1", "mu2", "sigma2",
                  "dim_est1", "dim_est2")


@dataclass(frozen=True)
class ExperimentSummary:
    """Mean/SD of both slide statistics over independent replicates."""

    spec: SourceSpec
    reps: int
    sample_size: int
    mu1: float
    sigma1: float
    mu2: float
    sigma2: float
    seed: int

    @property
    def dim_est1(self) -> float:
        """Dimension estimate from the first statistic: 1/mu1."""
        return 1.0 / self.mu1

    @property
    def dim_est2(self) -> float:
        """Dimension estimate pi/sqrt(-6 mu2); nan when mu2 >= 0."""
        try:
            return dimension_from_rho2(self.mu2)
        except NonNegativeRho2:
            return math.nan

    def row(self) -> dict:
        return {
            "kind": self.spec.kind,
            "m": _cloud_dim(self.spec),
            "size": self.sample_size,
            "reps": self.reps,
            "mu1": self.mu1,
            "sigma1": self.sigma1,
            "mu2": self.mu2,
            "sigma2": self.sigma2,
            "dim_est1": self.dim_est1,
            "dim_est2": self.dim_est2,
        }


@dataclass(frozen=True)
class TangibilityReport:
    """Observed statistics against the targets for a candidate dimension."""

    dimension: float
    mu1: float
    mu2: float
    targets: tuple[TangibilityTarget, TangibilityTarget]
    dim_est1: float
    dim_est2: float

    @property
    def target_rho1(self) -> float:
        return self.targets[0].value

    @property
    def target_rho2(self) -> float:
        return self.targets[1].value

    @property
    def discrepancy_rho1(self) -> float:
        return abs(self.mu1 - self.target_rho1)

    @property
    def discrepancy_rho2(self) -> float:
        return abs(self.mu2 - self.target_rho2)


@dataclass(frozen=True)
class ScatterCloud:
    """(rho2, rho1) scatter points with per-point labels."""

    labels: tuple
    rho2: np.ndarray
    rho1: np.ndarray

    def rows(self):
        for j, label in enumerate(self.labels):
            yield label, float(self.rho2[j]), float(self.rho1[j])


@dataclass(frozen=True)
class TestReport:
    """Monte Carlo normality test outcome for one data set."""

    rho1: float
    rho2: float
    reps: int
    p_value: float
    alpha: float
    reject: bool
    embed_n: int | None = None
    null_kind: str = "normal"


def _cloud_dim(spec: SourceSpec) -> int:
    if spec.kind == "uniform-cube":
        return spec.m
    if spec.kind in ("bivariate-normal", "sierpinski"):
        return 2
    return 1


def _replicate_pair(spec: SourceSpec) -> tuple[float, float]:
    cloud = sample(spec)
    if cloud.m == 1:
        prof = nn_distances_1d(cloud.points[:, 0])
    else:
        prof = nn_distances(cloud)
    return slide_pair(prof)


def _run_indexed(specs, workers: int) -> np.ndarray:
    if workers > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            pairs = list(pool.map(_replicate_pair, specs,
                                  chunksize=max(1, len(specs) // (4 * workers))))
    else:
        pairs = [_replicate_pair(s) for s in specs]
    return np.asarray(pairs)


def replicate(spec: SourceSpec, sample_size: int, reps: int, seed: int,
              workers: int = 1) -> ExperimentSummary:
    """Run `reps` independent samples of one source and aggregate.

    Each replicate gets its own derived seed; for deterministic kinds the
    replicates coincide and the SDs are zero.  Deterministic given
    (spec, sample_size, reps, seed) independent of worker count.
    """
    if reps < 2:
        raise BadSpec("reps must be >= 2")
    if spec.kind in DETERMINISTIC_KINDS:
        specs = [with_params(spec, size=sample_size)] * reps
    else:
        specs = [with_params(spec, size=sample_size, seed=derive_seed(seed, i))
                 for i in range(reps)]
    pairs = _run_indexed(specs, workers)
    return ExperimentSummary(
        spec=spec, reps=reps, sample_size=sample_size,
        mu1=float(pairs[:, 0].mean()), sigma1=float(pairs[:, 0].std(ddof=1)),
        mu2=float(pairs[:, 1].mean()), sigma2=float(pairs[:, 1].std(ddof=1)),
        seed=seed,
    )


def table_run(size, reps: int, seed: int, rows=None,
              workers: int = 1) -> list[ExperimentSummary]:
    """Replicate every table row (or the given specs) at the given size(s).

    `size` may be a single sample size or a sequence; row order is preserved
    and sizes iterate within each row.
    """
    rows = TABLE_ROWS if rows is None else tuple(rows)
    sizes = [int(size)] if np.isscalar(size) else [int(s) for s in size]
    out = []
    for ridx, spec in enumerate(rows):
        for sidx, sz in enumerate(sizes):
            out.append(replicate(spec, sz, reps,
                                 derive_seed(seed, ridx * len(sizes) + sidx),
                                 workers=workers))
    return out


def tangibility_check(summary: ExperimentSummary, d: float) -> TangibilityReport:
    """Compare a summary against the tangibility targets for dimension d."""
    targets = tuple(TangibilityTarget(d, n, tangible_target(d, n))
                    for n in (1, 2))
    return TangibilityReport(
        dimension=d,
        mu1=summary.mu1,
        mu2=summary.mu2,
        targets=targets,
        dim_est1=summary.dim_est1,
        dim_est2=dimension_from_rho2(summary.mu2),
    )


def _scatter_pair(args) -> tuple[float, float]:
    spec, embed_n = args
    series = sample(spec).points[:, 0]
    if embed_n is None:
        prof = nn_distances_1d(series)
    else:
        cloud = delay_embed(ReturnSeries(series), embed_n)
        prof = nn_distances(cloud)
    r1, r2 = slide_pair(prof)
    return r2, r1


def cloud(family: SourceSpec, count: int, sample_size: int, embed_n: int | None,
          seed: int, workers: int = 1) -> ScatterCloud:
    """(rho2, rho1) scatter points from `count` independent samples.

    family is a 1-D source template; a stable template with alpha/beta left
    None draws them per point from U(1, 2) x U(0, 1), the reference cloud
    for stable-model comparisons.
    """
    if count < 1:
        raise BadSpec("count must be >= 1")
    if _cloud_dim(family) != 1:
        raise BadSpec("scatter families must be 1-D series sources")
    random_stable = (family.kind == "stable"
                     and (family.alpha is None or family.beta is None))
    param_rng = stream_rng(seed, stream=0xFFFFFFFF)
    specs = []
    labels = []
    for i in range(count):
        child = derive_seed(seed, i)
        if random_stable:
            a = 1.0 + param_rng.random()
            b = param_rng.random()
            spec = with_params(family, size=sample_size, seed=child,
                               alpha=a, beta=b)
            labels.append(f"stable[{a:.3f},{b:.3f}]")
        else:
            spec = with_params(family, size=sample_size, seed=child)
            labels.append(f"{family.kind}#{i}")
        specs.append((spec, embed_n))

    if workers > 1 and count > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            pts = list(pool.map(_scatter_pair, specs,
                                chunksize=max(1, count // (4 * workers))))
    else:
        pts = [_scatter_pair(s) for s in specs]
    arr = np.asarray(pts)
    return ScatterCloud(tuple(labels), arr[:, 0].copy(), arr[:, 1].copy())


def _null_pairs_1d(rng, reps: int, length: int) -> np.ndarray:
    draws = rng.standard_normal((reps, length))
    profiles = nn_profile_matrix_1d(draws)
    r1, r2 = slide_pair_batch(profiles)
    return np.column_stack((r1, r2))


def _data_pair(u: np.ndarray, embed_n: int | None) -> tuple[float, float]:
    if embed_n is None:
        prof = nn_distances_1d(u)
    else:
        prof = nn_distances(delay_embed(ReturnSeries(u), embed_n))
    return slide_pair(prof)


def normality_test(data, embed_n: int | None = None, reps: int = 500,
                   seed: int = 0, alpha: float = 0.05) -> TestReport:
    """Monte Carlo goodness-of-fit test against the normal family.

    The null distribution of (rho1, rho2) is built from `reps` standard
    normal samples of the same length, run through the identical pipeline;
    no parameters are estimated because both statistics are location/scale
    free.  The p-value is the add-one tail fraction of null replicates at
    least as deep as the data under the Mahalanobis ordering induced by the
    null cloud's sample moments.
    """
    u = data.u if isinstance(data, ReturnSeries) else np.asarray(data, float).ravel()
    if u.size < 50:
        raise BadSpec("normality test needs data length >= 50")
    if not 0.0 < alpha < 1.0:
        raise BadSpec("alpha must be in (0, 1)")
    r1, r2 = _data_pair(u, embed_n)

    rng = stream_rng(seed)
    if embed_n is None:
        null = _null_pairs_1d(rng, reps, u.size)
    else:
        null = np.empty((reps, 2))
        for i in range(reps):
            null[i] = _data_pair(rng.standard_normal(u.size), embed_n)

    center = null.mean(axis=0)
    cov = np.cov(null.T)
    diffs = null - center
    solved = np.linalg.solve(cov, diffs.T)
    depth_null = np.einsum("ij,ji->i", diffs, solved)
    delta = np.array([r1, r2]) - center
    depth_obs = float(delta @ np.linalg.solve(cov, delta))

    p = (1.0 + np.count_nonzero(depth_null >= depth_obs)) / (reps + 1.0)
    return TestReport(rho1=r1, rho2=r2, reps=reps, p_value=float(p), alpha=alpha,
                      reject=bool(p <= alpha), embed_n=embed_n)


_CONFIG_KEYS = {"kind": str, "size": int, "reps": int, "seed": int, "m": int,
                "alpha": float, "beta": float}


def parse_config(path) -> dict:
    """Key-value experiment config: kind/size/reps/seed (plus m/alpha/beta).

    One `key = value` pair per line; blank lines and # comments ignored.
    """
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError(f"expected key = value, got {line!r}", line=lineno)
            key, _, value = (part.strip() for part in line.partition("="))
            if key not in _CONFIG_KEYS:
                raise ParseError(f"unknown key {key!r}", line=lineno)
            try:
                out[key] = _CONFIG_KEYS[key](value)
            except ValueError:
                raise ParseError(f"bad value {value!r} for {key}",
                                 line=lineno) from None
    return out
