"""Monte Carlo estimation of the expected consensus time.

Trial ``i`` of an experiment with master seed ``s`` draws from
``SeedSequence(s, spawn_key=(i,))``, so results do not depend on how trials
are split across worker processes.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Sequence, TextIO

import numpy as np

from . import kernels
from .configuration import ColoringSpec, Configuration, coloring_opinions, default_coloring
from .graph import FAMILIES, Graph, generate
from .protocols import Protocol, as_protocol

DEFAULT_CUTOFF = 10**8
THREADS_ENV = "DISCORDANT_THREADS"
CSV_FIELDS = ("family", "protocol", "n", "trials", "mean", "std", "ci95", "censored", "normalized")


def default_jobs() -> int:
    """Worker count from ``DISCORDANT_THREADS`` (default 1)."""
    raw = os.environ.get(THREADS_ENV, "")
    if not raw:
        return 1
    try:
        jobs = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be a positive integer (got {raw!r})") from None
    if jobs < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer (got {raw!r})")
    return jobs


@dataclass(frozen=True)
class EstimateStats:
    """Summary of ``trials`` runs; mean and spread use uncensored runs only."""

    trials: int
    mean: float
    std_dev: float
    ci95_halfwidth: float
    censored: int

    @property
    def is_lower_bound(self) -> bool:
        return self.censored > 0

    @property
    def fully_censored(self) -> bool:
        return self.censored == self.trials


def summarize(steps: Sequence[int], censored: Sequence[bool]) -> EstimateStats:
    trials = len(steps)
    if trials == 0:
        raise ValueError("no trials to summarize")
    done = [s for s, c in zip(steps, censored) if not c]
    n_cens = trials - len(done)
    if not done:
        nan = float("nan")
        return EstimateStats(trials, nan, nan, nan, n_cens)
    mean = math.fsum(done) / len(done)
    if len(done) > 1:
        var = math.fsum((s - mean) ** 2 for s in done) / (len(done) - 1)
    else:
        var = 0.0
    std = math.sqrt(var)
    return EstimateStats(trials, mean, std, 1.96 * std / math.sqrt(trials), n_cens)


def trial_generator(seed, index: int) -> np.random.Generator:
    entropy = list(seed) if isinstance(seed, (list, tuple)) else seed
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy, spawn_key=(index,))))


def _run_block(args) -> tuple[list[int], list[bool]]:
    g, opinions, code, seed, lo, hi, cutoff, backend = args
    steps, cens = [], []
    base = np.asarray(opinions, dtype=np.int8)
    for i in range(lo, hi):
        ops = base.copy()
        t, left = kernels.run(g, ops, code, trial_generator(seed, i), cutoff, backend=backend)
        steps.append(t)
        cens.append(left > 0)
    return steps, cens


def run_trials(
    g: Graph,
    opinions: Sequence[int],
    p: Protocol | str,
    trials: int,
    seed,
    cutoff: int = DEFAULT_CUTOFF,
    n_jobs: int | None = None,
    backend: str | None = None,
) -> tuple[list[int], list[bool]]:
    """Step counts and censoring flags of trials ``0..trials-1`` in index order."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    code = as_protocol(p).code
    jobs = default_jobs() if n_jobs is None else n_jobs
    ops = [int(x) for x in opinions]
    if jobs <= 1 or trials < 2 * jobs:
        return _run_block((g, ops, code, seed, 0, trials, cutoff, backend))
    bounds = np.linspace(0, trials, jobs + 1).astype(int)
    tasks = [(g, ops, code, seed, int(lo), int(hi), cutoff, backend) for lo, hi in zip(bounds[:-1], bounds[1:])]
    steps: list[int] = []
    cens: list[bool] = []
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for s, c in pool.map(_run_block, tasks):
            steps.extend(s)
            cens.extend(c)
    return steps, cens


def estimate_ET(
    g: Graph,
    start: ColoringSpec | Configuration,
    p: Protocol | str,
    trials: int,
    seed,
    cutoff: int = DEFAULT_CUTOFF,
    n_jobs: int | None = None,
    backend: str | None = None,
) -> EstimateStats:
    """Estimate ``E T`` from ``trials`` independent runs.

    ``start`` is a colouring recipe or an explicit configuration.  The result
    is a deterministic function of ``seed`` (an int or a tuple of ints).
    """
    opinions = start.opinions if isinstance(start, Configuration) else coloring_opinions(g, start)
    steps, cens = run_trials(g, opinions, p, trials, seed, cutoff, n_jobs, backend)
    return summarize(steps, cens)


# -- sweeps ------------------------------------------------------------------------


def _red(opinions: Sequence[int]) -> int:
    return sum(1 for x in opinions if x == 0)


NORMALIZERS: dict[str, Callable[[int, int], float]] = {
    "none": lambda n, r: 1.0,
    "n2": lambda n, r: float(n * n),
    "nlogn": lambda n, r: n * math.log(n),
    "n2logn": lambda n, r: n * n * math.log(n),
    "n4": lambda n, r: float(n**4),
    "2^n": lambda n, r: 2.0**n,
    "2^(n/2)": lambda n, r: 2.0 ** (n / 2),
    "2^(n/5)": lambda n, r: 2.0 ** (n / 5),
    "2^(n/10)": lambda n, r: 2.0 ** (n / 10),
    "r(n-r)": lambda n, r: float(r * (n - r)),
}


def normalize(value: float, normalizer: str, n_vertices: int, red: int) -> float:
    try:
        f = NORMALIZERS[normalizer]
    except KeyError:
        raise ValueError(f"unknown normalizer {normalizer!r}; expected one of {sorted(NORMALIZERS)}") from None
    denom = f(n_vertices, red)
    return value / denom if denom else float("nan")


@dataclass(frozen=True)
class SweepRow:
    """One size of a sweep.  ``n`` is the family size parameter;
    normalizers are evaluated at the vertex count."""

    family: str
    protocol: str
    n: int
    trials: int
    stats: EstimateStats | None
    normalizer: str
    normalized: float
    error: str | None = None

    def record(self) -> dict:
        s = self.stats
        nan = float("nan")
        return {
            "family": self.family,
            "protocol": self.protocol,
            "n": self.n,
            "trials": self.trials,
            "mean": s.mean if s else nan,
            "std": s.std_dev if s else nan,
            "ci95": s.ci95_halfwidth if s else nan,
            "censored": s.censored if s else 0,
            "normalized": self.normalized,
        }


def sweep(
    family: str,
    p: Protocol | str,
    sizes: Sequence[int],
    trials: int,
    seed: int,
    cutoff: int = DEFAULT_CUTOFF,
    normalizer: str = "none",
    coloring: ColoringSpec | None = None,
    n_jobs: int | None = None,
) -> list[SweepRow]:
    """Estimate ``E T`` over ascending ``sizes`` of one family.

    Size ``n`` uses master seed ``(seed, n)``.  A failing size is reported in
    its row's ``error`` field and the sweep continues.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if list(sizes) != sorted(sizes):
        raise ValueError("sizes must be sorted ascending")
    if normalizer not in NORMALIZERS:
        raise ValueError(f"unknown normalizer {normalizer!r}; expected one of {sorted(NORMALIZERS)}")
    proto = as_protocol(p)
    rows = []
    for size in sizes:
        try:
            g = generate(family, size)
            spec = coloring or default_coloring(family, seed)
            opinions = coloring_opinions(g, spec)
            steps, cens = run_trials(g, opinions, proto, trials, (seed, size), cutoff, n_jobs)
            stats = summarize(steps, cens)
            norm = normalize(stats.mean, normalizer, g.n, _red(opinions))
            rows.append(SweepRow(family, proto.value, size, trials, stats, normalizer, norm))
        except Exception as exc:  # noqa: BLE001 - reported per row
            rows.append(SweepRow(family, proto.value, size, trials, None, normalizer, float("nan"), str(exc)))
    return rows


# Desk-scale sizes and growth normalizers for the five-family summary table.
TABLE1 = {
    ("complete", "push"): ((16, 32, 64, 128), "nlogn"),
    ("complete", "pull"): ((6, 8, 10, 12), "2^n"),
    ("complete", "oblivious"): ((16, 32, 64, 128), "r(n-r)"),
    ("cycle", "push"): ((16, 32, 64), "n2"),
    ("cycle", "pull"): ((16, 32, 64), "n2"),
    ("cycle", "oblivious"): ((16, 32, 64), "r(n-r)"),
    ("star", "push"): ((16, 32, 64), "n2logn"),
    ("star", "pull"): ((16, 32, 64), "n2"),
    ("star", "oblivious"): ((16, 32, 64), "r(n-r)"),
    ("double_star", "push"): ((2, 3, 4, 5), "2^(n/5)"),
    ("double_star", "pull"): ((2, 3, 4, 5), "n4"),
    ("double_star", "oblivious"): ((4, 8, 16), "r(n-r)"),
    ("barbell", "push"): ((3, 4, 5, 6), "2^(n/10)"),
    ("barbell", "pull"): ((3, 4, 5, 6), "2^(n/2)"),
    ("barbell", "oblivious"): ((4, 8, 16), "r(n-r)"),
}


def table1(trials: int, seed: int, cutoff: int = DEFAULT_CUTOFF, n_jobs: int | None = None) -> list[SweepRow]:
    rows = []
    for family in FAMILIES:
        for proto in Protocol:
            sizes, norm = TABLE1[(family, proto.value)]
            rows.extend(sweep(family, proto, sizes, trials, seed, cutoff, norm, n_jobs=n_jobs))
    return rows


# -- output ------------------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x) if math.isfinite(x) else ("nan" if math.isnan(x) else repr(x))
    return str(x)


def write_csv(rows: Sequence[SweepRow], out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for row in rows:
        rec = row.record()
        w.writerow([_fmt(rec[k]) for k in CSV_FIELDS])


def write_json(rows: Sequence[SweepRow], out: TextIO) -> None:
    recs = []
    for row in rows:
        rec = {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in row.record().items()}
        if row.error:
            rec["error"] = row.error
        recs.append(rec)
    json.dump(recs, out, indent=2)
    out.write("\n")


def rows_to_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def stats_dict(stats: EstimateStats) -> dict:
    out = asdict(stats)
    out["is_lower_bound"] = stats.is_lower_bound
    return out
