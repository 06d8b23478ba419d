"""Signed Erdos-Renyi ensembles and the distribution of the bifurcation point.

Every pair ``i < j`` draws independent Bernoulli variables ``X ~ p_plus``
and ``Y ~ p_minus`` and gets weight ``X - Y``.  Samples are conditioned on a
connected positive part and a non-empty negative part.  Each sample owns a
random stream spawned from ``(seed, sample_index)``, so results do not depend
on how samples are distributed over workers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .errors import TooFewSamples
from .graph import SignedGraph, is_connected, subgraph_positive
from .treepoly import t_star

THREADS_ENV = "SIGLAP_THREADS"


@dataclass(frozen=True)
class EnsembleConfig:
    n: int
    p_plus: float
    p_minus: float
    samples: int = 1000
    seed: int = 0
    t_star_method: str = "bisection"
    # when set, keep drawing until this many samples are accepted
    target_accepted: int | None = None
    max_draws: int = 1_000_000

    def __post_init__(self):
        for name in ("p_plus", "p_minus"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.t_star_method not in ("polynomial", "bisection"):
            raise ValueError(f"unknown t_star_method {self.t_star_method!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class EnsembleRecord:
    sample: int
    accepted: bool
    reason: str | None  # "positive-disconnected" | "negative-empty"
    t_star: float | None
    n_plus_edges: int
    n_minus_edges: int


@dataclass
class DistributionSummary:
    count: int
    mean: float
    std: float
    normalized: np.ndarray
    values: np.ndarray = field(default_factory=lambda: np.zeros(0))
    qq_normal: list[tuple[float, float]] = field(default_factory=list)
    qq_lognormal: list[tuple[float, float]] = field(default_factory=list)


def _stream(config: EnsembleConfig, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(index,)))


def sample_graph(config: EnsembleConfig, index: int) -> SignedGraph:
    """Deterministic draw number ``index`` of the ensemble."""
    rng = _stream(config, index)
    n = config.n
    iu, ju = np.triu_indices(n, k=1)
    x = rng.random(iu.size) < config.p_plus
    y = rng.random(iu.size) < config.p_minus
    gamma = x.astype(np.int64) - y.astype(np.int64)
    keep = gamma != 0
    edges = [(int(i), int(j), int(w)) for i, j, w in zip(iu[keep], ju[keep], gamma[keep])]
    return SignedGraph(n, edges, exact=True)


def evaluate_sample(config: EnsembleConfig, index: int) -> EnsembleRecord:
    g = sample_graph(config, index)
    n_minus = len(g.negative_edge_ids())
    n_plus = g.n_edges - n_minus
    if not is_connected(subgraph_positive(g)):
        return EnsembleRecord(index, False, "positive-disconnected", None, n_plus, n_minus)
    if n_minus == 0:
        return EnsembleRecord(index, False, "negative-empty", None, n_plus, n_minus)
    ts = t_star(g, method=config.t_star_method).t_star
    return EnsembleRecord(index, True, None, float(ts), n_plus, n_minus)


def _evaluate_chunk(args) -> list[EnsembleRecord]:
    config, indices = args
    return [evaluate_sample(config, i) for i in indices]


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _evaluate(config: EnsembleConfig, indices: Sequence[int], workers: int) -> list[EnsembleRecord]:
    if workers <= 1 or len(indices) < 64:
        return [evaluate_sample(config, i) for i in indices]
    chunk = max(16, len(indices) // (4 * workers))
    parts = [(config, indices[k:k + chunk]) for k in range(0, len(indices), chunk)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        out = []
        for recs in pool.map(_evaluate_chunk, parts):
            out.extend(recs)
    return out


def run_ensemble(config: EnsembleConfig, workers: int | None = None):
    """Evaluate the ensemble; returns ``(records, summary)``.

    Records are sorted by sample index.  With ``target_accepted`` set, draws
    continue in batches until enough samples are accepted (or ``max_draws``).
    """
    workers = default_workers() if workers is None else workers
    if config.target_accepted is None:
        records = _evaluate(config, list(range(config.samples)), workers)
    else:
        records = []
        accepted = 0
        nxt = 0
        batch = max(config.samples, 64)
        while accepted < config.target_accepted and nxt < config.max_draws:
            idx = list(range(nxt, min(nxt + batch, config.max_draws)))
            nxt = idx[-1] + 1
            for rec in _evaluate(config, idx, workers):
                if accepted >= config.target_accepted:
                    break
                records.append(rec)
                accepted += rec.accepted
    records.sort(key=lambda r: r.sample)
    values = [r.t_star for r in records if r.accepted]
    return records, summarize(values)


def summarize(values: Sequence[float], with_qq: bool = True) -> DistributionSummary:
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return DistributionSummary(0, math.nan, math.nan, v, v)
    mean = float(v.mean())
    std = float(v.std()) if v.size > 1 else 0.0
    normalized = (v - mean) / std if std > 0 else v - mean
    summary = DistributionSummary(int(v.size), mean, std, normalized, v)
    if with_qq and v.size >= 10 and std > 0:
        summary.qq_normal = qq_data(summary, "normal")
        if np.all(v > 0):
            summary.qq_lognormal = qq_data(summary, "lognormal")
    return summary


def qq_data(data, reference: str = "normal") -> list[tuple[float, float]]:
    """Pairs (reference quantile, sample quantile) at positions ``(i - 0.5) / n``.

    ``data`` is a :class:`DistributionSummary` or a raw sample array.  For a
    summary the normal reference is compared with the normalized samples and
    the lognormal one with the raw samples, fitted by the mean and standard
    deviation of their logarithms.
    """
    if isinstance(data, DistributionSummary):
        sample = data.normalized if reference == "normal" else data.values
    else:
        sample = np.asarray(data, dtype=float)
    n = sample.size
    if n < 10:
        raise TooFewSamples(f"QQ data needs at least 10 samples, got {n}")
    probs = (np.arange(1, n + 1) - 0.5) / n
    ordered = np.sort(sample)
    if reference == "normal":
        theo = stats.norm.ppf(probs)
    elif reference == "lognormal":
        if np.any(ordered <= 0):
            raise ValueError("lognormal reference needs positive samples")
        logs = np.log(ordered)
        sigma = float(logs.std()) or 1.0
        theo = stats.lognorm.ppf(probs, s=sigma, scale=math.exp(float(logs.mean())))
    else:
        raise ValueError(f"unknown reference {reference!r}")
    return [(float(a), float(b)) for a, b in zip(theo, ordered)]


def qq_r_squared(pairs: Sequence[tuple[float, float]]) -> float:
    x, y = np.asarray(pairs, dtype=float).T
    r = np.corrcoef(x, y)[0, 1]
    return float(r * r)
