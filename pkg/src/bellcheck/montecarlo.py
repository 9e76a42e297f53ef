"""Seeded simulation of repeated EPR runs.

Each scheduled setting gets its own PCG64 substream, derived from
``SeedSequence(seed, spawn_key=(setting_index,))``, so counts do not depend
on the order or parallelism in which settings are sampled. Outcomes are
drawn by inverse CDF over the cells (↑↑, ↑↓, ↓↑, ↓↓).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .inequalities import InequalityReport, chsh
from .model import HiddenVariableModel, SettingPair
from .numeric import PreconditionError
from .quantum import SingletSource

__all__ = [
    "RunSchedule",
    "EmpiricalCorrelation",
    "sample_runs",
    "empirical_correlation",
    "empirical_chsh",
]

Source = Union[HiddenVariableModel, SingletSource]


@dataclass(frozen=True)
class RunSchedule:
    settings: tuple[tuple[SettingPair | tuple[int, int], int], ...]
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "settings", tuple((s, int(n)) for s, n in self.settings))
        if any(n < 1 for _, n in self.settings):
            raise ValueError("trial counts must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class EmpiricalCorrelation:
    e_hat: float
    n: int

    @property
    def std_err(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.e_hat**2) / self.n)


def substream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def _inverse_cdf(probs: Sequence[float], u: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(np.asarray(probs, dtype=float))
    cdf[-1] = 1.0
    return np.searchsorted(cdf, u, side="right")


def _sample_setting(source: Source, s, n: int, rng: np.random.Generator) -> np.ndarray:
    counts = np.zeros(4, dtype=np.int64)
    if isinstance(source, HiddenVariableModel):
        rows = source.kernels[source.resolve(s)]
        lam = _inverse_cdf([float(w) for w in source.prior.weights], rng.random(n))
        u = rng.random(n)
        for k, row in enumerate(rows):
            mask = lam == k
            if mask.any():
                cells = _inverse_cdf([float(x) for x in row], u[mask])
                counts += np.bincount(cells, minlength=4)
    else:
        if not isinstance(s, SettingPair):
            raise PreconditionError("the quantum source needs explicit SettingPair values")
        cells = _inverse_cdf([float(x) for x in source.joint(s).flat()], rng.random(n))
        counts += np.bincount(cells, minlength=4)
    return counts.reshape(2, 2)


def sample_runs(source: Source, schedule: RunSchedule) -> list[np.ndarray]:
    """2×2 count tables ``[a][b]`` (0 = ↑), one per scheduled setting."""
    return [
        _sample_setting(source, s, n, substream(schedule.seed, k))
        for k, (s, n) in enumerate(schedule.settings)
    ]


def empirical_correlation(counts: np.ndarray) -> EmpiricalCorrelation:
    counts = np.asarray(counts)
    n = int(counts.sum())
    if n < 1:
        raise PreconditionError("no trials recorded")
    same = int(counts[0, 0] + counts[1, 1])
    return EmpiricalCorrelation((2 * same - n) / n, n)


def empirical_chsh(counts: Sequence[np.ndarray]) -> tuple[InequalityReport, float]:
    """CHSH on estimated correlations, with standard errors added in quadrature."""
    if len(counts) != 4:
        raise PreconditionError("CHSH needs counts for four setting pairs")
    est = [empirical_correlation(c) for c in counts]
    report = chsh([e.e_hat for e in est])
    return report, math.sqrt(sum(e.std_err**2 for e in est))
