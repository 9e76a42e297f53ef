"""Deterministic local strategies and inequality maxima.

The set of local models is the convex hull of deterministic strategies,
and every inequality here is affine in the joint distributions, so the
local maximum is attained at a vertex. Enumerating vertices therefore
certifies the bounds 2 (CHSH), 1 (three-axis sum) and 1 (Bell's original
form, anticorrelated strategies).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .inequalities import bell_original, chsh, correlation, three_axis_sum
from .model import (
    DOWN,
    UP,
    Axis,
    HiddenVariableModel,
    SettingPair,
    Spin,
    joint_distribution,
    point_kernel,
)
from .numeric import Number, format_number
from .probability import Measure
from .quantum import singlet_joint

__all__ = [
    "MAX_AXES",
    "SizeError",
    "SearchFailure",
    "DeterministicStrategy",
    "PolytopeReport",
    "QuantumSearchResult",
    "enumerate_strategies",
    "max_chsh_local",
    "max_chsh_local_vertices",
    "max_three_axis_local",
    "max_bell_original_local",
    "max_chsh_quantum",
]

MAX_AXES = 24


class SizeError(ValueError):
    """Too many axes to enumerate all strategies."""


class SearchFailure(RuntimeError):
    """The quantum axis search stopped below its target."""

    def __init__(self, message: str, best: "QuantumSearchResult"):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class DeterministicStrategy:
    assign1: tuple[Spin, ...]
    assign2: tuple[Spin, ...]

    def E(self, i: int, j: int) -> int:
        return int(self.assign1[i]) * int(self.assign2[j])

    def is_anticorrelated(self, shared: Sequence[tuple[int, int]]) -> bool:
        """b = −a on every (station-1 index, station-2 index) pair in ``shared``."""
        return all(self.assign2[j] == self.assign1[i].flip() for i, j in shared)

    def to_model(self, axes1: Sequence[Axis], axes2: Sequence[Axis], exact: bool = True) -> HiddenVariableModel:
        """The strategy as a model with a single source outcome."""
        kernels = {
            (i, j): (point_kernel(self.assign1[i], self.assign2[j], exact),)
            for i in range(len(axes1))
            for j in range(len(axes2))
        }
        one = Fraction(1) if exact else 1.0
        return HiddenVariableModel(tuple(axes1), tuple(axes2), Measure((one,)), kernels, "vertex")

    def label(self) -> str:
        return "".join(s.arrow for s in self.assign1) + "|" + "".join(s.arrow for s in self.assign2)


@dataclass(frozen=True)
class PolytopeReport:
    inequality: str
    n_strategies: int
    n_admissible: int
    max_lhs: Number
    argmax: DeterministicStrategy
    bound: Number
    bound_match: bool

    def as_dict(self) -> dict:
        return {
            "inequality": self.inequality,
            "n_strategies": self.n_strategies,
            "n_admissible": self.n_admissible,
            "max_lhs": format_number(self.max_lhs),
            "argmax": self.argmax.label(),
            "bound": format_number(self.bound),
            "bound_match": self.bound_match,
        }


def _guard(n1: int, n2: int):
    if n1 < 1 or n2 < 1:
        raise SizeError("each station needs at least one axis")
    if n1 + n2 > MAX_AXES:
        raise SizeError(f"{n1}+{n2} axes exceeds the enumeration guard of {MAX_AXES}")


def enumerate_strategies(n1: int, n2: int) -> Iterator[DeterministicStrategy]:
    """All 2^(n1+n2) assignments, lexicographic with ↑ before ↓."""
    _guard(n1, n2)
    for bits in itertools.product((UP, DOWN), repeat=n1 + n2):
        yield DeterministicStrategy(tuple(bits[:n1]), tuple(bits[n1:]))


def _default_axes(n: int) -> tuple[Axis, ...]:
    return tuple(Axis.from_angle(180.0 * k / n) for k in range(n))


def max_chsh_local_vertices(axes1: Sequence[Axis] | None = None, axes2: Sequence[Axis] | None = None) -> PolytopeReport:
    """CHSH over the 16 vertices of the 2+2 scenario, each evaluated as a model.

    Correlations come from ``joint_distribution`` of the single-λ model in
    exact arithmetic, not from the ±1 shortcut.
    """
    axes1 = tuple(axes1) if axes1 is not None else _default_axes(2)
    axes2 = tuple(axes2) if axes2 is not None else _default_axes(2)
    if len(axes1) != 2 or len(axes2) != 2:
        raise ValueError("CHSH needs two axes per station")
    best = None
    count = 0
    for st in enumerate_strategies(2, 2):
        count += 1
        m = st.to_model(axes1, axes2)
        E = [correlation(joint_distribution(m, s)) for s in ((0, 0), (0, 1), (1, 0), (1, 1))]
        lhs = chsh(E).lhs
        if best is None or lhs > best[0]:
            best = (lhs, st)
    return PolytopeReport("chsh", count, count, best[0], best[1], 2, best[0] == 2)


def _bits(start: int, stop: int, n: int) -> np.ndarray:
    """±1 matrix of strategies start..stop-1; column 0 is the most significant bit, 0 ↦ ↑."""
    idx = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    b = (idx[:, None] >> shifts[None, :]) & 1
    return (1 - 2 * b).astype(np.int64)


def max_chsh_local(n1: int = 2, n2: int = 2, chunk: int = 1 << 15) -> PolytopeReport:
    """Largest CHSH value over all strategies and all axis choices μ, μ′ / ν, ν′.

    With one axis at a station the two CHSH axes coincide there. Integer
    arithmetic; the argmax is the first strategy in enumeration order.
    """
    _guard(n1, n2)
    pairs1 = [(i, k) for i in range(n1) for k in range(n1) if i != k] or [(0, 0)]
    pairs2 = [(j, k) for j in range(n2) for k in range(n2) if j != k] or [(0, 0)]
    n = n1 + n2
    total = 1 << n
    best, best_idx = -1, 0
    for start in range(0, total, chunk):
        S = _bits(start, min(total, start + chunk), n)
        a, b = S[:, :n1], S[:, n1:]
        vals = np.zeros(len(S), dtype=np.int64)
        for i, i2 in pairs1:
            for j, j2 in pairs2:
                v = np.abs(a[:, i] * (b[:, j] + b[:, j2]) + a[:, i2] * (b[:, j] - b[:, j2]))
                np.maximum(vals, v, out=vals)
        k = int(np.argmax(vals))
        if vals[k] > best:
            best, best_idx = int(vals[k]), start + k
    bits = _bits(best_idx, best_idx + 1, n)[0]
    arg = DeterministicStrategy(tuple(Spin(int(x)) for x in bits[:n1]), tuple(Spin(int(x)) for x in bits[n1:]))
    return PolytopeReport("chsh", total, total, best, arg, 2, best == 2)


def max_three_axis_local(axes: Sequence[Axis] | None = None) -> PolytopeReport:
    """Three-axis sum over anticorrelated strategies on three shared axes A, B, C."""
    axes = tuple(axes) if axes is not None else _default_axes(3)
    if len(axes) != 3:
        raise ValueError("three-axis sum needs exactly three axes")
    shared = [(0, 0), (1, 1), (2, 2)]
    best = None
    count = admissible = 0
    for st in enumerate_strategies(3, 3):
        count += 1
        if not st.is_anticorrelated(shared):
            continue
        admissible += 1
        m = st.to_model(axes, axes)
        rep = three_axis_sum(*(joint_distribution(m, s) for s in ((0, 1), (1, 2), (2, 0))))
        if best is None or rep.lhs > best[0]:
            best = (rep.lhs, st)
    return PolytopeReport("three_axis", count, admissible, best[0], best[1], 1, best[0] == 1)


def max_bell_original_local(axes: Sequence[Axis] | None = None) -> PolytopeReport:
    """Bell's original form over the 2+2 vertices with axes (μ, ν) at 1 and (ν, ν′) at 2.

    Admissible strategies are those anticorrelated on the shared axis ν.
    """
    mu, nu, nu2 = tuple(axes) if axes is not None else _default_axes(3)
    axes1, axes2 = (mu, nu), (nu, nu2)
    best = None
    count = admissible = 0
    for st in enumerate_strategies(2, 2):
        count += 1
        if not st.is_anticorrelated([(1, 0)]):
            continue
        admissible += 1
        m = st.to_model(axes1, axes2)
        E = [correlation(joint_distribution(m, s)) for s in ((0, 0), (0, 1), (1, 1))]
        rep = bell_original(E)
        if best is None or rep.lhs > best[0]:
            best = (rep.lhs, st)
    return PolytopeReport("bell_original", count, admissible, best[0], best[1], 1, best[0] == 1)


@dataclass(frozen=True)
class QuantumSearchResult:
    angles: tuple[float, float, float, float]
    grid_lhs: float
    lhs: float

    @property
    def axes(self) -> tuple[Axis, Axis, Axis, Axis]:
        return tuple(Axis.from_angle(a) for a in self.angles)  # type: ignore[return-value]

    def as_dict(self) -> dict:
        return {"angles_deg": list(self.angles), "grid_lhs": self.grid_lhs, "lhs": self.lhs}


TSIRELSON = 2 * math.sqrt(2)


def _quantum_chsh(angles: Sequence[float]) -> float:
    mu, mu2, nu, nu2 = (Axis.from_angle(a) for a in angles)
    E = [correlation(singlet_joint(SettingPair(x, y))) for x, y in ((mu, nu), (mu, nu2), (mu2, nu), (mu2, nu2))]
    return float(chsh(E).lhs)


def max_chsh_quantum(
    grid_step: float = 5.0,
    sweeps: int = 30,
    shrink: float = 0.5,
    equal_angles: bool = False,
    target: float | None = TSIRELSON - 1e-6,
) -> QuantumSearchResult:
    """Coplanar axis search for the singlet CHSH value: grid, then coordinate refinement.

    Angles are (μ, μ′, ν, ν′) in degrees in the xz-plane. ``equal_angles``
    ties ν = μ and ν′ = μ′. Raises :class:`SearchFailure` when the result
    stays below ``target``.
    """
    grid = np.arange(0.0, 360.0, grid_step)
    E = -np.cos(np.radians(grid[:, None] - grid[None, :]))  # E[x, y] for station-1 x, station-2 y
    if equal_angles:
        d = np.diag(E)
        vals = np.abs(d[:, None] + E + E.T - d[None, :])  # (μ, μ′)
        k = int(np.argmax(vals))
        a, a2 = np.unravel_index(k, vals.shape)
        start = (grid[a], grid[a2], grid[a], grid[a2])
        grid_best = float(vals.flat[k])
    else:
        grid_best, start = -1.0, None
        for a in range(len(grid)):
            vals = np.abs(E[a][None, :, None] + E[a][None, None, :] + E[:, :, None] - E[:, None, :])
            k = int(np.argmax(vals))
            if vals.flat[k] > grid_best:
                a2, b, b2 = np.unravel_index(k, vals.shape)
                grid_best, start = float(vals.flat[k]), (grid[a], grid[a2], grid[b], grid[b2])

    def value(x):
        if equal_angles:
            x = (x[0], x[1], x[0], x[1])
        return _quantum_chsh(x)

    x = [float(v) for v in (start[:2] if equal_angles else start)]
    best = value(x)
    step = grid_step
    for _ in range(sweeps):
        improved = False
        for c in range(len(x)):
            for delta in (step, -step):
                cand = list(x)
                cand[c] = (cand[c] + delta) % 360.0
                v = value(cand)
                if v > best + 1e-15:
                    x, best, improved = cand, v, True
        if not improved:
            step *= shrink
    angles = tuple(x + x) if equal_angles else tuple(x)
    result = QuantumSearchResult(angles, grid_best, best)  # type: ignore[arg-type]
    if target is not None and best < target:
        raise SearchFailure(f"search reached {best!r}, below target {target!r}", result)
    return result
