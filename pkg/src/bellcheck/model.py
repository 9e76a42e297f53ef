"""Two-station EPR experiments as finite hidden-variable models.

A model is a prior over source outcomes λ together with, for every declared
pair of detector axes (μ at station 1, ν at station 2) and every λ, a
distribution over the four joint outcomes in the fixed order
(↑↑, ↑↓, ↓↑, ↓↓). Kernels may depend on both axes; locality is something
the checkers in :mod:`bellcheck.locality` test, not something the
representation assumes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

from .numeric import (
    EPS_AXIS,
    EPS_NORM,
    EPS_TOL,
    Number,
    PreconditionError,
    all_exact,
    close,
    convert,
)
from .probability import Event, Measure, Partition, SampleSpace

__all__ = [
    "Spin",
    "UP",
    "DOWN",
    "OUTCOMES",
    "Axis",
    "SettingPair",
    "JointDistribution",
    "HiddenVariableModel",
    "MissingKernelError",
    "EnlargedSpace",
    "enlarged_space",
    "joint_distribution",
    "marginal",
    "anticorrelation_check",
    "mixture",
]


class Spin(IntEnum):
    UP = 1
    DOWN = -1

    @property
    def index(self) -> int:
        return 0 if self is Spin.UP else 1

    @property
    def arrow(self) -> str:
        return "↑" if self is Spin.UP else "↓"

    def flip(self) -> "Spin":
        return Spin(-int(self))


UP, DOWN = Spin.UP, Spin.DOWN
# canonical cell order (↑↑, ↑↓, ↓↑, ↓↓)
OUTCOMES: tuple[tuple[Spin, Spin], ...] = ((UP, UP), (UP, DOWN), (DOWN, UP), (DOWN, DOWN))


class MissingKernelError(LookupError):
    """No kernel is declared for the requested setting pair."""


@dataclass(frozen=True)
class Axis:
    direction: tuple[float, float, float]

    def __post_init__(self):
        d = tuple(float(x) for x in self.direction)
        if len(d) != 3:
            raise ValueError("axis direction must be a 3-vector")
        norm = math.sqrt(sum(x * x for x in d))
        if abs(norm - 1.0) > EPS_AXIS:
            raise PreconditionError(f"axis {d} has norm {norm!r}, expected 1")
        object.__setattr__(self, "direction", d)

    @classmethod
    def from_angle(cls, degrees: float) -> "Axis":
        """Unit vector at ``degrees`` from +z, in the xz-plane."""
        t = math.radians(degrees)
        return cls((math.sin(t), 0.0, math.cos(t)))

    @classmethod
    def normalized(cls, v: Sequence[float]) -> "Axis":
        n = math.sqrt(sum(float(x) ** 2 for x in v))
        return cls(tuple(float(x) / n for x in v))

    def dot(self, other: "Axis") -> float:
        return sum(a * b for a, b in zip(self.direction, other.direction))

    def same_as(self, other: "Axis") -> bool:
        return self.dot(other) >= 1.0 - EPS_AXIS


@dataclass(frozen=True)
class SettingPair:
    mu: Axis
    nu: Axis


@dataclass(frozen=True)
class JointDistribution:
    """2×2 outcome distribution, ``p[a][b]`` with index 0 = ↑, 1 = ↓."""

    p: tuple[tuple[Number, Number], tuple[Number, Number]]

    def __post_init__(self):
        p = tuple(tuple(row) for row in self.p)
        if len(p) != 2 or any(len(r) != 2 for r in p):
            raise ValueError("joint distribution must be 2x2")
        object.__setattr__(self, "p", p)
        flat = self.flat()
        if any(x < 0 for x in flat):
            raise ValueError(f"negative entry in joint distribution {flat}")
        total = sum(flat)
        if all_exact(flat) and total != 1:
            raise ValueError(f"joint distribution sums to {total}")
        if abs(total - 1) > EPS_NORM:
            raise ValueError(f"joint distribution sums to {total!r}")

    @classmethod
    def from_flat(cls, cells: Sequence[Number]) -> "JointDistribution":
        uu, ud, du, dd = cells
        return cls(((uu, ud), (du, dd)))

    def flat(self) -> tuple[Number, Number, Number, Number]:
        (uu, ud), (du, dd) = self.p
        return uu, ud, du, dd

    def __call__(self, a: Spin, b: Spin) -> Number:
        return self.p[Spin(a).index][Spin(b).index]


Kernel = tuple[Number, Number, Number, Number]
SettingKey = Union[SettingPair, tuple[int, int]]


def _check_row(row: Sequence[Number], where: str) -> Kernel:
    row = tuple(row)
    if len(row) != 4:
        raise ValueError(f"{where}: kernel row needs 4 probabilities, got {len(row)}")
    if any(x < 0 for x in row):
        raise ValueError(f"{where}: negative probability in {row}")
    total = sum(row)
    if all_exact(row):
        if total != 1:
            raise ValueError(f"{where}: kernel row sums to {total}")
    elif abs(total - 1) > EPS_NORM:
        raise ValueError(f"{where}: kernel row sums to {total!r}")
    return row


@dataclass(frozen=True)
class HiddenVariableModel:
    """Prior over λ plus setting-indexed response kernels.

    ``kernels[(i, j)][lam]`` is the (↑↑, ↑↓, ↓↑, ↓↓) distribution when
    station 1 uses ``axes1[i]`` and station 2 uses ``axes2[j]``.
    """

    axes1: tuple[Axis, ...]
    axes2: tuple[Axis, ...]
    prior: Measure
    kernels: Mapping[tuple[int, int], tuple[Kernel, ...]]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "axes1", tuple(self.axes1))
        object.__setattr__(self, "axes2", tuple(self.axes2))
        if not self.axes1 or not self.axes2:
            raise ValueError("each station needs at least one declared axis")
        if not isinstance(self.prior, Measure):
            object.__setattr__(self, "prior", Measure(tuple(self.prior)))
        n = self.prior.size
        kernels: dict[tuple[int, int], tuple[Kernel, ...]] = {}
        for i in range(len(self.axes1)):
            for j in range(len(self.axes2)):
                if (i, j) not in self.kernels:
                    raise MissingKernelError(f"kernel missing for axis pair ({i}, {j})")
                rows = tuple(self.kernels[(i, j)])
                if len(rows) != n:
                    raise ValueError(f"kernel ({i}, {j}) has {len(rows)} rows, expected {n}")
                kernels[(i, j)] = tuple(
                    _check_row(r, f"kernel[{i}][{j}][{lam}]") for lam, r in enumerate(rows)
                )
        extra = set(self.kernels) - set(kernels)
        if extra:
            raise ValueError(f"kernels declared for undeclared axis pairs {sorted(extra)}")
        object.__setattr__(self, "kernels", kernels)

    @property
    def n_lambda(self) -> int:
        return self.prior.size

    @property
    def lambda_space(self) -> SampleSpace:
        return self.prior.space

    @property
    def exact(self) -> bool:
        return self.prior.exact and all(all_exact(r) for rows in self.kernels.values() for r in rows)

    @property
    def mode(self) -> str:
        return "exact" if self.exact else "float"

    def index1(self, axis: Axis) -> int | None:
        return next((i for i, a in enumerate(self.axes1) if a.same_as(axis)), None)

    def index2(self, axis: Axis) -> int | None:
        return next((j for j, a in enumerate(self.axes2) if a.same_as(axis)), None)

    def resolve(self, s: SettingKey) -> tuple[int, int]:
        if isinstance(s, SettingPair):
            i, j = self.index1(s.mu), self.index2(s.nu)
            if i is None or j is None:
                raise MissingKernelError(f"setting {s.mu.direction} / {s.nu.direction} not declared")
            return i, j
        i, j = s
        if not (0 <= i < len(self.axes1) and 0 <= j < len(self.axes2)):
            raise MissingKernelError(f"axis indices ({i}, {j}) not declared")
        return i, j

    def setting(self, i: int, j: int) -> SettingPair:
        return SettingPair(self.axes1[i], self.axes2[j])

    def kernel(self, s: SettingKey, lam: int) -> Kernel:
        return self.kernels[self.resolve(s)][lam]

    def shared_axes(self) -> list[Axis]:
        """Axes declared at both stations, in station-1 order."""
        return [a for a in self.axes1 if self.index2(a) is not None]

    def to_mode(self, mode: str) -> "HiddenVariableModel":
        prior = Measure(tuple(convert(w, mode) for w in self.prior.weights))
        kernels = {
            k: tuple(tuple(convert(x, mode) for x in r) for r in rows) for k, rows in self.kernels.items()
        }
        return HiddenVariableModel(self.axes1, self.axes2, prior, kernels, self.name)


class EnlargedSpace(NamedTuple):
    """Outcomes (λ, a, b) at index ``4λ + 2·a.index + b.index``."""

    space: SampleSpace
    measure: Measure
    source: Partition
    station1: Partition
    station2: Partition

    @property
    def n_lambda(self) -> int:
        return self.space.size // 4

    @staticmethod
    def index(lam: int, a: Spin, b: Spin) -> int:
        return 4 * lam + 2 * Spin(a).index + Spin(b).index

    def station1_event(self, a: Spin) -> Event:
        return Event.of(self.space.size, (self.index(l, a, b) for l in range(self.n_lambda) for b in (UP, DOWN)))

    def station2_event(self, b: Spin) -> Event:
        return Event.of(self.space.size, (self.index(l, a, b) for l in range(self.n_lambda) for a in (UP, DOWN)))

    def source_event(self, lams: Iterable[int]) -> Event:
        """Cylinder event {λ ∈ lams} × all detector outcomes."""
        return Event.of(self.space.size, (4 * l + k for l in lams for k in range(4)))


def enlarged_space(model: HiddenVariableModel, s: SettingKey) -> EnlargedSpace:
    key = model.resolve(s)
    rows = model.kernels[key]
    weights = []
    labels = []
    for lam, (w, row) in enumerate(zip(model.prior.weights, rows)):
        for (a, b), q in zip(OUTCOMES, row):
            weights.append(w * q)
            labels.append(f"{lam}{a.arrow}{b.arrow}")
    space = SampleSpace(len(weights), tuple(labels))
    keys_src = [k // 4 for k in range(space.size)]
    keys_1 = [(k // 2) % 2 for k in range(space.size)]
    keys_2 = [k % 2 for k in range(space.size)]
    if not model.exact:
        # float products may drift by an ulp; rescale once so the measure validates
        total = sum(weights)
        weights = [w / total for w in weights]
    return EnlargedSpace(
        space,
        Measure(tuple(weights), space),
        Partition.from_keys(keys_src),
        Partition.from_keys(keys_1),
        Partition.from_keys(keys_2),
    )


def joint_distribution(model: HiddenVariableModel, s: SettingKey) -> JointDistribution:
    rows = model.kernels[model.resolve(s)]
    zero = model.prior.zero
    cells = [zero] * 4
    for w, row in zip(model.prior.weights, rows):
        for k in range(4):
            cells[k] += w * row[k]
    return JointDistribution.from_flat(cells)


def marginal(j: JointDistribution, station: int) -> tuple[Number, Number]:
    """(P(↑), P(↓)) at station 1 (row sums) or station 2 (column sums)."""
    (uu, ud), (du, dd) = j.p
    if station == 1:
        return uu + ud, du + dd
    if station == 2:
        return uu + du, ud + dd
    raise ValueError(f"station must be 1 or 2, got {station!r}")


def anticorrelation_check(
    model: HiddenVariableModel, axes: Sequence[Axis] | None = None, tol: float = EPS_TOL
) -> bool:
    """Equal axes at both stations always give opposite outcomes."""
    axes = model.shared_axes() if axes is None else axes
    for ax in axes:
        j = joint_distribution(model, SettingPair(ax, ax))
        _, ud, du, _ = j.flat()
        if not close(ud + du, 1, tol):
            return False
    return True


def mixture(m1: HiddenVariableModel, m2: HiddenVariableModel, w: Number) -> HiddenVariableModel:
    """Prior-mixture ``w·m1 + (1−w)·m2`` on the disjoint union of their λ spaces."""
    if len(m1.axes1) != len(m2.axes1) or len(m1.axes2) != len(m2.axes2):
        raise ValueError("models must declare the same axes")
    if not all(a.same_as(b) for a, b in zip(m1.axes1 + m1.axes2, m2.axes1 + m2.axes2)):
        raise ValueError("models must declare the same axes")
    prior = tuple(w * x for x in m1.prior.weights) + tuple((1 - w) * x for x in m2.prior.weights)
    kernels = {k: m1.kernels[k] + m2.kernels[k] for k in m1.kernels}
    return HiddenVariableModel(m1.axes1, m1.axes2, Measure(prior), kernels)


def product_kernel(p1_up: Number, p2_up: Number) -> Kernel:
    """Kernel of independent responses with P(↑) = p1_up at 1 and p2_up at 2."""
    q1, q2 = 1 - p1_up, 1 - p2_up
    return (p1_up * p2_up, p1_up * q2, q1 * p2_up, q1 * q2)


def point_kernel(a: Spin, b: Spin, exact: bool = True) -> Kernel:
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    return tuple(one if (x, y) == (a, b) else zero for x, y in OUTCOMES)  # type: ignore[return-value]
