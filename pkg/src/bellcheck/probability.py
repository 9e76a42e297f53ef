"""Finite probability spaces.

Sub-sigma-algebras are carried by their generating partitions; on a finite
space this is no loss of generality. Conditional probability given a
partition is the cell-ratio function, with value 0 on null cells.

>>> m = Measure((Fraction(1, 4),) * 4)
>>> part = Partition.from_keys([0, 0, 1, 1])
>>> conditional_probability(m, Event.of(4, {0}), part).values
(Fraction(1, 2), Fraction(1, 2), Fraction(0, 1), Fraction(0, 1))
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

from .numeric import (
    EPS_NORM,
    EPS_TOL,
    DimensionError,
    Number,
    PreconditionError,
    all_exact,
    close,
)

__all__ = [
    "SampleSpace",
    "Event",
    "Measure",
    "Partition",
    "MeasurableFunction",
    "probability",
    "conditional_probability",
    "expectation",
    "indicator",
    "countable_additivity_check",
    "intersection_localization_check",
    "events_equivalent",
]


@dataclass(frozen=True)
class SampleSpace:
    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("sample space needs at least one outcome")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != self.size:
                raise ValueError("labels must have one entry per outcome")
            if len(set(self.labels)) != self.size:
                raise ValueError("labels must be pairwise distinct")

    def full(self) -> "Event":
        return Event(frozenset(range(self.size)), self.size)

    def empty(self) -> "Event":
        return Event(frozenset(), self.size)


@dataclass(frozen=True)
class Event:
    """A subset of ``range(size)``."""

    members: frozenset[int]
    size: int

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        bad = [i for i in self.members if not 0 <= i < self.size]
        if bad:
            raise DimensionError(f"outcome indices {sorted(bad)} outside space of size {self.size}")

    @classmethod
    def of(cls, size: int, members: Iterable[int]) -> "Event":
        return cls(frozenset(members), size)

    def _check(self, other: "Event"):
        if other.size != self.size:
            raise DimensionError(f"events on spaces of size {self.size} and {other.size}")

    def __and__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.members & other.members, self.size)

    def __or__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.members | other.members, self.size)

    def complement(self) -> "Event":
        return Event(frozenset(range(self.size)) - self.members, self.size)

    def isdisjoint(self, other: "Event") -> bool:
        self._check(other)
        return self.members.isdisjoint(other.members)

    def __contains__(self, i: int) -> bool:
        return i in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))


@dataclass(frozen=True)
class Measure:
    weights: tuple[Number, ...]
    space: SampleSpace = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        w = tuple(self.weights)
        object.__setattr__(self, "weights", w)
        if self.space is None:
            object.__setattr__(self, "space", SampleSpace(len(w)))
        if len(w) != self.space.size:
            raise DimensionError("one weight per outcome required")
        if any(x < 0 for x in w):
            raise ValueError("weights must be nonnegative")
        total = sum(w)
        if self.exact:
            if total != 1:
                raise ValueError(f"weights sum to {total}, not 1")
        elif abs(total - 1) > EPS_NORM:
            raise ValueError(f"weights sum to {total!r}, not 1 within {EPS_NORM}")

    @property
    def size(self) -> int:
        return self.space.size

    @property
    def exact(self) -> bool:
        return all_exact(self.weights)

    @property
    def zero(self) -> Number:
        return Fraction(0) if self.exact else 0.0

    @classmethod
    def uniform(cls, n: int, exact: bool = True) -> "Measure":
        w = Fraction(1, n) if exact else 1.0 / n
        return cls((w,) * n)


@dataclass(frozen=True)
class Partition:
    cells: tuple[Event, ...]

    def __post_init__(self):
        cells = tuple(self.cells)
        object.__setattr__(self, "cells", cells)
        if not cells:
            raise ValueError("partition needs at least one cell")
        size = cells[0].size
        seen: set[int] = set()
        for c in cells:
            if c.size != size:
                raise DimensionError("cells live on different spaces")
            if not c.members:
                raise ValueError("partition cells must be nonempty")
            if not seen.isdisjoint(c.members):
                raise ValueError("partition cells overlap")
            seen |= c.members
        if len(seen) != size:
            raise ValueError("partition does not cover the space")
        lookup = [0] * size
        for k, c in enumerate(cells):
            for i in c.members:
                lookup[i] = k
        object.__setattr__(self, "_cell_of", tuple(lookup))

    @property
    def size(self) -> int:
        return self.cells[0].size

    @classmethod
    def from_keys(cls, keys: Sequence[Hashable]) -> "Partition":
        """Group outcomes by key; cells ordered by first appearance."""
        groups: dict[Hashable, list[int]] = {}
        for i, k in enumerate(keys):
            groups.setdefault(k, []).append(i)
        return cls(tuple(Event.of(len(keys), g) for g in groups.values()))

    @classmethod
    def trivial(cls, size: int) -> "Partition":
        return cls((Event.of(size, range(size)),))

    @classmethod
    def discrete(cls, size: int) -> "Partition":
        return cls(tuple(Event.of(size, [i]) for i in range(size)))

    def cell_of(self, i: int) -> int:
        return self._cell_of[i]  # type: ignore[attr-defined]

    def is_measurable(self, event: Event) -> bool:
        """True iff ``event`` is a union of cells."""
        return all(c.members <= event.members or c.isdisjoint(event) for c in self.cells)


@dataclass(frozen=True)
class MeasurableFunction:
    values: tuple[Number, ...]
    constant_on: Partition

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != self.constant_on.size:
            raise DimensionError("one value per outcome required")
        for c in self.constant_on.cells:
            vals = {self.values[i] for i in c.members}
            if len(vals) > 1:
                raise ValueError(f"function not constant on cell {sorted(c.members)}")

    def __getitem__(self, i: int) -> Number:
        return self.values[i]

    def on_cell(self, k: int) -> Number:
        return self.values[min(self.constant_on.cells[k].members)]


def _check_event(m: Measure, a: Event):
    if a.size != m.size:
        raise DimensionError(f"event on space of size {a.size}, measure on {m.size}")


def _check_partition(m: Measure, part: Partition):
    if part.size != m.size:
        raise DimensionError(f"partition on space of size {part.size}, measure on {m.size}")


def probability(m: Measure, a: Event) -> Number:
    _check_event(m, a)
    return sum((m.weights[i] for i in a.members), m.zero)


def indicator(a: Event, part: Partition | None = None) -> MeasurableFunction:
    """Indicator of ``a`` as a function measurable w.r.t. ``part`` (default: discrete)."""
    part = part or Partition.discrete(a.size)
    one, zero = Fraction(1), Fraction(0)
    return MeasurableFunction(tuple(one if i in a else zero for i in range(a.size)), part)


def conditional_probability(m: Measure, a: Event, part: Partition) -> MeasurableFunction:
    _check_event(m, a)
    _check_partition(m, part)
    values: list[Number] = [m.zero] * m.size
    for cell in part.cells:
        pc = probability(m, cell)
        if pc == 0:
            continue  # null cell: value 0 by convention
        v = probability(m, a & cell) / pc
        for i in cell.members:
            values[i] = v
    return MeasurableFunction(tuple(values), part)


def expectation(m: Measure, f: MeasurableFunction) -> Number:
    if len(f.values) != m.size:
        raise DimensionError(f"function on space of size {len(f.values)}, measure on {m.size}")
    return sum((v * w for v, w in zip(f.values, m.weights)), m.zero)


def _null_mask(m: Measure, part: Partition) -> list[bool]:
    null = [False] * m.size
    for cell in part.cells:
        if probability(m, cell) == 0:
            for i in cell.members:
                null[i] = True
    return null


def countable_additivity_check(
    m: Measure, parts: Sequence[Event], partn: Partition, tol: float = EPS_TOL
) -> bool:
    """Conditional probability of a disjoint union equals the pointwise sum."""
    for i, a in enumerate(parts):
        _check_event(m, a)
        for b in parts[i + 1:]:
            if not a.isdisjoint(b):
                raise PreconditionError("events are not pairwise disjoint")
    union = Event.of(m.size, ())
    for a in parts:
        union = union | a
    lhs = conditional_probability(m, union, partn).values
    rhs = [m.zero] * m.size
    for a in parts:
        for i, v in enumerate(conditional_probability(m, a, partn).values):
            rhs[i] += v
    return all(close(x, y, tol) for x, y in zip(lhs, rhs))


def intersection_localization_check(
    m: Measure, a: Event, cell_event: Event, part: Partition, tol: float = EPS_TOL
) -> bool:
    """P(a ∩ S | part) equals P(a | part) inside S and 0 outside, for part-measurable S."""
    _check_event(m, cell_event)
    if not part.is_measurable(cell_event):
        raise PreconditionError("cell_event is not a union of partition cells")
    lhs = conditional_probability(m, a & cell_event, part).values
    base = conditional_probability(m, a, part).values
    for i in range(m.size):
        want = base[i] if i in cell_event else 0
        if not close(lhs[i], want, tol):
            return False
    return True


def events_equivalent(m: Measure, a: Event, b: Event, tol: float = EPS_TOL) -> bool:
    """P(a ∩ b) = P(a) = P(b)."""
    pab = probability(m, a & b)
    pa = probability(m, a)
    pb = probability(m, b)
    return close(pab, pa, tol) and close(pa, pb, tol)
