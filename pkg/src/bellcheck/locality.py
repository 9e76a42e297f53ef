"""Locality conditions on hidden-variable models.

* no-signalling: a station's aggregate marginal ignores the remote axis;
* active locality: the same, resolved per source outcome λ;
* passive locality: per-λ factorization of the joint kernel;
* deterministic passive locality: with perfect anticorrelation, the
  λ-conditional probability of σ₁ = ↑ is an indicator of a source event.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .model import (
    DOWN,
    UP,
    Axis,
    EnlargedSpace,
    HiddenVariableModel,
    MissingKernelError,
    anticorrelation_check,
    enlarged_space,
    joint_distribution,
    marginal,
)
from .numeric import EPS_DET, EPS_TOL, Number, PreconditionError, close, format_number
from .probability import (
    Event,
    Measure,
    SampleSpace,
    conditional_probability,
    events_equivalent,
    expectation,
    indicator,
    probability,
)

__all__ = [
    "Witness",
    "LocalityVerdict",
    "DeterministicEvent",
    "InconsistencyError",
    "check_no_signalling",
    "check_active_locality",
    "check_passive_locality",
    "extract_deterministic_event",
    "check_deterministic_passive_locality",
    "lambda_marginals",
]

CONDITIONS = ("active_locality", "no_signalling", "passive_locality", "deterministic_passive_locality")


class InconsistencyError(ValueError):
    """A λ-conditional probability is strictly between 0 and 1 although the premises hold."""

    def __init__(self, message: str, lam: int, value: Number):
        super().__init__(message)
        self.lam = lam
        self.value = value


@dataclass(frozen=True)
class Witness:
    """Where a condition fails: axis indices, optional λ, and the size of the discrepancy."""

    settings: tuple[tuple[int, int], ...]
    discrepancy: Number
    message: str
    lam: int | None = None

    def as_dict(self) -> dict:
        return {
            "settings": [list(s) for s in self.settings],
            "lambda": self.lam,
            "discrepancy": format_number(self.discrepancy),
            "message": self.message,
        }


@dataclass(frozen=True)
class LocalityVerdict:
    condition: str
    holds: bool
    witness: Witness | None = None
    events: tuple["DeterministicEvent", ...] = field(default=())

    def __post_init__(self):
        if self.condition not in CONDITIONS:
            raise ValueError(f"unknown condition {self.condition!r}")
        if self.holds == (self.witness is not None):
            raise ValueError("witness must be present exactly when the condition fails")

    def __bool__(self) -> bool:
        return self.holds


def _indices(model: HiddenVariableModel, axes: Sequence[Axis] | None, station: int) -> list[int]:
    declared = model.axes1 if station == 1 else model.axes2
    if axes is None:
        return list(range(len(declared)))
    find = model.index1 if station == 1 else model.index2
    out = []
    for ax in axes:
        k = find(ax)
        if k is None:
            raise MissingKernelError(f"axis {ax.direction} not declared at station {station}")
        out.append(k)
    return out


def lambda_marginals(model: HiddenVariableModel, i: int, j: int, station: int) -> list[Number]:
    """P(σ = ↑ | λ) at ``station`` for setting (i, j), one entry per λ."""
    rows = model.kernels[(i, j)]
    if station == 1:
        return [r[0] + r[1] for r in rows]
    return [r[0] + r[2] for r in rows]


def check_no_signalling(
    model: HiddenVariableModel,
    station1_axes: Sequence[Axis] | None = None,
    station2_axes: Sequence[Axis] | None = None,
    tol: float = EPS_TOL,
) -> LocalityVerdict:
    I = _indices(model, station1_axes, 1)
    J = _indices(model, station2_axes, 2)
    for i in I:
        for n, j in enumerate(J):
            p = marginal(joint_distribution(model, (i, j)), 1)[0]
            for j2 in J[n + 1:]:
                q = marginal(joint_distribution(model, (i, j2)), 1)[0]
                if not close(p, q, tol):
                    return LocalityVerdict(
                        "no_signalling",
                        False,
                        Witness(((i, j), (i, j2)), abs(p - q),
                                f"station-1 P(up) at axis {i} is {format_number(p)} with remote axis {j} "
                                f"but {format_number(q)} with remote axis {j2}"),
                    )
    for j in J:
        for n, i in enumerate(I):
            p = marginal(joint_distribution(model, (i, j)), 2)[0]
            for i2 in I[n + 1:]:
                q = marginal(joint_distribution(model, (i2, j)), 2)[0]
                if not close(p, q, tol):
                    return LocalityVerdict(
                        "no_signalling",
                        False,
                        Witness(((i, j), (i2, j)), abs(p - q),
                                f"station-2 P(up) at axis {j} is {format_number(p)} with remote axis {i} "
                                f"but {format_number(q)} with remote axis {i2}"),
                    )
    return LocalityVerdict("no_signalling", True)


def _maximal_coupling(p: Number, q: Number) -> tuple[Number, Number, Number, Number]:
    """Coupling of Bernoulli(p) and Bernoulli(q) that agrees as often as possible."""
    uu = min(p, q)
    dd = min(1 - p, 1 - q)
    return uu, p - uu, q - uu, dd


def _coupled_equivalent(
    prior: Measure, p: Sequence[Number], q: Sequence[Number], tol: float
) -> bool:
    """Are {local outcome = ↑} under the two settings equivalent events?

    The two setting pairs share the source, so they are coupled on
    (λ, outcome, outcome') with λ fixed and the local outcomes maximally
    coupled per λ.
    """
    if all(a == b for a, b in zip(p, q)):
        return True  # the maximal coupling is the identity: the events coincide
    weights = []
    for w, a, b in zip(prior.weights, p, q):
        weights.extend(w * c for c in _maximal_coupling(a, b))
    if not prior.exact:
        total = sum(weights)
        weights = [x / total for x in weights]
    n = len(weights)
    m = Measure(tuple(weights), SampleSpace(n))
    first = Event.of(n, (4 * l + k for l in range(prior.size) for k in (0, 1)))
    second = Event.of(n, (4 * l + k for l in range(prior.size) for k in (0, 2)))
    return events_equivalent(m, first, second, tol)


def check_active_locality(
    model: HiddenVariableModel,
    station1_axes: Sequence[Axis] | None = None,
    station2_axes: Sequence[Axis] | None = None,
    tol: float = EPS_TOL,
) -> LocalityVerdict:
    I = _indices(model, station1_axes, 1)
    J = _indices(model, station2_axes, 2)
    weights = model.prior.weights

    def first_gap(p, q):
        gaps = [(abs(a - b) if w != 0 else 0, lam) for lam, (w, a, b) in enumerate(zip(weights, p, q))]
        gap, lam = max(gaps, key=lambda g: (g[0], -g[1]))
        return lam, gap

    for station, outer, inner in ((1, I, J), (2, J, I)):
        for x in outer:
            for n, y in enumerate(inner):
                s = (x, y) if station == 1 else (y, x)
                p = lambda_marginals(model, *s, station)
                for y2 in inner[n + 1:]:
                    s2 = (x, y2) if station == 1 else (y2, x)
                    q = lambda_marginals(model, *s2, station)
                    if not _coupled_equivalent(model.prior, p, q, tol):
                        lam, gap = first_gap(p, q)
                        return LocalityVerdict(
                            "active_locality",
                            False,
                            Witness((s, s2), gap,
                                    f"station-{station} P(up | lambda={lam}) at axis {x} is "
                                    f"{format_number(p[lam])} with remote axis {y} but "
                                    f"{format_number(q[lam])} with remote axis {y2}",
                                    lam),
                        )
    return LocalityVerdict("active_locality", True)


def check_passive_locality(
    model: HiddenVariableModel,
    station1_axes: Sequence[Axis] | None = None,
    station2_axes: Sequence[Axis] | None = None,
    tol: float = EPS_TOL,
) -> LocalityVerdict:
    I = _indices(model, station1_axes, 1)
    J = _indices(model, station2_axes, 2)
    for i in I:
        for j in J:
            for lam, (w, row) in enumerate(zip(model.prior.weights, model.kernels[(i, j)])):
                if w == 0:
                    continue
                uu, ud, du, dd = row
                m1 = (uu + ud, du + dd)
                m2 = (uu + du, ud + dd)
                for k, cell in enumerate(row):
                    prod = m1[k // 2] * m2[k % 2]
                    if not close(cell, prod, tol):
                        return LocalityVerdict(
                            "passive_locality",
                            False,
                            Witness(((i, j),), abs(cell - prod),
                                    f"at lambda={lam} the joint kernel {[format_number(c) for c in row]} "
                                    f"does not factor into its marginals",
                                    lam),
                        )
    return LocalityVerdict("passive_locality", True)


@dataclass(frozen=True)
class DeterministicEvent:
    """The source event A₁S fixing σ₁ = ↑ at ``axis_index`` (station-1 index)."""

    axis_index: int
    members: frozenset[int]
    probability: Number
    p_up: Number
    conditional: tuple[Number, ...]

    def as_dict(self) -> dict:
        return {
            "axis_index": self.axis_index,
            "members": sorted(self.members),
            "P(A1S)": format_number(self.probability),
            "P(sigma1=up)": format_number(self.p_up),
            "conditional_up_given_lambda": [format_number(c) for c in self.conditional],
        }


VERIFIED_EQUALITIES = (
    "P(A1S) = P(sigma1=up)",
    "E[1_A1S] = P(sigma1=up)",
    "P(sigma1=up and A1S) = P(A1S)",
    "sigma1=up ~ A1S",
    "sigma2=down ~ A1S",
    "sigma1=up ~ sigma2=down",
)


def extract_deterministic_event(
    model: HiddenVariableModel, axis: Axis, tol: float = EPS_TOL, det_tol: float = EPS_DET
) -> DeterministicEvent:
    """Source event equivalent to {σ₁ = ↑} when both stations measure ``axis``.

    Refuses (:class:`PreconditionError` with ``condition`` set) unless passive
    locality and anticorrelation hold at (axis, axis).
    """
    i, j = model.index1(axis), model.index2(axis)
    if i is None or j is None:
        raise PreconditionError("axis is not declared at both stations", "declared_axes")
    if not check_passive_locality(model, [axis], [axis], tol):
        raise PreconditionError(f"passive locality fails at axis pair ({i}, {j})", "passive_locality")
    if not anticorrelation_check(model, [axis], tol):
        raise PreconditionError(f"outcomes are not perfectly anticorrelated at axis pair ({i}, {j})",
                                "anticorrelation")

    es: EnlargedSpace = enlarged_space(model, (i, j))
    up1 = es.station1_event(UP)
    cond = conditional_probability(es.measure, up1, es.source)
    exact = model.exact
    per_lambda = tuple(cond.on_cell(lam) for lam in range(model.n_lambda))
    members = set()
    for lam, (w, c) in enumerate(zip(model.prior.weights, per_lambda)):
        if w == 0:
            continue
        is_one = c == 1 if exact else abs(c - 1) <= det_tol
        is_zero = c == 0 if exact else abs(c) <= det_tol
        if not (is_one or is_zero):
            raise InconsistencyError(
                f"P(sigma1=up | lambda={lam}) = {format_number(c)} is neither 0 nor 1", lam, c)
        if is_one:
            members.add(lam)

    a1s = es.source_event(members)
    p_a1s = probability(es.measure, a1s)
    p_up = probability(es.measure, up1)
    ind = indicator(a1s, es.source)
    checks = {  # keys must match VERIFIED_EQUALITIES
        "P(A1S) = P(sigma1=up)": close(p_a1s, p_up, tol),
        "E[1_A1S] = P(sigma1=up)": close(expectation(es.measure, ind), p_up, tol),
        "P(sigma1=up and A1S) = P(A1S)": close(probability(es.measure, up1 & a1s), p_a1s, tol),
        "sigma1=up ~ A1S": events_equivalent(es.measure, up1, a1s, tol),
        "sigma2=down ~ A1S": events_equivalent(es.measure, es.station2_event(DOWN), a1s, tol),
        "sigma1=up ~ sigma2=down": events_equivalent(es.measure, up1, es.station2_event(DOWN), tol),
    }
    failed = [k for k, ok in checks.items() if not ok]
    if failed:
        raise InconsistencyError(f"extracted event fails {failed}", -1, p_a1s - p_up)
    return DeterministicEvent(i, frozenset(members), p_a1s, p_up, per_lambda)


def check_deterministic_passive_locality(
    model: HiddenVariableModel, axes: Sequence[Axis] | None = None, tol: float = EPS_TOL,
    det_tol: float = EPS_DET,
) -> LocalityVerdict:
    axes = model.shared_axes() if axes is None else list(axes)
    events = []
    for ax in axes:
        try:
            events.append(extract_deterministic_event(model, ax, tol, det_tol))
        except PreconditionError as exc:
            i, j = model.index1(ax), model.index2(ax)
            gap = _conditional_gap(model, i, j) if i is not None and j is not None else 0
            return LocalityVerdict(
                "deterministic_passive_locality", False,
                Witness(((i if i is not None else -1, j if j is not None else -1),), gap,
                        f"refused: {exc.condition}: {exc}; "
                        f"max distance of P(sigma1=up | lambda) from {{0, 1}} is {format_number(gap)}"),
                tuple(events),
            )
        except InconsistencyError as exc:
            i, j = model.index1(ax), model.index2(ax)
            return LocalityVerdict(
                "deterministic_passive_locality", False,
                Witness(((i, j),), exc.value, str(exc), exc.lam if exc.lam >= 0 else None),
                tuple(events),
            )
    return LocalityVerdict("deterministic_passive_locality", True, None, tuple(events))


def _conditional_gap(model: HiddenVariableModel, i: int, j: int) -> Number:
    """Largest distance of a λ-conditional P(σ₁ = ↑) from {0, 1}."""
    vals = [v for w, v in zip(model.prior.weights, lambda_marginals(model, i, j, 1)) if w != 0]
    return max((min(v, 1 - v) for v in vals), default=0)
