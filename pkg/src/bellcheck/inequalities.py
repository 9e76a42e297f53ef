"""Correlation coefficients and the Bell-type inequalities.

Sign convention for CHSH: ``|E(μ,ν) + E(μ,ν′) + E(μ′,ν) − E(μ′,ν′)| ≤ 2``.
Every CHSH report also carries the maximum over the four placements of the
minus sign, which does not depend on how the axes were labelled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .model import JointDistribution, SettingPair, joint_distribution
from .numeric import EPS_TOL, Number, PreconditionError, exceeds, format_number, jsonable

__all__ = [
    "CorrelationValue",
    "InequalityReport",
    "correlation",
    "chsh",
    "chsh_placements",
    "bell_original",
    "conditional_correlation",
    "conditional_chsh",
    "conditional_chsh_grid_max",
    "three_axis_sum",
    "max_chsh_declared",
]


@dataclass(frozen=True)
class CorrelationValue:
    value: Number
    settings: SettingPair | None = None

    def __post_init__(self):
        if abs(self.value) > 1 + EPS_TOL:
            raise ValueError(f"correlation {self.value!r} outside [-1, 1]")

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class InequalityReport:
    name: str
    lhs: Number
    bound: Number
    violated: bool
    inputs: tuple = field(default=())
    lhs_max_placement: Number | None = None

    def as_dict(self) -> dict:
        out = {
            "name": self.name,
            "lhs": jsonable(self.lhs),
            "bound": jsonable(self.bound),
            "violated": self.violated,
            "inputs": [jsonable(x.value if isinstance(x, CorrelationValue) else x) for x in self.inputs],
        }
        if self.lhs_max_placement is not None:
            out["lhs_max_placement"] = jsonable(self.lhs_max_placement)
        return out

    def __str__(self) -> str:
        verdict = "VIOLATED" if self.violated else "holds"
        return f"{self.name}: lhs = {format_number(self.lhs)}, bound = {format_number(self.bound)} ({verdict})"


Correlationish = Union[CorrelationValue, Number]


def _value(e: Correlationish) -> Number:
    return e.value if isinstance(e, CorrelationValue) else e


def correlation(j: JointDistribution, s: SettingPair | None = None) -> CorrelationValue:
    uu, ud, du, dd = j.flat()
    return CorrelationValue(uu + dd - ud - du, s)


def chsh_placements(E: Sequence[Correlationish]) -> list[Number]:
    """|sum with the minus sign on term k| for k = 0..3."""
    v = [_value(e) for e in E]
    total = sum(v)
    return [abs(total - 2 * v[k]) for k in range(4)]


def chsh(E: Sequence[Correlationish], tol: float = EPS_TOL) -> InequalityReport:
    """``E`` ordered as (μ,ν), (μ,ν′), (μ′,ν), (μ′,ν′)."""
    if len(E) != 4:
        raise ValueError("CHSH needs four correlation values")
    e1, e2, e3, e4 = (_value(e) for e in E)
    lhs = abs(e1 + e2 + e3 - e4)
    return InequalityReport("chsh", lhs, 2, exceeds(lhs, 2, tol), tuple(E), max(chsh_placements(E)))


def bell_original(E: Sequence[Correlationish], tol: float = EPS_TOL) -> InequalityReport:
    """``E`` ordered as (μ,ν), (μ,ν′), (ν,ν′): ``|E₁ − E₂| − E₃ ≤ 1``."""
    if len(E) != 3:
        raise ValueError("Bell's original inequality needs three correlation values")
    e1, e2, e3 = (_value(e) for e in E)
    lhs = abs(e1 - e2) - e3
    return InequalityReport("bell_original", lhs, 1, exceeds(lhs, 1, tol), tuple(E))


def conditional_correlation(p_mu, p_nu, *, scale=1):
    """Correlation of independent responses given a source cell.

    ``p_mu`` is P(σ₁ = ↑ | λ), ``p_nu`` is P(σ₂ = ↓ | λ). With ``scale=N``
    the inputs are read as numerators over N and the result is N² times the
    correlation, which keeps integer grids exact. Works elementwise on arrays.
    """
    for name, p in (("p_mu", p_mu), ("p_nu", p_nu)):
        if isinstance(p, np.ndarray):
            ok = bool(((p >= 0) & (p <= scale)).all())
        else:
            ok = 0 <= p <= scale
        if not ok:
            raise PreconditionError(f"{name} outside [0, {scale}]")
    q_mu = scale - p_mu
    q_nu = scale - p_nu
    # ↑↑ + ↓↓ − ↑↓ − ↓↑, with P(↑↑) = p_mu·(1 − p_nu) etc.
    return p_mu * q_nu + q_mu * p_nu - p_mu * p_nu - q_mu * q_nu


def conditional_chsh(p_mu, p_mu2, p_nu, p_nu2, tol: float = EPS_TOL) -> InequalityReport:
    e = [
        conditional_correlation(p_mu, p_nu),
        conditional_correlation(p_mu, p_nu2),
        conditional_correlation(p_mu2, p_nu),
        conditional_correlation(p_mu2, p_nu2),
    ]
    rep = chsh(e, tol)
    return InequalityReport("conditional_chsh", rep.lhs, 2, rep.violated, (p_mu, p_mu2, p_nu, p_nu2),
                            rep.lhs_max_placement)


def conditional_chsh_grid_max(n: int) -> tuple[Fraction, tuple[int, int, int, int]]:
    """Exact maximum of the conditional CHSH value on the grid {0, 1/n, …, 1}⁴.

    Integer arithmetic throughout; returns the maximum and the grid
    numerators (P_μ, P_μ′, P_ν, P_ν′) of the first point attaining it.
    """
    k = np.arange(n + 1, dtype=np.int64)
    # E[a, b] = n² · E(a/n, b/n)
    E = conditional_correlation(k[:, None], k[None, :], scale=n)
    best, arg = None, None
    for a in range(n + 1):
        e_ab = E[a][None, :, None]       # (μ, ν)   over axis 1
        e_ab2 = E[a][None, None, :]      # (μ, ν′)  over axis 2
        e_a2b = E[:, :, None]            # (μ′, ν)  axes 0, 1
        e_a2b2 = E[:, None, :]           # (μ′, ν′) axes 0, 2
        vals = np.abs(e_ab + e_ab2 + e_a2b - e_a2b2)
        idx = int(np.argmax(vals))
        v = int(vals.flat[idx])
        if best is None or v > best:
            a2, b, b2 = np.unravel_index(idx, vals.shape)
            best, arg = v, (a, int(a2), int(b), int(b2))
    return Fraction(best, n * n), arg


def max_chsh_declared(model) -> tuple[Number, tuple[int, int, int, int]]:
    """Largest CHSH value (any sign placement) over all declared axis quadruples.

    Returns the value and the first (i, i′, j, j′) attaining it. Exact
    models are evaluated on integer numerators over a common denominator.
    """
    n1, n2 = len(model.axes1), len(model.axes2)
    vals = [[correlation(joint_distribution(model, (i, j))).value for j in range(n2)] for i in range(n1)]
    if model.exact:
        den = math.lcm(*(Fraction(v).denominator for row in vals for v in row))
        E = np.array([[int(v * den) for v in row] for row in vals], dtype=object)
    else:
        den = 1
        E = np.array(vals, dtype=float)
    # T[i, i2, j, j2] = E(i,j) + E(i,j2) + E(i2,j) + E(i2,j2); placing the minus on term k subtracts 2·term
    e_ij = E[:, None, :, None]
    e_ij2 = E[:, None, None, :]
    e_i2j = E[None, :, :, None]
    e_i2j2 = E[None, :, None, :]
    total = e_ij + e_ij2 + e_i2j + e_i2j2
    best = None
    for term in (e_ij, e_ij2, e_i2j, e_i2j2):
        v = np.abs(total - 2 * term)
        best = v if best is None else np.maximum(best, v)
    k = int(np.argmax(best))
    idx = tuple(int(x) for x in np.unravel_index(k, best.shape))
    top = best.flat[k]
    value = Fraction(int(top), den) if model.exact else float(top)
    return value, (idx[0], idx[1], idx[2], idx[3])


def three_axis_sum(
    j_ab: JointDistribution, j_bc: JointDistribution, j_ca: JointDistribution, tol: float = EPS_TOL
) -> InequalityReport:
    """P(↑↑ | A,B) + P(↑↑ | B,C) + P(↑↑ | C,A) ≤ 1."""
    terms = tuple(j.p[0][0] for j in (j_ab, j_bc, j_ca))
    lhs = sum(terms)
    return InequalityReport("three_axis", lhs, 1, exceeds(lhs, 1, tol), terms)
