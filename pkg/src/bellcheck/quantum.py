"""Spin singlet reference: closed form and an independent density-matrix path."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Axis, JointDistribution, SettingPair
from .numeric import EPS_AXIS, PreconditionError

__all__ = [
    "QuantumJoint",
    "SingletSource",
    "SINGLET",
    "singlet_joint",
    "density_matrix_oracle",
    "chsh_optimal_axes",
]


@dataclass(frozen=True)
class QuantumJoint(JointDistribution):
    settings: SettingPair | None = None


def _check(s: SettingPair):
    for ax in (s.mu, s.nu):
        if not isinstance(ax, Axis):
            raise PreconditionError("settings must be Axis values")
        if abs(math.sqrt(ax.dot(ax)) - 1.0) > EPS_AXIS:
            raise PreconditionError(f"axis {ax.direction} is not a unit vector")


def singlet_joint(s: SettingPair) -> QuantumJoint:
    """p(a, b) = (1 − a·b·(μ·ν)) / 4 for a, b ∈ {+1, −1}."""
    _check(s)
    c = max(-1.0, min(1.0, s.mu.dot(s.nu)))
    same = (1.0 - c) / 4.0
    diff = (1.0 + c) / 4.0
    return QuantumJoint(((same, diff), (diff, same)), s)


_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
# (|↑↓⟩ − |↓↑⟩)/√2 in the basis |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩
_PSI_MINUS = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)


def _projector(axis: Axis, sign: int) -> np.ndarray:
    n_sigma = sum(c * p for c, p in zip(axis.direction, _PAULI))
    return (np.eye(2, dtype=complex) + sign * n_sigma) / 2


def density_matrix_oracle(s: SettingPair) -> QuantumJoint:
    """⟨ψ⁻| Π_a^μ ⊗ Π_b^ν |ψ⁻⟩ by explicit 4×4 linear algebra."""
    _check(s)
    rho = np.outer(_PSI_MINUS, _PSI_MINUS.conj())
    p = [[0.0, 0.0], [0.0, 0.0]]
    for ia, a in enumerate((1, -1)):
        for ib, b in enumerate((1, -1)):
            op = np.kron(_projector(s.mu, a), _projector(s.nu, b))
            p[ia][ib] = max(0.0, float(np.trace(rho @ op).real))
    return QuantumJoint((tuple(p[0]), tuple(p[1])), s)


class SingletSource:
    """Sampling source for :mod:`bellcheck.montecarlo` backed by the closed form."""

    name = "singlet"

    def joint(self, s: SettingPair) -> QuantumJoint:
        return singlet_joint(s)

    def __repr__(self) -> str:
        return "SINGLET"


SINGLET = SingletSource()


def chsh_optimal_axes() -> tuple[Axis, Axis, Axis, Axis]:
    """(μ, μ′, ν, ν′) in the xz-plane at 90°, 0°, 45°, 135° from +z.

    With this labelling the minus sign of the CHSH sum falls on E(μ′, ν′),
    so the standard pattern itself reaches 2√2.
    """
    return (Axis.from_angle(90.0), Axis.from_angle(0.0), Axis.from_angle(45.0), Axis.from_angle(135.0))
