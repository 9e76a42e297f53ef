"""Named example models and random model families.

The named models are shipped as TOML files under ``bellcheck/models``;
``scripts/write_models.py`` regenerates them from the functions here.
"""

from __future__ import annotations

import random
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .model import (
    DOWN,
    UP,
    Axis,
    HiddenVariableModel,
    Spin,
    point_kernel,
    product_kernel,
)
from .probability import Measure

__all__ = [
    "two_lambda",
    "all_up",
    "correlated_coin",
    "cancellation",
    "singlet_sampled",
    "deterministic_anticorrelated",
    "NAMED",
    "shipped_path",
    "random_local_model",
    "random_passive_candidate",
]

F = Fraction
Z = Axis.from_angle(0.0)


def _full(axes1, axes2, prior, fn, name) -> HiddenVariableModel:
    kernels = {
        (i, j): tuple(fn(i, j, lam) for lam in range(len(prior)))
        for i in range(len(axes1))
        for j in range(len(axes2))
    }
    return HiddenVariableModel(tuple(axes1), tuple(axes2), Measure(tuple(prior)), kernels, name)


def two_lambda() -> HiddenVariableModel:
    """λ₀ → (↑, ↓), λ₁ → (↓, ↑), equal weights."""
    return _full([Z], [Z], (F(1, 2), F(1, 2)),
                 lambda i, j, lam: point_kernel(UP, DOWN) if lam == 0 else point_kernel(DOWN, UP),
                 "two-lambda")


def all_up() -> HiddenVariableModel:
    return _full([Z], [Z], (F(1, 3), F(2, 3)), lambda i, j, lam: point_kernel(UP, DOWN), "all-up")


def correlated_coin() -> HiddenVariableModel:
    """Opposite outcomes from a shared fair coin that is not part of λ.

    Actively local and perfectly anticorrelated, but not passively local.
    """
    axes = [Axis.from_angle(0.0), Axis.from_angle(90.0)]
    row = (F(0), F(1, 2), F(1, 2), F(0))
    return _full(axes, axes, (F(1),), lambda i, j, lam: row, "correlated-coin")


def cancellation() -> HiddenVariableModel:
    """No-signalling in aggregate, yet station 1 reacts to the remote axis per λ.

    At remote axis 0, λ₀ answers ↑ and λ₁ answers ↓; at remote axis 1 the
    roles swap, so the λ-averaged marginal stays 1/2. Station 2 is a fair coin.
    """
    axes1 = [Axis.from_angle(0.0), Axis.from_angle(90.0)]
    axes2 = [Axis.from_angle(45.0), Axis.from_angle(135.0)]

    def fn(i, j, lam):
        up = F(1) if (lam + j) % 2 == 0 else F(0)
        return product_kernel(up, F(1, 2))

    return _full(axes1, axes2, (F(1, 2), F(1, 2)), fn, "cancellation")


# cos of multiples of 60°, exactly
_COS60 = {0: F(1), 60: F(1, 2), 120: F(-1, 2), 180: F(-1), 240: F(-1, 2), 300: F(1, 2)}


def singlet_sampled() -> HiddenVariableModel:
    """Singlet statistics at 0°, 60°, 120° with a trivial source (one λ)."""
    angles = (0, 60, 120)
    axes = [Axis.from_angle(a) for a in angles]

    def fn(i, j, lam):
        c = _COS60[abs(angles[i] - angles[j]) % 360]
        same, diff = (1 - c) / 4, (1 + c) / 4
        return (same, diff, diff, same)

    return _full(axes, axes, (F(1),), fn, "singlet-sampled")


def deterministic_anticorrelated() -> HiddenVariableModel:
    """Four source outcomes, each fixing ↑/↓ on axes 0°, 120°, 240°; station 2 answers the opposite."""
    axes = [Axis.from_angle(a) for a in (0.0, 120.0, 240.0)]
    plan = [(UP, UP, DOWN), (UP, DOWN, UP), (DOWN, UP, UP), (DOWN, DOWN, UP)]
    prior = (F(1, 8), F(3, 8), F(1, 4), F(1, 4))
    return _full(axes, axes, prior, lambda i, j, lam: point_kernel(plan[lam][i], plan[lam][j].flip()),
                 "deterministic-anticorrelated")


NAMED = {
    "two_lambda": two_lambda,
    "all_up": all_up,
    "correlated_coin": correlated_coin,
    "cancellation": cancellation,
    "singlet_sampled": singlet_sampled,
    "deterministic_anticorrelated": deterministic_anticorrelated,
}


def shipped_path(name: str) -> Path:
    """Path of the shipped TOML file for a named model."""
    return Path(str(resources.files("bellcheck") / "models" / f"{name}.toml"))


def _prior(rng: random.Random, n: int, exact: bool, allow_null: bool = False):
    raw = [rng.randint(0 if allow_null else 1, 8) for _ in range(n)]
    if sum(raw) == 0:
        raw[0] = 1
    total = sum(raw)
    return tuple(F(r, total) if exact else r / total for r in raw)


def random_local_model(
    rng: random.Random,
    n_lambda: int | None = None,
    n_shared: int | None = None,
    n_private: tuple[int, int] | None = None,
    exact: bool = False,
) -> HiddenVariableModel:
    """Product kernels, deterministic and anticorrelated on shared axes.

    Station 1 answers from (λ, its own axis) only, station 2 likewise, so
    the model is actively and passively local by construction. Private
    axes (declared at one station only) get stochastic responses.
    """
    n_lambda = n_lambda or rng.randint(1, 6)
    n_shared = rng.randint(1, 3) if n_shared is None else n_shared
    p1, p2 = n_private if n_private is not None else (rng.randint(0, 2), rng.randint(0, 2))
    if n_shared + p1 < 2 or n_shared + p2 < 2:
        p1, p2 = max(p1, 2 - n_shared), max(p2, 2 - n_shared)
    angles = rng.sample(range(0, 360, 5), n_shared + p1 + p2)
    shared = [Axis.from_angle(a) for a in angles[:n_shared]]
    axes1 = shared + [Axis.from_angle(a) for a in angles[n_shared:n_shared + p1]]
    axes2 = shared + [Axis.from_angle(a) for a in angles[n_shared + p1:]]

    def prob():
        k = rng.randint(0, 8)
        return F(k, 8) if exact else k / 8

    one = F(1) if exact else 1.0
    zero = F(0) if exact else 0.0
    up1 = [[None] * len(axes1) for _ in range(n_lambda)]
    up2 = [[None] * len(axes2) for _ in range(n_lambda)]
    for lam in range(n_lambda):
        for k in range(n_shared):
            a = rng.random() < 0.5
            up1[lam][k] = one if a else zero
            up2[lam][k] = zero if a else one
        for k in range(n_shared, len(axes1)):
            up1[lam][k] = prob()
        for k in range(n_shared, len(axes2)):
            up2[lam][k] = prob()
    prior = _prior(rng, n_lambda, exact)
    return _full(axes1, axes2, prior, lambda i, j, lam: product_kernel(up1[lam][i], up2[lam][j]), "random-local")


def random_passive_candidate(rng: random.Random, n_lambda: int | None = None, n_axes: int | None = None):
    """Exact models with per-λ product kernels that often, not always, anticorrelate.

    Responses may depend on both axes, so active locality is not implied.
    Some λ get zero prior weight. Used to test the implication
    passive locality + anticorrelation ⇒ determinism, after filtering.
    """
    n_lambda = n_lambda or rng.randint(1, 5)
    n_axes = n_axes or rng.randint(1, 3)
    angles = rng.sample(range(0, 360, 5), n_axes)
    axes = [Axis.from_angle(a) for a in angles]
    grid = [F(k, 4) for k in range(5)]
    table = {}
    for i in range(n_axes):
        for j in range(n_axes):
            rows = []
            for lam in range(n_lambda):
                if i == j and rng.random() < 0.85:
                    p = F(rng.randint(0, 1))
                    q = 1 - p
                else:
                    p, q = rng.choice(grid), rng.choice(grid)
                rows.append(product_kernel(p, q))
            table[(i, j)] = tuple(rows)
    prior = _prior(rng, n_lambda, True, allow_null=True)
    return HiddenVariableModel(tuple(axes), tuple(axes), Measure(prior), table, "random-passive")
