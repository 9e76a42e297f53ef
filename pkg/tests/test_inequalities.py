import math
from fractions import Fraction as F

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given

from bellcheck.inequalities import (
    bell_original,
    chsh,
    chsh_placements,
    conditional_chsh,
    conditional_chsh_grid_max,
    conditional_correlation,
    correlation,
    three_axis_sum,
)
from bellcheck.model import JointDistribution
from bellcheck.numeric import PreconditionError

probs = st.fractions(0, 1, max_denominator=20)


def cond_corr_oracle(p_up1, p_down2):
    """Independent responses: E = (P↑₁ − P↓₁)(P↑₂ − P↓₂)."""
    p_up2 = 1 - p_down2
    return (2 * p_up1 - 1) * (2 * p_up2 - 1)


def test_correlation_of_joint():
    j = JointDistribution.from_flat((F(1, 8), F(3, 8), F(3, 8), F(1, 8)))
    assert correlation(j).value == F(-1, 2)


def test_chsh_sign_pattern_and_bound():
    rep = chsh([1, 1, 1, -1])
    assert rep.lhs == 4 and rep.violated
    rep = chsh([1, 1, 1, 1])
    assert rep.lhs == 2 and not rep.violated
    assert chsh_placements([1, 1, 1, 1]) == [2, 2, 2, 2]


def test_chsh_tolerance_in_float_mode():
    assert not chsh([0.5, 0.5, 1.0 + 5e-10, 0.0]).violated
    assert chsh([0.5, 0.5, 1.0 + 5e-9, 0.0]).violated


def test_chsh_needs_four_terms():
    with pytest.raises(ValueError):
        chsh([1, 1, 1])


def test_bell_original():
    rep = bell_original([-0.5, 0.5, -0.5])
    assert math.isclose(rep.lhs, 1.5) and rep.violated
    assert bell_original([F(-1), F(1), F(-1)]).lhs == 3


def test_three_axis_sum():
    j = JointDistribution.from_flat((F(3, 8), F(1, 8), F(1, 8), F(3, 8)))
    rep = three_axis_sum(j, j, j)
    assert rep.lhs == F(9, 8) and rep.violated


def test_conditional_correlation_examples():
    assert conditional_correlation(F(1), F(0)) == 1    # σ₁ = ↑, σ₂ = ↑: equal outcomes
    assert conditional_correlation(F(1), F(1)) == -1   # σ₁ = ↑, σ₂ = ↓: opposite
    assert conditional_correlation(F(1, 2), F(1, 3)) == 0


def test_conditional_correlation_range():
    with pytest.raises(PreconditionError):
        conditional_correlation(F(3, 2), F(0))
    with pytest.raises(PreconditionError):
        conditional_correlation(np.array([0.5, -0.1]), np.array([0.5, 0.5]))


@given(probs, probs)
def test_conditional_correlation_matches_oracle(p, q):
    assert conditional_correlation(p, q) == cond_corr_oracle(p, q)


@given(probs, probs)
def test_conditional_correlation_closed_form(p, q):
    assert conditional_correlation(p, q) == -(2 * p - 1) * (2 * q - 1)


@given(probs, probs, probs, probs)
def test_conditional_chsh_never_exceeds_two(a, b, c, d):
    rep = conditional_chsh(a, b, c, d)
    assert rep.lhs <= 2 and rep.lhs_max_placement <= 2


def test_conditional_chsh_corners_reach_two():
    rep = conditional_chsh(F(1), F(1), F(1), F(1))
    assert rep.lhs == 2


def test_grid_max_small():
    best, arg = conditional_chsh_grid_max(4)
    assert best == 2
    a, a2, b, b2 = (F(x, 4) for x in arg)
    assert conditional_chsh(a, a2, b, b2).lhs == 2


def test_scaled_grid_matches_fractions():
    n = 7
    k = np.arange(n + 1)
    E = conditional_correlation(k[:, None], k[None, :], scale=n)
    for a in range(n + 1):
        for b in range(n + 1):
            assert F(int(E[a, b]), n * n) == conditional_correlation(F(a, n), F(b, n))


def _brute_max_chsh(m):
    from bellcheck.model import joint_distribution

    n1, n2 = len(m.axes1), len(m.axes2)
    E = {k: correlation(joint_distribution(m, k)).value for k in m.kernels}
    best = None
    for i in range(n1):
        for i2 in range(n1):
            for j in range(n2):
                for j2 in range(n2):
                    v = chsh([E[(i, j)], E[(i, j2)], E[(i2, j)], E[(i2, j2)]]).lhs_max_placement
                    best = v if best is None else max(best, v)
    return best


@given(st.integers(0, 2**32), st.booleans())
def test_max_chsh_declared_matches_brute_force(seed, exact):
    import random

    from bellcheck.catalog import random_local_model, random_passive_candidate
    from bellcheck.inequalities import max_chsh_declared

    rng = random.Random(seed)
    m = random_local_model(rng, exact=True) if rng.random() < 0.5 else random_passive_candidate(rng)
    if not exact:
        m = m.to_mode("float")
    value, (i, i2, j, j2) = max_chsh_declared(m)
    brute = _brute_max_chsh(m)
    if exact:
        assert value == brute
    else:
        assert abs(value - brute) < 1e-12
