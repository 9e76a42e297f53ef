import random
from fractions import Fraction as F

import pytest
from hypothesis import given
import hypothesis.strategies as st

from bellcheck.catalog import (
    all_up,
    cancellation,
    correlated_coin,
    deterministic_anticorrelated,
    random_local_model,
    random_passive_candidate,
    singlet_sampled,
    two_lambda,
)
from bellcheck.inequalities import chsh, correlation
from bellcheck.locality import (
    InconsistencyError,
    LocalityVerdict,
    Witness,
    check_active_locality,
    check_deterministic_passive_locality,
    check_no_signalling,
    check_passive_locality,
    extract_deterministic_event,
)
from bellcheck.model import (
    UP,
    DOWN,
    Axis,
    HiddenVariableModel,
    MissingKernelError,
    SettingPair,
    anticorrelation_check,
    joint_distribution,
    point_kernel,
    product_kernel,
)
from bellcheck.numeric import PreconditionError
from bellcheck.probability import Measure
from bellcheck.quantum import singlet_joint

A0, A90 = Axis.from_angle(0), Axis.from_angle(90)


def signalling_model():
    """Station-1 marginal flips with the remote axis."""
    k = {(0, 0): (point_kernel(UP, UP),), (0, 1): (point_kernel(DOWN, UP),)}
    return HiddenVariableModel((A0,), (A0, A90), Measure((F(1),)), k, "signalling")


def singlet_model(axes1, axes2):
    k = {(i, j): (singlet_joint(SettingPair(a, b)).flat(),) for i, a in enumerate(axes1) for j, b in enumerate(axes2)}
    return HiddenVariableModel(tuple(axes1), tuple(axes2), Measure((1.0,)), k, "singlet")


def test_verdict_invariant():
    with pytest.raises(ValueError):
        LocalityVerdict("no_signalling", False, None)
    with pytest.raises(ValueError):
        LocalityVerdict("no_signalling", True, Witness(((0, 0),), 0, "x"))
    with pytest.raises(ValueError):
        LocalityVerdict("bogus", True, None)


def test_no_signalling_examples():
    assert check_no_signalling(two_lambda())
    v = check_no_signalling(signalling_model())
    assert not v and v.witness.discrepancy == 1
    assert v.witness.settings == ((0, 0), (0, 1))


def test_singlet_is_no_signalling_at_random_axes():
    rng = random.Random(11)
    for _ in range(20):
        axes = [Axis.from_angle(rng.uniform(0, 360)) for _ in range(4)]
        assert check_no_signalling(singlet_model(axes[:2], axes[2:]))


def test_active_locality_separates_from_no_signalling():
    m = cancellation()
    assert check_no_signalling(m)
    v = check_active_locality(m)
    assert not v
    assert v.witness.lam is not None and v.witness.discrepancy == 1


def test_active_locality_trivial_cases():
    assert check_active_locality(two_lambda())  # one axis per station: vacuous
    assert check_active_locality(random_local_model(random.Random(0), exact=True))
    assert not check_active_locality(signalling_model())


def test_passive_locality_examples():
    assert check_passive_locality(deterministic_anticorrelated())
    v = check_passive_locality(correlated_coin())
    assert not v and v.witness.discrepancy == F(1, 4)


def test_separation_witness_active_without_passive():
    m = correlated_coin()
    assert check_active_locality(m) and anticorrelation_check(m)
    assert not check_passive_locality(m)


def test_singlet_sampled_passive_fails_at_unequal_axes():
    m = singlet_sampled()
    assert check_no_signalling(m)
    assert not check_passive_locality(m, [m.axes1[0]], [m.axes2[1]])


def test_missing_axes_raise():
    with pytest.raises(MissingKernelError):
        check_passive_locality(two_lambda(), [Axis.from_angle(45)], None)


def test_extract_two_lambda():
    ev = extract_deterministic_event(two_lambda(), A0)
    assert ev.members == frozenset({0})
    assert ev.probability == ev.p_up == F(1, 2)


def test_extract_all_up():
    ev = extract_deterministic_event(all_up(), A0)
    assert ev.members == frozenset({0, 1}) and ev.probability == 1


def test_extract_refuses_correlated_coin():
    with pytest.raises(PreconditionError) as exc:
        extract_deterministic_event(correlated_coin(), A0)
    assert exc.value.condition == "passive_locality"


def test_extract_refuses_without_anticorrelation():
    k = {(0, 0): (product_kernel(F(1), F(1)),)}
    m = HiddenVariableModel((A0,), (A0,), Measure((F(1),)), k)
    with pytest.raises(PreconditionError) as exc:
        extract_deterministic_event(m, A0)
    assert exc.value.condition == "anticorrelation"


def test_extract_inconsistency_on_float_drift():
    k = {(0, 0): ((0.0, 1 - 2e-10, 1e-10, 1e-10),)}
    m = HiddenVariableModel((A0,), (A0,), Measure((1.0,)), k)
    ev = extract_deterministic_event(m, A0)  # within det tolerance → accepted as 1
    assert ev.members == frozenset({0})
    k = {(0, 0): (product_kernel(0.5, 0.5),)}
    m = HiddenVariableModel((A0,), (A0,), Measure((1.0,)), k)
    with pytest.raises(PreconditionError):
        extract_deterministic_event(m, A0)  # anticorrelation gate first
    # a loose tolerance lets the gates pass; the interior conditional 1/2 is then flagged
    with pytest.raises(InconsistencyError):
        extract_deterministic_event(m, A0, tol=0.6)


def test_deterministic_passive_locality_examples():
    v = check_deterministic_passive_locality(deterministic_anticorrelated())
    assert v and len(v.events) == 3
    assert check_deterministic_passive_locality(two_lambda(), [])
    v = check_deterministic_passive_locality(singlet_sampled(), singlet_sampled().axes1[:2])
    assert not v and v.witness.discrepancy == F(1, 2)


@given(st.integers(0, 2**32))
def test_theorem_gate_random_local_models(seed):
    rng = random.Random(seed)
    m = random_local_model(rng, exact=True)
    assert check_active_locality(m) and check_passive_locality(m) and anticorrelation_check(m)
    n1, n2 = len(m.axes1), len(m.axes2)
    for _ in range(5):
        i, i2 = rng.randrange(n1), rng.randrange(n1)
        j, j2 = rng.randrange(n2), rng.randrange(n2)
        E = [correlation(joint_distribution(m, s)) for s in ((i, j), (i, j2), (i2, j), (i2, j2))]
        rep = chsh(E)
        assert rep.lhs <= 2 and rep.lhs_max_placement <= 2


@given(st.integers(0, 2**32))
def test_passive_plus_anticorrelation_implies_determinism(seed):
    m = random_passive_candidate(random.Random(seed))
    for ax in m.shared_axes():
        if check_passive_locality(m, [ax], [ax]) and anticorrelation_check(m, [ax]):
            ev = extract_deterministic_event(m, ax)
            for w, c in zip(m.prior.weights, ev.conditional):
                assert w == 0 or c in (0, 1)
            assert ev.probability == ev.p_up
