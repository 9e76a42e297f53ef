from fractions import Fraction as F

import hypothesis.strategies as st
import pytest
from hypothesis import given

from bellcheck.numeric import DimensionError, PreconditionError
from bellcheck.probability import (
    Event,
    MeasurableFunction,
    Measure,
    Partition,
    SampleSpace,
    conditional_probability,
    countable_additivity_check,
    events_equivalent,
    expectation,
    indicator,
    intersection_localization_check,
    probability,
)

from conftest import exact_weights


def brute_conditional(weights, members, keys):
    """Oracle: P(A | cell(ω)) by direct summation over a key list."""
    out = []
    for w_key in keys:
        cell = [i for i, k in enumerate(keys) if k == w_key]
        pc = sum(weights[i] for i in cell)
        pa = sum(weights[i] for i in cell if i in members)
        out.append(pa / pc if pc else 0)
    return out


def test_uniform_four_point_conditional():
    m = Measure.uniform(4)
    part = Partition.from_keys([0, 0, 1, 1])
    c = conditional_probability(m, Event.of(4, {0}), part)
    assert c.values == (F(1, 2), F(1, 2), F(0), F(0))


def test_null_cell_gets_zero():
    m = Measure((F(1, 2), F(1, 2), F(0), F(0)))
    part = Partition.from_keys([0, 0, 1, 1])
    c = conditional_probability(m, Event.of(4, {2}), part)
    assert c.values[2] == 0 and c.values[3] == 0


def test_trivial_and_discrete_partitions():
    m = Measure((F(1, 6), F(1, 3), F(1, 2)))
    a = Event.of(3, {1, 2})
    triv = conditional_probability(m, a, Partition.trivial(3))
    assert triv.values == (F(5, 6),) * 3
    disc = conditional_probability(m, a, Partition.discrete(3))
    assert disc.values == (0, 1, 1)


def test_measure_validation():
    with pytest.raises(ValueError):
        Measure((F(1, 2), F(1, 3)))
    with pytest.raises(ValueError):
        Measure((F(3, 2), F(-1, 2)))
    Measure((0.1,) * 10)  # float rounding within tolerance


def test_dimension_errors():
    m = Measure.uniform(4)
    with pytest.raises(DimensionError):
        probability(m, Event.of(3, {0}))
    with pytest.raises(DimensionError):
        conditional_probability(m, Event.of(4, {0}), Partition.trivial(5))
    with pytest.raises(DimensionError):
        Event.of(3, {0}) & Event.of(4, {0})


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition((Event.of(3, {0, 1}), Event.of(3, {1, 2})))
    with pytest.raises(ValueError):
        Partition((Event.of(3, {0}), Event.of(3, {1})))


def test_measurable_function_must_be_constant_on_cells():
    part = Partition.from_keys([0, 0, 1])
    MeasurableFunction((1, 1, 2), part)
    with pytest.raises(ValueError):
        MeasurableFunction((1, 2, 2), part)


def test_indicator_expectation_is_probability():
    m = Measure((F(1, 8), F(3, 8), F(1, 2)))
    a = Event.of(3, {0, 2})
    assert expectation(m, indicator(a)) == probability(m, a) == F(5, 8)


def test_countable_additivity_rejects_overlap():
    m = Measure.uniform(3)
    with pytest.raises(PreconditionError):
        countable_additivity_check(m, [Event.of(3, {0, 1}), Event.of(3, {1})], Partition.trivial(3))


def test_localization_rejects_non_measurable():
    m = Measure.uniform(4)
    part = Partition.from_keys([0, 0, 1, 1])
    with pytest.raises(PreconditionError):
        intersection_localization_check(m, Event.of(4, {0}), Event.of(4, {1, 2}), part)


def test_events_equivalent_up_to_null_sets():
    m = Measure((F(1, 2), F(1, 2), F(0)))
    assert events_equivalent(m, Event.of(3, {0}), Event.of(3, {0, 2}))
    assert not events_equivalent(m, Event.of(3, {0}), Event.of(3, {1}))


def test_sample_space_events():
    s = SampleSpace(3)
    assert len(s.full()) == 3 and len(s.empty()) == 0


@st.composite
def space_event_partition(draw):
    w = draw(exact_weights(min_size=1, max_size=9))
    n = len(w)
    members = frozenset(draw(st.sets(st.integers(0, n - 1))))
    keys = draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))
    return w, members, keys


@given(space_event_partition())
def test_conditional_matches_brute_force(data):
    w, members, keys = data
    c = conditional_probability(Measure(w), Event.of(len(w), members), Partition.from_keys(keys))
    assert list(c.values) == brute_conditional(w, members, keys)


@given(space_event_partition())
def test_tower_property(data):
    w, members, keys = data
    m = Measure(w)
    a = Event.of(len(w), members)
    c = conditional_probability(m, a, Partition.from_keys(keys))
    assert expectation(m, c) == probability(m, a)


@given(space_event_partition())
def test_conditional_in_unit_interval(data):
    w, members, keys = data
    c = conditional_probability(Measure(w), Event.of(len(w), members), Partition.from_keys(keys))
    assert all(0 <= v <= 1 for v in c.values)


@given(space_event_partition(), st.data())
def test_countable_additivity(data, draw):
    w, _, keys = data
    n = len(w)
    labels = draw.draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))
    parts = [Event.of(n, {i for i in range(n) if labels[i] == k}) for k in range(3)]
    assert countable_additivity_check(Measure(w), parts, Partition.from_keys(keys))


@given(space_event_partition(), st.data())
def test_intersection_localization(data, draw):
    w, members, keys = data
    n = len(w)
    part = Partition.from_keys(keys)
    chosen = draw.draw(st.sets(st.sampled_from(range(len(part.cells)))))
    s = Event.of(n, {i for k in chosen for i in part.cells[k]})
    assert intersection_localization_check(Measure(w), Event.of(n, members), s, part)


@given(space_event_partition())
def test_float_mode_agrees_with_exact(data):
    w, members, keys = data
    exact = conditional_probability(Measure(w), Event.of(len(w), members), Partition.from_keys(keys))
    flt = conditional_probability(Measure(tuple(float(x) for x in w)), Event.of(len(w), members),
                                  Partition.from_keys(keys))
    assert all(abs(float(a) - b) < 1e-12 for a, b in zip(exact.values, flt.values))
