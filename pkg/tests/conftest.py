from fractions import Fraction

import hypothesis.strategies as st
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def exact_weights(draw, min_size=1, max_size=8, allow_zero=True):
    """Rational probability vectors with small denominators."""
    raw = draw(st.lists(st.integers(0 if allow_zero else 1, 9), min_size=min_size, max_size=max_size))
    if sum(raw) == 0:
        raw[0] = 1
    total = sum(raw)
    return tuple(Fraction(r, total) for r in raw)


@st.composite
def angle_deg(draw):
    return draw(st.floats(0.0, 360.0, allow_nan=False, allow_infinity=False))


@st.composite
def unit_vectors(draw):
    """Unit 3-vectors from spherical angles."""
    import math

    theta = draw(st.floats(0.0, math.pi, allow_nan=False))
    phi = draw(st.floats(0.0, 2 * math.pi, allow_nan=False))
    return (math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta))
