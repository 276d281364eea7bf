import pytest
from hypothesis import given
from hypothesis import strategies as st

from rp3kh.laurent import Q, Q_INV, QUANTUM_CIRCLE, T, Laurent, format_poly, parse_poly

polys = st.dictionaries(
    st.tuples(st.integers(-4, 4), st.integers(-9, 9)), st.integers(-5, 5), max_size=6
).map(Laurent)


def test_format_examples():
    p = Laurent({(-2, -4): 1, (-1, -2): 1, (0, -1): 1, (0, 0): 1, (1, 1): 1})
    assert format_poly(p) == "t^-2 q^-4 + t^-1 q^-2 + q^-1 + 1 + t q"
    assert format_poly(Laurent()) == "0"
    assert format_poly(Laurent({(0, 2): -1, (0, 0): 1})) == "1 - q^2"
    assert format_poly(Laurent({(3, 0): 2})) == "2 t^3"


@given(polys)
def test_parse_inverts_format(p):
    assert parse_poly(format_poly(p)) == p


@given(polys, polys, polys)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Laurent()


@given(polys, polys)
def test_euler_specialisation_is_a_ring_map(a, b):
    assert (a * b).at_t(-1) == a.at_t(-1) * b.at_t(-1)
    assert (a + b).at_t(-1) == a.at_t(-1) + b.at_t(-1)


def test_constants():
    assert Q * Q_INV == Laurent.const(1)
    assert QUANTUM_CIRCLE == Q + Q_INV
    assert (QUANTUM_CIRCLE ** 2) == Q * Q + Laurent.const(2) + Q_INV * Q_INV
    assert T.at_t(-1) == Laurent.const(-1)


def test_negative_power_rejected():
    with pytest.raises(ValueError):
        Q ** -1
