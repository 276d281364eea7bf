import pytest

from rp3kh import corpus
from rp3kh.algebra import builtin_dyads
from rp3kh.complex import ComplexError, build_complex
from rp3kh.diagram import load
from rp3kh.homology import (
    compute,
    dims_from_json,
    euler_characteristic,
    homology_dims,
    poincare,
    terms_json,
)
from rp3kh.laurent import QUANTUM_CIRCLE, parse_poly

DYADS = builtin_dyads()


@pytest.mark.parametrize("name", ["aps", "a0", "a1", "hf", "hfprime"])
def test_p1knot_goldens(p1knot, goldens, name):
    assert compute(p1knot, DYADS[name]) == goldens[name]


def test_goldens_share_euler_characteristic_when_maps_vanish(goldens):
    assert euler_characteristic(goldens["hf"]) == euler_characteristic(goldens["hfprime"])


def test_terms_json_round_trip(p1knot):
    dims = homology_dims(build_complex(p1knot, DYADS["hf"]))
    assert dims_from_json(terms_json(dims)) == dims


def test_unreduced_p1knot(p1knot):
    p = compute(p1knot, DYADS["aps"], "unreduced")
    assert euler_characteristic(p) == parse_poly("q^-5 + q^-2 + q - q^2")
    assert euler_characteristic(p) == QUANTUM_CIRCLE * euler_characteristic(compute(p1knot, DYADS["aps"]))


def test_reduced_trefoil_has_rank_three(trefoil):
    p = compute(trefoil, DYADS["a0"])
    assert sum(c for _, _, c in p.terms()) == 3
    assert compute(trefoil, DYADS["a1"]) == parse_poly("0")


def test_trivial_diagrams():
    assert compute(corpus.bundled("unknot"), DYADS["a0"]) == parse_poly("1")
    assert compute(corpus.bundled("unknot"), DYADS["aps"], "unreduced") == parse_poly("q^-1 + q")
    line = corpus.bundled("rp1_line")
    assert compute(line, DYADS["hf"], "class1") == parse_poly("q^-1 + 2 + q")


def test_d_squared_failure_raises(tmp_path):
    d = load("tests/fixtures/class1_obstruction.json")
    cx = build_complex(d, DYADS["aps"], "class1", face=0)
    with pytest.raises(ComplexError):
        homology_dims(cx, check=True)


def test_ungraded_mode_collapses_q(p1knot):
    cx = build_complex(p1knot, DYADS["hf"])
    graded = poincare(homology_dims(cx))
    flat = homology_dims(cx, graded=False)
    assert all(q == 0 for _, q in flat)
    totals = {}
    for (i, _), c in graded.coeffs.items():
        totals[i] = totals.get(i, 0) + c
    assert {i: c for (i, _), c in flat.items()} == totals
