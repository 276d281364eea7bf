import pytest

from rp3kh import corpus, moves, surface
from rp3kh.algebra import builtin_dyads
from rp3kh.diagram import validate
from rp3kh.homology import compute

DYADS = builtin_dyads()
BASES = ["p1knot", "trefoil", "rp2_walk_0", "rp2_walk_1", "rp2_walk_5", "config_k2_3", "config_k2_2"]
SIGN_CHANGE = {"R2+": (1, 1), "R2-": (-1, -1), "R3": (0, 0), "R4+": (0, 0), "R4-": (0, 0), "R5": (0, 0)}


def _signs(d):
    return d.crossing_signs() if d.n else (0, 0)


def generated_pairs(per_move=2):
    out = []
    for name in BASES:
        d = corpus.bundled(name)
        for mv in moves.MOVES:
            taken = 0
            for site in moves.sites(d, mv):
                if taken == per_move:
                    break
                try:
                    r = moves.apply_move(d, mv, site)
                except moves.MoveError:
                    continue
                out.append((name, mv, site, d, r))
                taken += 1
    return out


PAIRS = generated_pairs()


def test_every_move_kind_is_exercised():
    assert {mv for _, mv, *_ in PAIRS} == set(moves.MOVES)
    assert len(PAIRS) >= 20


@pytest.mark.parametrize("pair", PAIRS, ids=lambda p: f"{p[0]}-{p[1]}-{p[2]}")
def test_move_result_is_valid_and_signs_change_as_expected(pair):
    _, mv, _, d, r = pair
    assert validate(r.diagram) == []
    assert r.diagram.link_class == d.link_class
    (p, m), (p2, m2) = _signs(d), _signs(r.diagram)
    if mv.startswith("R1"):
        step = 1 if mv == "R1+" else -1
        assert (p2 - p, m2 - m) in ((step, 0), (0, step))
    else:
        assert (p2 - p, m2 - m) == SIGN_CHANGE[mv]
    size = {"R1+": 1, "R1-": -1, "R2+": 2, "R2-": -2}.get(mv, 0)
    assert r.diagram.n == d.n + size


@pytest.mark.parametrize("pair", PAIRS, ids=lambda p: f"{p[0]}-{p[1]}-{p[2]}")
def test_move_preserves_homology(pair):
    _, _, _, d, r = pair
    for key in ("aps", "hf"):
        assert compute(r.diagram, DYADS[key]) == compute(d, DYADS[key])


def test_kink_can_be_added_and_removed(p1knot):
    site = moves.sites(p1knot, "R1+")[0]
    bigger = moves.apply_reidemeister(p1knot, "R1+", site)
    back = [moves.apply_reidemeister(bigger, "R1-", s) for s in moves.sites(bigger, "R1-")]
    assert back and all(b.n == p1knot.n for b in back)
    assert all(compute(b, DYADS["hf"]) == compute(p1knot, DYADS["hf"]) for b in back)


def test_r5_toggles_the_crossing(p1knot):
    site = moves.sites(p1knot, "R5")[0]
    c = site[0]
    out = moves.apply_reidemeister(p1knot, "R5", site)
    assert out.crossings[c].over_pair != p1knot.crossings[c].over_pair


def test_bad_sites_raise():
    d = corpus.bundled("p1knot")
    with pytest.raises(moves.MoveError):
        moves.apply_move(d, "R7", None)
    with pytest.raises(moves.MoveError):
        moves.apply_move(d, "R1-", (0, 0))


CLASS1 = corpus.entries(families=["class1"], max_crossings=5)


@pytest.mark.parametrize("e", CLASS1, ids=lambda e: e.name)
def test_class1_homology_survives_moves_away_from_p(e):
    d = e.diagram
    P = surface.class1_base_face(d)
    ref = {k: compute(d, DYADS[k], "class1") for k in ("aps", "hf")}
    checked = 0
    for mv in moves.MOVES:
        for site in moves.sites(d, mv)[:2]:
            try:
                r = moves.apply_move(d, mv, site)
            except moves.MoveError:
                continue
            tracked = moves.track_face(d, r, P)
            if tracked is None or tracked not in surface.unencircled_faces(r.diagram):
                continue  # the move disturbs P
            for k in ref:
                assert compute(r.diagram, DYADS[k], "class1", face=tracked) == ref[k]
            checked += 1
    # a crossingless line has one face, which every move sweeps across
    assert checked or d.n == 0
