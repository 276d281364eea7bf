import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from rp3kh import cli
from rp3kh.homology import dims_from_json, poincare
from rp3kh.laurent import format_poly, parse_poly
from rp3kh.skein import jones

FIXTURES = Path(__file__).parent / "fixtures"


def run(*argv):
    buf = io.StringIO()
    code = cli.main(list(argv), out=buf)
    return code, buf.getvalue()


@pytest.mark.parametrize("dyad", ["aps", "a0", "a1", "hf", "hfprime"])
def test_compute_prints_golden(dyad, goldens):
    code, text = run("compute", "p1knot", "--dyad", dyad)
    assert code == 0
    assert parse_poly(text.splitlines()[0]) == goldens[dyad]


def test_compute_text_layout():
    _, text = run("compute", "p1knot")
    lines = text.splitlines()
    assert lines[1].startswith("euler: ")
    assert any(ln.startswith("chain[0]: ") for ln in lines)
    assert any(ln.startswith("basepoint_face: ") for ln in lines)


def test_json_round_trip(goldens):
    code, text = run("compute", "p1knot", "--dyad", "hf", "--format", "json")
    assert code == 0
    rep = json.loads(text)
    assert set(rep) >= {"diagram", "dyad", "variant", "basepoint_face", "terms", "euler", "chain_ranks"}
    dims = dims_from_json(json.dumps(rep))
    assert poincare(dims) == goldens["hf"]


def test_output_is_deterministic():
    runs = [run("compute", "rp2_walk_3", "--dyad", "hf", "--format", "json")[1] for _ in range(2)]
    assert runs[0] == runs[1]


def test_bench_adds_timing():
    _, text = run("compute", "trefoil", "--format", "json", "--bench")
    assert {"build", "homology", "backend"} <= set(json.loads(text)["timing"])


def test_unknown_input_exits_2():
    assert run("compute", "no_such_diagram")[0] == 2
    assert run("compute", "p1knot", "--dyad", "nonsense")[0] == 2
    assert run("verify", "p1knot", "--checks", "d2,bogus")[0] == 2


def test_invalid_dyad_rejected_unless_allowed():
    broken = str(FIXTURES / "broken_dyad.json")
    assert run("compute", "rp2_walk_2", "--dyad", broken)[0] == 2


def test_class_mismatch_exits_3():
    assert run("compute", "p1knot", "--variant", "class1")[0] == 3
    assert run("compute", "rp1_line", "--variant", "reduced")[0] == 3


def test_marked_arc_with_class1_is_input_error():
    assert run("compute", "rp1_line", "--variant", "class1", "--marked-arc", "0")[0] == 2


def test_jones_matches_library(p1knot):
    code, text = run("jones", "p1knot")
    assert code == 0
    vals = dict(ln.split(": ", 1) for ln in text.splitlines())
    j0, j1 = jones(p1knot, 0), jones(p1knot, 1)
    assert parse_poly(vals["J0"]) == j0
    assert parse_poly(vals["J1"]) == j1
    assert parse_poly(vals["J0+J1"]) == j0 + j1


def test_verify_all_passes():
    code, text = run("verify", "p1knot", "--all", "--dyad", "aps", "--dyad", "hf")
    assert code == 0
    assert "FAIL" not in text
    names = [ln.split(":")[0] for ln in text.splitlines()]
    assert names == list(cli.CHECKS + cli.EXTRA_CHECKS)


def test_verify_negative_control_reports_witness():
    broken = str(FIXTURES / "broken_dyad.json")
    code, text = run("verify", "rp2_walk_2", "--dyad", broken, "--allow-invalid-dyad", "--checks", "d2")
    assert code == 1
    line = text.splitlines()[0]
    assert line.startswith("d2: FAIL") and "level" in line


def test_verify_json():
    code, text = run("verify", "trefoil", "--dyad", "hf", "--checks", "d2,euler", "--format", "json")
    rep = json.loads(text)
    assert code == 0 and rep["ok"]
    assert [c["name"] for c in rep["checks"]] == ["d2", "euler"]


def test_mirror_pair_is_observation_only():
    code, text = run("verify", "trefoil", "--dyad", "aps", "--checks", "d2", "--mirror-pair")
    assert code == 0
    obs = [ln for ln in text.splitlines() if ln.startswith("observation:")]
    assert len(obs) == 2


def test_small_corpus_run():
    code, text = run("corpus", "--family", "affine", "--max-crossings", "3", "--dyad", "hf",
                     "--checks", "d2,euler")
    assert code == 0
    assert text.splitlines()[-1].endswith(" 0 failures")


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "rp3kh", "compute", "unknot"],
                         capture_output=True, text=True, check=True)
    assert format_poly(parse_poly(res.stdout.splitlines()[0])) == res.stdout.splitlines()[0]
