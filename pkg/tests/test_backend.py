import json
import os
import subprocess
import sys

import numpy as np
import pytest

from rp3kh import _gf2


def _run(env_extra, *argv):
    env = dict(os.environ, **env_extra)
    res = subprocess.run([sys.executable, "-m", "rp3kh", *argv], capture_output=True,
                         text=True, env=env, check=True)
    return res.stdout


def _backend(env_extra):
    code = "from rp3kh._gf2 import BACKEND; print(BACKEND)"
    env = dict(os.environ, **env_extra)
    return subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                          env=env, check=True).stdout.strip()


def test_env_flag_selects_numpy():
    assert _backend({"RP3KH_NO_NUMBA": "1"}) == "numpy"


def test_default_backend_is_numba_when_available():
    pytest.importorskip("numba")
    assert _backend({"RP3KH_NO_NUMBA": "0"}) == "numba"


@pytest.mark.parametrize("name,dyad", [("p1knot", "hf"), ("rp2_walk_3", "aps"), ("5_2", "hf")])
def test_both_backends_agree_end_to_end(name, dyad):
    args = ("compute", name, "--dyad", dyad, "--format", "json")
    fast = json.loads(_run({"RP3KH_NO_NUMBA": "0"}, *args))
    slow = json.loads(_run({"RP3KH_NO_NUMBA": "1"}, *args))
    assert fast == slow


def test_in_process_backends_agree():
    rng = np.random.default_rng(7)
    for _ in range(40):
        r, c = rng.integers(1, 150, size=2)
        m = rng.integers(0, 2, size=(r, c))
        assert _gf2.rank_gf2(m) == _gf2.rank_gf2(m, backend="numpy")
