"""Numba kernel vs numpy fallback.

Times the packed F2 rank on random matrices in-process, then a full
``rp3kh compute`` in subprocesses with and without RP3KH_NO_NUMBA.

    python3 benchmarks/bench_gf2.py [--sizes 128 512 1024] [--repeat 3]
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from rp3kh import _gf2


def time_rank(n: int, repeat: int, rng) -> tuple[float, float]:
    m = rng.integers(0, 2, size=(n, n), dtype=np.uint8)
    packed = _gf2.pack_rows(m)
    _gf2.rank_packed(packed, n)  # warm up the jit
    best = {"numba": float("inf"), "numpy": float("inf")}
    for _ in range(repeat):
        t = time.perf_counter()
        a = _gf2.rank_packed(packed, n)
        best["numba"] = min(best["numba"], time.perf_counter() - t)
        t = time.perf_counter()
        b = _gf2.rank_packed_numpy(packed, n)
        best["numpy"] = min(best["numpy"], time.perf_counter() - t)
        assert a == b
    return best["numba"], best["numpy"]


def time_cli(diagram: str, dyad: str, no_numba: bool) -> float:
    env = dict(os.environ, RP3KH_NO_NUMBA="1" if no_numba else "0")
    cmd = [sys.executable, "-m", "rp3kh", "compute", diagram, "--dyad", dyad]
    subprocess.run(cmd, env=env, check=True, capture_output=True)  # fill caches
    t = time.perf_counter()
    subprocess.run(cmd, env=env, check=True, capture_output=True)
    return time.perf_counter() - t


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[128, 512, 1024, 2048])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--diagrams", nargs="+", default=["p1knot", "6_2", "7_1"])
    args = ap.parse_args()
    if _gf2.BACKEND != "numba":
        sys.exit("numba backend not active; unset RP3KH_NO_NUMBA")
    rng = np.random.default_rng(0)
    print(f"{'size':>6} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for n in args.sizes:
        a, b = time_rank(n, args.repeat, rng)
        print(f"{n:6d} {a:10.4f} {b:10.4f} {b / a:8.1f}x")
    print()
    print(f"{'diagram':>8} {'numba s':>10} {'numpy s':>10}")
    for name in args.diagrams:
        print(f"{name:>8} {time_cli(name, 'hf', False):10.3f} {time_cli(name, 'hf', True):10.3f}")


if __name__ == "__main__":
    main()
