"""Command-line front end.

Exit codes:
  0  success
  1  a verification check failed
  2  invalid input (unreadable or malformed diagram or dyad file)
  3  the link class does not fit the chosen variant
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

from . import corpus as corpus_mod
from . import moves, surface
from ._gf2 import BACKEND
from .algebra import DyadError, builtin_dyads, dual_dyad, dyad_validate, get_dyad
from .complex import (
    VARIANTS,
    ChainComplex,
    ComplexError,
    build_complex,
    classify_edge,
    d_squared_witness,
    parity_transport_violations,
)
from .diagram import Diagram, DiagramError, load, validate
from .homology import euler_characteristic, homology_dims, poincare
from .laurent import QUANTUM_CIRCLE, Laurent, format_poly
from .skein import bracket, jones, predicted_euler, total_bracket

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_CLASS = 0, 1, 2, 3
CHECKS = ("d2", "euler", "parity", "marked", "reidemeister")
EXTRA_CHECKS = ("bracket", "unreduced")


class InputError(Exception):
    pass


class ClassMismatch(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    dyads: list[str] = field(default_factory=lambda: ["aps"])
    variant: str = "reduced"
    face: int | None = None
    marked_arc: int | None = None
    fmt: str = "text"
    checks: tuple[str, ...] = CHECKS
    bench: bool = False
    mirror_pair: bool = False
    allow_invalid_dyad: bool = False
    sites_per_move: int = 2
    families: tuple[str, ...] | None = None
    max_crossings: int | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.variant == "class1" and self.marked_arc is not None:
            raise InputError("the class1 variant has no marked point")


# ------------------------------------------------------------------- inputs
def read_diagram(spec: str) -> Diagram:
    """A path to a diagram file, or the name of a bundled diagram."""
    try:
        if Path(spec).is_file():
            d = load(spec)
        else:
            d = corpus_mod.bundled(spec)
    except (OSError, json.JSONDecodeError, DiagramError) as exc:
        raise InputError(f"{spec}: {exc}") from exc
    problems = validate(d)
    if problems:
        raise InputError(f"{spec}: {problems[0]}")
    return d


def read_dyad(spec: str, allow_invalid: bool = False):
    try:
        a = get_dyad(spec)
    except (OSError, json.JSONDecodeError, DyadError, ValueError) as exc:
        raise InputError(f"dyad {spec}: {exc}") from exc
    problems = dyad_validate(a)
    if problems and not allow_invalid:
        raise InputError(f"dyad {spec}: {problems[0]}")
    return a


def _check_class(d: Diagram, variant: str):
    want = 1 if variant == "class1" else 0
    if d.link_class != want:
        kind = "nontrivial" if d.link_class else "null-homologous"
        raise ClassMismatch(f"{d.name or 'diagram'} is {kind} in homology; variant {variant} does not apply")


def _build(d: Diagram, dyad, cfg: RunConfig, face=None, marked_arc=None) -> ChainComplex:
    face = cfg.face if face is None else face
    if cfg.variant == "reduced":
        marked_arc = cfg.marked_arc if marked_arc is None else marked_arc
    else:
        marked_arc = None
    try:
        return build_complex(d, dyad, cfg.variant, face, marked_arc)
    except (ComplexError, DiagramError) as exc:
        raise InputError(str(exc)) from exc


def _homology(cx: ChainComplex) -> dict:
    graded = cx.is_q_homogeneous() if cx.variant == "class1" else True
    return homology_dims(cx, graded=graded)


def _poly(cx: ChainComplex) -> Laurent:
    return poincare(_homology(cx))


def _terms(p: Laurent) -> list[list[int]]:
    return [[i, q, c] for (i, q), c in sorted(p.coeffs.items())]


# ------------------------------------------------------------------ compute
def cmd_compute(cfg: RunConfig, out=sys.stdout) -> int:
    d = read_diagram(cfg.inputs[0])
    _check_class(d, cfg.variant)
    dyad = read_dyad(cfg.dyads[0])
    t0 = time.perf_counter()
    cx = _build(d, dyad, cfg)
    t1 = time.perf_counter()
    dims = _homology(cx)
    t2 = time.perf_counter()
    p = poincare(dims)
    chi = euler_characteristic(p)
    chain = poincare(cx.chain_dims())
    if cfg.fmt == "json":
        rep = {
            "diagram": d.name,
            "dyad": dyad.name,
            "variant": cfg.variant,
            "basepoint_face": cx.face,
            "marked_arc": cx.marked_arc,
            "terms": _terms(p),
            "euler": format_poly(chi),
            "chain_ranks": _terms(chain),
        }
        if cfg.bench:
            rep["timing"] = {"build": t1 - t0, "homology": t2 - t1, "backend": BACKEND}
        print(json.dumps(rep), file=out)
        return EXIT_OK
    print(format_poly(p), file=out)
    print(f"euler: {format_poly(chi)}", file=out)
    for i in cx.degrees:
        row = Laurent({(0, q): c for (j, q), c in chain.coeffs.items() if j == i})
        print(f"chain[{i}]: {format_poly(row)}", file=out)
    print(f"basepoint_face: {cx.face}", file=out)
    if cx.marked_arc is not None:
        print(f"marked_arc: {cx.marked_arc}", file=out)
    if cfg.bench:
        print(f"time: build {t1 - t0:.4f}s homology {t2 - t1:.4f}s ({BACKEND})", file=out)
    return EXIT_OK


# -------------------------------------------------------------------- jones
def cmd_jones(cfg: RunConfig, out=sys.stdout) -> int:
    d = read_diagram(cfg.inputs[0])
    _check_class(d, "reduced")
    face = surface.base_face(d) if cfg.face is None else cfg.face
    try:
        j0, j1 = jones(d, 0, face), jones(d, 1, face)
    except DiagramError as exc:
        raise InputError(str(exc)) from exc
    if cfg.fmt == "json":
        print(json.dumps({"diagram": d.name, "basepoint_face": face, "J0": format_poly(j0),
                          "J1": format_poly(j1), "J": format_poly(j0 + j1)}), file=out)
    else:
        print(f"J0: {format_poly(j0)}", file=out)
        print(f"J1: {format_poly(j1)}", file=out)
        print(f"J0+J1: {format_poly(j0 + j1)}", file=out)
    return EXIT_OK


# ------------------------------------------------------------------- verify
@dataclass
class CheckResult:
    name: str
    ok: bool
    witness: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "witness": self.witness}


def _fmt_state(s) -> str:
    return "".join(str(b) for b in s)


def d_squared_report(cx: ChainComplex) -> str:
    """Witness naming the square (source state, target state, crossings) where d o d is nonzero."""
    w = d_squared_witness(cx)
    if w is None:
        return ""
    level, src, dst = w
    flips = [c for c in range(len(src)) if src[c] != dst[c]]
    kinds = []
    for c in flips:
        mid = tuple(1 if j == c else b for j, b in enumerate(src))
        kinds.append(f"{c}:{classify_edge(cx.diagram.resolve(src), cx.diagram.resolve(mid), c).kind}")
    return (f"d^2 != 0 at level {level}: state {_fmt_state(src)} -> {_fmt_state(dst)} "
            f"through crossings {flips} (first edges {', '.join(kinds)})")


def _check_d2(d, dyads, cfg):
    for a in dyads:
        cx = _build(d, a, cfg)
        w = d_squared_report(cx)
        if w:
            return CheckResult("d2", False, f"{a.name}: {w}")
        if cfg.variant == "class1":
            twists = [e for e in cx.edges.items() if e[1].kind == "twist"]
            if twists:
                (s, c), _ = twists[0]
                return CheckResult("d2", False, f"1->1 edge at state {_fmt_state(s)} crossing {c}")
    return CheckResult("d2", True)


def _check_euler(d, dyads, cfg):
    if cfg.variant == "class1":
        return CheckResult("euler", True, "not applicable to class1")
    for a in dyads:
        cx = _build(d, a, cfg)
        chi = euler_characteristic(_poly(cx))
        want = predicted_euler(d, a, cx.face)
        if cfg.variant == "unreduced":
            want = QUANTUM_CIRCLE * want
        if chi != want:
            return CheckResult("euler", False, f"{a.name}: homology {format_poly(chi)} vs skein {format_poly(want)}")
    return CheckResult("euler", True)


def _check_parity(d, dyads, cfg):
    if cfg.variant == "class1":
        return CheckResult("parity", True, "not applicable to class1")
    face = surface.base_face(d) if cfg.face is None else cfg.face
    bad = parity_transport_violations(d, face)
    if bad:
        s, c, kind = bad[0]
        return CheckResult("parity", False, f"edge at state {_fmt_state(s)} crossing {c} ({kind})")
    for s in product((0, 1), repeat=d.n):
        sm = d.resolve(s)
        for i, circ in enumerate(sm.circles):
            if circ.crosscap_parity:
                return CheckResult("parity", False, f"one-sided circle {i} in state {_fmt_state(s)}")
    return CheckResult("parity", True)


def _check_marked(d, dyads, cfg):
    if cfg.variant != "reduced":
        return CheckResult("marked", True, "not applicable without a marked point")
    for a in dyads:
        ref = _poly(_build(d, a, cfg, marked_arc=0))
        for m in range(1, d.arc_count):
            p = _poly(_build(d, a, cfg, marked_arc=m))
            if p != ref:
                return CheckResult("marked", False,
                                   f"{a.name}: arc 0 gives {format_poly(ref)}, arc {m} gives {format_poly(p)}")
    return CheckResult("marked", True)


def reidemeister_pairs(d: Diagram, per_move: int, face: int | None = None):
    """Deterministic (move, site, result, tracked face) tuples, up to ``per_move`` per move kind."""
    out = []
    for mv in moves.MOVES:
        taken = 0
        for site in moves.sites(d, mv):
            if taken >= per_move:
                break
            try:
                r = moves.apply_move(d, mv, site)
            except moves.MoveError:
                continue
            tracked = None if face is None else moves.track_face(d, r, face)
            if face is not None and tracked is None:
                continue
            out.append((mv, site, r, tracked))
            taken += 1
    return out


def _check_reidemeister(d, dyads, cfg):
    class1 = cfg.variant == "class1"
    face = cfg.face
    refs = {a.name: _poly(_build(d, a, cfg)) for a in dyads}
    for mv, site, r, tracked in reidemeister_pairs(d, cfg.sites_per_move, face):
        for a in dyads:
            sub = RunConfig(cfg.command, variant=cfg.variant, face=tracked)
            if class1 and tracked is None:
                sub.face = surface.class1_base_face(r.diagram)
            try:
                p = _poly(_build(r.diagram, a, sub))
            except ComplexError as exc:
                return CheckResult("reidemeister", False, f"{mv} at {site}: {exc}")
            if p != refs[a.name]:
                return CheckResult("reidemeister", False,
                                   f"{a.name}: {mv} at {site} gives {format_poly(p)}, "
                                   f"expected {format_poly(refs[a.name])}")
    return CheckResult("reidemeister", True)


def _check_bracket(d, dyads, cfg):
    if cfg.variant == "class1":
        return CheckResult("bracket", True, "not applicable to class1")
    face = surface.base_face(d) if cfg.face is None else cfg.face
    lhs = bracket(d, face, 0) + bracket(d, face, 1)
    rhs = total_bracket(d)
    if lhs != rhs:
        return CheckResult("bracket", False, f"<L>0+<L>1 = {format_poly(lhs)}, <L> = {format_poly(rhs)}")
    return CheckResult("bracket", True)


def _check_unreduced(d, dyads, cfg):
    if cfg.variant == "class1":
        return CheckResult("unreduced", True, "not applicable to class1")
    for a in dyads:
        red = euler_characteristic(_poly(build_complex(d, a, "reduced", cfg.face)))
        unred = euler_characteristic(_poly(build_complex(d, a, "unreduced", cfg.face)))
        if unred != QUANTUM_CIRCLE * red:
            return CheckResult("unreduced", False, f"{a.name}: {format_poly(unred)} vs (q+q^-1)({format_poly(red)})")
    return CheckResult("unreduced", True)


_CHECK_FUNCS = {
    "d2": _check_d2,
    "euler": _check_euler,
    "parity": _check_parity,
    "marked": _check_marked,
    "reidemeister": _check_reidemeister,
    "bracket": _check_bracket,
    "unreduced": _check_unreduced,
}


def run_checks(d: Diagram, cfg: RunConfig) -> list[CheckResult]:
    _check_class(d, cfg.variant)
    dyads = [read_dyad(s, cfg.allow_invalid_dyad) for s in cfg.dyads]
    return [_CHECK_FUNCS[name](d, dyads, cfg) for name in cfg.checks]


def mirror_observation(d: Diagram) -> dict:
    """Kh^hf of the mirror next to Kh^hf* of the diagram; recorded, never asserted."""
    hf = builtin_dyads()["hf"]
    mirrored = d.mirror()
    left = poincare(homology_dims(build_complex(mirrored, hf, "reduced")))
    right = poincare(homology_dims(build_complex(d, dual_dyad(hf), "reduced")))
    return {"mirror_hf": format_poly(left), "dual_hf": format_poly(right)}


def cmd_verify(cfg: RunConfig, out=sys.stdout) -> int:
    d = read_diagram(cfg.inputs[0])
    results = run_checks(d, cfg)
    obs = mirror_observation(d) if cfg.mirror_pair and d.link_class == 0 else None
    ok = all(r.ok for r in results)
    if cfg.fmt == "json":
        rep = {"diagram": d.name, "variant": cfg.variant, "ok": ok,
               "checks": [r.to_json() for r in results]}
        if obs is not None:
            rep["observation"] = obs
        print(json.dumps(rep), file=out)
    else:
        for r in results:
            status = "pass" if r.ok else "FAIL"
            extra = f" ({r.witness})" if r.witness else ""
            print(f"{r.name}: {status}{extra}", file=out)
        if obs is not None:
            print(f"observation: Kh^hf(mirror) = {obs['mirror_hf']}", file=out)
            print(f"observation: Kh^hf*(diagram) = {obs['dual_hf']}", file=out)
    return EXIT_OK if ok else EXIT_CHECK


# ------------------------------------------------------------------- corpus
def _corpus_job(args):
    entry, cfg = args
    variant = "class1" if entry.family == "class1" else cfg.variant
    sub = RunConfig("verify", dyads=cfg.dyads, variant=variant, checks=cfg.checks,
                    sites_per_move=cfg.sites_per_move)
    t0 = time.perf_counter()
    try:
        results = run_checks(entry.diagram, sub)
    except (InputError, ClassMismatch) as exc:
        results = [CheckResult("input", False, str(exc))]
    return entry.name, entry.family, entry.diagram.n, results, time.perf_counter() - t0


def cmd_corpus(cfg: RunConfig, out=sys.stdout) -> int:
    entries = corpus_mod.entries(cfg.families, cfg.max_crossings)
    if cfg.variant == "class1":
        entries = [e for e in entries if e.family == "class1"]
    jobs = [(e, cfg) for e in entries]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(_corpus_job, jobs))
    else:
        rows = [_corpus_job(j) for j in jobs]
    failures = 0
    report = []
    for name, fam, n, results, dt in rows:
        bad = [r for r in results if not r.ok]
        failures += bool(bad)
        report.append({"name": name, "family": fam, "crossings": n, "ok": not bad,
                       "checks": [r.to_json() for r in results], **({"seconds": dt} if cfg.bench else {})})
    if cfg.fmt == "json":
        print(json.dumps({"entries": report, "failures": failures}), file=out)
    else:
        for row, (_, _, _, results, dt) in zip(report, rows):
            status = "ok" if row["ok"] else "FAIL " + "; ".join(
                f"{r.name}: {r.witness}" for r in results if not r.ok)
            timing = f" {dt:8.3f}s" if cfg.bench else ""
            print(f"{row['name']:18s} {row['family']:7s} n={row['crossings']}{timing} {status}", file=out)
        print(f"{len(rows)} diagrams, {failures} failures", file=out)
    return EXIT_OK if failures == 0 else EXIT_CHECK


# --------------------------------------------------------------------- main
def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rp3kh", description="Khovanov-type homology for links in RP^3.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, multi_dyad=False):
        if multi_dyad:
            sp.add_argument("--dyad", action="append", help="builtin name or dyad JSON file; repeatable")
        else:
            sp.add_argument("--dyad", default="aps", help="builtin name (aps a0 a1 hf hfprime) or dyad JSON file")
        sp.add_argument("--variant", choices=VARIANTS, default="reduced")
        sp.add_argument("--basepoint-face", type=int, default=None, help="face id for the point P")
        sp.add_argument("--marked-arc", type=int, default=None, help="arc id for the marked point M")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--bench", action="store_true", help="report wall times")

    sp = sub.add_parser("compute", help="Poincare polynomial of one diagram")
    sp.add_argument("diagram")
    common(sp)
    sp = sub.add_parser("jones", help="even and odd Jones polynomials")
    sp.add_argument("diagram")
    common(sp)
    sp = sub.add_parser("verify", help="run structural checks on one diagram")
    sp.add_argument("diagram")
    common(sp, multi_dyad=True)
    sp.add_argument("--checks", default=",".join(CHECKS),
                    help=f"comma-separated subset of {','.join(CHECKS + EXTRA_CHECKS)}")
    sp.add_argument("--all", action="store_true", help="run every check")
    sp.add_argument("--mirror-pair", action="store_true", help="print Kh^hf(mirror) beside Kh^hf*(diagram)")
    sp.add_argument("--allow-invalid-dyad", action="store_true",
                    help="accept a dyad whose composites are nonzero (negative controls)")
    sp.add_argument("--sites-per-move", type=int, default=2)
    sp = sub.add_parser("corpus", help="verify every bundled diagram")
    common(sp, multi_dyad=True)
    sp.add_argument("--checks", default=",".join(CHECKS))
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--family", action="append", choices=corpus_mod.FAMILIES)
    sp.add_argument("--max-crossings", type=int, default=None)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--sites-per-move", type=int, default=2)
    return p


def config_from_args(ns) -> RunConfig:
    dyads = ns.dyad if isinstance(ns.dyad, list) else [ns.dyad]
    if ns.command in ("verify", "corpus") and ns.dyad is None:
        dyads = sorted(builtin_dyads())
    checks = CHECKS
    if ns.command in ("verify", "corpus"):
        checks = CHECKS + EXTRA_CHECKS if ns.all else tuple(c for c in ns.checks.split(",") if c)
        unknown = set(checks) - set(_CHECK_FUNCS)
        if unknown:
            raise InputError(f"unknown checks: {sorted(unknown)}")
    return RunConfig(
        command=ns.command,
        inputs=[ns.diagram] if hasattr(ns, "diagram") else [],
        dyads=dyads,
        variant=ns.variant,
        face=ns.basepoint_face,
        marked_arc=ns.marked_arc,
        fmt=ns.format,
        checks=checks,
        bench=ns.bench,
        mirror_pair=getattr(ns, "mirror_pair", False),
        allow_invalid_dyad=getattr(ns, "allow_invalid_dyad", False),
        sites_per_move=getattr(ns, "sites_per_move", 2),
        families=tuple(ns.family) if getattr(ns, "family", None) else None,
        max_crossings=getattr(ns, "max_crossings", None),
        jobs=getattr(ns, "jobs", 1),
    )


COMMANDS = {"compute": cmd_compute, "jones": cmd_jones, "verify": cmd_verify, "corpus": cmd_corpus}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    ns = _parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ClassMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CLASS


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
