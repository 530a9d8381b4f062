"""Command line: loop space homology, verification suites and twisted-product comparisons.

Exit codes: 0 when everything passes, 1 when an identity fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from . import cobar, prisms, twisted, twisting
from .loop_group import Convention, identity_failures, loop_group, random_word
from .homology import HomologyError
from .simplicial import IdentityViolation, SimplicialError, SimplicialSet, format_simplex, resolve_space

SCHEMA_VERSION = 1
MAX_COUNTEREXAMPLES = 5
EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# -- reports -----------------------------------------------------------------------------------


@dataclass
class Check:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": "pass" if self.passed else "fail",
            "cases": self.cases,
            "failures": len(self.failures),
            "counterexamples": self.failures[:MAX_COUNTEREXAMPLES],
        }


@dataclass
class Report:
    command: str
    params: dict
    checks: list[Check] = field(default_factory=list)
    results: dict = field(default_factory=dict)
    error: Optional[str] = None
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "params": self.params,
            "status": "pass" if self.passed else "fail",
        }
        if self.error is not None:
            out["error"] = self.error
        if self.checks:
            out["checks"] = [c.to_dict() for c in self.checks]
        if self.results:
            out["results"] = self.results
        out["timings"] = {"total_seconds": round(self.seconds, 4), **{c.name: round(c.seconds, 4) for c in self.checks}}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = []
        if self.error is not None:
            lines.append(f"FAIL {self.command}: {self.error}")
        for c in self.checks:
            tag = "PASS" if c.passed else "FAIL"
            lines.append(f"{tag} {c.name} ({c.cases} cases, {len(c.failures)} failures)")
            lines.extend(f"    {f}" for f in c.failures[:MAX_COUNTEREXAMPLES])
        if self.checks:
            lines.append("ALL PASS" if self.passed else "FAILURES FOUND")
        return "\n".join(lines)


def workers() -> int:
    try:
        return max(1, int(os.environ.get("LOOPTOR_THREADS", "1")))
    except ValueError:
        return 1


def run_check(name: str, cases: Sequence, fn: Callable[[object], Iterable[str]]) -> Check:
    """Apply ``fn`` to every case; order of failures follows the order of ``cases``."""
    t = time.perf_counter()
    n = workers()
    if n > 1 and len(cases) > 1:
        with ThreadPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(lambda c: list(fn(c)), cases))
    else:
        results = [list(fn(c)) for c in cases]
    return Check(name, len(cases), [f for r in results for f in r], time.perf_counter() - t)


def _chain_failure(label: str, c) -> list[str]:
    return [f"{label}: {c!r}"] if c else []


# -- suites ------------------------------------------------------------------------------------


def simplices_upto(X: SimplicialSet, max_dim: int, lo: int = 0, nondegenerate: bool = False) -> list:
    out = []
    for n in range(lo, max_dim + 1):
        out.extend(X.nondegenerate(n) if nondegenerate else X.simplices(n))
    return out


def suite_prisms(X: SimplicialSet, max_dim: int, rng: random.Random) -> list[Check]:
    if not X.is_reduced:
        raise InputError("the prism suite needs a reduced simplicial set")
    P = prisms.PrismCalculus(X)
    G = loop_group(X)
    xs = simplices_upto(X, max_dim)
    checks = [run_check("pseudosection identities", xs, lambda x: map(str, prisms.verify_pseudosection(P, x)))]

    def tau_agrees(x):
        if x.dim < 1:
            return []
        return [] if P.embed(G.tau(x)) == P.tau(x) else [f"embedded tau differs at {format_simplex(x)}"]

    checks.append(run_check("loop group letters as prisms", xs, tau_agrees))
    return checks


def suite_conventions(X: SimplicialSet, max_dim: int, rng: random.Random, cases: int = 1000) -> list[Check]:
    checks = []
    top = min(max_dim, 4)
    for conv in Convention:
        G = loop_group(X, conv)
        pairs = []
        for _ in range(cases):
            n = rng.randint(0, top)
            pairs.append((random_word(G, n, rng), random_word(G, n, rng)))
        checks.append(
            run_check(
                f"simplicial identities in GX ({conv.value})",
                pairs,
                lambda p, G=G: [f"{p[0]}: {f}" for f in identity_failures(G, p[0], p[1])],
            )
        )
    return checks


def suite_twisting(X: SimplicialSet, max_dim: int, rng: random.Random) -> list[Check]:
    G = loop_group(X)
    xs = simplices_upto(X, max_dim, lo=1, nondegenerate=True)

    def faces(x):
        return [f"{k} at {format_simplex(x)}: {v!r}" for k, v in twisting.face_identity_defects(G, x).items()]

    def degeneracy(x):
        return [f"Tcx{g} at {format_simplex(x)}" for g in twisting.degeneracy_failures(G, x)]

    def cochain(x):
        return _chain_failure(f"twisting cochain identity at {format_simplex(x)}", twisting.twisting_defect(G, x))

    def letterwise(x):
        if x.dim < 3:
            return []
        out = []
        for g in _perms(x.dim - 1):
            if twisting.d_n_letterwise(G, x, g) != G.face(twisting.tcx_perm(G, x, g), x.dim - 1):
                out.append(f"letterwise top face differs at {format_simplex(x)}, g={g}")
        return out

    return [
        run_check("face identities of Tcx (non-normalized)", xs, faces),
        run_check("degeneracy lemma", simplices_upto(X, min(max_dim, 4), lo=1), degeneracy),
        run_check("top face by row blocks", xs, letterwise),
        run_check("twisting cochain identity (normalized)", xs, cochain),
    ]


def _perms(n: int):
    from itertools import permutations

    return list(permutations(range(1, n + 1)))


def suite_cobar(X: SimplicialSet, max_dim: int, rng: random.Random) -> list[Check]:
    G = loop_group(X)
    has_edges = bool(X.nondegenerate(1))
    cap = 2 if has_edges else None  # edges make every degree infinite; sample short words
    monos = [m for k in range(max_dim + 1) for m in cobar.cobar_basis(X, k, max_length=cap)]
    checks = [
        run_check("cobar d^2 = 0", monos, lambda m: _chain_failure(cobar.format_monomial(m), cobar.d_squared(X, m))),
        run_check(
            "T anticommutes with the differentials",
            monos,
            lambda m: _chain_failure(cobar.format_monomial(m), cobar.chain_map_defect(G, m)),
        ),
    ]
    if not has_edges:
        C = cobar.cobar_complex(X, max_dim)
        checks.append(run_check("cobar complex matrices square to zero", [C], lambda C: map(str, C.check_d_squared())))
    return checks


def suite_psi(X: SimplicialSet, max_dim: int, rng: random.Random, cases: int = 300) -> list[Check]:
    if not X.is_reduced:
        raise InputError("the psi suite needs a reduced simplicial set")
    checks = [run_check("golden formulas in dims 1-3", [1, 2, 3], twisted.golden_mismatches)]
    xs = simplices_upto(X, max_dim, lo=1)
    checks.append(
        run_check(
            "d Psi = Psi d on x (x) 1",
            xs,
            lambda x: _chain_failure(format_simplex(x), twisted.principal_unit_defect(X, x)),
        )
    )
    checks.append(
        run_check(
            "Psi(x (x) 1) = (x, 1) mod lower filtration",
            [x for x in xs if not x.is_degenerate],
            lambda x: [f"{format_simplex(x)}: {f}" for f in twisted.filtration_defect(X, x)],
        )
    )
    samples = [_random_universal(rng, below_top=False) for _ in range(cases)]
    checks.append(run_check("D_x contraction identities", samples, _dD_failures))
    lower = [_random_universal(rng, below_top=True) for _ in range(cases)]
    checks.append(
        run_check("D_x filtration lemma", lower, lambda s: twisted.derived_filtration_failures(s[0], s[1]))
    )
    return checks


def _random_universal(rng: random.Random, below_top: bool):
    """Random pair on ``Delta^n``: dimension ``< n`` when ``below_top``, positive otherwise."""
    from .simplicial import standard_simplex

    n = rng.randint(1, 4)
    m = rng.randint(0, n - 1) if below_top else rng.randint(1, n)
    D = standard_simplex(n)
    G = loop_group(D)
    base = D.simplex(tuple(sorted(rng.randint(0, n) for _ in range(m + 1))))
    letters = [
        (D.simplex(tuple(sorted(rng.randint(0, n) for _ in range(m + 2)))), rng.choice((1, -1)))
        for _ in range(rng.randint(0, 3) if m else 0)
    ]
    return n, (base, G.reduce(m, letters))


def _dD_failures(sample) -> list[str]:
    n, p = sample
    a, b = twisted.dD_defects(n, p)
    out = []
    if a:
        out.append(f"d_x D + D d_x != id on {p}")
    if b:
        out.append(f"d_tau D != -D d_tau on {p}")
    return out


SUITES = {
    "prisms": (suite_prisms, 4),
    "conventions": (suite_conventions, 4),
    "twisting": (suite_twisting, 5),
    "cobar": (suite_cobar, 4),
    "psi": (suite_psi, 4),
}


# -- commands ----------------------------------------------------------------------------------


def cmd_loop_homology(space: str, max_degree: int) -> Report:
    X = resolve_space(space)
    H = cobar.cobar_homology(X, max_degree)
    rep = Report("loop-homology", {"space": space, "max_degree": max_degree})
    rep.results = {"homology": {str(k): {**g.to_dict(), "group": str(g)} for k, g in H.items()}}
    return rep


def cmd_verify(suite: str, space: str, max_dim: Optional[int], seed: int, cases: Optional[int]) -> Report:
    X = resolve_space(space)
    names = list(SUITES) if suite == "all" else [suite]
    rep = Report("verify", {"suite": suite, "space": space, "max_dim": max_dim, "seed": seed})
    for name in names:
        fn, default = SUITES[name]
        rng = random.Random(seed)
        dim = default if max_dim is None else max_dim
        kwargs = {"cases": cases} if cases is not None and name in ("conventions", "psi") else {}
        for c in fn(X, dim, rng, **kwargs):
            c.name = f"{name}: {c.name}"
            rep.checks.append(c)
    return rep


def cmd_compare_twisted(base: str, fiber: str, group: str, twist: str, max_degree: int) -> Report:
    F = twisted.build_fiber(base, fiber, group, twist)
    cmp = twisted.compare_homology(F, max_degree)
    rep = Report(
        "compare-twisted",
        {"base": base, "fiber": fiber, "group": group, "twist": twist, "max_degree": max_degree},
    )
    table = lambda H: {str(k): {**g.to_dict(), "group": str(g)} for k, g in H.items()}
    rep.results = {"tensor": table(cmp.tensor), "cartesian": table(cmp.cartesian), "equal": cmp.equal}
    rep.checks.append(
        Check("homology of both complexes agrees", 1, [] if cmp.equal else ["homology differs"])
    )
    if all(v == F.group.e for v in F.twist.values.values()):
        pred = twisted.kunneth_prediction(F.X, F.Z, max_degree)
        rep.results["kunneth"] = table(pred)
        rep.checks.append(
            Check("untwisted product matches Kunneth", 1, [] if pred == cmp.cartesian else ["Kunneth mismatch"])
        )
    return rep


def render_homology(rep: Report) -> str:
    H = rep.results["homology"]
    return "\n".join(f"H_{k} = {v['group']}" for k, v in H.items())


def render_compare(rep: Report) -> str:
    r = rep.results
    lines = [f"{k}: tensor {r['tensor'][k]['group']}, cartesian {r['cartesian'][k]['group']}" for k in r["tensor"]]
    tup = lambda H: "(" + ", ".join(H[k]["group"] for k in H) + ")"
    word = "EQUAL" if r["equal"] else "DIFFERENT"
    lines.append(f"{word}: {tup(r['tensor'])},{tup(r['cartesian'])}")
    lines.append(rep.to_text())
    return "\n".join(lines)


# -- argument parsing --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="looptor", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    h = sub.add_parser("loop-homology", help="homology of the loop space via the cobar construction")
    h.add_argument("--space", required=True, help="builtin:<name>[:param] or a JSON file")
    h.add_argument("--max-degree", type=int, default=6)
    h.add_argument("--format", choices=("text", "json"), default="text")

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("suite", choices=(*SUITES, "all"))
    v.add_argument("space", nargs="?", default="builtin:reduced-simplex:3")
    v.add_argument("--max-dim", type=int, default=None)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--cases", type=int, default=None, help="random cases for the sampling suites")
    v.add_argument("--format", choices=("text", "json"), default="text")

    c = sub.add_parser("compare-twisted", help="homology of a twisted tensor versus twisted cartesian product")
    c.add_argument("--base", required=True)
    c.add_argument("--fiber", required=True)
    c.add_argument("--group", default="builtin:trivial")
    c.add_argument("--twist", default="builtin:trivial")
    c.add_argument("--max-degree", type=int, default=3)
    c.add_argument("--format", choices=("text", "json"), default="text")
    return p


def _input_message(exc: Exception) -> str:
    if isinstance(exc, json.JSONDecodeError):
        return f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
    if isinstance(exc, OSError):
        return f"cannot read {exc.filename}: {exc.strerror}"
    return str(exc)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    out = sys.stdout
    for name in ("max_degree", "max_dim", "cases"):
        val = getattr(args, name, None)
        if val is not None and val < 0:
            print(f"error: --{name.replace('_', '-')} must be non-negative", file=sys.stderr)
            return EXIT_INPUT
    t = time.perf_counter()
    try:
        if args.command == "loop-homology":
            rep = cmd_loop_homology(args.space, args.max_degree)
            text = render_homology
        elif args.command == "verify":
            rep = cmd_verify(args.suite, args.space, args.max_dim, args.seed, args.cases)
            text = Report.to_text
        else:
            rep = cmd_compare_twisted(args.base, args.fiber, args.group, args.twist, args.max_degree)
            text = render_compare
    except IdentityViolation as exc:
        # the input itself breaks a simplicial identity: report it as a failed check
        rep = Report(args.command, {"input": getattr(args, "space", None) or getattr(args, "base", None)})
        rep.checks.append(Check(f"simplicial identities of generator {exc.generator}", 1, [str(exc)]))
        text = Report.to_text
    except (SimplicialError, HomologyError, InputError, OSError, ValueError) as exc:
        print(f"error: {_input_message(exc)}", file=sys.stderr)
        return EXIT_INPUT
    rep.seconds = time.perf_counter() - t
    out.write((rep.to_json() if args.format == "json" else text(rep)) + "\n")
    return EXIT_OK if rep.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
