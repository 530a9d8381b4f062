import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from looptor.simplicial import reduced_simplex, sphere, wedge_of_spheres
from looptor.twisted import (
    FiniteFiber,
    GroupAction,
    complete_twisting,
    cyclic_group,
    shift_action,
    trivial_action,
    trivial_group,
)
from looptor.simplicial import discrete, load

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def spaces():
    """The reduced corpus: spheres, a wedge and the reduced 3-simplex."""
    return {
        "S1": sphere(1),
        "S2": sphere(2),
        "S3": sphere(3),
        "S4": sphere(4),
        "S2vS2": wedge_of_spheres([2, 2]),
        "rD3": reduced_simplex(3),
    }


@pytest.fixture(scope="session")
def corpus():
    return spaces()


KLEIN_FIBER = {
    "name": "two-edge circle",
    "generators": {"0": ["p", "q"], "1": ["a", "b"]},
    "faces": {"a": [[[], "q"], [[], "p"]], "b": [[[], "q"], [[], "p"]]},
    "basepoint": "p",
}

# [i, j] -> j - i mod m is a cocycle on the reduced 3-simplex
DELTA3_CYCLIC = {"0,1": "1", "0,2": "2", "0,3": "3", "1,2": "1", "1,3": "2", "2,3": "1"}


def circle_cover(m: int) -> FiniteFiber:
    X = sphere(1)
    grp = cyclic_group(m)
    Z = discrete([str(k) for k in range(m)])
    return FiniteFiber(complete_twisting(X, grp, {"x": "1" if m > 1 else "0"}), shift_action(Z, grp))


def fiber_corpus() -> dict[str, FiniteFiber]:
    out = {f"circle x Z/{m}": circle_cover(m) for m in range(1, 6)}
    X3 = reduced_simplex(3)
    g5 = cyclic_group(5)
    out["rD3 x Z/5 cover"] = FiniteFiber(complete_twisting(X3, g5, DELTA3_CYCLIC), shift_action(discrete([str(k) for k in range(5)]), g5))
    out["rD3 x S1 (trivial action)"] = FiniteFiber(complete_twisting(X3, g5, DELTA3_CYCLIC), trivial_action(sphere(1), g5))
    triv = trivial_group()
    out["S2 x S2"] = FiniteFiber(complete_twisting(sphere(2), triv, {}), trivial_action(sphere(2), triv))
    out["S2 x two points"] = FiniteFiber(complete_twisting(sphere(2), triv, {}), trivial_action(discrete(["0", "1"]), triv))
    g2 = cyclic_group(2)
    klein = load(KLEIN_FIBER)
    out["Klein bottle"] = FiniteFiber(complete_twisting(sphere(1), g2, {"x": "1"}), GroupAction(klein, g2, {"1": {"a": "b", "b": "a"}}))
    return out


@pytest.fixture(scope="session")
def fibers():
    return fiber_corpus()


@pytest.fixture
def write_json(tmp_path: Path):
    def write(name: str, payload) -> str:
        p = tmp_path / name
        p.write_text(payload if isinstance(payload, str) else json.dumps(payload))
        return str(p)

    return write


def _unimodular(n: int, rnd, steps: int = 12) -> tuple[list[list[int]], list[list[int]]]:
    """A random unimodular matrix and its inverse, built from elementary row operations."""
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [row[:] for row in U]
    for _ in range(steps if n > 1 else 0):
        i, j = rnd.sample(range(n), 2)
        c = rnd.choice([-2, -1, 1, 2])
        # U <- E U and V <- V E^-1 with E = I + c e_ij
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]
        for row in V:
            row[j] -= c * row[i]
    return U, V


def random_complex(rnd, top: int = 3):
    """A chain complex with prescribed homology hidden by a random change of basis.

    Returns ``(GradedComplex, {k: HomologyGroup})`` for degrees ``0..top``.
    """
    from looptor.homology import GradedComplex, HomologyGroup, invariant_factors, mat_mul

    free = {k: rnd.randint(0, 2) for k in range(top + 1)}
    # blocks Z (degree k+1) --m--> Z (degree k)
    blocks = {k: [rnd.choice([1, 1, 2, 3, 4, 6, 9]) for _ in range(rnd.randint(0, 2))] for k in range(top)}
    size = {k: free[k] + len(blocks.get(k, [])) + len(blocks.get(k - 1, [])) for k in range(top + 1)}
    bd = {}
    for k in range(1, top + 1):
        M = [[0] * size[k] for _ in range(size[k - 1])]
        # layout of degree k: free, then sources of blocks[k-1], then targets of blocks[k]
        for b, m in enumerate(blocks.get(k - 1, [])):
            M[free[k - 1] + len(blocks.get(k - 2, [])) + b][free[k] + b] = m
        bd[k] = M
    mats = {k: _unimodular(size[k], rnd) for k in range(top + 1)}
    out = {}
    for k, M in bd.items():
        if not M or not M[0]:
            out[k] = M
            continue
        out[k] = mat_mul(mat_mul(mats[k - 1][0], M), mats[k][1])
    C = GradedComplex({k: list(range(size[k])) for k in range(top + 1)}, out)
    H = {
        k: HomologyGroup(free[k], invariant_factors(blocks.get(k, [])))
        for k in range(top + 1)
    }
    return C, H
