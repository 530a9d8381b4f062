"""Adams' cobar construction as a free DGA on the cubes ``cx``.

A monomial is a tuple of nondegenerate simplices of dimension >= 1; the empty
tuple is the unit.  ``cx`` has degree ``dim x - 1``.  The degenerate edge at the
base point acts as the unit, degenerate cubes of positive degree vanish.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Optional

from .chains import Chain
from .homology import GradedComplex, HomologyGroup, homology_all
from .loop_group import LoopGroup
from .simplicial import SimplexRef, SimplicialError, SimplicialSet
from .twisting import dot, normalize, normalized_boundary, sub_face, tc

Monomial = tuple[SimplexRef, ...]
UNIT: Monomial = ()


class InfiniteBasis(SimplicialError):
    """Degree-0 generators make every degree infinite without a length cap."""


def degree(m: Monomial) -> int:
    return sum(x.dim - 1 for x in m)


def format_monomial(m: Monomial) -> str:
    return "1" if not m else "*".join(f"c[{x}]" for x in m)


def generators(X: SimplicialSet) -> list[SimplexRef]:
    return [x for d in sorted(X.generators) if d >= 1 for x in X.nondegenerate(d)]


def cobar_basis(X: SimplicialSet, k: int, max_length: Optional[int] = None) -> list[Monomial]:
    gens = generators(X)
    if max_length is None and any(x.dim == 1 for x in gens):
        raise InfiniteBasis(
            f"{X.name or 'space'} has nondegenerate edges, so cobar degree {k} has infinitely many "
            "monomials; use a space with a single edge (or cap the word length)"
        )
    by_degree: dict[int, list[SimplexRef]] = {}
    for x in gens:
        by_degree.setdefault(x.dim - 1, []).append(x)

    def walk(rest: int, length: int) -> Iterator[Monomial]:
        if rest == 0:
            yield UNIT
        if max_length is not None and length >= max_length:
            return
        for d in sorted(by_degree):
            if d > rest:
                break
            for x in by_degree[d]:
                for tail in walk(rest - d, length + 1):
                    yield (x,) + tail

    return list(walk(k, 0))


def bracket(y: SimplexRef) -> Chain:
    """``<y>``: unit for a degenerate edge, zero for other degenerate simplices."""
    if y.is_degenerate:
        return Chain.single(UNIT) if y.dim == 1 else Chain()
    return Chain.single((y,))


def mul(a: Chain, b: Chain) -> Chain:
    out = Chain()
    for u, cu in a.items():
        for w, cw in b.items():
            out.add_term(u + w, cu * cw)
    return out


@lru_cache(maxsize=None)
def _generator_diff(X: SimplicialSet, x: SimplexRef) -> Chain:
    n = x.dim - 1
    out = Chain()
    for i in range(1, n + 1):
        out.iadd(mul(bracket(sub_face(X, x, 0, i)), bracket(sub_face(X, x, i, n + 1))), (-1) ** i)
        out.iadd(bracket(X.face(x, i)), -((-1) ** i))
    return out


def cobar_diff(X: SimplicialSet, m: Monomial) -> Chain:
    """Differential extended by the graded Leibniz rule."""
    out = Chain()
    sign = 1
    for k, x in enumerate(m):
        head, tail = m[:k], m[k + 1:]
        for mid, c in _generator_diff(X, x).items():
            out.add_term(head + mid + tail, sign * c)
        if (x.dim - 1) % 2:
            sign = -sign
    return out


def cobar_complex(X: SimplicialSet, max_degree: int) -> GradedComplex:
    """Degrees ``0..max_degree``; needs a finite basis (no nondegenerate edges)."""
    bases = {k: cobar_basis(X, k) for k in range(max_degree + 1)}
    return GradedComplex.from_function(bases, lambda m: cobar_diff(X, m))


def d_squared(X: SimplicialSet, m: Monomial) -> Chain:
    return cobar_diff(X, m).map(lambda t: cobar_diff(X, t))


def cobar_homology(X: SimplicialSet, max_degree: int) -> dict[int, HomologyGroup]:
    C = cobar_complex(X, max_degree + 1)
    return homology_all(C, range(max_degree + 1))


def cobar_to_rgx(G: LoopGroup, m: Monomial) -> Chain:
    """``T``: monomial to the shuffle product of the ``Tcx`` chains (unit to ``1_0``)."""
    acc = Chain.single(G.identity(0))
    for x in m:
        acc = dot(G, acc, tc(G, x))
    return acc


def chain_map_defect(G: LoopGroup, m: Monomial) -> Chain:
    """``T d m + d T m`` in normalized ``RGX``.

    With the ``(-1)^i`` signs of the cobar differential ``T`` anticommutes with
    the differentials, so the defect vanishes exactly when ``T`` is a chain map
    up to that sign.
    """
    X = G.X
    lhs = normalize(G, cobar_diff(X, m).map(lambda t: cobar_to_rgx(G, t)))
    rhs = normalized_boundary(G, cobar_to_rgx(G, m))
    return lhs + rhs
