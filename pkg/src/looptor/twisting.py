"""Shuffle products on ``RGX``, the cube words ``Tcx(g)`` and the cochain ``phi``.

Shuffle words are stored as tuples ``(x_1, ..., x_{p+q})`` over ``{"a", "b"}``;
:attr:`ShuffleWord.word` renders them right to left (``x_{p+q} ... x_1``).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, NamedTuple, Sequence

from .chains import Chain
from .loop_group import GroupWord, LoopGroup
from .simplicial import SimplexRef, SimplicialError


class ShuffleWord(NamedTuple):
    letters: tuple[str, ...]
    sign: int  # parity, 0 or 1

    @property
    def word(self) -> str:
        return "".join(reversed(self.letters))

    @property
    def b_degeneracies(self) -> tuple[int, ...]:
        """Indices of ``s_{x_b^-(w)}`` in application order (applied to the ``a``-side factor)."""
        return tuple(k for k, c in enumerate(self.letters) if c == "b")

    @property
    def a_degeneracies(self) -> tuple[int, ...]:
        return tuple(k for k, c in enumerate(self.letters) if c == "a")

    @property
    def coeff(self) -> int:
        return -1 if self.sign else 1


def shuffle_sign(letters: Sequence[str]) -> int:
    """Parity of the permutation taking the word to ``b^q a^p``."""
    inv, bs = 0, 0
    for c in letters:
        if c == "b":
            bs += 1
        else:
            inv += bs
    return inv % 2


@lru_cache(maxsize=None)
def shuffles(p: int, q: int) -> tuple[ShuffleWord, ...]:
    if p < 0 or q < 0:
        raise ValueError("shuffle lengths must be non-negative")
    out = []
    for apos in combinations(range(p + q), p):
        aset = set(apos)
        letters = tuple("a" if k in aset else "b" for k in range(p + q))
        out.append(ShuffleWord(letters, shuffle_sign(letters)))
    return tuple(out)


def permutation_sign(g: Sequence[int]) -> int:
    return sum(1 for i in range(len(g)) for j in range(i + 1, len(g)) if g[i] > g[j]) % 2


# -- GChains ---------------------------------------------------------------------------


def grade(c: Chain) -> int | None:
    dims = {w.dim for w in c}
    if len(dims) > 1:
        raise SimplicialError(f"chain mixes grades {sorted(dims)}")
    return dims.pop() if dims else None


def word_chain(w: GroupWord, coeff: int = 1) -> Chain:
    return Chain.single(w, coeff)


def gchain_face(G: LoopGroup, c: Chain, i: int) -> Chain:
    return c.map(lambda w: G.face(w, i))


def gchain_degeneracy(G: LoopGroup, c: Chain, i: int) -> Chain:
    return c.map(lambda w: G.degeneracy(w, i))


def gchain_boundary(G: LoopGroup, c: Chain) -> Chain:
    """Unnormalized ``sum (-1)^i d_i``."""
    out = Chain()
    for w, k in c.items():
        if w.dim == 0:
            continue
        for i in range(w.dim + 1):
            out.add_term(G.face(w, i), k * (-1) ** i)
    return out


def normalize(G: LoopGroup, c: Chain) -> Chain:
    """Image in the normalized chains: drop degenerate words."""
    return c.filter(lambda w: G.is_degenerate(w) is None)


def normalized_boundary(G: LoopGroup, c: Chain) -> Chain:
    return normalize(G, gchain_boundary(G, c))


def dot(G: LoopGroup, s: Chain, t: Chain) -> Chain:
    """Shuffle product ``s . t`` on ``RGX`` (bilinear)."""
    out = Chain()
    for u, cu in s.items():
        for w, cw in t.items():
            for sh in shuffles(u.dim, w.dim):
                left = G.degenerate_by(u, sh.b_degeneracies)
                right = G.degenerate_by(w, sh.a_degeneracies)
                out.add_term(G.mul(left, right), sh.coeff * cu * cw)
    return out


def dot_many(G: LoopGroup, chains: Iterable[Chain]) -> Chain:
    it = iter(chains)
    acc = next(it)
    for c in it:
        acc = dot(G, acc, c)
    return acc


# -- cube words ------------------------------------------------------------------------


def alpha(g: Sequence[int], r: int, j: int) -> int:
    """``max({0..r} & {0, g_1, ..., g_j})``."""
    return max([0] + [v for v in g[:j] if v <= r])


def tcx_rows(g: Sequence[int]) -> list[tuple[int, ...]]:
    n = len(g)
    return [(0,) + tuple(alpha(g, r, j) for j in range(1, n + 1)) + (r + 1,) for r in range(n + 1)]


def tcx_perm(G: LoopGroup, x: SimplexRef, g: Sequence[int]) -> GroupWord:
    n = x.dim - 1
    if n < 0:
        raise SimplicialError("Tcx needs a simplex of dimension >= 1")
    g = tuple(g)
    if sorted(g) != list(range(1, n + 1)):
        raise SimplicialError(f"{g} is not a permutation of 1..{n}")
    if n == 0:
        return G.tau(x)
    X = G.X
    return G.reduce(n, [(X.apply_map(x, row), 1) for row in tcx_rows(g)])


def tc(G: LoopGroup, x: SimplexRef) -> Chain:
    n = x.dim - 1
    out = Chain()
    for g in permutations(range(1, n + 1)):
        out.add_term(tcx_perm(G, x, g), (-1) ** permutation_sign(g))
    return out


def phi(G: LoopGroup, x: SimplexRef) -> Chain:
    if x.dim == 0:
        return Chain()
    out = tc(G, x)
    if x.dim == 1:
        out.add_term(G.identity(0), -1)
    return out


def d_n_letterwise(G: LoopGroup, x: SimplexRef, g: Sequence[int]) -> GroupWord:
    """Top face of ``Tcx(g)`` via the row-by-row block product."""
    n = x.dim - 1
    if n < 1:
        raise SimplicialError("the top face needs dim x >= 2")
    X = G.X
    letters = []
    for row in tcx_rows(g):
        letters.append((X.apply_map(x, row[:-1]), -1))
        letters.append((X.apply_map(x, row[:-2] + row[-1:]), 1))
    return G.reduce(n - 1, letters)


def sub_face(X, x: SimplexRef, lo: int, hi: int) -> SimplexRef:
    """``[lo, ..., hi]_x``."""
    return X.apply_map(x, tuple(range(lo, hi + 1)))


# -- identities ------------------------------------------------------------------------


def interior_faces(G: LoopGroup, x: SimplexRef) -> dict[int, Chain]:
    """``d_i Tcx`` for ``0 < i < n``; each should vanish."""
    t = tc(G, x)
    n = x.dim - 1
    return {i: gchain_face(G, t, i) for i in range(1, n)}


def d0_rhs(G: LoopGroup, x: SimplexRef) -> Chain:
    n = x.dim - 1
    X = G.X
    out = Chain()
    for k in range(1, n + 1):
        out.iadd(dot(G, tc(G, sub_face(X, x, 0, k)), tc(G, sub_face(X, x, k, n + 1))), (-1) ** (k - 1))
    return out


def dn_rhs(G: LoopGroup, x: SimplexRef) -> Chain:
    """``sum_k (-1)^k Tc d_k x``, which equals ``(-1)^n d_n Tcx``."""
    n = x.dim - 1
    out = Chain()
    for k in range(1, n + 1):
        out.iadd(tc(G, G.X.face(x, k)), (-1) ** k)
    return out


def phi_of_boundary(G: LoopGroup, x: SimplexRef) -> Chain:
    out = Chain()
    for i in range(x.dim + 1):
        out.iadd(phi(G, G.X.face(x, i)), (-1) ** i)
    return out


def cup_term(G: LoopGroup, x: SimplexRef) -> Chain:
    """``sum_i (-1)^i phi[0..i]_x . phi[i..n]_x``."""
    n, X = x.dim, G.X
    out = Chain()
    for i in range(n + 1):
        out.iadd(dot(G, phi(G, sub_face(X, x, 0, i)), phi(G, sub_face(X, x, i, n))), (-1) ** i)
    return out


def twisting_defect(G: LoopGroup, x: SimplexRef) -> Chain:
    """``d phi x - phi d x + phi cup phi`` in normalized chains; zero when the identity holds."""
    lhs = normalized_boundary(G, phi(G, x))
    rhs = normalize(G, phi_of_boundary(G, x) - cup_term(G, x))
    return lhs - rhs


def degeneracy_failures(G: LoopGroup, x: SimplexRef) -> list[tuple[int, ...]]:
    """Permutations where ``Tcx(g)`` breaks the degeneracy lemma.

    A degenerate ``x`` must give degenerate words for every ``g``; a
    nondegenerate ``x`` must give a nondegenerate word for the identity.  In
    ``G_0`` nothing is degenerate, so a degenerate edge must give ``1``.
    """
    n = x.dim - 1
    if x.is_degenerate and n == 0:
        return [] if tcx_perm(G, x, ()) == G.identity(0) else [()]
    if x.is_degenerate:
        return [g for g in permutations(range(1, n + 1)) if G.is_degenerate(tcx_perm(G, x, g)) is None]
    ident = tuple(range(1, n + 1))
    return [] if G.is_degenerate(tcx_perm(G, x, ident)) is None else [ident]


def face_identity_defects(G: LoopGroup, x: SimplexRef) -> dict[str, Chain]:
    """Non-normalized defects of the interior, ``d_0`` and ``d_n`` face identities."""
    n = x.dim - 1
    t = tc(G, x)
    out = {f"d_{i}": c for i, c in interior_faces(G, x).items()}
    if n >= 1:
        out["d_0"] = gchain_face(G, t, 0) - d0_rhs(G, x)
        out["d_n"] = gchain_face(G, t, n) * ((-1) ** n) - dn_rhs(G, x)
        out["d0dn"] = gchain_boundary(G, t) - gchain_face(G, t, 0) - gchain_face(G, t, n) * ((-1) ** n)
    return {k: v for k, v in out.items() if v}
