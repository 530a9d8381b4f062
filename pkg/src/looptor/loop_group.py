"""Kan's loop group ``GX`` as a free simplicial group.

Elements of ``G_n X`` are freely reduced words in letters ``tau(y)^{+-1}`` with
``y`` an ``(n+1)``-simplex of ``X``.  Face and degeneracy maps follow one of the
four twisting conventions:

========  =============================================  ==================
tag       distinguished face                             erased letters
========  =============================================  ==================
A1B1      d_0 tau y = (tau d_1 y)(tau d_0 y)^-1          tau s_0 y = 1
A1B2      d_0 tau y = (tau d_0 y)^-1 (tau d_1 y)         tau s_0 y = 1
A2B1      d_n tau y = (tau d_{n+1} y)^-1 (tau d_n y)     tau s_{n+1} y = 1
A2B2      d_n tau y = (tau d_n y)(tau d_{n+1} y)^-1      tau s_{n+1} y = 1
========  =============================================  ==================

(indices for a letter at word dimension ``n``).  The remaining faces and all
degeneracies are ``tau`` applied to the shifted simplicial operator.
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache
from typing import Iterable, NamedTuple, Optional, Sequence

from .simplicial import SimplexRef, SimplicialError, SimplicialSet, format_simplex

Letter = tuple[SimplexRef, int]


class Convention(str, Enum):
    A1B1 = "A1B1"
    A1B2 = "A1B2"
    A2B1 = "A2B1"
    A2B2 = "A2B2"

    @property
    def from_top(self) -> bool:
        return self.value.startswith("A2")


DEFAULT = Convention.A2B1


class GroupWord(NamedTuple):
    dim: int
    letters: tuple[Letter, ...] = ()

    def __str__(self) -> str:
        if not self.letters:
            return f"1_{self.dim}"
        return "".join(
            f"t[{format_simplex(y)}]" + ("" if e == 1 else "^-1") for y, e in self.letters
        )

    def __len__(self) -> int:  # type: ignore[override]
        return len(self.letters)


class LoopGroup:
    """``GX`` for a simplicial set ``X`` under a fixed convention.

    Also serves as a target group for morphisms (see ``twisted``): the
    group-protocol methods accept an optional trailing dimension argument.
    """

    def __init__(self, X: SimplicialSet, convention: Convention | str = DEFAULT):
        self.X = X
        self.convention = Convention(convention)
        self._letter_faces: dict[tuple[SimplexRef, int], tuple[Letter, ...]] = {}

    def __repr__(self) -> str:
        return f"LoopGroup({self.X.name}, {self.convention.value})"

    def is_excluded(self, y: SimplexRef) -> bool:
        """Letters equal to the identity: top degeneracies (A2) or ``s_0`` (A1)."""
        if self.convention.from_top:
            return y.degenerate_at(y.dim - 1)
        return y.degenerate_at(0)

    # -- words -------------------------------------------------------------------
    def reduce(self, dim: int, letters: Iterable[Letter]) -> GroupWord:
        stack: list[Letter] = []
        for y, e in letters:
            if y.dim != dim + 1:
                raise SimplicialError(f"letter {format_simplex(y)} does not live in G_{dim}")
            if self.is_excluded(y):
                continue
            if stack and stack[-1][0] == y and stack[-1][1] == -e:
                stack.pop()
            else:
                stack.append((y, e))
        return GroupWord(dim, tuple(stack))

    def identity(self, n: int) -> GroupWord:
        return GroupWord(n)

    def tau(self, x: SimplexRef) -> GroupWord:
        if x.dim < 1:
            raise SimplicialError("tau is defined on simplices of dimension >= 1")
        return self.reduce(x.dim - 1, [(x, 1)])

    def mul(self, a: GroupWord, b: GroupWord, n: Optional[int] = None) -> GroupWord:
        if a.dim != b.dim:
            raise SimplicialError(f"cannot multiply words of dimensions {a.dim} and {b.dim}")
        return self.reduce(a.dim, a.letters + b.letters)

    def inv(self, a: GroupWord, n: Optional[int] = None) -> GroupWord:
        return GroupWord(a.dim, tuple((y, -e) for y, e in reversed(a.letters)))

    def product(self, words: Sequence[GroupWord], dim: int) -> GroupWord:
        return self.reduce(dim, [l for w in words for l in w.letters])

    # -- simplicial structure ---------------------------------------------------------
    def _letter_face(self, y: SimplexRef, i: int) -> tuple[Letter, ...]:
        key = (y, i)
        hit = self._letter_faces.get(key)
        if hit is not None:
            return hit
        X, n = self.X, y.dim - 1
        conv = self.convention
        if conv.from_top:
            if i < n:
                out = ((X.face(y, i), 1),)
            elif conv is Convention.A2B1:
                out = ((X.face(y, n + 1), -1), (X.face(y, n), 1))
            else:
                out = ((X.face(y, n), 1), (X.face(y, n + 1), -1))
        else:
            if i > 0:
                out = ((X.face(y, i + 1), 1),)
            elif conv is Convention.A1B1:
                out = ((X.face(y, 1), 1), (X.face(y, 0), -1))
            else:
                out = ((X.face(y, 0), -1), (X.face(y, 1), 1))
        self._letter_faces[key] = out
        return out

    def face(self, w: GroupWord, i: int, n: Optional[int] = None) -> GroupWord:
        if w.dim < 1 or not 0 <= i <= w.dim:
            raise SimplicialError(f"face index {i} out of range for G_{w.dim}")
        letters: list[Letter] = []
        for y, e in w.letters:
            part = self._letter_face(y, i)
            if e == 1:
                letters.extend(part)
            else:
                letters.extend((z, -f) for z, f in reversed(part))
        return self.reduce(w.dim - 1, letters)

    def degeneracy(self, w: GroupWord, i: int, n: Optional[int] = None) -> GroupWord:
        if not 0 <= i <= w.dim:
            raise SimplicialError(f"degeneracy index {i} out of range for G_{w.dim}")
        j = i if self.convention.from_top else i + 1
        return self.reduce(w.dim + 1, [(self.X.degeneracy(y, j), e) for y, e in w.letters])

    def degenerate_by(self, w: GroupWord, indices: Iterable[int]) -> GroupWord:
        for i in indices:
            w = self.degeneracy(w, i)
        return w

    def is_degenerate(self, w: GroupWord) -> Optional[int]:
        """Smallest ``i`` with ``w = s_i d_i w``, or ``None``."""
        for i in range(w.dim):
            if self.degeneracy(self.face(w, i), i) == w:
                return i
        return None

    def degenerate_at(self, w: GroupWord, i: int) -> bool:
        return 0 <= i < w.dim and self.degeneracy(self.face(w, i), i) == w


@lru_cache(maxsize=None)
def loop_group(X: SimplicialSet, convention: Convention | str = DEFAULT) -> LoopGroup:
    return LoopGroup(X, Convention(convention))


def tau(X: SimplicialSet, x: SimplexRef, conv: Convention | str = DEFAULT) -> GroupWord:
    return loop_group(X, conv).tau(x)


def g_face(X: SimplicialSet, w: GroupWord, i: int, conv: Convention | str = DEFAULT) -> GroupWord:
    return loop_group(X, conv).face(w, i)


def g_degeneracy(X: SimplicialSet, w: GroupWord, i: int, conv: Convention | str = DEFAULT) -> GroupWord:
    return loop_group(X, conv).degeneracy(w, i)


def is_degenerate_word(X: SimplicialSet, w: GroupWord, conv: Convention | str = DEFAULT) -> Optional[int]:
    return loop_group(X, conv).is_degenerate(w)


def random_word(G: LoopGroup, dim: int, rng, max_letters: int = 4) -> GroupWord:
    """Reduced word of ``G_dim`` built from uniformly chosen letters."""
    pool = list(G.X.simplices(dim + 1))
    letters = [(rng.choice(pool), rng.choice((1, -1))) for _ in range(rng.randint(0, max_letters))]
    return G.reduce(dim, letters)


def identity_failures(G: LoopGroup, w: GroupWord, other: Optional[GroupWord] = None) -> list[str]:
    """Simplicial identities and the homomorphism property at ``w`` (and ``w * other``)."""
    n, out = w.dim, []
    d, s = G.face, G.degeneracy

    def expect(name, lhs, rhs):
        if lhs != rhs:
            out.append(f"{name}: {lhs} != {rhs}")

    for j in range(n + 1):
        for i in range(j):
            if n >= 2:
                expect(f"d_{i} d_{j} = d_{j - 1} d_{i}", d(d(w, j), i), d(d(w, i), j - 1))
        for i in range(j, n + 1):
            expect(f"s_{i} s_{j} = s_{j} s_{i - 1}" if i > j else f"s_{i} s_{j} = s_{j + 1} s_{i}",
                   s(s(w, j), i), s(s(w, i - 1), j) if i > j else s(s(w, i), j + 1))
        for i in range(n + 2):
            lhs = d(s(w, j), i)
            if i in (j, j + 1):
                expect(f"d_{i} s_{j} = id", lhs, w)
            elif n >= 1:
                rhs = s(d(w, i), j - 1) if i < j else s(d(w, i - 1), j)
                expect(f"d_{i} s_{j}", lhs, rhs)
    if other is not None:
        ab = G.mul(w, other)
        for i in range(n + 1 if n else 0):
            expect(f"d_{i} is a homomorphism", d(ab, i), G.mul(d(w, i), d(other, i)))
        for i in range(n + 1):
            expect(f"s_{i} is a homomorphism", s(ab, i), G.mul(s(w, i), s(other, i)))
    return out
