"""Prism words in the groupoid ``h Gamma X``, the pseudosection ``iota`` and ``tau`` as a prism.

An elementary prism ``(y, i)`` with ``y`` in ``X_{n+1}`` runs from ``d_{i+1} y`` to
``d_i y``.  Words are reduced by free groupoid cancellation and by erasing the
identity prisms ``(s_i z, i)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional

from .loop_group import GroupWord
from .simplicial import SimplexRef, SimplicialError, SimplicialSet, format_simplex


class ElementaryPrism(NamedTuple):
    simplex: SimplexRef
    position: int
    exponent: int = 1

    def inverse(self) -> ElementaryPrism:
        return ElementaryPrism(self.simplex, self.position, -self.exponent)

    def __str__(self) -> str:
        e = "" if self.exponent == 1 else "^-1"
        return f"({format_simplex(self.simplex)},{self.position}){e}"


def endpoints(X: SimplicialSet, p: ElementaryPrism) -> tuple[SimplexRef, SimplexRef]:
    a = X.face(p.simplex, p.position + 1)
    b = X.face(p.simplex, p.position)
    return (a, b) if p.exponent == 1 else (b, a)


class PrismWord(NamedTuple):
    """A reduced composable word; ``source`` pins down empty words."""

    dim: int
    source: SimplexRef
    letters: tuple[ElementaryPrism, ...] = ()

    def __str__(self) -> str:
        if not self.letters:
            return f"id[{format_simplex(self.source)}]"
        return "".join(str(p) for p in self.letters)


class ChainingError(SimplicialError):
    pass


@dataclass
class PrismCalculus:
    X: SimplicialSet
    check: bool = True
    _iota: dict = field(default_factory=dict, repr=False)

    # -- words ---------------------------------------------------------------
    def is_identity(self, p: ElementaryPrism) -> bool:
        return p.simplex.degenerate_at(p.position)

    def target(self, w: PrismWord) -> SimplexRef:
        return endpoints(self.X, w.letters[-1])[1] if w.letters else w.source

    def word(self, dim: int, source: SimplexRef, letters: Iterable[ElementaryPrism]) -> PrismWord:
        stack: list[ElementaryPrism] = []
        cur = source
        for p in letters:
            if p.simplex.dim != dim + 1 or not 0 <= p.position <= dim:
                raise SimplicialError(f"prism {p} does not live in dimension {dim}")
            if self.check:
                a, b = endpoints(self.X, p)
                if a != cur:
                    raise ChainingError(f"prism {p} starts at {a}, expected {cur}")
                cur = b
            if self.is_identity(p):
                continue
            if stack and stack[-1] == p.inverse():
                stack.pop()
            else:
                stack.append(p)
        return PrismWord(dim, source, tuple(stack))

    def identity(self, x: SimplexRef) -> PrismWord:
        return PrismWord(x.dim, x)

    def elementary(self, y: SimplexRef, i: int, e: int = 1) -> PrismWord:
        p = ElementaryPrism(y, i, e)
        return self.word(y.dim - 1, endpoints(self.X, p)[0], [p])

    def compose(self, *words: PrismWord) -> PrismWord:
        """Concatenate ``words`` left to right (paths)."""
        first = words[0]
        letters = []
        for k, w in enumerate(words):
            if w.dim != first.dim:
                raise SimplicialError("cannot compose prisms of different dimensions")
            if k and self.target(words[k - 1]) != w.source:
                raise ChainingError(f"cannot compose: {self.target(words[k - 1])} != {w.source}")
            letters.extend(w.letters)
        return self.word(first.dim, first.source, letters)

    def inverse(self, w: PrismWord) -> PrismWord:
        return self.word(w.dim, self.target(w), [p.inverse() for p in reversed(w.letters)])

    # -- simplicial structure -------------------------------------------------------
    def _face_letter(self, p: ElementaryPrism, j: int) -> list[ElementaryPrism]:
        y, i = p.simplex, p.position
        if j < i:
            return [ElementaryPrism(self.X.face(y, j), i - 1, p.exponent)]
        if j == i:
            return []
        return [ElementaryPrism(self.X.face(y, j + 1), i, p.exponent)]

    def _degeneracy_letter(self, p: ElementaryPrism, j: int) -> list[ElementaryPrism]:
        X, y, i = self.X, p.simplex, p.position
        if j < i:
            out = [ElementaryPrism(X.degeneracy(y, j), i + 1)]
        elif j > i:
            out = [ElementaryPrism(X.degeneracy(y, j + 1), i)]
        else:
            out = [ElementaryPrism(X.degeneracy(y, i), i + 1), ElementaryPrism(X.degeneracy(y, i + 1), i)]
        if p.exponent == -1:
            out = [q.inverse() for q in reversed(out)]
        return out

    def face(self, w: PrismWord, j: int) -> PrismWord:
        if w.dim < 1 or not 0 <= j <= w.dim:
            raise SimplicialError(f"face index {j} out of range for prisms of dim {w.dim}")
        letters = [q for p in w.letters for q in self._face_letter(p, j)]
        return self.word(w.dim - 1, self.X.face(w.source, j), letters)

    def degeneracy(self, w: PrismWord, j: int) -> PrismWord:
        if not 0 <= j <= w.dim:
            raise SimplicialError(f"degeneracy index {j} out of range for prisms of dim {w.dim}")
        letters = [q for p in w.letters for q in self._degeneracy_letter(p, j)]
        return self.word(w.dim + 1, self.X.degeneracy(w.source, j), letters)

    # -- iota and tau ------------------------------------------------------------------
    def iota(self, x: SimplexRef) -> PrismWord:
        """Path from ``x`` to the base point through ``[0..n-k, n, ..., n]_x``."""
        if not self.X.is_reduced:
            raise SimplicialError("iota needs a reduced simplicial set")
        hit = self._iota.get(x)
        if hit is not None:
            return hit
        n = x.dim
        letters = []
        for k in range(1, n + 1):
            # (s_n ... s_{n-k+1} d_{n-k+1} ... d_{n-1} x, n-k)
            z = x
            for i in range(n - 1, n - k, -1):
                z = self.X.face(z, i)
            for i in range(n - k + 1, n + 1):
                z = self.X.degeneracy(z, i)
            letters.append(ElementaryPrism(z, n - k))
        out = self.word(n, x, letters)
        self._iota[x] = out
        return out

    def tau(self, x: SimplexRef) -> PrismWord:
        """``(iota d_n x)^-1 (x, n-1) (iota d_{n-1} x)``, a loop at the base point."""
        n = x.dim
        if n < 1:
            raise SimplicialError("tau is defined on simplices of dimension >= 1")
        X = self.X
        return self.compose(
            self.inverse(self.iota(X.face(x, n))),
            self.elementary(x, n - 1),
            self.iota(X.face(x, n - 1)),
        )

    def embed(self, w: GroupWord) -> PrismWord:
        """Image of a loop group word under ``tau y -> tau_prism(y)``."""
        out = self.identity(self.X.base(w.dim))
        for y, e in w.letters:
            t = self.tau(y)
            out = self.compose(out, t if e == 1 else self.inverse(t))
        return out


class IdentityFailure(NamedTuple):
    name: str
    simplex: SimplexRef
    index: Optional[int]
    lhs: PrismWord
    rhs: PrismWord

    def __str__(self) -> str:
        where = "" if self.index is None else f" (i={self.index})"
        return f"{self.name}{where} fails at {format_simplex(self.simplex)}: {self.lhs} != {self.rhs}"


def verify_pseudosection(P: PrismCalculus, x: SimplexRef) -> list[IdentityFailure]:
    """Check the face/degeneracy identities of ``iota`` and ``tau`` at ``x``."""
    X, n = P.X, x.dim
    fails: list[IdentityFailure] = []

    def expect(name, i, lhs, rhs):
        if lhs != rhs:
            fails.append(IdentityFailure(name, x, i, lhs, rhs))

    ix = P.iota(x)
    if n >= 1:
        for i in range(n):
            expect("d_i iota = iota d_i", i, P.face(ix, i), P.iota(X.face(x, i)))
        expect("d_n iota = (iota d_n)(tau)", n, P.face(ix, n), P.compose(P.iota(X.face(x, n)), P.tau(x)))
    for i in range(n + 1):
        expect("s_i iota = iota s_i", i, P.degeneracy(ix, i), P.iota(X.degeneracy(x, i)))
    if n < 1:
        return fails
    tx = P.tau(x)
    if n >= 2:
        for i in range(n - 1):
            expect("d_i tau = tau d_i", i, P.face(tx, i), P.tau(X.face(x, i)))
        expect(
            "d_{n-1} tau = (tau d_n)^-1 (tau d_{n-1})",
            n - 1,
            P.face(tx, n - 1),
            P.compose(P.inverse(P.tau(X.face(x, n))), P.tau(X.face(x, n - 1))),
        )
    for i in range(n):
        expect("s_i tau = tau s_i", i, P.degeneracy(tx, i), P.tau(X.degeneracy(x, i)))
    expect("tau s_n = 1", n, P.tau(X.degeneracy(x, n)), P.identity(X.base(n)))
    return fails
