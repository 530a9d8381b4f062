"""Integer homology of finite chain complexes via Smith normal form."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Hashable, Iterable, Mapping, NamedTuple, Sequence

from .chains import Chain

Matrix = list[list[int]]


class HomologyError(ValueError):
    pass


class HomologyGroup(NamedTuple):
    betti: int
    torsion: tuple[int, ...] = ()

    def __str__(self) -> str:
        parts = []
        if self.betti == 1:
            parts.append("Z")
        elif self.betti > 1:
            parts.append(f"Z^{self.betti}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {"betti": self.betti, "torsion": list(self.torsion)}


def smith_normal_form(M: Sequence[Sequence[int]]) -> tuple[list[int], int]:
    """Invariant factors (each dividing the next) and the rank of an integer matrix."""
    A = [list(map(int, row)) for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    factors: list[int] = []
    t = 0
    while t < min(rows, cols):
        # pivot: nonzero entry of least absolute value in the remaining block
        best = None
        for i in range(t, rows):
            Ai = A[i]
            for j in range(t, cols):
                v = Ai[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        A[t], A[pi] = A[pi], A[t]
        if pj != t:
            for row in A:
                row[t], row[pj] = row[pj], row[t]
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if A[i][t]:
                    q = A[i][t] // p
                    if q:
                        Ai, At = A[i], A[t]
                        for j in range(t, cols):
                            Ai[j] -= q * At[j]
                    if A[i][t]:
                        dirty = True
            At = A[t]
            for j in range(t + 1, cols):
                if At[j]:
                    q = At[j] // p
                    if q:
                        for row in A:
                            row[j] -= q * row[t]
                    if At[j]:
                        dirty = True
            if not dirty:
                # pivot must divide the rest of the block
                bad = next(
                    ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                i, _ = bad
                At, Ai = A[t], A[i]
                for j in range(t, cols):
                    At[j] += Ai[j]
                continue
            # move the smallest remaining entry of row/column t to the pivot
            cand = [(abs(A[i][t]), i, t) for i in range(t, rows) if A[i][t]]
            cand += [(abs(A[t][j]), t, j) for j in range(t, cols) if A[t][j]]
            _, i, j = min(cand)
            if i != t:
                A[t], A[i] = A[i], A[t]
            if j != t:
                for row in A:
                    row[t], row[j] = row[j], row[t]
        factors.append(abs(A[t][t]))
        t += 1
    return factors, len(factors)


def rank_mod_p(M: Sequence[Sequence[int]], p: int) -> int:
    A = [[v % p for v in row] for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [(v * inv) % p for v in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(a - f * b) % p for a, b in zip(A[i], A[r])]
        r += 1
        if r == rows:
            break
    return r


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    if not A or not B:
        return []
    cols = len(B[0])
    out = []
    for row in A:
        acc = [0] * cols
        for k, a in enumerate(row):
            if a:
                Bk = B[k]
                for j in range(cols):
                    if Bk[j]:
                        acc[j] += a * Bk[j]
        out.append(acc)
    return out


@dataclass
class GradedComplex:
    """``bases[k]`` lists degree-k generators; ``boundary[k]`` is the matrix of C_k -> C_{k-1}."""

    bases: dict[int, list]
    boundary: dict[int, Matrix] = field(default_factory=dict)

    @classmethod
    def from_function(
        cls, bases: Mapping[int, Sequence[Hashable]], d: Callable[[Hashable], Chain]
    ) -> GradedComplex:
        bases = {k: list(v) for k, v in bases.items()}
        bd: dict[int, Matrix] = {}
        for k, basis in bases.items():
            lower = bases.get(k - 1)
            if lower is None:
                continue
            index = {b: i for i, b in enumerate(lower)}
            M = [[0] * len(basis) for _ in lower]
            for j, b in enumerate(basis):
                for key, c in d(b).items():
                    i = index.get(key)
                    if i is None:
                        raise HomologyError(f"boundary of {b} has term {key} outside the degree-{k - 1} basis")
                    M[i][j] += c
            bd[k] = M
        return cls(bases, bd)

    def matrix(self, k: int) -> Matrix:
        M = self.boundary.get(k)
        if M is not None:
            return M
        return [[0] * len(self.bases.get(k, [])) for _ in self.bases.get(k - 1, [])]

    def degrees(self) -> list[int]:
        return sorted(self.bases)

    def check_d_squared(self) -> list[int]:
        """Degrees ``k`` where ``d_{k-1} d_k != 0``."""
        bad = []
        for k in self.degrees():
            if k - 1 in self.bases and k - 2 in self.bases:
                P = mat_mul(self.matrix(k - 1), self.matrix(k))
                if any(any(row) for row in P):
                    bad.append(k)
        return bad

    def permuted(self, perms: Mapping[int, Sequence[int]]) -> GradedComplex:
        """Reorder each basis by ``perms[k]`` (new position -> old position)."""
        bases = {k: [b[i] for i in perms.get(k, range(len(b)))] for k, b in self.bases.items()}
        bd = {}
        for k, M in self.boundary.items():
            rp = perms.get(k - 1, range(len(M)))
            cp = perms.get(k, range(len(M[0]) if M else 0))
            bd[k] = [[M[i][j] for j in cp] for i in rp]
        return GradedComplex(bases, bd)


def _rank_and_factors(C: GradedComplex, k: int, cache: dict) -> tuple[int, list[int]]:
    if k not in cache:
        M = C.matrix(k)
        if not M or not M[0]:
            cache[k] = (0, [])
        else:
            f, r = smith_normal_form(M)
            cache[k] = (r, f)
    return cache[k]


def homology(C: GradedComplex, k: int, check: bool = True, _cache: dict | None = None) -> HomologyGroup:
    """``H_k`` of ``C``; requires bases in degrees ``k`` and ``k + 1`` (missing means zero)."""
    cache = {} if _cache is None else _cache
    if check and k + 1 in C.bases and k - 1 in C.bases:
        P = mat_mul(C.matrix(k), C.matrix(k + 1))
        if any(any(row) for row in P):
            raise HomologyError(f"d o d != 0 at degree {k + 1}")
    n = len(C.bases.get(k, []))
    r_out, _ = _rank_and_factors(C, k, cache)
    r_in, f_in = _rank_and_factors(C, k + 1, cache)
    torsion = tuple(sorted(f for f in f_in if f > 1))
    return HomologyGroup(n - r_out - r_in, torsion)


def homology_all(C: GradedComplex, degrees: Iterable[int] | None = None) -> dict[int, HomologyGroup]:
    cache: dict = {}
    degs = C.degrees() if degrees is None else list(degrees)
    return {k: homology(C, k, check=True, _cache=cache) for k in degs}


def mod_p_dimensions(C: GradedComplex, p: int, degrees: Iterable[int]) -> dict[int, int]:
    """``dim H_k(C; F_p)`` from mod-p ranks only."""
    ranks: dict[int, int] = {}

    def rk(k):
        if k not in ranks:
            M = C.matrix(k)
            ranks[k] = rank_mod_p(M, p) if M and M[0] else 0
        return ranks[k]

    return {k: len(C.bases.get(k, [])) - rk(k) - rk(k + 1) for k in degrees}


def expected_mod_p(H: Mapping[int, HomologyGroup], p: int, k: int) -> int:
    """Universal coefficients: ``dim H_k(C; F_p)`` predicted by integral homology."""
    t = lambda g: sum(1 for f in g.torsion if f % p == 0)
    below = H.get(k - 1)
    return H[k].betti + t(H[k]) + (t(below) if below else 0)


# -- Kunneth ---------------------------------------------------------------------------


def _prime_powers(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            q = 1
            while n % d == 0:
                n //= d
                q *= d
            out.append(q)
        d += 1
    if n > 1:
        out.append(n)
    return out


def invariant_factors(cyclic_orders: Iterable[int]) -> tuple[int, ...]:
    """Canonical invariant factors of a direct sum of cyclic groups."""
    by_prime: dict[int, list[int]] = {}
    for m in cyclic_orders:
        if m <= 1:
            continue
        for q in _prime_powers(m):
            p = next(d for d in range(2, q + 1) if q % d == 0)
            by_prime.setdefault(p, []).append(q)
    for qs in by_prime.values():
        qs.sort(reverse=True)
    width = max((len(qs) for qs in by_prime.values()), default=0)
    out = []
    for i in range(width):
        f = 1
        for qs in by_prime.values():
            if i < len(qs):
                f *= qs[i]
        out.append(f)
    return tuple(sorted(out))


def kunneth(HX: Mapping[int, HomologyGroup], HZ: Mapping[int, HomologyGroup], k: int) -> HomologyGroup:
    """``H_k(X x Z)`` from the factors' homology (tensor plus Tor terms)."""
    betti, cyc = 0, []
    for i in range(k + 1):
        a, b = HX.get(i), HZ.get(k - i)
        if a is None or b is None:
            continue
        betti += a.betti * b.betti
        cyc += [t for t in b.torsion for _ in range(a.betti)]
        cyc += [t for t in a.torsion for _ in range(b.betti)]
        cyc += [gcd(s, t) for s in a.torsion for t in b.torsion]
    for i in range(k):
        a, b = HX.get(i), HZ.get(k - 1 - i)
        if a is None or b is None:
            continue
        cyc += [gcd(s, t) for s in a.torsion for t in b.torsion]
    return HomologyGroup(betti, invariant_factors(cyc))
