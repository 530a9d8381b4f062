"""Twisted cartesian and twisted tensor products, the operator ``D_x`` and ``Psi``.

Structure groups of finite fibers are constant simplicial groups (a finite group
in every dimension, identity faces and degeneracies).  The principal object
``X x_tau GX`` is handled symbolically: its elements are pairs
``(SimplexRef, GroupWord)`` with finitely supported chains.

``Psi(x (x) 1)`` is computed once on the standard simplex, where every simplex is
literally an increasing map so that ``D_x`` (prepend 0) is well defined, and then
pushed forward along ``x: Delta^n -> X``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Mapping, NamedTuple, Optional, Sequence

from .chains import Chain
from .homology import GradedComplex, HomologyGroup, homology_all, kunneth
from .loop_group import Convention, GroupWord, LoopGroup, loop_group
from .simplicial import (
    SimplexRef,
    SimplicialError,
    SimplicialSet,
    format_simplex,
    resolve_space,
    standard_simplex,
)
from .twisting import normalized_boundary, phi, shuffles, sub_face


class TwistError(SimplicialError):
    pass


# -- constant groups ---------------------------------------------------------------------


class ConstantGroup:
    """A finite group viewed as a constant simplicial group."""

    def __init__(self, elements: Sequence[str], table: Mapping[tuple[str, str], str], identity: str, name: str = ""):
        self.elements = list(elements)
        self.table = dict(table)
        self.e = identity
        self.name = name
        self._inv = {}
        for a in self.elements:
            for b in self.elements:
                if self.table.get((a, b)) not in self.elements:
                    raise TwistError(f"multiplication table incomplete at ({a}, {b})")
            inv = [b for b in self.elements if self.table[(a, b)] == self.e]
            if len(inv) != 1 or self.table[(inv[0], a)] != self.e:
                raise TwistError(f"element {a!r} has no two-sided inverse")
            self._inv[a] = inv[0]
        for a in self.elements:
            if self.table[(self.e, a)] != a or self.table[(a, self.e)] != a:
                raise TwistError(f"{identity!r} is not an identity")
            for b in self.elements:
                for c in self.elements:
                    if self.table[(self.table[(a, b)], c)] != self.table[(a, self.table[(b, c)])]:
                        raise TwistError(f"multiplication is not associative at ({a}, {b}, {c})")

    def __repr__(self) -> str:
        return f"ConstantGroup({self.name or len(self.elements)})"

    def identity(self, n: int = 0) -> str:
        return self.e

    def mul(self, a: str, b: str, n: Optional[int] = None) -> str:
        return self.table[(a, b)]

    def inv(self, a: str, n: Optional[int] = None) -> str:
        return self._inv[a]

    def face(self, a: str, i: int, n: Optional[int] = None) -> str:
        return a

    def degeneracy(self, a: str, i: int, n: Optional[int] = None) -> str:
        return a

    def degenerate_by(self, a: str, indices: Iterable[int]) -> str:
        return a

    def product(self, items: Iterable[str]) -> str:
        acc = self.e
        for a in items:
            acc = self.table[(acc, a)]
        return acc


def cyclic_group(m: int) -> ConstantGroup:
    if m < 1:
        raise TwistError("cyclic group order must be >= 1")
    els = [str(k) for k in range(m)]
    return ConstantGroup(els, {(a, b): str((int(a) + int(b)) % m) for a in els for b in els}, "0", name=f"Z/{m}")


def trivial_group() -> ConstantGroup:
    return cyclic_group(1)


def group_from_dict(desc: Mapping) -> ConstantGroup:
    if "cyclic" in desc:
        return cyclic_group(int(desc["cyclic"]))
    try:
        els = [str(a) for a in desc["elements"]]
        table = {(str(a), str(b)): str(c) for a, row in desc["table"].items() for b, c in row.items()}
        ident = str(desc.get("identity", els[0]))
    except (KeyError, AttributeError, TypeError, IndexError) as exc:
        raise TwistError(f"malformed group description: {exc!r}") from exc
    return ConstantGroup(els, table, ident, name=str(desc.get("name", "")))


# -- actions on finite fibers -------------------------------------------------------------


class GroupAction:
    """``Gamma`` acting on ``Z`` from the left by permuting generators."""

    def __init__(self, Z: SimplicialSet, group: ConstantGroup, perms: Mapping[str, Mapping[str, str]] | None = None):
        self.Z, self.group = Z, group
        perms = perms or {}
        self.perms = {a: {g: str(perms.get(a, {}).get(g, g)) for g in Z.gen_dim} for a in group.elements}
        self._validate()

    def _validate(self) -> None:
        Z, grp = self.Z, self.group
        for a, p in self.perms.items():
            if sorted(p.values()) != sorted(p):
                raise TwistError(f"action of {a!r} is not a bijection of generators")
            for g, h in p.items():
                if Z.gen_dim[g] != Z.gen_dim[h]:
                    raise TwistError(f"action of {a!r} sends {g!r} to a different dimension")
                x = Z.gen(g)
                for i in range(x.dim + 1 if x.dim else 0):
                    if self.act(a, Z.face(x, i)) != Z.face(Z.gen(h), i):
                        raise TwistError(f"action of {a!r} does not commute with d_{i} on {g!r}")
        for g in Z.gen_dim:
            if self.perms[grp.e][g] != g:
                raise TwistError("the identity must act trivially")
            for a in grp.elements:
                for b in grp.elements:
                    if self.perms[grp.mul(a, b)][g] != self.perms[a][self.perms[b][g]]:
                        raise TwistError(f"not an action: ({a}{b}) differs from {a} after {b} on {g!r}")

    def act(self, a: str, z: SimplexRef) -> SimplexRef:
        return SimplexRef(self.perms[a][z.generator], z.deg_word, z.dim)


def shift_action(Z: SimplicialSet, group: ConstantGroup) -> GroupAction:
    """Cyclic groups shift integer generator labels mod ``m``; other labels stay fixed."""
    m = len(group.elements)
    perms = {}
    for a in group.elements:
        p = {}
        for g in Z.gen_dim:
            try:
                k = int(g)
            except ValueError:
                continue
            if 0 <= k < m:
                p[g] = str((k + int(a)) % m)
        perms[a] = p
    return GroupAction(Z, group, perms)


def trivial_action(Z: SimplicialSet, group: ConstantGroup) -> GroupAction:
    return GroupAction(Z, group, {})


# -- twisting functions ---------------------------------------------------------------------


class TwistingFunction:
    """Degree -1 map ``X -> Gamma`` specified on nondegenerate generators of dim >= 1."""

    def __init__(self, X: SimplicialSet, group: ConstantGroup, values: Mapping[str, str]):
        self.X, self.group = X, group
        self.values = {str(k): str(v) for k, v in values.items()}
        for g, a in self.values.items():
            if g not in X.gen_dim or X.gen_dim[g] < 1:
                raise TwistError(f"twist assigned to unknown or 0-dimensional generator {g!r}")
            if a not in group.elements:
                raise TwistError(f"twist value {a!r} is not a group element")

    def __call__(self, x: SimplexRef) -> str:
        if x.dim < 1:
            raise TwistError("tau is defined in dimensions >= 1")
        if x.deg_word:
            j = x.deg_word[0]
            if j == x.dim - 1:
                return self.group.e  # tau s_n y = 1
            # tau s_j y = s_j tau y = tau y for a constant group
            return self(SimplexRef(x.generator, x.deg_word[1:], x.dim - 1))
        return self.values.get(x.generator, self.group.e)

    def violations(self, max_dim: Optional[int] = None) -> list[str]:
        """Face and degeneracy axioms on every simplex up to ``max_dim``."""
        X, grp = self.X, self.group
        top = (X.max_dim + 1) if max_dim is None else max_dim
        out = []
        for n in range(2, top + 1):
            for x in X.simplices(n):
                t = self(x)
                for i in range(n - 1):
                    if t != self(X.face(x, i)):
                        out.append(f"d_{i} tau != tau d_{i} at {format_simplex(x)}")
                want = grp.mul(grp.inv(self(X.face(x, n))), self(X.face(x, n - 1)))
                if t != want:
                    out.append(f"d_{n - 1} tau != (tau d_{n})^-1 (tau d_{n - 1}) at {format_simplex(x)}")
        for n in range(1, top):
            for x in X.simplices(n):
                for i in range(n):
                    if self(X.degeneracy(x, i)) != self(x):
                        out.append(f"s_{i} tau != tau s_{i} at {format_simplex(x)}")
                if self(X.degeneracy(x, n)) != grp.e:
                    out.append(f"tau s_{n} != 1 at {format_simplex(x)}")
        return out


def check_twisting(tw: TwistingFunction, max_dim: Optional[int] = None) -> list[str]:
    return tw.violations(max_dim)


def complete_twisting(X: SimplicialSet, group: ConstantGroup, partial: Mapping[str, str]) -> TwistingFunction:
    """Fill unspecified generators of dim >= 2 from ``tau x = (tau d_n x)^-1 (tau d_{n-1} x)``."""
    tw = TwistingFunction(X, group, partial)
    for n in sorted(d for d in X.generators if d >= 2):
        for x in X.nondegenerate(n):
            if x.generator not in tw.values:
                tw.values[x.generator] = group.mul(group.inv(tw(X.face(x, n))), tw(X.face(x, n - 1)))
    return tw


class GXMorphism:
    """Homomorphism ``GX -> Gamma`` given on letters ``tau y``."""

    def __init__(self, G: LoopGroup, group: ConstantGroup, assignment: Callable[[SimplexRef], str]):
        self.G, self.group, self.assign = G, group, assignment

    def __call__(self, w: GroupWord) -> str:
        grp = self.group
        acc = grp.e
        for y, e in w.letters:
            a = self.assign(y)
            acc = grp.mul(acc, a if e == 1 else grp.inv(a))
        return acc

    def violations(self, max_dim: int) -> list[str]:
        G, grp = self.G, self.group
        out = []
        for n in range(1, max_dim + 1):
            for y in G.X.simplices(n + 1):
                w = G.tau(y)
                img = self(w)
                for i in range(n + 1):
                    if self(G.face(w, i)) != grp.face(img, i):
                        out.append(f"d_{i} not preserved on tau[{format_simplex(y)}]")
                for i in range(n + 1):
                    if self(G.degeneracy(w, i)) != grp.degeneracy(img, i):
                        out.append(f"s_{i} not preserved on tau[{format_simplex(y)}]")
        return out


def induce_gx_morphism(G: LoopGroup, group: ConstantGroup, assignment, check_dim: Optional[int] = 3) -> GXMorphism:
    if G.convention is not Convention.A2B1:
        raise TwistError("morphisms out of GX are induced for the A2B1 convention only")
    f = assignment if callable(assignment) else (lambda y, a=dict(assignment), e=group.e: a.get(y, e))
    m = GXMorphism(G, group, f)
    if check_dim is not None:
        bad = m.violations(check_dim)
        if bad:
            raise TwistError("assignment is not simplicial: " + bad[0])
    return m


# -- fibers ---------------------------------------------------------------------------


class Fiber:
    """Interface shared by finite fibers and the principal fiber ``GX``."""

    X: SimplicialSet
    G: LoopGroup
    group: object

    def push(self, w: GroupWord): ...

    def tau(self, x: SimplexRef): ...

    def act(self, a, z): ...

    def fface(self, z, i: int): ...

    def fdegeneracy(self, z, i: int): ...

    def fdegenerate_at(self, z, i: int) -> bool: ...

    def fdim(self, z) -> int: ...

    def fboundary(self, z) -> Chain: ...


class FiniteFiber(Fiber):
    def __init__(self, twist: TwistingFunction, action: GroupAction):
        if twist.group is not action.group:
            raise TwistError("twisting function and action use different groups")
        self.X, self.Z, self.group = twist.X, action.Z, action.group
        self.twist, self.action = twist, action
        self.G = loop_group(self.X, Convention.A2B1)
        self.morphism = GXMorphism(self.G, self.group, twist)

    def push(self, w: GroupWord) -> str:
        return self.morphism(w)

    def tau(self, x: SimplexRef) -> str:
        return self.twist(x)

    def act(self, a: str, z: SimplexRef) -> SimplexRef:
        return self.action.act(a, z)

    def fface(self, z: SimplexRef, i: int) -> SimplexRef:
        return self.Z.face(z, i)

    def fdegeneracy(self, z: SimplexRef, i: int) -> SimplexRef:
        return self.Z.degeneracy(z, i)

    def fdegenerate_at(self, z: SimplexRef, i: int) -> bool:
        return z.degenerate_at(i)

    def fdim(self, z: SimplexRef) -> int:
        return z.dim

    def fboundary(self, z: SimplexRef) -> Chain:
        return Chain(self.Z.boundary(z))

    def fiber_basis(self, t: int) -> list[SimplexRef]:
        return self.Z.nondegenerate(t)


class PrincipalFiber(Fiber):
    """``Z = GX`` with ``GX`` acting by left multiplication."""

    def __init__(self, X: SimplicialSet):
        self.X = X
        self.G = self.group = loop_group(X, Convention.A2B1)

    def push(self, w: GroupWord) -> GroupWord:
        return w

    def tau(self, x: SimplexRef) -> GroupWord:
        return self.G.tau(x)

    def act(self, a: GroupWord, z: GroupWord) -> GroupWord:
        return self.G.mul(a, z)

    def fface(self, z: GroupWord, i: int) -> GroupWord:
        return self.G.face(z, i)

    def fdegeneracy(self, z: GroupWord, i: int) -> GroupWord:
        return self.G.degeneracy(z, i)

    def fdegenerate_at(self, z: GroupWord, i: int) -> bool:
        return self.G.degenerate_at(z, i)

    def fdim(self, z: GroupWord) -> int:
        return z.dim

    def fboundary(self, z: GroupWord) -> Chain:
        G = self.G
        out = Chain()
        if z.dim:
            for i in range(z.dim + 1):
                w = G.face(z, i)
                if G.is_degenerate(w) is None:
                    out.add_term(w, (-1) ** i)
        return out


# -- twisted cartesian products ------------------------------------------------------------


def pair_degenerate(F: Fiber, x: SimplexRef, z) -> bool:
    return any(x.degenerate_at(i) and F.fdegenerate_at(z, i) for i in x.deg_word)


def normalize_pairs(F: Fiber, c: Chain) -> Chain:
    return c.filter(lambda p: not pair_degenerate(F, p[0], p[1]))


def tcp_diff_raw(F: Fiber, x: SimplexRef, z) -> Chain:
    n = x.dim
    if F.fdim(z) != n:
        raise TwistError(f"dimension mismatch in ({format_simplex(x)}, {z})")
    out = Chain()
    if n == 0:
        return out
    X = F.X
    for i in range(n):
        out.add_term((X.face(x, i), F.fface(z, i)), (-1) ** i)
    out.add_term((X.face(x, n), F.act(F.tau(x), F.fface(z, n))), (-1) ** n)
    return out


def tcp_diff(F: Fiber, x: SimplexRef, z) -> Chain:
    """``d_x + d_tau`` on a pair, normalized."""
    return normalize_pairs(F, tcp_diff_raw(F, x, z))


def tcp_diff_chain(F: Fiber, c: Chain) -> Chain:
    return c.map(lambda p: tcp_diff(F, p[0], p[1]))


def tcp_basis(F: FiniteFiber, n: int) -> list[tuple[SimplexRef, SimplexRef]]:
    return [
        (x, z)
        for x in F.X.simplices(n)
        for z in F.Z.simplices(n)
        if not pair_degenerate(F, x, z)
    ]


def tcp_complex(F: FiniteFiber, max_dim: int) -> GradedComplex:
    bases = {n: tcp_basis(F, n) for n in range(max_dim + 1)}
    return GradedComplex.from_function(bases, lambda p: tcp_diff(F, p[0], p[1]))


# -- actions of group chains -----------------------------------------------------------------


def act_chain(F: Fiber, c: Chain, z, dim_c: Optional[int] = None) -> Chain:
    """``c . z`` for a chain of ``GX`` words (pushed to the structure group) and a fiber simplex."""
    out = Chain()
    t = F.fdim(z)
    for w, k in c.items():
        a = F.push(w)
        for sh in shuffles(w.dim, t):
            g = F.group.degenerate_by(a, sh.b_degeneracies)
            zz = z
            for i in sh.a_degeneracies:
                zz = F.fdegeneracy(zz, i)
            out.add_term(F.act(g, zz), sh.coeff * k)
    return out


def pair_act(F: Fiber, x: SimplexRef, g, z) -> Chain:
    """``(x, g) . z``: shuffle action of a principal pair on a fiber simplex (``g`` in the structure group)."""
    X = F.X
    out = Chain()
    for sh in shuffles(x.dim, F.fdim(z)):
        xx = X.degenerate_by(x, sh.b_degeneracies)
        gg = F.group.degenerate_by(g, sh.b_degeneracies)
        zz = z
        for i in sh.a_degeneracies:
            zz = F.fdegeneracy(zz, i)
        out.add_term((xx, F.act(gg, zz)), sh.coeff)
    return out


def action_leibniz_defect(F: Fiber, w: GroupWord, z) -> Chain:
    """``d(w . z) - (dw) . z - (-1)^p w . dz`` for the action of ``RGX`` on ``RZ``; normalized."""
    G = F.G
    lhs = act_chain(F, Chain.single(w), z).map(F.fboundary)
    dw = normalized_boundary(G, Chain.single(w))
    rhs = act_chain(F, dw, z) if w.dim else Chain()
    for y, c in F.fboundary(z).items():
        rhs.iadd(act_chain(F, Chain.single(w), y), (-1) ** w.dim * c)
    return _drop_degenerate_fibers(F, lhs - rhs)


def pair_action_leibniz_defect(F: Fiber, x: SimplexRef, w: GroupWord, z) -> Chain:
    """``d((x, w) . z) - d(x, w) . z - (-1)^n (x, w) . dz`` in normalized ``R(X x_tau Z)``."""
    P = PrincipalFiber(F.X)
    lhs = tcp_diff_chain(F, pair_act(F, x, F.push(w), z))
    rhs = Chain()
    for (y, v), c in tcp_diff(P, x, w).items():
        rhs.iadd(pair_act(F, y, F.push(v), z), c)
    for y, c in F.fboundary(z).items():
        rhs.iadd(pair_act(F, x, F.push(w), y), (-1) ** x.dim * c)
    return normalize_pairs(F, lhs - normalize_pairs(F, rhs))


def _drop_degenerate_fibers(F: Fiber, c: Chain) -> Chain:
    return c.filter(lambda z: not _fiber_degenerate(F, z))


# -- twisted tensor products ------------------------------------------------------------------


def tt_diff(F: Fiber, x: SimplexRef, z) -> Chain:
    """``d_(x) + d_phi`` on ``x (x) z`` with ``d_phi`` summed over ``i = 0..n-1``; normalized."""
    X, G = F.X, F.G
    n = x.dim
    out = Chain()
    for y, c in X.boundary(x).items():
        out.add_term((y, z), c)
    for w, c in F.fboundary(z).items():
        out.add_term((x, w), (-1) ** n * c)
    for i in range(n):
        front = sub_face(X, x, 0, i)
        if front.is_degenerate:
            continue
        acted = act_chain(F, phi(G, sub_face(X, x, i, n)), z)
        for w, c in acted.items():
            if not _fiber_degenerate(F, w):
                out.add_term((front, w), (-1) ** n * c)
    return out


def _fiber_degenerate(F: Fiber, z) -> bool:
    if isinstance(z, SimplexRef):
        return z.is_degenerate
    return F.G.is_degenerate(z) is not None


def tt_diff_chain(F: Fiber, c: Chain) -> Chain:
    return c.map(lambda p: tt_diff(F, p[0], p[1]))


def tt_basis(F: FiniteFiber, k: int) -> list[tuple[SimplexRef, SimplexRef]]:
    return [(x, z) for n in range(k + 1) for x in F.X.nondegenerate(n) for z in F.Z.nondegenerate(k - n)]


def tt_complex(F: FiniteFiber, max_degree: int) -> GradedComplex:
    bases = {k: tt_basis(F, k) for k in range(max_degree + 1)}
    return GradedComplex.from_function(bases, lambda p: tt_diff(F, p[0], p[1]))


# -- D_x and Psi ---------------------------------------------------------------------------------


Principal = tuple[SimplexRef, GroupWord]


def _universal(n: int):
    D = standard_simplex(n)
    return D, loop_group(D, Convention.A2B1)


def derive(n: int, element: Principal) -> Principal:
    """``D_x`` on an element of ``Delta^n x_tau G Delta^n``: prepend 0 to every map."""
    D, G = _universal(n)
    I, g = element
    It = D.simplex((0,) + D.to_map(I))
    letters = [(D.simplex((0,) + D.to_map(y)), e) for y, e in g.letters]
    return It, G.reduce(g.dim + 1, letters)


def derive_maps(n: int, base: Sequence[int], letters: Sequence[tuple[Sequence[int], int]]) -> tuple[tuple, list]:
    """``D_x`` in coordinates: increasing maps in, increasing maps out."""
    D, G = _universal(n)
    I = D.simplex(base)
    g = G.reduce(len(base) - 1, [(D.simplex(v), e) for v, e in letters])
    It, gt = derive(n, (I, g))
    return D.to_map(It), [(D.to_map(y), e) for y, e in gt.letters]


def derive_chain(n: int, c: Chain) -> Chain:
    return c.map(lambda p: derive(n, p))


def push_pair(target: SimplicialSet, x: SimplexRef, p: Principal, source_n: int) -> Principal:
    """Image of a pair on ``Delta^m`` under the map ``Delta^m -> target`` classified by ``x``."""
    D = standard_simplex(source_n)
    G = loop_group(target, Convention.A2B1)
    I, g = p
    xI = target.apply_map(x, D.to_map(I))
    letters = [(target.apply_map(x, D.to_map(y)), e) for y, e in g.letters]
    return xI, G.reduce(g.dim, letters)


def push_chain(target: SimplicialSet, x: SimplexRef, c: Chain, source_n: int) -> Chain:
    return c.map(lambda p: push_pair(target, x, p, source_n))


@lru_cache(maxsize=None)
def psi_universal(n: int) -> Chain:
    """``Psi(iota_n (x) 1)`` in normalized ``R(Delta^n x_tau G Delta^n)``."""
    D, G = _universal(n)
    F = PrincipalFiber(D)
    if n == 0:
        return Chain.single((D.top, G.identity(0)))
    rhs = Chain()
    for i in range(n + 1):
        face = D.simplex(tuple(k for k in range(n + 1) if k != i))
        rhs.iadd(push_chain(D, face, psi_universal(n - 1), n - 1), (-1) ** i)
    for i in range(n):
        front = D.simplex(tuple(range(i + 1)))
        base = push_chain(D, front, psi_universal(i), i)
        ph = phi(G, D.simplex(tuple(range(i, n + 1))))
        for (I, g), c in base.items():
            for w, k in ph.items():
                rhs.iadd(pair_act(F, I, g, w), (-1) ** n * c * k)
    rhs = normalize_pairs(F, rhs)
    return normalize_pairs(F, derive_chain(n, rhs))


def psi_unit(X: SimplicialSet, x: SimplexRef) -> Chain:
    """``Psi(x (x) 1)`` in normalized ``R(X x_tau GX)``."""
    return Chain(dict(_psi_unit(X, x).items()))


@lru_cache(maxsize=65536)
def _psi_unit(X: SimplicialSet, x: SimplexRef) -> Chain:
    if not X.is_reduced:
        raise TwistError("Psi needs a reduced base")
    F = PrincipalFiber(X)
    return normalize_pairs(F, push_chain(X, x, psi_universal(x.dim), x.dim))


def psi(F: Fiber, x: SimplexRef, z) -> Chain:
    """``Psi(x (x) z) = Psi(x (x) 1) . z`` in normalized ``R(X x_tau Z)``."""
    out = Chain()
    for (I, g), c in psi_unit(F.X, x).items():
        out.iadd(pair_act(F, I, F.push(g), z), c)
    return normalize_pairs(F, out)


def psi_chain(F: Fiber, c: Chain) -> Chain:
    return c.map(lambda p: psi(F, p[0], p[1]))


def psi_defect(F: Fiber, x: SimplexRef, z) -> Chain:
    """``d Psi - Psi d`` on ``x (x) z``."""
    return tcp_diff_chain(F, psi(F, x, z)) - psi_chain(F, tt_diff(F, x, z))


def principal_unit_defect(X: SimplicialSet, x: SimplexRef) -> Chain:
    """``d Psi(x (x) 1) - Psi(d(x (x) 1))`` in the principal object."""
    F = PrincipalFiber(X)
    one = F.G.identity(x.dim)
    return psi_defect(F, x, one) if x.dim else Chain()


def filtration_defect(X: SimplicialSet, x: SimplexRef) -> list[str]:
    """Check ``Psi(x (x) 1) = (x, 1_n)`` modulo lower base filtration (nondegenerate ``x``)."""
    if x.is_degenerate:
        raise TwistError("the filtration statement concerns nondegenerate simplices")
    F = PrincipalFiber(X)
    out = []
    chain = psi_unit(X, x)
    top = (x, F.G.identity(x.dim))
    if chain.coeff(top) != 1:
        out.append(f"coefficient of (x, 1) is {chain.coeff(top)}")
    for (I, g), c in chain.items():
        if (I, g) != top and I.base_dim >= x.dim:
            out.append(f"term ({format_simplex(I)}, {g}) lies in top filtration")
    return out


# -- pseudo-contraction identities ----------------------------------------------------------------


def d_cross(p: Principal, F: Fiber) -> Chain:
    """Untwisted part ``sum_i (-1)^i (d_i x, d_i g)`` (unnormalized)."""
    I, g = p
    X = F.X
    out = Chain()
    if I.dim == 0:
        return out
    for i in range(I.dim + 1):
        out.add_term((X.face(I, i), F.fface(g, i)), (-1) ** i)
    return out


def d_twist(p: Principal, F: Fiber) -> Chain:
    """``(-1)^n (d_n x, (tau x - 1) d_n g)`` (unnormalized)."""
    I, g = p
    n = I.dim
    out = Chain()
    if n == 0:
        return out
    X = F.X
    dg = F.fface(g, n)
    out.add_term((X.face(I, n), F.act(F.tau(I), dg)), (-1) ** n)
    out.add_term((X.face(I, n), dg), -((-1) ** n))
    return out


def dD_defects(n: int, p: Principal) -> tuple[Chain, Chain]:
    """``(d_x D + D d_x - id, d_tau D + D d_tau)`` on a universal pair.

    Only pairs of positive dimension qualify: on a vertex ``[k]`` the cone
    contraction leaves ``([0], 1)`` behind and ``d_tau D [k]`` picks up
    ``tau[0, k]``.
    """
    if p[0].dim == 0:
        raise TwistError("the D_x identities hold on pairs of positive dimension")
    D, G = _universal(n)
    F = PrincipalFiber(D)
    Dp = derive(n, p)
    first = d_cross(Dp, F) + derive_chain(n, d_cross(p, F)) - Chain.single(p)
    second = d_twist(Dp, F) + derive_chain(n, d_twist(p, F))
    return normalize_pairs(F, first), normalize_pairs(F, second)


# -- comparison ------------------------------------------------------------------------------------


class Comparison(NamedTuple):
    tensor: dict[int, HomologyGroup]
    cartesian: dict[int, HomologyGroup]

    @property
    def equal(self) -> bool:
        return self.tensor == self.cartesian


def compare_homology(F: FiniteFiber, max_degree: int) -> Comparison:
    tt = tt_complex(F, max_degree + 1)
    tcp = tcp_complex(F, max_degree + 1)
    degs = range(max_degree + 1)
    return Comparison(homology_all(tt, degs), homology_all(tcp, degs))


def normalized_chain_complex(X: SimplicialSet, max_dim: int) -> GradedComplex:
    bases = {n: X.nondegenerate(n) for n in range(max_dim + 1)}
    return GradedComplex.from_function(bases, lambda x: Chain(X.boundary(x)))


def kunneth_prediction(X: SimplicialSet, Z: SimplicialSet, max_degree: int) -> dict[int, HomologyGroup]:
    HX = homology_all(normalized_chain_complex(X, max_degree + 1), range(max_degree + 1))
    HZ = homology_all(normalized_chain_complex(Z, max_degree + 1), range(max_degree + 1))
    return {k: kunneth(HX, HZ, k) for k in range(max_degree + 1)}


# -- loading ---------------------------------------------------------------------------------------


def resolve_group(spec: str) -> tuple[ConstantGroup, Optional[Mapping]]:
    """``builtin:cyclic:M``, ``builtin:trivial`` or a JSON file (with an optional ``action`` table)."""
    if spec.startswith("builtin:"):
        parts = spec.split(":")[1:]
        if parts[0] == "cyclic" and len(parts) == 2:
            return cyclic_group(int(parts[1])), None
        if parts[0] == "trivial":
            return trivial_group(), None
        raise TwistError(f"unknown builtin group {spec!r}")
    with open(spec) as fh:
        desc = json.load(fh)
    return group_from_dict(desc), desc.get("action")


def resolve_twist(spec: str, X: SimplicialSet, group: ConstantGroup) -> TwistingFunction:
    """``builtin:trivial``, ``builtin:edges:A`` (every edge to ``A``) or a JSON ``{generator: element}``."""
    if spec.startswith("builtin:"):
        parts = spec.split(":")[1:]
        if parts[0] == "trivial":
            values = {}
        elif parts[0] == "edges" and len(parts) == 2:
            values = {x.generator: parts[1] for x in X.nondegenerate(1)}
        else:
            raise TwistError(f"unknown builtin twist {spec!r}")
    else:
        with open(spec) as fh:
            values = json.load(fh)
        if not isinstance(values, dict):
            raise TwistError("twist file must hold a JSON object")
    return complete_twisting(X, group, values)


def build_fiber(base: str, fiber: str, group: str, twist: str) -> FiniteFiber:
    X = resolve_space(base)
    Z = resolve_space(fiber)
    grp, action = resolve_group(group)
    if action is not None:
        act = GroupAction(Z, grp, action)
    elif group.startswith("builtin:cyclic"):
        act = shift_action(Z, grp)
    else:
        act = trivial_action(Z, grp)
    tw = resolve_twist(twist, X, grp)
    bad = tw.violations()
    if bad:
        raise TwistError("invalid twisting function: " + bad[0])
    return FiniteFiber(tw, act)


# -- canonical forms -------------------------------------------------------------------------------

Term = tuple[int, tuple[int, ...], tuple[tuple[tuple[int, ...], int], ...]]


def canonical_terms(n: int, c: Chain) -> list[Term]:
    """Sorted ``(coeff, base map, ((letter map, exponent), ...))`` for a chain on ``Delta^n``."""
    D = standard_simplex(n)
    out = [
        (k, D.to_map(I), tuple((D.to_map(y), e) for y, e in g.letters))
        for (I, g), k in c.items()
    ]
    return sorted(out, key=lambda t: (t[1], t[2], t[0]))


def format_term(t: Term) -> str:
    k, base, letters = t
    fmt = lambda v: "[" + "".join(map(str, v)) + "]"
    word = "".join(f"t{fmt(v)}" + ("" if e == 1 else "^-1") for v, e in letters) or f"1_{len(base) - 1}"
    sign = "+" if k > 0 else "-"
    mag = "" if abs(k) == 1 else f"{abs(k)}"
    return f"{sign}{mag}({fmt(base)}, {word})"


def _term(k, base, *letters) -> Term:
    return (k, tuple(base), tuple((tuple(v), 1) for v in letters))


# Psi(x (x) 1) in dimensions 1, 2 and 3, written in coordinates on the standard simplex.
GOLDEN_PSI: dict[int, list[Term]] = {
    1: [_term(1, (0, 1))],
    2: [_term(1, (0, 1, 2)), _term(1, (0, 0, 1), (0, 1, 1, 2))],
    3: [
        _term(1, (0, 1, 2, 3)),
        _term(1, (0, 1, 1, 2), (0, 1, 2, 2, 3)),
        _term(-1, (0, 0, 1, 1), (0, 1, 1, 1, 2), (0, 1, 1, 2, 3)),
        _term(1, (0, 0, 0, 1), (0, 1, 1, 1, 2), (0, 1, 2, 2, 3)),
        _term(-1, (0, 0, 1, 2), (0, 2, 2, 2, 3)),
        _term(-1, (0, 0, 0, 1), (0, 0, 1, 1, 2), (0, 2, 2, 2, 3)),
    ],
}


def golden_mismatches(n: int) -> list[str]:
    want = sorted(GOLDEN_PSI[n], key=lambda t: (t[1], t[2], t[0]))
    got = canonical_terms(n, psi_universal(n))
    if want == got:
        return []
    return [f"dim {n}: expected {' '.join(map(format_term, want))}, got {' '.join(map(format_term, got))}"]


def derived_filtration_failures(n: int, p: Principal) -> list[str]:
    """``D_x p`` reaches filtration ``n`` exactly when the base of ``p`` is ``d_0 x``."""
    D, _ = _universal(n)
    It, _g = derive(n, p)
    top = It.base_dim >= n
    expected = D.to_map(p[0]) == tuple(range(1, n + 1))
    if top != expected:
        return [f"D_x of base {D.to_map(p[0])} has filtration {It.base_dim}"]
    return []
