"""Finitely supported integer combinations of hashable basis elements."""

from __future__ import annotations

from typing import Callable, Hashable, Iterable, Iterator, Mapping, Optional, TypeVar

K = TypeVar("K", bound=Hashable)


class Chain:
    """Sparse integer chain; zero coefficients are never stored."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping | Iterable[tuple]] = None):
        self._terms: dict = {}
        if terms is None:
            return
        items = terms.items() if isinstance(terms, Mapping) else terms
        for k, c in items:
            self.add_term(k, c)

    @classmethod
    def single(cls, key, coeff: int = 1) -> Chain:
        return cls({key: coeff})

    # -- mutation (used while building) ---------------------------------------
    def add_term(self, key, coeff: int) -> None:
        if not coeff:
            return
        c = self._terms.get(key, 0) + coeff
        if c:
            self._terms[key] = c
        else:
            self._terms.pop(key, None)

    def iadd(self, other: Chain, scale: int = 1) -> Chain:
        for k, c in other._terms.items():
            self.add_term(k, scale * c)
        return self

    # -- algebra -------------------------------------------------------------
    def __add__(self, other: Chain) -> Chain:
        return Chain(self._terms).iadd(other)

    def __sub__(self, other: Chain) -> Chain:
        return Chain(self._terms).iadd(other, -1)

    def __neg__(self) -> Chain:
        return Chain({k: -c for k, c in self._terms.items()})

    def __mul__(self, scalar: int) -> Chain:
        return Chain({k: scalar * c for k, c in self._terms.items()})

    __rmul__ = __mul__

    def map(self, f: Callable) -> Chain:
        """Linear extension of a basis map ``f`` returning a key, a Chain or None."""
        out = Chain()
        for k, c in self._terms.items():
            img = f(k)
            if img is None:
                continue
            if isinstance(img, Chain):
                out.iadd(img, c)
            else:
                out.add_term(img, c)
        return out

    def filter(self, keep: Callable[[object], bool]) -> Chain:
        return Chain({k: c for k, c in self._terms.items() if keep(k)})

    # -- inspection --------------------------------------------------------------
    def items(self):
        return self._terms.items()

    def keys(self):
        return self._terms.keys()

    def coeff(self, key) -> int:
        return self._terms.get(key, 0)

    def __iter__(self) -> Iterator:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Chain):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        return " ".join(f"{c:+d}*{k}" for k, c in sorted(self._terms.items(), key=lambda kv: repr(kv[0])))

    def sorted_terms(self, key: Callable = repr) -> list[tuple[object, int]]:
        return sorted(self._terms.items(), key=lambda kv: key(kv[0]))


def linear_sum(chains: Iterable[tuple[Chain, int]]) -> Chain:
    out = Chain()
    for ch, c in chains:
        out.iadd(ch, c)
    return out
