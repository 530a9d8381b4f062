"""Finite simplicial sets in Eilenberg-Zilber normal form.

A simplex is stored as a nondegenerate generator together with a strictly
decreasing degeneracy word ``(i_1 > ... > i_k)`` meaning ``s_{i_1}...s_{i_k} y``.
Internally every operation goes through the equivalent surjection
``[dim] -> [dim y]`` so that faces, degeneracies and arbitrary increasing maps
are handled by one routine, :meth:`SimplicialSet.apply_map`.
"""

from __future__ import annotations

import json
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence


class SimplicialError(ValueError):
    """Invalid simplicial data or an out-of-range operation."""


class IdentityViolation(SimplicialError):
    def __init__(self, generator: str, i: int, j: int, lhs, rhs):
        self.generator, self.i, self.j = generator, i, j
        super().__init__(
            f"simplicial identity d_{i} d_{j} = d_{j - 1} d_{i} fails on generator "
            f"{generator!r}: {format_simplex(lhs)} != {format_simplex(rhs)}"
        )


class MissingFace(SimplicialError):
    pass


class SimplexRef(NamedTuple):
    generator: str
    deg_word: tuple[int, ...]
    dim: int

    @property
    def is_degenerate(self) -> bool:
        return bool(self.deg_word)

    @property
    def base_dim(self) -> int:
        return self.dim - len(self.deg_word)

    def surjection(self) -> tuple[int, ...]:
        return surjection_of(self.deg_word, self.dim)

    def degenerate_at(self, j: int) -> bool:
        """True iff this simplex is in the image of ``s_j``."""
        return j in self.deg_word

    def __str__(self) -> str:
        return format_simplex(self)


def format_simplex(x: SimplexRef) -> str:
    if not x.deg_word:
        return x.generator
    return "".join(f"s{i}" for i in x.deg_word) + f"({x.generator})"


@lru_cache(maxsize=None)
def surjection_of(deg_word: tuple[int, ...], dim: int) -> tuple[int, ...]:
    repeats = set(deg_word)
    out = [0]
    for j in range(dim):
        out.append(out[-1] if j in repeats else out[-1] + 1)
    return tuple(out)


def deg_word_of(surj: Sequence[int]) -> tuple[int, ...]:
    return tuple(j for j in range(len(surj) - 2, -1, -1) if surj[j] == surj[j + 1])


class IncreasingMap(NamedTuple):
    """Weakly increasing map ``[m] -> [n]`` given by its values."""

    values: tuple[int, ...]
    target: int

    @classmethod
    def of(cls, values: Iterable[int], target: int) -> IncreasingMap:
        vals = tuple(values)
        if not vals:
            raise SimplicialError("an increasing map needs at least one value")
        if any(a > b for a, b in zip(vals, vals[1:])):
            raise SimplicialError(f"values {vals} are not weakly increasing")
        if vals[0] < 0 or vals[-1] > target:
            raise SimplicialError(f"values {vals} outside [0, {target}]")
        return cls(vals, target)

    @property
    def source(self) -> int:
        return len(self.values) - 1

    def compose(self, other: IncreasingMap) -> IncreasingMap:
        """``self o other`` (apply ``other`` first)."""
        if other.target != self.source:
            raise SimplicialError("maps are not composable")
        return IncreasingMap(tuple(self.values[v] for v in other.values), self.target)

    def derived(self) -> IncreasingMap:
        """Prepend 0: ``k -> 0`` for ``k = 0`` and ``f(k - 1)`` otherwise."""
        return IncreasingMap((0,) + self.values, self.target)


def face_map(n: int, i: int) -> tuple[int, ...]:
    """Values of the coface ``[n-1] -> [n]`` skipping ``i``."""
    return tuple(k for k in range(n + 1) if k != i)


def degeneracy_map(n: int, i: int) -> tuple[int, ...]:
    """Values of the codegeneracy ``[n+1] -> [n]`` repeating ``i``."""
    return tuple(range(i + 1)) + tuple(range(i, n + 1))


class SimplicialSet:
    """A finite simplicial set given by nondegenerate generators and face tables.

    ``faces[g]`` lists ``d_0 g, ..., d_n g`` as :class:`SimplexRef` values.
    Instances are immutable after construction; caches only memoize pure
    computations.
    """

    def __init__(
        self,
        generators: Mapping[int, Sequence[str]],
        faces: Mapping[str, Sequence[SimplexRef]],
        basepoint: str | None = None,
        name: str = "",
        validate: bool = True,
    ):
        self.name = name
        self.generators: dict[int, tuple[str, ...]] = {
            int(d): tuple(ids) for d, ids in sorted(generators.items(), key=lambda kv: int(kv[0]))
        }
        self.gen_dim: dict[str, int] = {}
        for d, ids in self.generators.items():
            for g in ids:
                if g in self.gen_dim:
                    raise SimplicialError(f"generator {g!r} listed twice")
                self.gen_dim[g] = d
        self.faces: dict[str, tuple[SimplexRef, ...]] = {g: tuple(f) for g, f in faces.items()}
        if basepoint is None and len(self.generators.get(0, ())) == 1:
            basepoint = self.generators[0][0]
        self.basepoint = basepoint
        self._face_cache: dict[tuple[str, tuple[int, ...]], SimplexRef] = {}
        self._map_cache: dict[tuple[SimplexRef, tuple[int, ...]], SimplexRef] = {}
        if validate:
            self._validate()

    def __repr__(self) -> str:
        return f"SimplicialSet({self.name or 'unnamed'}, counts={self.counts()})"

    # -- structure -----------------------------------------------------------
    @property
    def max_dim(self) -> int:
        return max(self.generators) if self.generators else -1

    @property
    def is_reduced(self) -> bool:
        return len(self.generators.get(0, ())) == 1

    def counts(self) -> tuple[int, ...]:
        return tuple(len(self.generators.get(d, ())) for d in range(self.max_dim + 1))

    def gen(self, g: str) -> SimplexRef:
        return SimplexRef(g, (), self.gen_dim[g])

    def base(self, dim: int = 0) -> SimplexRef:
        if self.basepoint is None:
            raise SimplicialError("simplicial set has no base point")
        return SimplexRef(self.basepoint, tuple(range(dim - 1, -1, -1)), dim)

    def nondegenerate(self, dim: int) -> list[SimplexRef]:
        return [SimplexRef(g, (), dim) for g in self.generators.get(dim, ())]

    def simplices(self, dim: int) -> Iterator[SimplexRef]:
        """All simplices of dimension ``dim``, nondegenerate first."""
        for m in range(dim, -1, -1):
            for g in self.generators.get(m, ()):
                for rep in combinations(range(dim), dim - m):
                    yield SimplexRef(g, tuple(sorted(rep, reverse=True)), dim)

    def _validate(self) -> None:
        for g, d in self.gen_dim.items():
            if d == 0:
                continue
            fs = self.faces.get(g)
            if fs is None:
                raise MissingFace(f"generator {g!r} has no face table")
            if len(fs) != d + 1:
                raise MissingFace(f"generator {g!r} of dim {d} needs {d + 1} faces, got {len(fs)}")
            for i, f in enumerate(fs):
                self._check_ref(f, d - 1, f"d_{i} of {g!r}")
        for g, d in self.gen_dim.items():
            if d < 2:
                continue
            x = self.gen(g)
            for j in range(1, d + 1):
                for i in range(j):
                    lhs = self.face(self.face(x, j), i)
                    rhs = self.face(self.face(x, i), j - 1)
                    if lhs != rhs:
                        raise IdentityViolation(g, i, j, lhs, rhs)

    def _check_ref(self, f: SimplexRef, dim: int, where: str) -> None:
        if f.generator not in self.gen_dim:
            raise MissingFace(f"{where}: unknown generator {f.generator!r}")
        if f.dim != dim or f.base_dim != self.gen_dim[f.generator]:
            raise SimplicialError(f"{where}: {f} has the wrong dimension")
        if any(a <= b for a, b in zip(f.deg_word, f.deg_word[1:])) or (f.deg_word and f.deg_word[0] >= dim):
            raise SimplicialError(f"{where}: degeneracy word {f.deg_word} not in normal form")

    # -- operations ------------------------------------------------------------
    def _gen_face(self, g: str, image: tuple[int, ...]) -> SimplexRef:
        key = (g, image)
        hit = self._face_cache.get(key)
        if hit is not None:
            return hit
        m = self.gen_dim[g]
        if len(image) == m + 1:
            out = SimplexRef(g, (), m)
        else:
            missing = next(k for k in range(m + 1) if k not in image)
            y = self.faces[g][missing]
            out = self.apply_map(y, tuple(v if v < missing else v - 1 for v in image))
        self._face_cache[key] = out
        return out

    def apply_map(self, x: SimplexRef, f: Sequence[int]) -> SimplexRef:
        """The simplex ``[f_0, ..., f_k]_x`` for a weakly increasing ``f``."""
        f = tuple(f)
        key = (x, f)
        hit = self._map_cache.get(key)
        if hit is not None:
            return hit
        if not f or f[0] < 0 or f[-1] > x.dim or any(a > b for a, b in zip(f, f[1:])):
            raise SimplicialError(f"{f} is not an increasing map into [{x.dim}]")
        sigma = x.surjection()
        h = [sigma[v] for v in f]
        image = tuple(sorted(set(h)))
        pos = {v: k for k, v in enumerate(image)}
        y = self._gen_face(x.generator, image)
        tail = y.surjection()
        surj = [tail[pos[v]] for v in h]
        out = SimplexRef(y.generator, deg_word_of(surj), len(f) - 1)
        self._map_cache[key] = out
        return out

    def face(self, x: SimplexRef, i: int) -> SimplexRef:
        if x.dim < 1 or not 0 <= i <= x.dim:
            raise SimplicialError(f"face index {i} out of range for dim {x.dim}")
        return self.apply_map(x, face_map(x.dim, i))

    def degeneracy(self, x: SimplexRef, i: int) -> SimplexRef:
        if not 0 <= i <= x.dim:
            raise SimplicialError(f"degeneracy index {i} out of range for dim {x.dim}")
        return self.apply_map(x, degeneracy_map(x.dim, i))

    def degenerate_by(self, x: SimplexRef, indices: Iterable[int]) -> SimplexRef:
        """Apply ``s_i`` for each index in order (first index applied first)."""
        for i in indices:
            x = self.degeneracy(x, i)
        return x

    def boundary(self, x: SimplexRef) -> dict[SimplexRef, int]:
        """Normalized boundary: alternating face sum without degenerate faces."""
        out: dict[SimplexRef, int] = {}
        if x.dim == 0:
            return out
        for i in range(x.dim + 1):
            y = self.face(x, i)
            if not y.is_degenerate:
                out[y] = out.get(y, 0) + (-1) ** i
        return {k: v for k, v in out.items() if v}

    # -- serialization ---------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dimensions": sorted(self.generators),
            "generators": {str(d): list(ids) for d, ids in self.generators.items()},
            "faces": {g: [[list(f.deg_word), f.generator] for f in fs] for g, fs in self.faces.items()},
            "basepoint": self.basepoint,
        }


class SimplicialMap:
    """Simplicial map determined by images of the source generators."""

    def __init__(self, source: SimplicialSet, target: SimplicialSet, images: Mapping[str, SimplexRef], validate=True):
        self.source, self.target = source, target
        self.images = dict(images)
        if validate:
            for g, d in source.gen_dim.items():
                img = self.images.get(g)
                if img is None or img.dim != d:
                    raise SimplicialError(f"bad image for generator {g!r}")
                for i in range(d + 1 if d else 0):
                    if self(source.face(source.gen(g), i)) != target.face(img, i):
                        raise SimplicialError(f"map does not commute with d_{i} on {g!r}")

    def __call__(self, x: SimplexRef) -> SimplexRef:
        img = self.images[x.generator]
        if not x.deg_word:
            return img
        return self.target.apply_map(img, x.surjection())


# -- standard simplices and builtins --------------------------------------------------


def _sid(vertices: Iterable[int]) -> str:
    return ",".join(str(v) for v in vertices)


class StandardSimplex(SimplicialSet):
    """``Delta^n``: simplices are exactly the weakly increasing maps into ``[n]``."""

    def __init__(self, n: int):
        gens: dict[int, list[str]] = {}
        faces: dict[str, list[SimplexRef]] = {}
        for k in range(n + 1):
            for sub in combinations(range(n + 1), k + 1):
                gens.setdefault(k, []).append(_sid(sub))
                if k:
                    faces[_sid(sub)] = [
                        SimplexRef(_sid(sub[:i] + sub[i + 1:]), (), k - 1) for i in range(k + 1)
                    ]
        super().__init__(gens, faces, basepoint=None, name=f"Delta^{n}", validate=False)
        self.n = n

    def simplex(self, values: Sequence[int]) -> SimplexRef:
        return self.apply_map(self.top, values)

    @property
    def top(self) -> SimplexRef:
        return SimplexRef(_sid(range(self.n + 1)), (), self.n)

    def to_map(self, x: SimplexRef) -> tuple[int, ...]:
        verts = tuple(int(v) for v in x.generator.split(","))
        return tuple(verts[s] for s in x.surjection())


@lru_cache(maxsize=None)
def standard_simplex(n: int) -> StandardSimplex:
    return StandardSimplex(n)


def sphere(n: int) -> SimplicialSet:
    if n < 1:
        raise SimplicialError("sphere dimension must be >= 1")
    bottom = SimplexRef("v", tuple(range(n - 2, -1, -1)), n - 1)
    return SimplicialSet({0: ["v"], n: ["x"]}, {"x": [bottom] * (n + 1)}, "v", name=f"S^{n}")


def wedge_of_spheres(dims: Sequence[int]) -> SimplicialSet:
    gens: dict[int, list[str]] = {0: ["v"]}
    faces = {}
    for k, n in enumerate(dims):
        if n < 1:
            raise SimplicialError("sphere dimension must be >= 1")
        g = f"x{k}"
        gens.setdefault(n, []).append(g)
        faces[g] = [SimplexRef("v", tuple(range(n - 2, -1, -1)), n - 1)] * (n + 1)
    return SimplicialSet(gens, faces, "v", name="wedge(" + ",".join(map(str, dims)) + ")")


def reduced_simplex(n: int) -> SimplicialSet:
    """``Delta^n`` with all vertices identified to one base point."""
    gens: dict[int, list[str]] = {0: ["v"]}
    faces: dict[str, list[SimplexRef]] = {}
    for k in range(1, n + 1):
        for sub in combinations(range(n + 1), k + 1):
            gens.setdefault(k, []).append(_sid(sub))
            if k == 1:
                faces[_sid(sub)] = [SimplexRef("v", (), 0)] * 2
            else:
                faces[_sid(sub)] = [SimplexRef(_sid(sub[:i] + sub[i + 1:]), (), k - 1) for i in range(k + 1)]
    return SimplicialSet(gens, faces, "v", name=f"reduced Delta^{n}")


def point() -> SimplicialSet:
    return SimplicialSet({0: ["v"]}, {}, "v", name="point")


def discrete(labels: Sequence[str]) -> SimplicialSet:
    """A constant simplicial set: the given vertices and nothing else."""
    return SimplicialSet({0: list(labels)}, {}, labels[0] if labels else None, name=f"discrete({len(labels)})")


BUILTINS = {
    "sphere": lambda n: sphere(int(n)),
    "circle": lambda: sphere(1),
    "point": point,
    "reduced-simplex": lambda n: reduced_simplex(int(n)),
    "reduced_simplex": lambda n: reduced_simplex(int(n)),
    "wedge": lambda dims: wedge_of_spheres([int(d) for d in str(dims).split(",")]),
    "wedge_of_spheres": lambda dims: wedge_of_spheres([int(d) for d in str(dims).split(",")]),
    "discrete": lambda m: discrete([str(k) for k in range(int(m))]),
}


def builtin(name: str, *params) -> SimplicialSet:
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise SimplicialError(f"unknown builtin space {name!r}") from None
    try:
        return factory(*params)
    except TypeError:
        raise SimplicialError(f"wrong parameters {params!r} for builtin {name!r}") from None


# -- loading ------------------------------------------------------------------------


def load(desc: Mapping) -> SimplicialSet:
    """Build and validate a simplicial set from its JSON description."""
    try:
        gens = {int(d): [str(g) for g in ids] for d, ids in desc["generators"].items()}
        gen_dim = {g: d for d, ids in gens.items() for g in ids}
        faces = {}
        for g, entries in desc.get("faces", {}).items():
            if g not in gen_dim:
                raise MissingFace(f"face table given for unknown generator {g!r}")
            refs = []
            for deg_word, target in entries:
                target = str(target)
                if target not in gen_dim:
                    raise MissingFace(f"face of {g!r} refers to unknown generator {target!r}")
                deg_word = tuple(int(i) for i in deg_word)
                refs.append(SimplexRef(target, deg_word, gen_dim[target] + len(deg_word)))
            faces[str(g)] = refs
        basepoint = desc.get("basepoint")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SimplicialError):
            raise
        raise SimplicialError(f"malformed simplicial set description: {exc!r}") from exc
    return SimplicialSet(gens, faces, None if basepoint is None else str(basepoint), name=desc.get("name", ""))


def loads(text: str) -> SimplicialSet:
    return load(json.loads(text))


def resolve_space(spec: str) -> SimplicialSet:
    """``builtin:<name>[:param]`` or a path to a JSON description."""
    if spec.startswith("builtin:"):
        parts = spec.split(":")[1:]
        return builtin(parts[0], *parts[1:])
    with open(spec) as fh:
        return load(json.load(fh))
