"""Bound quiver algebras ``KQ/I`` over F_p.

Paths are written in traversal order: ``["alpha", "beta"]`` means first
``alpha`` then ``beta`` (the algebra product ``beta * alpha``). The normal
form basis is computed by linear algebra on truncated path spaces: at
length ``L`` the ideal generated by the relations is spanned inside
``KQ / R^{L+1}`` by all ``u * r * v``, and enumeration stops at the first
``L`` whose paths all lie in that span. For an admissible ideal this forces
``R^L ⊆ I`` and the quotient is read off exactly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import MalformedInput, NonTerminating, ShapeMismatch, UnknownVertex
from .exactfield import FMatrix, FScalar, check_characteristic, rref_array
from .modules import Representation


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise MalformedInput("duplicate vertex names")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise MalformedInput("duplicate arrow names")
        n = len(self.vertices)
        for a in self.arrows:
            if not (0 <= a.source < n and 0 <= a.target < n):
                raise MalformedInput(f"arrow {a.name} has an endpoint outside the vertex set")

    @classmethod
    def from_names(cls, vertices: Sequence[str], arrows: Iterable[tuple[str, str, str]]) -> "Quiver":
        vertices = tuple(str(v) for v in vertices)
        idx = {v: i for i, v in enumerate(vertices)}
        built = []
        for name, s, t in arrows:
            if str(s) not in idx or str(t) not in idx:
                raise MalformedInput(f"arrow {name} refers to an unknown vertex")
            built.append(Arrow(str(name), idx[str(s)], idx[str(t)]))
        return cls(vertices, tuple(built))

    def vertex_index(self, v) -> int:
        if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
            if 0 <= v < len(self.vertices):
                return int(v)
            raise UnknownVertex(v)
        try:
            return self.vertices.index(str(v))
        except ValueError:
            raise UnknownVertex(v) from None

    def arrow_index(self, name: str) -> int:
        for i, a in enumerate(self.arrows):
            if a.name == name:
                return i
        raise MalformedInput(f"unknown arrow {name!r}")

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, tuple(Arrow(a.name, a.target, a.source) for a in self.arrows))


@dataclass(frozen=True, order=True)
class Path:
    """A path in traversal order; the trivial path at ``source`` has no arrows."""

    length: int
    arrows: tuple[int, ...]
    source: int
    target: int

    @classmethod
    def trivial(cls, v: int) -> "Path":
        return cls(0, (), v, v)

    def then(self, a: int, arrow: Arrow) -> "Path":
        return Path(self.length + 1, self.arrows + (a,), self.source, arrow.target)

    def label(self, quiver: Quiver) -> str:
        if not self.arrows:
            return f"e{quiver.vertices[self.source]}"
        return ".".join(quiver.arrows[a].name for a in self.arrows)


@dataclass(frozen=True)
class Relation:
    """A linear combination of parallel paths of length at least 2."""

    terms: tuple[tuple[int, tuple[str, ...]], ...]
    source: int = field(default=-1, compare=False)
    target: int = field(default=-1, compare=False)

    @classmethod
    def build(cls, quiver: Quiver, terms: Iterable[tuple[int, Sequence[str]]]) -> "Relation":
        terms = tuple((int(c.value if isinstance(c, FScalar) else c), tuple(path)) for c, path in terms)
        if not terms:
            raise MalformedInput("empty relation")
        ends = set()
        for _, path in terms:
            if len(path) < 2:
                raise MalformedInput(f"relation term {list(path)} has length < 2 (not admissible)")
            idx = [quiver.arrow_index(n) for n in path]
            for a, b in zip(idx, idx[1:]):
                if quiver.arrows[a].target != quiver.arrows[b].source:
                    raise MalformedInput(f"relation term {list(path)} is not a composable path")
            ends.add((quiver.arrows[idx[0]].source, quiver.arrows[idx[-1]].target))
        if len(ends) != 1:
            raise MalformedInput("relation terms are not parallel")
        s, t = ends.pop()
        return cls(terms, s, t)

    def index_terms(self, quiver: Quiver) -> list[tuple[int, tuple[int, ...]]]:
        return [(c, tuple(quiver.arrow_index(n) for n in path)) for c, path in self.terms]


@dataclass(frozen=True)
class AlgebraPresentation:
    quiver: Quiver
    characteristic: int
    relations: tuple[Relation, ...] = ()

    def __post_init__(self):
        check_characteristic(self.characteristic)

    @property
    def p(self) -> int:
        return self.characteristic

    @property
    def n_vertices(self) -> int:
        return len(self.quiver.vertices)

    @cached_property
    def basis(self) -> "PathBasis":
        return path_basis(self)

    def with_characteristic(self, p: int) -> "AlgebraPresentation":
        return AlgebraPresentation(self.quiver, p, self.relations)

    def opposite(self) -> "AlgebraPresentation":
        return self._opposite

    @cached_property
    def _opposite(self) -> "AlgebraPresentation":
        q = self.quiver.opposite()
        rels = tuple(Relation.build(q, [(c, tuple(reversed(path))) for c, path in r.terms]) for r in self.relations)
        op = AlgebraPresentation(q, self.characteristic, rels)
        op.__dict__["_opposite"] = self
        return op

    @cached_property
    def _projectives(self) -> tuple[Representation, ...]:
        return tuple(_build_projective(self, i) for i in range(self.n_vertices))

    @cached_property
    def _injectives(self) -> tuple[Representation, ...]:
        return tuple(_build_injective(self, i) for i in range(self.n_vertices))

    # JSON ------------------------------------------------------------------
    def to_json(self) -> dict:
        q = self.quiver
        return {
            "characteristic": self.characteristic,
            "vertices": list(q.vertices),
            "arrows": [{"name": a.name, "from": q.vertices[a.source], "to": q.vertices[a.target]} for a in q.arrows],
            "relations": [[{"coeff": c, "path": list(path)} for c, path in r.terms] for r in self.relations],
        }

    @classmethod
    def from_json(cls, data: dict, characteristic: int | None = None) -> "AlgebraPresentation":
        try:
            p = int(characteristic if characteristic is not None else data["characteristic"])
            q = Quiver.from_names(data["vertices"], [(a["name"], a["from"], a["to"]) for a in data["arrows"]])
            rels = tuple(
                Relation.build(q, [(int(t["coeff"]), t["path"]) for t in rel])
                for rel in data.get("relations", [])
            )
        except (KeyError, TypeError) as exc:
            raise MalformedInput(f"malformed algebra description: {exc}") from exc
        try:
            return cls(q, p, rels)
        except ValueError as exc:
            raise MalformedInput(str(exc)) from exc

    @classmethod
    def load(cls, path, characteristic: int | None = None) -> "AlgebraPresentation":
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise MalformedInput(f"{path}: {exc}") from exc
        return cls.from_json(data, characteristic)


class PathBasis:
    """Normal-form paths of ``KQ/I`` grouped by (source, target) vertex pair."""

    def __init__(self, alg: AlgebraPresentation, basis: dict, coords: dict, certificate_length: int):
        self.alg = alg
        self.paths: dict[tuple[int, int], list[Path]] = basis
        self._coords = coords
        self.certificate_length = certificate_length

    @property
    def dimension(self) -> int:
        return sum(len(v) for v in self.paths.values())

    def between(self, i: int, j: int) -> list[Path]:
        return self.paths.get((i, j), [])

    def coordinates(self, path: Path) -> np.ndarray:
        """Coordinates of ``path`` in the normal-form basis of its (source, target) space."""
        n = len(self.between(path.source, path.target))
        if path.length >= self.certificate_length:
            return np.zeros(n, dtype=np.int64)
        return self._coords[path]

    def labels(self) -> dict[str, list[str]]:
        q = self.alg.quiver
        return {f"{q.vertices[i]}->{q.vertices[j]}": [pth.label(q) for pth in ps]
                for (i, j), ps in sorted(self.paths.items()) if ps}


def default_length_cap(alg: AlgebraPresentation) -> int:
    return 2 * len(alg.quiver.arrows) + 4


def _extend(paths: list[Path], quiver: Quiver) -> list[Path]:
    out = []
    for pth in paths:
        for a, arrow in enumerate(quiver.arrows):
            if arrow.source == pth.target:
                out.append(pth.then(a, arrow))
    return sorted(out)


def path_basis(alg: AlgebraPresentation, length_cap: int | None = None) -> PathBasis:
    """Normal-form basis of ``KQ/I``; raises NonTerminating past ``length_cap``."""
    cap = default_length_cap(alg) if length_cap is None else length_cap
    q = alg.quiver
    strata = [[Path.trivial(v) for v in range(len(q.vertices))]]
    for L in range(1, cap + 1):
        strata.append(_extend(strata[-1], q))
        result = _try_stratum(alg, strata, L)
        if result is not None:
            return result
    raise NonTerminating(cap)


def _ideal_vectors(alg: AlgebraPresentation, strata: list[list[Path]], L: int):
    """Truncations of ``u * r * v`` to length <= L, as {path: coeff} dicts."""
    q = alg.quiver
    p = alg.characteristic
    ending_at: dict[int, list[Path]] = {}
    starting_at: dict[int, list[Path]] = {}
    for stratum in strata:
        for pth in stratum:
            ending_at.setdefault(pth.target, []).append(pth)
            starting_at.setdefault(pth.source, []).append(pth)
    out = []
    for rel in alg.relations:
        terms = rel.index_terms(q)
        shortest = min(len(t) for _, t in terms)
        for u in ending_at.get(rel.source, []):
            if u.length + shortest > L:
                continue
            for v in starting_at.get(rel.target, []):
                if u.length + shortest + v.length > L:
                    continue
                vec: dict[Path, int] = {}
                for c, term in terms:
                    length = u.length + len(term) + v.length
                    if length > L:
                        continue
                    arrows = u.arrows + term + v.arrows
                    key = Path(length, arrows, u.source, v.target)
                    vec[key] = (vec.get(key, 0) + c) % p
                vec = {k: c for k, c in vec.items() if c}
                if vec:
                    out.append(vec)
    return out


def _try_stratum(alg: AlgebraPresentation, strata: list[list[Path]], L: int) -> PathBasis | None:
    p = alg.characteristic
    groups: dict[tuple[int, int], list[Path]] = {}
    for stratum in strata:
        for pth in stratum:
            groups.setdefault((pth.source, pth.target), []).append(pth)
    ideal = _ideal_vectors(alg, strata, L)
    by_group: dict[tuple[int, int], list[dict]] = {}
    for vec in ideal:
        k = next(iter(vec))
        by_group.setdefault((k.source, k.target), []).append(vec)

    reduced = {}
    for key, paths in groups.items():
        # longest paths first so that they become pivots and leave short normal forms
        cols = sorted(paths, reverse=True)
        col_of = {pth: i for i, pth in enumerate(cols)}
        rows = by_group.get(key, [])
        w = np.zeros((len(rows), len(cols)), dtype=np.int64)
        for r, vec in enumerate(rows):
            for pth, c in vec.items():
                w[r, col_of[pth]] = c
        red, pivots = rref_array(w, p)
        top = [i for i, pth in enumerate(cols) if pth.length == L]
        if any(i not in pivots for i in top):
            return None
        reduced[key] = (cols, col_of, red[: len(pivots)], pivots)

    basis: dict[tuple[int, int], list[Path]] = {}
    coords: dict[Path, np.ndarray] = {}
    for key, (cols, col_of, red, pivots) in reduced.items():
        pivset = set(pivots)
        free = sorted((cols[i] for i in range(len(cols)) if i not in pivset))
        basis[key] = free
        free_cols = [col_of[pth] for pth in free]
        for pth in cols:
            if pth.length >= L:
                continue
            v = np.zeros(len(cols), dtype=np.int64)
            v[col_of[pth]] = 1
            for r, c in enumerate(pivots):
                if v[c]:
                    v = (v - v[c] * red[r]) % p
            coords[pth] = v[free_cols].copy()
    return PathBasis(alg, basis, coords, L)


def _build_projective(alg: AlgebraPresentation, i: int) -> Representation:
    pb = alg.basis
    q = alg.quiver
    n = len(q.vertices)
    dims = [len(pb.between(i, v)) for v in range(n)]
    maps = []
    for a, arrow in enumerate(q.arrows):
        m = np.zeros((dims[arrow.target], dims[arrow.source]), dtype=np.int64)
        for k, pth in enumerate(pb.between(i, arrow.source)):
            m[:, k] = pb.coordinates(pth.then(a, arrow))
        maps.append(FMatrix(m, alg.p))
    return Representation(alg, dims, maps, name=f"P{q.vertices[i]}", check_relations=False)


def _build_injective(alg: AlgebraPresentation, i: int) -> Representation:
    pb = alg.basis
    q = alg.quiver
    n = len(q.vertices)
    dims = [len(pb.between(v, i)) for v in range(n)]
    maps = []
    for a, arrow in enumerate(q.arrows):
        # right multiplication q -> a.q sends paths target->i to paths source->i
        right = np.zeros((dims[arrow.source], dims[arrow.target]), dtype=np.int64)
        for k, pth in enumerate(pb.between(arrow.target, i)):
            longer = Path(pth.length + 1, (a,) + pth.arrows, arrow.source, i)
            right[:, k] = pb.coordinates(longer)
        maps.append(FMatrix(right.T, alg.p))
    return Representation(alg, dims, maps, name=f"I{q.vertices[i]}", check_relations=False)


def projective_module(alg: AlgebraPresentation, i) -> Representation:
    """``P_i = A e_i``: vertex ``v`` spanned by normal-form paths from ``i`` to ``v``."""
    return alg._projectives[alg.quiver.vertex_index(i)]


def injective_module(alg: AlgebraPresentation, i) -> Representation:
    """``I_i = D(e_i A)``: vertex ``v`` dual to normal-form paths from ``v`` to ``i``."""
    return alg._injectives[alg.quiver.vertex_index(i)]


def simple_module(alg: AlgebraPresentation, i) -> Representation:
    idx = alg.quiver.vertex_index(i)
    dims = [1 if v == idx else 0 for v in range(alg.n_vertices)]
    return Representation(alg, dims, name=f"S{alg.quiver.vertices[idx]}", check_relations=False)


def verify_relations(alg: AlgebraPresentation, rep: Representation) -> bool:
    """True iff every relation evaluates to the zero matrix on ``rep``."""
    q = alg.quiver
    if len(rep.dims) != len(q.vertices) or len(rep.maps) != len(q.arrows):
        raise ShapeMismatch("representation does not match the quiver")
    for a, arrow in enumerate(q.arrows):
        if rep.maps[a].shape != (rep.dims[arrow.target], rep.dims[arrow.source]):
            raise ShapeMismatch(f"arrow {arrow.name}: shape {rep.maps[a].shape} inconsistent with dims")
    return rep.satisfies_relations()


def dual_module(rep: Representation, op: AlgebraPresentation | None = None) -> Representation:
    """``D M = Hom_K(M, K)`` as a module over the opposite algebra."""
    op = op or rep.alg.opposite()
    name = f"D({rep.name})" if rep.name else None
    return Representation(op, rep.dims, [m.T for m in rep.maps], name=name, check_relations=False)
