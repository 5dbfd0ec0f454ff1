"""Representations of bound quivers and the module maps between them.

A representation carries one vector space ``F_p^{dims[v]}`` per vertex and
one matrix per arrow ``a: u -> v`` of shape ``dims[v] x dims[u]`` acting on
column vectors. A path listed in traversal order ``[a1, a2, ..., ak]`` acts
by ``M_ak @ ... @ M_a1``.

Vertices and arrows are addressed by their index in the quiver; the JSON
layer translates names.
"""
from __future__ import annotations

from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

import numpy as np

from .errors import AlgebraMismatch, NotAModuleMap, ShapeMismatch
from .exactfield import FMatrix, kernel_basis, left_kernel_basis, rank, solve_right

if TYPE_CHECKING:
    from .pathalg import AlgebraPresentation


def same_algebra(a, b) -> bool:
    return a is b or a == b


class Representation:
    """A finite-dimensional left module over ``KQ/I`` given as a quiver representation."""

    __slots__ = ("alg", "dims", "maps", "name")

    def __init__(self, alg: "AlgebraPresentation", dims, maps=None, name: str | None = None,
                 check_relations: bool = True):
        q = alg.quiver
        p = alg.characteristic
        if isinstance(dims, Mapping):
            dims = [int(dims.get(v, 0)) for v in q.vertices]
        dims = tuple(int(d) for d in dims)
        if len(dims) != len(q.vertices):
            raise ShapeMismatch(f"expected {len(q.vertices)} dimensions, got {len(dims)}")
        if any(d < 0 for d in dims):
            raise ShapeMismatch(f"negative dimension in {dims}")
        if maps is None:
            maps = {}
        if isinstance(maps, Mapping):
            by_name = {}
            for key, m in maps.items():
                idx = q.arrow_index(key) if isinstance(key, str) else int(key)
                by_name[idx] = m
            maps = [by_name.get(i) for i in range(len(q.arrows))]
        if len(maps) != len(q.arrows):
            raise ShapeMismatch(f"expected {len(q.arrows)} arrow matrices, got {len(maps)}")
        fixed = []
        for arrow, m in zip(q.arrows, maps):
            shape = (dims[arrow.target], dims[arrow.source])
            if m is None:
                m = FMatrix.zeros(*shape, p)
            elif not isinstance(m, FMatrix):
                arr = np.asarray(m, dtype=np.int64)
                if arr.size == 0:
                    arr = arr.reshape(shape) if 0 in shape else arr
                m = FMatrix(arr, p)
            if m.p != p:
                raise ShapeMismatch(f"arrow {arrow.name}: matrix over F_{m.p}, algebra over F_{p}")
            if m.shape != shape:
                raise ShapeMismatch(f"arrow {arrow.name}: matrix shape {m.shape}, expected {shape}")
            fixed.append(m)
        self.alg = alg
        self.dims = dims
        self.maps = tuple(fixed)
        self.name = name
        if check_relations and not self.satisfies_relations():
            raise ShapeMismatch(f"representation {name or ''} violates the relations of the algebra")

    @property
    def p(self) -> int:
        return self.alg.characteristic

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def path_matrix(self, arrows: Sequence[int], start: int | None = None) -> FMatrix:
        """Matrix of a path given as arrow indices in traversal order."""
        if not arrows:
            return FMatrix.identity(self.dims[start], self.p)
        m = self.maps[arrows[0]]
        for a in arrows[1:]:
            m = self.maps[a] @ m
        return m

    def satisfies_relations(self) -> bool:
        q = self.alg.quiver
        for rel in self.alg.relations:
            s, t = rel.source, rel.target
            acc = FMatrix.zeros(self.dims[t], self.dims[s], self.p)
            for coeff, path in rel.index_terms(q):
                acc = acc + self.path_matrix(path).scale(coeff)
            if not acc.is_zero():
                return False
        return True

    def renamed(self, name: str | None) -> "Representation":
        out = Representation.__new__(Representation)
        out.alg, out.dims, out.maps, out.name = self.alg, self.dims, self.maps, name
        return out

    def __eq__(self, other):
        if not isinstance(other, Representation):
            return NotImplemented
        return same_algebra(self.alg, other.alg) and self.dims == other.dims and self.maps == other.maps

    def __hash__(self):
        return hash((self.dims, self.maps))

    def __repr__(self):
        label = self.name or "Representation"
        return f"<{label} dims={self.dims}>"


def zero_module(alg) -> Representation:
    return Representation(alg, [0] * len(alg.quiver.vertices), check_relations=False)


class ModuleMap:
    """A morphism of representations, one matrix per vertex."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source: Representation, target: Representation, components, check: bool = True):
        if not same_algebra(source.alg, target.alg):
            raise AlgebraMismatch("module map between modules over different algebras")
        p = source.p
        comps = []
        for v, c in enumerate(components):
            if not isinstance(c, FMatrix):
                c = FMatrix(np.asarray(c, dtype=np.int64).reshape(target.dims[v], source.dims[v]), p)
            if c.shape != (target.dims[v], source.dims[v]):
                raise ShapeMismatch(f"component at vertex {v} has shape {c.shape}, "
                                    f"expected {(target.dims[v], source.dims[v])}")
            comps.append(c)
        if len(comps) != len(source.dims):
            raise ShapeMismatch("one component per vertex required")
        self.source = source
        self.target = target
        self.components = tuple(comps)
        if check and not self.intertwines():
            raise NotAModuleMap("components do not commute with the arrow maps")

    def intertwines(self) -> bool:
        for a, arrow in enumerate(self.source.alg.quiver.arrows):
            lhs = self.components[arrow.target] @ self.source.maps[a]
            rhs = self.target.maps[a] @ self.components[arrow.source]
            if lhs != rhs:
                return False
        return True

    @classmethod
    def identity(cls, m: Representation) -> "ModuleMap":
        return cls(m, m, [FMatrix.identity(d, m.p) for d in m.dims], check=False)

    @classmethod
    def zero(cls, source: Representation, target: Representation) -> "ModuleMap":
        return cls(source, target, [FMatrix.zeros(t, s, source.p) for s, t in zip(source.dims, target.dims)],
                   check=False)

    def compose(self, inner: "ModuleMap") -> "ModuleMap":
        """``self ∘ inner``."""
        if inner.target.dims != self.source.dims:
            raise ShapeMismatch("composition of non-composable module maps")
        return ModuleMap(inner.source, self.target,
                         [a @ b for a, b in zip(self.components, inner.components)], check=False)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target,
                         [a + b for a, b in zip(self.components, other.components)], check=False)

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target,
                         [a - b for a, b in zip(self.components, other.components)], check=False)

    def __neg__(self) -> "ModuleMap":
        return ModuleMap(self.source, self.target, [-a for a in self.components], check=False)

    def scale(self, c) -> "ModuleMap":
        return ModuleMap(self.source, self.target, [a.scale(c) for a in self.components], check=False)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def is_injective(self) -> bool:
        return all(rank(c) == c.cols for c in self.components)

    def is_surjective(self) -> bool:
        return all(rank(c) == c.rows for c in self.components)

    def is_isomorphism(self) -> bool:
        return all(c.rows == c.cols and rank(c) == c.rows for c in self.components)

    def inverse(self) -> "ModuleMap":
        return ModuleMap(self.target, self.source, [c.inverse() for c in self.components], check=False)

    def flatten(self) -> np.ndarray:
        parts = [c.array.reshape(-1) for c in self.components]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def __eq__(self, other):
        if not isinstance(other, ModuleMap):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return f"<ModuleMap {self.source!r} -> {self.target!r}>"


def biproduct(mods: Sequence[Representation], alg=None, name: str | None = None):
    """Direct sum with its canonical injections and projections."""
    if not mods:
        if alg is None:
            raise ValueError("empty direct sum needs an algebra")
        z = zero_module(alg)
        return z.renamed(name or "0"), [], []
    alg = mods[0].alg
    for m in mods[1:]:
        if not same_algebra(m.alg, alg):
            raise AlgebraMismatch("direct sum of modules over different algebras")
    p = alg.characteristic
    q = alg.quiver
    dims = [sum(m.dims[v] for m in mods) for v in range(len(q.vertices))]
    maps = [FMatrix.block_diag([m.maps[a] for m in mods], p) for a in range(len(q.arrows))]
    total = Representation(alg, dims, maps, name=name, check_relations=False)
    incl, proj = [], []
    offsets = [0] * len(dims)
    for m in mods:
        ic, pc = [], []
        for v, d in enumerate(m.dims):
            e = np.zeros((dims[v], d), dtype=np.int64)
            e[offsets[v]:offsets[v] + d, :] = np.eye(d, dtype=np.int64)
            ic.append(FMatrix(e, p))
            pc.append(FMatrix(e.T, p))
            offsets[v] += d
        incl.append(ModuleMap(m, total, ic, check=False))
        proj.append(ModuleMap(total, m, pc, check=False))
    return total, incl, proj


def direct_sum(mods: Sequence[Representation], alg=None, name: str | None = None) -> Representation:
    return biproduct(mods, alg, name)[0]


def direct_sum_map(maps: Sequence[ModuleMap], source: Representation | None = None,
                   target: Representation | None = None) -> ModuleMap:
    """Block-diagonal map ``⊕ f_k : ⊕ A_k -> ⊕ B_k``."""
    if source is None:
        source = direct_sum([f.source for f in maps])
    if target is None:
        target = direct_sum([f.target for f in maps])
    comps = [FMatrix.block_diag([f.components[v] for f in maps], source.p) for v in range(len(source.dims))]
    return ModuleMap(source, target, comps, check=False)


def map_from_sum(maps: Sequence[ModuleMap], source: Representation, target: Representation) -> ModuleMap:
    """Row map ``[f_1, ..., f_k] : ⊕ A_k -> B``."""
    comps = []
    for v in range(len(target.dims)):
        comps.append(FMatrix.hstack([f.components[v] for f in maps], rows=target.dims[v], p=target.p)
                     if maps else FMatrix.zeros(target.dims[v], source.dims[v], target.p))
    return ModuleMap(source, target, comps, check=False)


def map_into_sum(maps: Sequence[ModuleMap], source: Representation, target: Representation) -> ModuleMap:
    """Column map ``(f_1, ..., f_k)^T : A -> ⊕ B_k``."""
    comps = []
    for v in range(len(source.dims)):
        comps.append(FMatrix.vstack([f.components[v] for f in maps], cols=source.dims[v], p=source.p)
                     if maps else FMatrix.zeros(target.dims[v], source.dims[v], source.p))
    return ModuleMap(source, target, comps, check=False)


def kernel(f: ModuleMap, name: str | None = None) -> tuple[Representation, ModuleMap]:
    """Kernel representation of ``f`` with its inclusion into ``f.source``."""
    src = f.source
    bases = [kernel_basis(c) for c in f.components]
    maps = []
    for a, arrow in enumerate(src.alg.quiver.arrows):
        rhs = src.maps[a] @ bases[arrow.source]
        x = solve_right(bases[arrow.target], rhs)
        if x is None:  # pragma: no cover - f is a module map, so ker f is a submodule
            raise NotAModuleMap("kernel is not closed under the arrow action")
        maps.append(x)
    k = Representation(src.alg, [b.cols for b in bases], maps, name=name, check_relations=False)
    return k, ModuleMap(k, src, bases, check=False)


def cokernel(f: ModuleMap, name: str | None = None) -> tuple[Representation, ModuleMap]:
    """Cokernel representation of ``f`` with its projection from ``f.target``."""
    tgt = f.target
    projs = [left_kernel_basis(c) for c in f.components]
    maps = []
    for a, arrow in enumerate(tgt.alg.quiver.arrows):
        rhs = projs[arrow.target] @ tgt.maps[a]
        xt = solve_right(projs[arrow.source].T, rhs.T)
        if xt is None:  # pragma: no cover
            raise NotAModuleMap("image is not a submodule")
        maps.append(xt.T)
    c = Representation(tgt.alg, [q.rows for q in projs], maps, name=name, check_relations=False)
    return c, ModuleMap(tgt, c, projs, check=False)


def lift_through_mono(mono: ModuleMap, g: ModuleMap) -> ModuleMap | None:
    """``h`` with ``mono ∘ h == g``, or None when ``g`` does not land in the image."""
    comps = []
    for m, c in zip(mono.components, g.components):
        x = solve_right(m, c)
        if x is None:
            return None
        comps.append(x)
    return ModuleMap(g.source, mono.source, comps, check=False)


def descend_through_epi(epi: ModuleMap, g: ModuleMap) -> ModuleMap | None:
    """``h`` with ``h ∘ epi == g``, or None when ``g`` does not kill ``ker epi``."""
    comps = []
    for e, c in zip(epi.components, g.components):
        xt = solve_right(e.T, c.T)
        if xt is None:
            return None
        comps.append(xt.T)
    return ModuleMap(epi.target, g.target, comps, check=False)


def image_inclusion(f: ModuleMap) -> ModuleMap:
    """Inclusion of ``im f`` into ``f.target`` (as the kernel of the cokernel)."""
    _, proj = cokernel(f)
    return kernel(proj)[1]


def ambient_size(source: Representation, target: Representation) -> int:
    return sum(s * t for s, t in zip(source.dims, target.dims))


def unflatten(vec: Iterable[int], source: Representation, target: Representation, check: bool = False) -> ModuleMap:
    vec = np.asarray(list(vec) if not isinstance(vec, np.ndarray) else vec, dtype=np.int64)
    comps, off = [], 0
    for s, t in zip(source.dims, target.dims):
        comps.append(FMatrix(vec[off:off + s * t].reshape(t, s), source.p))
        off += s * t
    return ModuleMap(source, target, comps, check=check)
