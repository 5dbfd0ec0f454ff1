"""Hom spaces, projective covers, syzygies and Ext over ``KQ/I``.

Ext is computed from the projective presentation ``0 -> ΩC -> P0 -> C -> 0``:
``Ext^1(C, A) = Hom(ΩC, A) / {ψ ∘ ι : ψ ∈ Hom(P0, A)}``, and higher Ext by
dimension shifting. This works with relations, unlike the two-term complex
of a hereditary path algebra (kept in the tests as an oracle for ``I = 0``).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from ..errors import AlgebraMismatch, Diverges, InfiniteGlobalDimension
from ..exactfield import FMatrix, complement_basis, column_space_basis, kernel_basis, rref_array, solve_right
from ..modules import (
    ModuleMap,
    Representation,
    ambient_size,
    biproduct,
    kernel,
    same_algebra,
    unflatten,
)
from ..pathalg import dual_module, projective_module, simple_module

DEFAULT_SYZYGY_CAP = 32


@dataclass(frozen=True, eq=False)
class HomSpace:
    source: Representation
    target: Representation
    basis: tuple[ModuleMap, ...]
    vectors: np.ndarray  # one flattened basis element per row

    @property
    def dim(self) -> int:
        return len(self.basis)

    def element(self, coeffs: Sequence[int]) -> ModuleMap:
        p = self.source.p
        vec = np.zeros(self.vectors.shape[1], dtype=np.int64)
        for c, row in zip(coeffs, self.vectors):
            vec = (vec + int(c) * row) % p
        return unflatten(vec, self.source, self.target)

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.basis)


def _intertwining_system(m: Representation, n: Representation) -> np.ndarray:
    p = m.p
    q = m.alg.quiver
    offsets, off = [], 0
    for s, t in zip(m.dims, n.dims):
        offsets.append(off)
        off += s * t
    blocks = []
    for a, arrow in enumerate(q.arrows):
        u, v = arrow.source, arrow.target
        rows = n.dims[v] * m.dims[u]
        if rows == 0:
            continue
        eq = np.zeros((rows, off), dtype=np.int64)
        # f_v M_a  (row-major vec)  = (I ⊗ M_a^T) vec f_v
        if m.dims[v] and n.dims[v]:
            blk = np.kron(np.eye(n.dims[v], dtype=np.int64), m.maps[a].array.T)
            eq[:, offsets[v]:offsets[v] + n.dims[v] * m.dims[v]] += blk
        # - N_a f_u = -(N_a ⊗ I) vec f_u
        if m.dims[u] and n.dims[u]:
            blk = np.kron(n.maps[a].array, np.eye(m.dims[u], dtype=np.int64))
            eq[:, offsets[u]:offsets[u] + n.dims[u] * m.dims[u]] -= blk
        blocks.append(eq % p)
    if not blocks:
        return np.zeros((0, off), dtype=np.int64)
    return np.vstack(blocks)


def hom_space(m: Representation, n: Representation) -> HomSpace:
    """Basis of ``Hom(m, n)`` as the null space of the intertwining equations."""
    if not same_algebra(m.alg, n.alg):
        raise AlgebraMismatch("Hom between modules over different algebras")
    return _hom_cached(m, n)


@lru_cache(maxsize=4096)
def _hom_cached(m: Representation, n: Representation) -> HomSpace:
    p = m.p
    size = ambient_size(m, n)
    system = _intertwining_system(m, n)
    ker = kernel_basis(FMatrix(system, p, shape=(system.shape[0], size))).array.T.copy()
    basis = tuple(unflatten(row, m, n) for row in ker)
    return HomSpace(m, n, basis, ker)


def hom_dim(m: Representation, n: Representation) -> int:
    return hom_space(m, n).dim


def radical_basis(m: Representation, v: int) -> FMatrix:
    """Basis of ``(rad M)_v``: the span of the images of arrows ending at ``v``."""
    q = m.alg.quiver
    imgs = [m.maps[a] for a, arrow in enumerate(q.arrows) if arrow.target == v and m.maps[a].cols]
    if not imgs:
        return FMatrix.zeros(m.dims[v], 0, m.p)
    return column_space_basis(FMatrix.hstack(imgs))


def top_dims(m: Representation) -> tuple[int, ...]:
    return tuple(m.dims[v] - radical_basis(m, v).cols for v in range(len(m.dims)))


@dataclass(frozen=True, eq=False)
class Presentation:
    """``0 -> Ω -> P0 -> M -> 0`` with ``P0 = ⊕ P_{tops[k]}`` and chosen generators."""

    module: Representation
    p0: Representation
    cover: ModuleMap
    syzygy: Representation
    inclusion: ModuleMap
    tops: tuple[int, ...]
    generators: tuple[np.ndarray, ...]  # generators[k] lies in module.dims[tops[k]]


def _module_name(names: Sequence[str]) -> str:
    return "⊕".join(names) if names else "0"


def projective_cover(m: Representation) -> tuple[Representation, ModuleMap]:
    pres = presentation(m)
    return pres.p0, pres.cover


def presentation(m: Representation) -> Presentation:
    return _presentation_cached(m)


@lru_cache(maxsize=2048)
def _presentation_cached(m: Representation) -> Presentation:
    alg = m.alg
    p = m.p
    pb = alg.basis
    tops, gens = [], []
    for v in range(len(m.dims)):
        rad = radical_basis(m, v)
        comp = complement_basis(rad, m.dims[v], p)
        for j in range(comp.cols):
            tops.append(v)
            gens.append(comp.array[:, j].copy())
    summands = [projective_module(alg, v) for v in tops]
    p0, _, _ = biproduct(summands, alg, name=_module_name([s.name for s in summands]))
    comps = []
    for w in range(len(m.dims)):
        cols = []
        for v, g in zip(tops, gens):
            for pth in pb.between(v, w):
                cols.append((m.path_matrix(pth.arrows, v).array @ g) % p)
        arr = np.array(cols, dtype=np.int64).T if cols else np.zeros((m.dims[w], 0), dtype=np.int64)
        comps.append(FMatrix(arr.reshape(m.dims[w], len(cols)), p))
    cover = ModuleMap(p0, m, comps, check=False)
    omega, incl = kernel(cover, name=f"Ω({m.name})" if m.name else None)
    return Presentation(m, p0, cover, omega, incl, tuple(tops), tuple(gens))


def syzygy(m: Representation) -> Representation:
    """Kernel of the projective cover; the inclusion is ``presentation(m).inclusion``."""
    return presentation(m).syzygy


def _maps_from_projective(pres: Presentation, target: Representation) -> np.ndarray:
    """Flattened ``ψ ∘ ι`` for a basis of ``Hom(P0, target)``."""
    alg = target.alg
    p = target.p
    pb = alg.basis
    omega, incl = pres.syzygy, pres.inclusion
    rows = []
    n_v = len(target.dims)
    offsets = [0] * n_v
    # column offsets of each P_{tops[k]} block inside P0 at every vertex
    block_start = []
    for v in pres.tops:
        starts = []
        for w in range(n_v):
            starts.append(offsets[w])
            offsets[w] += len(pb.between(v, w))
        block_start.append(starts)
    for k, v in enumerate(pres.tops):
        for j in range(target.dims[v]):
            gen = np.zeros(target.dims[v], dtype=np.int64)
            gen[j] = 1
            parts = []
            for w in range(n_v):
                psi = np.zeros((target.dims[w], pres.p0.dims[w]), dtype=np.int64)
                for c, pth in enumerate(pb.between(v, w)):
                    psi[:, block_start[k][w] + c] = target.path_matrix(pth.arrows, v).array @ gen % p
                parts.append(((psi @ incl.components[w].array) % p).reshape(-1))
            rows.append(np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64))
    size = ambient_size(omega, target)
    if not rows:
        return np.zeros((0, size), dtype=np.int64)
    return np.array(rows, dtype=np.int64).reshape(len(rows), size)


@dataclass(frozen=True, eq=False)
class ExtSpace:
    """``Ext^1(source, target)`` with cocycle representatives ``ΩC -> A``.

    ``degree`` records the requested degree; for degree ``i > 1`` the space is
    ``Ext^1(Ω^{i-1} C, A)`` and ``source`` is the original module.
    """

    degree: int
    source: Representation
    target: Representation
    presentation: Presentation
    representatives: tuple[ModuleMap, ...]
    _rep_vectors: np.ndarray
    _coboundaries: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def cocycle(self, coeffs: Sequence[int]) -> ModuleMap:
        p = self.target.p
        vec = np.zeros(self._rep_vectors.shape[1], dtype=np.int64)
        for c, row in zip(coeffs, self._rep_vectors):
            vec = (vec + int(c) * row) % p
        return unflatten(vec, self.presentation.syzygy, self.target)

    def coordinates(self, phi: ModuleMap) -> tuple[int, ...]:
        """Class of a cocycle ``ΩC -> A`` in the representative basis."""
        p = self.target.p
        vec = phi.flatten()
        gens = np.vstack([self._rep_vectors.reshape(-1, len(vec)), self._coboundaries.reshape(-1, len(vec))])
        x = solve_right(FMatrix(gens.T, p, shape=(len(vec), gens.shape[0])), FMatrix(vec, p, shape=(len(vec), 1)))
        if x is None:
            raise ValueError("map is not a cocycle of this presentation")
        return tuple(int(c) for c in x.array[: self.dim, 0])


def ext_space(c: Representation, a: Representation, degree: int = 1) -> ExtSpace:
    if degree < 1:
        raise ValueError("Ext degree must be >= 1")
    if not same_algebra(c.alg, a.alg):
        raise AlgebraMismatch("Ext between modules over different algebras")
    src = c
    for _ in range(degree - 1):
        src = syzygy(src)
    pres = presentation(src)
    omega = pres.syzygy
    p = a.p
    h = hom_space(omega, a)
    cob = _maps_from_projective(pres, a)
    red, piv = rref_array(cob, p) if cob.size else (cob, [])
    cob_basis = red[: len(piv)]
    current = cob_basis
    reps = []
    r = len(piv)
    for row in h.vectors:
        trial = np.vstack([current, row[None, :]]) if current.size else row[None, :]
        _, tp = rref_array(trial, p)
        if len(tp) > r:
            reps.append(row)
            current = trial
            r = len(tp)
    rep_vectors = np.array(reps, dtype=np.int64).reshape(len(reps), h.vectors.shape[1])
    rep_maps = tuple(unflatten(v, omega, a) for v in rep_vectors)
    return ExtSpace(degree, c, a, pres, rep_maps, rep_vectors, cob_basis)


def ext_dim(c: Representation, a: Representation, degree: int = 1) -> int:
    if degree < 1:
        raise ValueError("Ext degree must be >= 1")
    src = c
    for _ in range(degree - 1):
        src = syzygy(src)
    pres = presentation(src)
    h = hom_space(pres.syzygy, a)
    if h.dim == 0:
        return 0
    cob = _maps_from_projective(pres, a)
    r = len(rref_array(cob, a.p)[1]) if cob.size else 0
    return h.dim - r


def projective_dimension(m: Representation, cap: int = DEFAULT_SYZYGY_CAP) -> int:
    """Length of the minimal projective resolution; the zero module counts as 0."""
    cur = m
    for n in range(cap + 1):
        nxt = syzygy(cur)
        if nxt.is_zero():
            return n
        cur = nxt
    raise Diverges(cap, m.name or "module")


def injective_envelope(m: Representation) -> tuple[Representation, ModuleMap]:
    """``M -> I0`` obtained by dualising the projective cover of ``DM`` over the opposite algebra."""
    op = m.alg.opposite()
    dm = dual_module(m, op)
    p0, cover = projective_cover(dm)
    i0 = dual_module(p0, m.alg)
    return i0, ModuleMap(m, i0, [c.T for c in cover.components], check=False)


def cosyzygy(m: Representation) -> Representation:
    op = m.alg.opposite()
    return dual_module(syzygy(dual_module(m, op)), m.alg)


def injective_dimension(m: Representation, cap: int = DEFAULT_SYZYGY_CAP) -> int:
    return projective_dimension(dual_module(m, m.alg.opposite()), cap)


def global_dimension(alg, modules: Sequence[Representation] | None = None, cap: int = DEFAULT_SYZYGY_CAP) -> int:
    """Maximum projective dimension over the simples (or the given modules)."""
    mods = modules if modules is not None else [simple_module(alg, v) for v in range(alg.n_vertices)]
    try:
        return max((projective_dimension(s, cap) for s in mods), default=0)
    except Diverges as exc:
        raise InfiniteGlobalDimension(cap, "global dimension") from exc


def is_projective(m: Representation) -> bool:
    return syzygy(m).is_zero()


def is_injective(m: Representation) -> bool:
    return cosyzygy(m).is_zero()
