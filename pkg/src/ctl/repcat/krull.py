"""Isomorphism testing, indecomposability and Krull-Schmidt decomposition."""
from __future__ import annotations

import itertools
from collections import Counter
from typing import Iterable, Sequence

import numpy as np

from ..errors import AlgebraMismatch, CapExceeded, Inconclusive, ResidueNotInCatalog
from ..exactfield import FMatrix, rank, solve_right
from ..modules import ModuleMap, Representation, kernel, same_algebra
from .homology import hom_space

DEFAULT_ENUM_CAP = 2**16
DEFAULT_SEED = 0


def _combo(basis_vectors: np.ndarray, coeffs, p: int) -> np.ndarray:
    return (np.asarray(coeffs, dtype=np.int64) @ basis_vectors) % p


def _blocks(vec: np.ndarray, source: Representation, target: Representation) -> list[np.ndarray]:
    out, off = [], 0
    for s, t in zip(source.dims, target.dims):
        out.append(vec[off:off + s * t].reshape(t, s))
        off += s * t
    return out


def _is_invertible(blocks: Sequence[np.ndarray], p: int) -> bool:
    for b in blocks:
        if b.shape[0] != b.shape[1]:
            return False
        if b.shape[0] and rank(FMatrix(b, p)) < b.shape[0]:
            return False
    return True


def _is_nilpotent(blocks: Sequence[np.ndarray], p: int) -> bool:
    for b in blocks:
        n = b.shape[0]
        if n == 0:
            continue
        power = b.copy()
        for _ in range(n - 1):
            power = (power @ b) % p
        if power.any():
            return False
    return True


def is_isomorphic(m: Representation, n: Representation, cap_enum: int = DEFAULT_ENUM_CAP,
                  seed: int = DEFAULT_SEED, trials: int = 64) -> bool:
    """Decide ``m ≅ n`` by searching ``Hom(m, n)`` for a vertexwise-invertible element.

    Raises Inconclusive when ``p^dim Hom`` exceeds ``cap_enum`` and neither the
    seeded random trials nor the structured sweep found an isomorphism.
    """
    if not same_algebra(m.alg, n.alg):
        raise AlgebraMismatch("isomorphism test across algebras")
    if m.dims != n.dims:
        return False
    if m.is_zero():
        return True
    if m == n:
        return True
    p = m.p
    h = hom_space(m, n)
    if h.dim == 0:
        return False
    # necessary conditions: Hom(m, n) ≅ End(m) ≅ End(n) ≅ Hom(n, m)
    if len({h.dim, hom_space(m, m).dim, hom_space(n, n).dim, hom_space(n, m).dim}) != 1:
        return False
    vecs = h.vectors
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        coeffs = rng.integers(0, p, size=h.dim)
        if _is_invertible(_blocks(_combo(vecs, coeffs, p), m, n), p):
            return True
    if p ** h.dim <= cap_enum:
        for coeffs in itertools.product(range(p), repeat=h.dim):
            if _is_invertible(_blocks(_combo(vecs, coeffs, p), m, n), p):
                return True
        return False
    # structured sweep: basis elements and pairwise sums
    for i in range(h.dim):
        for j in range(i, h.dim):
            coeffs = np.zeros(h.dim, dtype=np.int64)
            coeffs[i] += 1
            if j != i:
                coeffs[j] += 1
            if _is_invertible(_blocks(_combo(vecs, coeffs, p), m, n), p):
                return True
    raise Inconclusive(f"isomorphism undecided: dim Hom = {h.dim}, p^dim exceeds cap {cap_enum}")


def isomorphism(m: Representation, n: Representation, seed: int = DEFAULT_SEED, trials: int = 256) -> ModuleMap | None:
    """An explicit isomorphism ``m -> n`` found by seeded random search, or None."""
    if m.dims != n.dims:
        return None
    h = hom_space(m, n)
    p = m.p
    if m.is_zero():
        return ModuleMap.zero(m, n)
    rng = np.random.default_rng(seed)
    candidates = (rng.integers(0, p, size=h.dim) for _ in range(trials))
    if p ** h.dim <= DEFAULT_ENUM_CAP:
        candidates = itertools.chain(candidates, itertools.product(range(p), repeat=h.dim))
    for coeffs in candidates:
        f = h.element(coeffs)
        if f.is_isomorphism():
            return f
    return None


def endomorphism_is_local(m: Representation, cap_enum: int = DEFAULT_ENUM_CAP) -> bool:
    end = hom_space(m, m)
    p = m.p
    if p ** end.dim > cap_enum:
        raise CapExceeded("End(M) enumeration", p ** end.dim, cap_enum)
    for coeffs in itertools.product(range(p), repeat=end.dim):
        blocks = _blocks(_combo(end.vectors, coeffs, p), m, m)
        if not (_is_nilpotent(blocks, p) or _is_invertible(blocks, p)):
            return False
    return True


def is_indecomposable(m: Representation, cap_enum: int = DEFAULT_ENUM_CAP) -> bool:
    """``m`` is non-zero and every endomorphism is nilpotent or invertible."""
    if m.is_zero():
        return False
    return endomorphism_is_local(m, cap_enum)


def split_embedding(u: Representation, x: Representation) -> tuple[ModuleMap, ModuleMap] | None:
    """``(f, g)`` with ``f: u -> x``, ``g: x -> u`` and ``g ∘ f = id``, or None.

    ``u`` must have a local endomorphism ring. Then ``u`` is a summand of
    ``x`` iff some basis element ``f_i`` of ``Hom(u, x)`` admits a retraction:
    if ``g ∘ (Σ a_i f_i) = id`` then some ``g ∘ f_i`` lies outside the radical
    of ``End(u)`` and is invertible. The retraction for a fixed ``f_i`` is a
    linear solve over a basis of ``Hom(x, u)``.
    """
    if any(a > b for a, b in zip(u.dims, x.dims)):
        return None
    fs = hom_space(u, x)
    if fs.dim == 0:
        return None
    gs = hom_space(x, u)
    if gs.dim == 0:
        return None
    p = u.p
    ident = np.concatenate([np.eye(d, dtype=np.int64).reshape(-1) for d in u.dims])
    for f in fs.basis:
        cols = [g.compose(f).flatten() for g in gs.basis]
        a = FMatrix(np.array(cols, dtype=np.int64).T, p, shape=(len(ident), len(cols)))
        sol = solve_right(a, FMatrix(ident, p, shape=(len(ident), 1)))
        if sol is not None:
            g = gs.element(sol.array[:, 0])
            return f, g
    return None


def decompose_with_maps(m: Representation, catalog: Iterable[tuple[str, Representation]]
                        ) -> list[tuple[str, ModuleMap]]:
    """Split ``m`` into catalog members; the returned embeddings sum to an isomorphism."""
    members = list(catalog)
    current = m
    into_m = ModuleMap.identity(m)
    found: list[tuple[str, ModuleMap]] = []
    while not current.is_zero():
        for name, u in members:
            split = split_embedding(u, current)
            if split is None:
                continue
            f, g = split
            found.append((name, into_m.compose(f)))
            rest, incl = kernel(g)
            into_m = into_m.compose(incl)
            current = rest
            break
        else:
            raise ResidueNotInCatalog(current.dims)
    return found


def decompose(m: Representation, catalog) -> Counter:
    """Multiset of catalog names whose direct sum is isomorphic to ``m``."""
    return Counter(name for name, _ in decompose_with_maps(m, catalog))
