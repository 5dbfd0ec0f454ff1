"""Short exact sequences: realisation from Ext classes, pullbacks, pushouts,
split detection, middle-term enumeration and bounded approximation searches.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import AlgebraMismatch, CapExceeded, HypothesisViolated, NotAModuleMap, ShapeMismatch
from .exactfield import FMatrix, solve_right
from .modules import (
    ModuleMap,
    Representation,
    biproduct,
    cokernel,
    descend_through_epi,
    direct_sum_map,
    kernel,
    lift_through_mono,
    map_from_sum,
    map_into_sum,
    same_algebra,
    zero_module,
)
from .repcat import Catalog, ExtSpace, ext_dim, ext_space, hom_space, presentation, split_embedding
from .repcat.krull import DEFAULT_ENUM_CAP

Multiset = tuple  # catalog names in catalog order, with repetition


class Conflation:
    """``sub >-> mid ->> quot``; exactness is checked exactly on construction."""

    __slots__ = ("sub", "mid", "quot", "inflation", "deflation")

    def __init__(self, inflation: ModuleMap, deflation: ModuleMap, check: bool = True):
        self.inflation = inflation
        self.deflation = deflation
        self.sub = inflation.source
        self.mid = inflation.target
        self.quot = deflation.target
        if check:
            problem = self.exactness_problem()
            if problem:
                raise NotAModuleMap(f"not a conflation: {problem}")

    def exactness_problem(self) -> str | None:
        if self.deflation.source.dims != self.mid.dims:
            return "inflation target and deflation source differ"
        if not (self.inflation.intertwines() and self.deflation.intertwines()):
            return "structure maps are not module maps"
        if not self.inflation.is_injective():
            return "inflation is not injective"
        if not self.deflation.is_surjective():
            return "deflation is not surjective"
        if not self.deflation.compose(self.inflation).is_zero():
            return "deflation ∘ inflation ≠ 0"
        for a, b, c in zip(self.sub.dims, self.mid.dims, self.quot.dims):
            if a + c != b:
                return "dimensions do not add up"
        return None

    def is_exact(self) -> bool:
        return self.exactness_problem() is None

    @classmethod
    def split(cls, a: Representation, c: Representation) -> "Conflation":
        mid, inj, proj = biproduct([a, c])
        return cls(inj[0], proj[1], check=False)

    @classmethod
    def trivial_cover(cls, m: Representation) -> "Conflation":
        """``0 >-> M ->> M``."""
        z = zero_module(m.alg)
        return cls(ModuleMap.zero(z, m), ModuleMap.identity(m), check=False)

    @classmethod
    def trivial_envelope(cls, m: Representation) -> "Conflation":
        """``M >-> M ->> 0``."""
        z = zero_module(m.alg)
        return cls(ModuleMap.identity(m), ModuleMap.zero(m, z), check=False)

    def __repr__(self):
        return f"<Conflation {self.sub.dims} >-> {self.mid.dims} ->> {self.quot.dims}>"


def direct_sum_conflation(parts: Sequence[Conflation]) -> Conflation:
    sub = biproduct([c.sub for c in parts])[0]
    mid = biproduct([c.mid for c in parts])[0]
    quot = biproduct([c.quot for c in parts])[0]
    return Conflation(direct_sum_map([c.inflation for c in parts], sub, mid),
                      direct_sum_map([c.deflation for c in parts], mid, quot), check=False)


@dataclass(frozen=True)
class ExtClass:
    ambient: ExtSpace
    coefficients: tuple[int, ...]

    def __post_init__(self):
        if len(self.coefficients) != self.ambient.dim:
            raise ShapeMismatch(f"{len(self.coefficients)} coefficients for an Ext space of dimension {self.ambient.dim}")

    def is_zero(self) -> bool:
        p = self.ambient.target.p
        return all(c % p == 0 for c in self.coefficients)


def _pushout_along_cocycle(a: Representation, c: Representation, p0: Representation, cover: ModuleMap,
                           omega: Representation, incl: ModuleMap, phi: ModuleMap) -> Conflation:
    """``0 -> A -> (A ⊕ P0) / {(φx, -ιx)} -> C -> 0``."""
    total, inj, proj = biproduct([a, p0])
    h = map_into_sum([phi, -incl], omega, total)
    mid, q = cokernel(h)
    inflation = q.compose(inj[0])
    deflation = descend_through_epi(q, map_from_sum([ModuleMap.zero(a, c), cover], total, c))
    if deflation is None:  # pragma: no cover - (0, π) kills the image of h by construction
        raise NotAModuleMap("cover does not descend to the pushout")
    return Conflation(inflation, deflation)


def realize_extension(e: ExtClass) -> Conflation:
    amb = e.ambient
    if amb.degree != 1:
        raise ValueError("only degree-1 classes have conflation realisations")
    pres = amb.presentation
    phi = amb.cocycle(e.coefficients)
    return _pushout_along_cocycle(amb.target, amb.source, pres.p0, pres.cover, pres.syzygy, pres.inclusion, phi)


def retraction(c: Conflation) -> ModuleMap | None:
    """``r: mid -> sub`` with ``r ∘ inflation = id``, if one exists."""
    h = hom_space(c.mid, c.sub)
    ident = np.concatenate([np.eye(d, dtype=np.int64).reshape(-1) for d in c.sub.dims]) \
        if c.sub.dims else np.zeros(0, dtype=np.int64)
    if c.sub.is_zero():
        return ModuleMap.zero(c.mid, c.sub)
    if h.dim == 0:
        return None
    p = c.sub.p
    cols = [g.compose(c.inflation).flatten() for g in h.basis]
    sol = solve_right(FMatrix(np.array(cols, dtype=np.int64).T, p, shape=(len(ident), len(cols))),
                      FMatrix(ident, p, shape=(len(ident), 1)))
    return None if sol is None else h.element(sol.array[:, 0])


def is_split(c: Conflation) -> bool:
    return retraction(c) is not None


def _pullback_data(f: ModuleMap, g: ModuleMap):
    if not same_algebra(f.source.alg, g.source.alg):
        raise AlgebraMismatch("pullback across algebras")
    if f.target.dims != g.target.dims:
        raise ShapeMismatch("pullback needs a common target")
    total, _, proj = biproduct([f.source, g.source])
    k, incl = kernel(map_from_sum([f, -g], total, f.target))
    return k, incl, total, proj


def pullback(f: ModuleMap, g: ModuleMap) -> tuple[Representation, ModuleMap, ModuleMap]:
    """Pullback of ``f: B -> D`` and ``g: C -> D`` as ``ker [f, -g]``."""
    k, incl, _, proj = _pullback_data(f, g)
    return k, proj[0].compose(incl), proj[1].compose(incl)


def _pushout_data(f: ModuleMap, g: ModuleMap):
    if not same_algebra(f.source.alg, g.source.alg):
        raise AlgebraMismatch("pushout across algebras")
    if f.source.dims != g.source.dims:
        raise ShapeMismatch("pushout needs a common source")
    total, inj, _ = biproduct([f.target, g.target])
    q, proj = cokernel(map_into_sum([f, -g], f.source, total))
    return q, proj, total, inj


def pushout(f: ModuleMap, g: ModuleMap) -> tuple[Representation, ModuleMap, ModuleMap]:
    """Pushout of ``f: D -> B`` and ``g: D -> C`` as ``coker (f, -g)``."""
    q, proj, _, inj = _pushout_data(f, g)
    return q, proj.compose(inj[0]), proj.compose(inj[1])


# class enumeration ----------------------------------------------------------------
def enumerate_classes(dim: int, p: int, scalar_dedup: bool = True) -> Iterator[tuple[int, ...]]:
    """Coefficient tuples in lexicographic order; with dedup, one per nonzero scalar orbit."""
    for coeffs in itertools.product(range(p), repeat=dim):
        if scalar_dedup:
            lead = next((c for c in coeffs if c), None)
            if lead is not None and lead != 1:
                continue
        yield coeffs


def class_count(dim: int, p: int, scalar_dedup: bool = True) -> int:
    if not scalar_dedup or dim == 0:
        return p ** dim
    return 1 + (p ** dim - 1) // (p - 1)


class BlockExt:
    """``Ext^1(⊕ quots, ⊕ subs)`` as the direct sum of the blockwise Ext spaces.

    The presentation of the quotient sum is the direct sum of the minimal
    presentations, so a class is a tuple of blockwise coordinates.
    """

    def __init__(self, quots: Sequence[Representation], subs: Sequence[Representation]):
        alg = (list(quots) + list(subs))[0].alg
        self.quots = list(quots)
        self.subs = list(subs)
        self.quot, _, _ = biproduct(self.quots, alg)
        self.sub, self.sub_inj, _ = biproduct(self.subs, alg)
        pres = [presentation(q) for q in self.quots]
        self.p0 = biproduct([pr.p0 for pr in pres], alg)[0]
        self.omega, _, self.omega_proj = biproduct([pr.syzygy for pr in pres], alg)
        self.cover = direct_sum_map([pr.cover for pr in pres], self.p0, self.quot)
        self.incl = direct_sum_map([pr.inclusion for pr in pres], self.omega, self.p0)
        self.blocks = [[ext_space(q, s) for s in self.subs] for q in self.quots]
        self.index: list[tuple[int, int, int]] = [
            (i, j, k) for i in range(len(self.quots)) for j in range(len(self.subs)) for k in range(self.blocks[i][j].dim)
        ]

    @property
    def dim(self) -> int:
        return len(self.index)

    def cocycle(self, coeffs: Sequence[int]) -> ModuleMap:
        phi = ModuleMap.zero(self.omega, self.sub)
        for c, (i, j, k) in zip(coeffs, self.index):
            if c:
                rep = self.blocks[i][j].representatives[k]
                phi = phi + self.sub_inj[j].compose(rep).compose(self.omega_proj[i]).scale(c)
        return phi

    def realize(self, coeffs: Sequence[int]) -> Conflation:
        return _pushout_along_cocycle(self.sub, self.quot, self.p0, self.cover, self.omega, self.incl,
                                      self.cocycle(coeffs))

    def is_block_full(self, coeffs: Sequence[int], quot_side: bool = True, sub_side: bool = True) -> bool:
        """Every quotient (sub) summand meets a nonzero block; otherwise it splits off the middle term."""
        rows = set()
        cols = set()
        for c, (i, j, _) in zip(coeffs, self.index):
            if c:
                rows.add(i)
                cols.add(j)
        if quot_side and len(rows) != len(self.quots):
            return False
        if sub_side and len(cols) != len(self.subs):
            return False
        return True


def summands_within(m: Representation, catalog: Catalog, allowed: Iterable[str]) -> Multiset | None:
    """Decomposition of ``m`` if every summand lies in ``allowed``; None as soon as one does not."""
    allowed = set(allowed)
    members = [(n, u) for n, u in catalog if n in allowed]
    current = m
    found = []
    while not current.is_zero():
        for name, u in members:
            split = split_embedding(u, current)
            if split is not None:
                found.append(name)
                current = kernel(split[1])[0]
                break
        else:
            return None
    return canonical_multiset(found, catalog)


def canonical_multiset(names: Iterable[str], catalog: Catalog) -> Multiset:
    pos = {n: i for i, n in enumerate(catalog.names)}
    return tuple(sorted(names, key=lambda n: pos[n]))


def enumerate_middle_terms(c: Representation, a: Representation, catalog: Catalog, scalar_dedup: bool = True,
                           cap: int = DEFAULT_ENUM_CAP) -> set[Multiset]:
    """Decompositions of the middle terms of all classes in ``Ext^1(c, a)``, zero class included."""
    e = ext_space(c, a)
    n = class_count(e.dim, c.p, scalar_dedup)
    if n > cap:
        raise CapExceeded(f"Ext^1 class enumeration (dim {e.dim})", n, cap)
    out = set()
    for coeffs in enumerate_classes(e.dim, c.p, scalar_dedup):
        conf = realize_extension(ExtClass(e, coeffs))
        out.add(canonical_multiset(catalog.decompose(conf.mid).elements(), catalog))
    return out


# approximation searches ----------------------------------------------------------------
@dataclass
class SearchBounds:
    multiplicity: int | None = None   # per-summand multiplicity; None = max dim Ext^1 against A
    cap_enum: int = DEFAULT_ENUM_CAP  # class-count cap per candidate
    closure_terms: int = 4            # total summands in Smd closure enumeration

    def to_json(self) -> dict:
        return {"multiplicity": self.multiplicity, "cap_enum": self.cap_enum, "closure_terms": self.closure_terms}


@dataclass
class SearchOutcome:
    """Result of a bounded approximation search.

    ``proved_absent`` is only set when the search space is exhaustive by
    construction: no member of the partner class has non-vanishing Ext with
    the target, so every candidate conflation splits.
    """

    witness: Conflation | None
    kind: str  # "precover" | "preenvelope"
    trivial: bool = False
    proved_absent: bool = False
    multiplicity: int = 0
    candidates_tried: int = 0
    classes_tried: int = 0
    partner: Multiset = ()   # the Y0 (precover) or X0 (preenvelope) multiset of the witness
    middle: Multiset = ()

    @property
    def found(self) -> bool:
        return self.witness is not None


def _multiplicity_vectors(n: int, bound: int) -> Iterator[tuple[int, ...]]:
    """Nonzero vectors in ``[0, bound]^n`` ordered by total, then lexicographically (descending)."""
    vecs = [v for v in itertools.product(range(bound + 1), repeat=n) if any(v)]
    vecs.sort(key=lambda v: (sum(v), tuple(-x for x in v)))
    return iter(vecs)


def _in_add(m: Representation, catalog: Catalog, members: Iterable[str]) -> Multiset | None:
    return summands_within(m, catalog, members)


def find_special_precover(a: Representation, x_members: Iterable[str], y_members: Iterable[str], catalog: Catalog,
                          bounds: SearchBounds | None = None) -> SearchOutcome:
    """Search ``Y >-> X ->> A`` with ``X ∈ add x_members``, ``Y ∈ add y_members``."""
    bounds = bounds or SearchBounds()
    x_members = catalog.order(x_members)
    y_members = catalog.order(y_members)
    own = _in_add(a, catalog, x_members)
    if own is not None:
        return SearchOutcome(Conflation.trivial_cover(a), "precover", trivial=True, middle=own)
    dims = {u: ext_dim(a, catalog[u]) for u in y_members}
    relevant = [u for u in y_members if dims[u]]
    if not relevant:
        return SearchOutcome(None, "precover", proved_absent=True)
    m = bounds.multiplicity or max(max(dims.values()), 1)
    out = SearchOutcome(None, "precover", multiplicity=m)
    for vec in _multiplicity_vectors(len(relevant), m):
        names = [u for u, k in zip(relevant, vec) for _ in range(k)]
        blk = BlockExt([a], [catalog[u] for u in names])
        n = class_count(blk.dim, a.p)
        if n > bounds.cap_enum:
            continue
        out.candidates_tried += 1
        for coeffs in enumerate_classes(blk.dim, a.p):
            if not blk.is_block_full(coeffs):
                continue
            out.classes_tried += 1
            conf = blk.realize(coeffs)
            mid = _in_add(conf.mid, catalog, x_members)
            if mid is not None:
                out.witness = conf
                out.partner = canonical_multiset(names, catalog)
                out.middle = mid
                return out
    return out


def find_special_preenvelope(a: Representation, x_members: Iterable[str], y_members: Iterable[str],
                             catalog: Catalog, bounds: SearchBounds | None = None) -> SearchOutcome:
    """Search ``A >-> Y ->> X`` with ``Y ∈ add y_members``, ``X ∈ add x_members``."""
    bounds = bounds or SearchBounds()
    x_members = catalog.order(x_members)
    y_members = catalog.order(y_members)
    own = _in_add(a, catalog, y_members)
    if own is not None:
        return SearchOutcome(Conflation.trivial_envelope(a), "preenvelope", trivial=True, middle=own)
    dims = {u: ext_dim(catalog[u], a) for u in x_members}
    relevant = [u for u in x_members if dims[u]]
    if not relevant:
        return SearchOutcome(None, "preenvelope", proved_absent=True)
    m = bounds.multiplicity or max(max(dims.values()), 1)
    out = SearchOutcome(None, "preenvelope", multiplicity=m)
    for vec in _multiplicity_vectors(len(relevant), m):
        names = [u for u, k in zip(relevant, vec) for _ in range(k)]
        blk = BlockExt([catalog[u] for u in names], [a])
        n = class_count(blk.dim, a.p)
        if n > bounds.cap_enum:
            continue
        out.candidates_tried += 1
        for coeffs in enumerate_classes(blk.dim, a.p):
            if not blk.is_block_full(coeffs):
                continue
            out.classes_tried += 1
            conf = blk.realize(coeffs)
            mid = _in_add(conf.mid, catalog, y_members)
            if mid is not None:
                out.witness = conf
                out.partner = canonical_multiset(names, catalog)
                out.middle = mid
                return out
    return out


def search_special_precover(a, x_members, y_members, catalog, bounds=None) -> Conflation | None:
    return find_special_precover(a, x_members, y_members, catalog, bounds).witness


def search_special_preenvelope(a, x_members, y_members, catalog, bounds=None) -> Conflation | None:
    return find_special_preenvelope(a, x_members, y_members, catalog, bounds).witness


# witnesses for arbitrary modules ----------------------------------------------------
class Approximations:
    """Special precovers and preenvelopes for a pair of classes, for any module.

    Indecomposable witnesses come from the bounded search and are memoised
    per catalog member; a general module is decomposed and the witnesses of
    its summands are added up.
    """

    def __init__(self, catalog: Catalog, x_members: Iterable[str], y_members: Iterable[str],
                 bounds: SearchBounds | None = None):
        self.catalog = catalog
        self.x = tuple(catalog.order(x_members))
        self.y = tuple(catalog.order(y_members))
        self.bounds = bounds or SearchBounds()
        self._cache: dict[tuple[str, str], SearchOutcome] = {}

    def outcome(self, name: str, kind: str) -> SearchOutcome:
        key = (name, kind)
        if key not in self._cache:
            store = self.catalog.cache.setdefault("approx", {})
            gkey = (self.x, self.y, name, kind, self.bounds.multiplicity, self.bounds.cap_enum)
            if gkey not in store:
                find = find_special_precover if kind == "precover" else find_special_preenvelope
                store[gkey] = find(self.catalog[name], self.x, self.y, self.catalog, self.bounds)
            self._cache[key] = store[gkey]
        return self._cache[key]

    def _assemble(self, m: Representation, kind: str) -> Conflation:
        parts = self.catalog.decompose_with_maps(m)
        confs = []
        for name, _ in parts:
            out = self.outcome(name, kind)
            if out.witness is None:
                raise CapExceeded(f"no {kind} witness for {name} within bounds", out.classes_tried, self.bounds.cap_enum)
            confs.append(out.witness)
        total = direct_sum_conflation(confs) if confs else (
            Conflation.trivial_cover(m) if kind == "precover" else Conflation.trivial_envelope(m))
        if not confs:
            return total
        summands = total.quot if kind == "precover" else total.sub
        iso = map_from_sum([f for _, f in parts], summands, m)
        if kind == "precover":
            return Conflation(total.inflation, iso.compose(total.deflation))
        return Conflation(total.inflation.compose(iso.inverse()), total.deflation)

    def precover(self, m: Representation) -> Conflation:
        if _in_add(m, self.catalog, self.x) is not None:
            return Conflation.trivial_cover(m)
        return self._assemble(m, "precover")

    def preenvelope(self, m: Representation) -> Conflation:
        if _in_add(m, self.catalog, self.y) is not None:
            return Conflation.trivial_envelope(m)
        return self._assemble(m, "preenvelope")


def _check_inclusion(small: Sequence[str], big: Sequence[str], label: str):
    missing = [n for n in small if n not in set(big)]
    if missing:
        raise HypothesisViolated(f"hypothesis {label} fails: {', '.join(missing)} not contained", missing)


def theorem_precover(a: Representation, pair1: Approximations, pair2: Approximations,
                     variant: str = "i") -> Conflation:
    """Special precover for the conclusion pair, composed from the two input pairs.

    Variant i (``Y2 ⊆ X1``): precover ``Y1 >-> X1 ->> A`` by pair 1, precover
    ``Y2 >-> X2 ->> X1`` by pair 2, and pull ``Y1 -> X1`` back along
    ``X2 ->> X1``; the result is ``Y >-> X2 ->> A``.
    Variant ii (``X1 ⊆ Y2``): precover ``Ya >-> Xa ->> A`` by pair 2,
    preenvelope ``Ya >-> Yb ->> Xb`` by pair 1, and push ``Ya -> Xa`` out
    along ``Ya >-> Yb``; the result is ``Yb >-> Q ->> A``.
    """
    if variant == "i":
        _check_inclusion(pair2.y, pair1.x, "Y2 ⊆ X1")
        first = pair1.precover(a)
        second = pair2.precover(first.mid)
        _, _, p2 = pullback(first.inflation, second.deflation)
        return Conflation(p2, first.deflation.compose(second.deflation))
    if variant == "ii":
        _check_inclusion(pair1.x, pair2.y, "X1 ⊆ Y2")
        first = pair2.precover(a)
        second = pair1.preenvelope(first.sub)
        q, proj, total, inj = _pushout_data(first.inflation, second.inflation)
        down = descend_through_epi(proj, map_from_sum([first.deflation, ModuleMap.zero(second.mid, a)], total, a))
        return Conflation(proj.compose(inj[1]), down)
    raise ValueError(f"unknown variant {variant!r}")


def theorem_preenvelope(a: Representation, pair1: Approximations, pair2: Approximations,
                        variant: str = "i") -> Conflation:
    """Special preenvelope for the conclusion pair.

    Variant i: preenvelope ``A >-> Y1 ->> X1`` by pair 1, precover
    ``Y2 >-> X2 ->> X1`` by pair 2, pullback of ``Y1 ->> X1`` and
    ``X2 ->> X1`` gives ``A >-> Y ->> X2``.
    Variant ii: preenvelope ``A >-> Ya ->> Xa`` by pair 2, preenvelope
    ``Ya >-> Yb ->> Xb`` by pair 1, pushout of ``Ya ->> Xa`` and
    ``Ya >-> Yb`` gives ``A >-> Yb ->> Q``.
    """
    if variant == "i":
        _check_inclusion(pair2.y, pair1.x, "Y2 ⊆ X1")
        first = pair1.preenvelope(a)
        second = pair2.precover(first.quot)
        _, incl, total, proj = _pullback_data(first.deflation, second.deflation)
        up = lift_through_mono(incl, map_into_sum([first.inflation, ModuleMap.zero(a, second.mid)], a, total))
        return Conflation(up, proj[1].compose(incl))
    if variant == "ii":
        _check_inclusion(pair1.x, pair2.y, "X1 ⊆ Y2")
        first = pair2.preenvelope(a)
        second = pair1.preenvelope(first.mid)
        _, _, q2 = pushout(first.deflation, second.inflation)
        return Conflation(second.inflation.compose(first.inflation), q2)
    raise ValueError(f"unknown variant {variant!r}")


def conflation_to_json(c: Conflation, catalog: Catalog | None = None) -> dict:
    from .repcat.catalog import module_to_json

    def summands(m):
        if catalog is None:
            return None
        return list(canonical_multiset(catalog.decompose(m).elements(), catalog))

    q = c.sub.alg.quiver
    return {
        "sub": module_to_json(c.sub, "sub"),
        "mid": module_to_json(c.mid, "mid"),
        "quot": module_to_json(c.quot, "quot"),
        "inflation": {q.vertices[v]: m.tolist() for v, m in enumerate(c.inflation.components)},
        "deflation": {q.vertices[v]: m.tolist() for v, m in enumerate(c.deflation.components)},
        "summands": {"sub": summands(c.sub), "mid": summands(c.mid), "quot": summands(c.quot)},
    }


def conflation_from_json(data: dict, alg) -> Conflation:
    from .repcat.catalog import module_from_json
    sub = module_from_json(data["sub"], alg)
    mid = module_from_json(data["mid"], alg)
    quot = module_from_json(data["quot"], alg)
    q = alg.quiver

    def comps(raw, src, tgt):
        return [FMatrix(np.asarray(raw[v], dtype=np.int64).reshape(tgt.dims[i], src.dims[i]), alg.p)
                for i, v in enumerate(q.vertices)]

    infl = ModuleMap(sub, mid, comps(data["inflation"], sub, mid))
    defl = ModuleMap(mid, quot, comps(data["deflation"], mid, quot))
    return Conflation(infl, defl)
