"""A named, certified list of the indecomposable modules of an algebra."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from ..errors import CTLError, MalformedInput, ShapeMismatch
from ..modules import Representation
from ..pathalg import AlgebraPresentation, verify_relations
from .homology import ext_dim, global_dimension, is_injective, is_projective, projective_dimension, injective_dimension
from .krull import (
    DEFAULT_ENUM_CAP,
    DEFAULT_SEED,
    decompose_with_maps,
    is_indecomposable,
    is_isomorphic,
    split_embedding,
)


@dataclass
class VerificationReport:
    count: int
    relations_ok: dict[str, bool] = field(default_factory=dict)
    indecomposable: dict[str, bool | str] = field(default_factory=dict)
    isomorphic_pairs: list[tuple[str, str]] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "count": self.count,
            "relations_ok": self.relations_ok,
            "indecomposable": self.indecomposable,
            "isomorphic_pairs": [list(pr) for pr in self.isomorphic_pairs],
            "failures": self.failures,
        }


class Catalog:
    """Ordered ``name -> Representation`` map declared to be the full list of indecomposables.

    Ext tables and projective/injective dimensions of members are memoised.
    """

    def __init__(self, alg: AlgebraPresentation, members: Mapping[str, Representation] | Iterable[tuple[str, Representation]]):
        items = list(members.items()) if isinstance(members, Mapping) else list(members)
        names = [n for n, _ in items]
        if len(set(names)) != len(names):
            raise MalformedInput("duplicate catalog names")
        self.alg = alg
        self._items = [(n, m.renamed(n)) for n, m in items]
        self._by_name = dict(self._items)
        self._ext: dict[tuple[str, str, int], int] = {}
        self._pd: dict[str, int] = {}
        self._id: dict[str, int] = {}
        # memo space for derived computations (approximations, closures)
        self.cache: dict = {}

    # container protocol -----------------------------------------------------
    def __iter__(self) -> Iterator[tuple[str, Representation]]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __getitem__(self, name: str) -> Representation:
        try:
            return self._by_name[name]
        except KeyError:
            raise MalformedInput(f"unknown catalog member {name!r}") from None

    def __contains__(self, name) -> bool:
        return name in self._by_name

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self._items]

    def order(self, names: Iterable[str]) -> list[str]:
        wanted = set(names)
        unknown = wanted - set(self._by_name)
        if unknown:
            raise MalformedInput(f"unknown catalog members {sorted(unknown)}")
        return [n for n in self.names if n in wanted]

    def with_characteristic(self, p: int) -> "Catalog":
        alg = self.alg.with_characteristic(p)
        return Catalog(alg, [(n, Representation(alg, m.dims, [x.array for x in m.maps], name=n))
                             for n, m in self._items])

    # homological data -----------------------------------------------------------
    def ext(self, x: str, y: str, degree: int = 1) -> int:
        key = (x, y, degree)
        if key not in self._ext:
            self._ext[key] = ext_dim(self[x], self[y], degree)
        return self._ext[key]

    def ext_table(self, degree: int = 1) -> list[list[int]]:
        return [[self.ext(x, y, degree) for y in self.names] for x in self.names]

    def projective_dimension(self, name: str) -> int:
        if name not in self._pd:
            self._pd[name] = projective_dimension(self[name])
        return self._pd[name]

    def injective_dimension(self, name: str) -> int:
        if name not in self._id:
            self._id[name] = injective_dimension(self[name])
        return self._id[name]

    def global_dimension(self) -> int:
        return global_dimension(self.alg)

    def projectives(self) -> list[str]:
        return [n for n, m in self._items if is_projective(m)]

    def injectives(self) -> list[str]:
        return [n for n, m in self._items if is_injective(m)]

    # decomposition ------------------------------------------------------------
    def decompose_with_maps(self, m: Representation):
        return decompose_with_maps(m, self._items)

    def decompose(self, m: Representation) -> Counter:
        return Counter(n for n, _ in self.decompose_with_maps(m))

    def identify(self, m: Representation) -> str | None:
        """Name of the member isomorphic to ``m``, if ``m`` is indecomposable and listed."""
        for n, u in self._items:
            if u.dims == m.dims and split_embedding(u, m) is not None:
                return n
        return None


def catalog_verify(catalog: Catalog, cap_enum: int = DEFAULT_ENUM_CAP, seed: int = DEFAULT_SEED) -> VerificationReport:
    """Check relations, indecomposability and pairwise non-isomorphism of every member."""
    report = VerificationReport(count=len(catalog))
    for name, m in catalog:
        try:
            ok = verify_relations(catalog.alg, m)
        except ShapeMismatch as exc:
            ok = False
            report.failures.append(f"{name}: {exc}")
        report.relations_ok[name] = ok
        if not ok:
            report.failures.append(f"{name}: relations violated")
        try:
            ind = is_indecomposable(m, cap_enum)
            report.indecomposable[name] = ind
            if not ind:
                report.failures.append(f"{name}: decomposable")
        except CTLError as exc:
            report.indecomposable[name] = f"undecided: {exc}"
            report.failures.append(f"{name}: indecomposability undecided ({exc})")
    items = list(catalog)
    for i, (a, ma) in enumerate(items):
        for b, mb in items[i + 1:]:
            try:
                same = is_isomorphic(ma, mb, cap_enum=cap_enum, seed=seed)
            except CTLError as exc:
                report.failures.append(f"{a} vs {b}: isomorphism undecided ({exc})")
                continue
            if same:
                report.isomorphic_pairs.append((a, b))
                report.failures.append(f"{a} ≅ {b}: duplicate up to isomorphism")
    return report


# JSON module files ---------------------------------------------------------------
def module_to_json(m: Representation, name: str | None = None) -> dict:
    q = m.alg.quiver
    return {
        "name": name or m.name,
        "dims": {v: m.dims[i] for i, v in enumerate(q.vertices)},
        "maps": {a.name: m.maps[i].tolist() for i, a in enumerate(q.arrows)},
    }


def module_from_json(data: dict, alg: AlgebraPresentation) -> Representation:
    q = alg.quiver
    try:
        dims_in = data["dims"]
        unknown = set(map(str, dims_in)) - set(q.vertices)
        if unknown:
            raise MalformedInput(f"unknown vertices {sorted(unknown)}")
        dims = [int(dims_in.get(v, 0)) for v in q.vertices]
        maps = {}
        for a in q.arrows:
            raw = data.get("maps", {}).get(a.name)
            shape = (dims[q.vertex_index(q.vertices[a.target])], dims[a.source])
            if raw is None or shape[0] * shape[1] == 0:
                maps[a.name] = None
                continue
            maps[a.name] = raw
        return Representation(alg, dims, maps, name=data.get("name"))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, CTLError):
            raise
        raise MalformedInput(f"malformed module description: {exc}") from exc


def load_module(path, alg: AlgebraPresentation) -> Representation:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"{path}: {exc}") from exc
    return module_from_json(data, alg)


def load_catalog(directory, alg: AlgebraPresentation, order: Sequence[str] | None = None) -> Catalog:
    """Load every ``*.json`` module in ``directory``; ``order`` (or ``index.json``) fixes the order."""
    directory = Path(directory)
    index = directory / "index.json"
    if order is None and index.exists():
        order = json.loads(index.read_text())["order"]
    mods = {}
    for f in sorted(directory.glob("*.json")):
        if f.name == "index.json":
            continue
        m = load_module(f, alg)
        mods[m.name or f.stem] = m
    if order is None:
        order = sorted(mods)
    missing = [n for n in order if n not in mods]
    if missing:
        raise MalformedInput(f"catalog index lists missing modules {missing}")
    return Catalog(alg, [(n, mods[n]) for n in order])
