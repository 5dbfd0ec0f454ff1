"""Classes of modules, Ext-orthogonals, cotorsion-pair certification and the
intersection theorem engine.

A class is the add-closure of a set of catalog indecomposables. Everything
below is decided over the catalog; direct sums are handled by additivity of
Ext and by taking direct sums of conflations.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .conflation import (
    Approximations,
    BlockExt,
    SearchBounds,
    SearchOutcome,
    class_count,
    conflation_to_json,
    enumerate_classes,
    summands_within,
    theorem_precover,
    theorem_preenvelope,
)
from .errors import CapExceeded, CTLError, HypothesisViolated, MalformedInput
from .modules import Representation
from .repcat import Catalog

CERTIFIED = "Certified"
INCONCLUSIVE = "Inconclusive"
FAILED = "FailedWitness"

COMPLETENESS_NOTE = ("checked on every catalog indecomposable; a general module is a finite direct sum "
                     "and the direct sum of the summands' conflations is again a witness")


@dataclass(frozen=True)
class ModuleClass:
    """Add-closure of a set of catalog members."""

    catalog: Catalog = field(compare=False, hash=False, repr=False)
    members: tuple[str, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.catalog.order(self.members)))

    @classmethod
    def of(cls, catalog: Catalog, members: Iterable[str], name: str = "") -> "ModuleClass":
        return cls(catalog, tuple(members), name)

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, item) -> bool:
        if isinstance(item, str):
            return item in self.members
        return self.contains(item)

    def contains(self, m: Representation) -> bool:
        return summands_within(m, self.catalog, self.members) is not None

    def __le__(self, other: "ModuleClass") -> bool:
        return set(self.members) <= set(other.members)

    def missing_from(self, other: "ModuleClass") -> list[str]:
        return [n for n in self.members if n not in other.members]

    def __and__(self, other: "ModuleClass") -> "ModuleClass":
        return ModuleClass(self.catalog, tuple(n for n in self.members if n in other.members),
                           f"{self.name}∩{other.name}")

    def __or__(self, other: "ModuleClass") -> "ModuleClass":
        return ModuleClass(self.catalog, self.members + other.members, f"{self.name}∪{other.name}")

    def renamed(self, name: str) -> "ModuleClass":
        return ModuleClass(self.catalog, self.members, name)

    def to_json(self) -> dict:
        return {"name": self.name, "members": list(self.members)}


def builtin_class(catalog: Catalog, name: str) -> ModuleClass | None:
    """``proj``, ``inj``, ``all``, ``pd<=n`` and ``id<=n``; None for other names."""
    if name == "proj":
        return ModuleClass(catalog, tuple(catalog.projectives()), "proj")
    if name == "inj":
        return ModuleClass(catalog, tuple(catalog.injectives()), "inj")
    if name == "all":
        return ModuleClass(catalog, tuple(catalog.names), "all")
    for prefix, fn in (("pd<=", class_by_pd), ("id<=", class_by_id)):
        if name.startswith(prefix):
            try:
                n = int(name[len(prefix):])
            except ValueError:
                return None
            return fn(catalog, n)
    return None


def class_from_json(data: dict, catalog: Catalog) -> ModuleClass:
    try:
        name = data["name"]
        members = data["members"]
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"class file needs 'name' and 'members': {exc}") from exc
    if not isinstance(members, list) or not all(isinstance(m, str) for m in members):
        raise MalformedInput("class members must be a list of names")
    return ModuleClass(catalog, tuple(members), name)


def load_class(path, catalog: Catalog) -> ModuleClass:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: {exc}") from exc
    return class_from_json(data, catalog)


def class_by_pd(catalog: Catalog, n: int) -> ModuleClass:
    catalog.global_dimension()  # refuses infinite global dimension
    return ModuleClass(catalog, tuple(m for m in catalog.names if catalog.projective_dimension(m) <= n), f"pd<={n}")


def class_by_id(catalog: Catalog, n: int) -> ModuleClass:
    catalog.global_dimension()
    return ModuleClass(catalog, tuple(m for m in catalog.names if catalog.injective_dimension(m) <= n), f"id<={n}")


# orthogonals -------------------------------------------------------------------------
def right_orth(c: ModuleClass, degree: int = 1) -> ModuleClass:
    cat = c.catalog
    keep = [u for u in cat.names if all(cat.ext(x, u, degree) == 0 for x in c.members)]
    return ModuleClass(cat, tuple(keep), f"{c.name}^⊥")


def left_orth(c: ModuleClass, degree: int = 1) -> ModuleClass:
    cat = c.catalog
    keep = [u for u in cat.names if all(cat.ext(u, y, degree) == 0 for y in c.members)]
    return ModuleClass(cat, tuple(keep), f"^⊥{c.name}")


def nonvanishing_cells(x: ModuleClass, y: ModuleClass, degree: int = 1) -> list[tuple[str, str]]:
    cat = x.catalog
    return [(a, b) for a in x.members for b in y.members if cat.ext(a, b, degree)]


def is_cotorsion_pair(x: ModuleClass, y: ModuleClass) -> bool:
    return right_orth(x) == y and left_orth(y) == x


def is_hereditary(x: ModuleClass, y: ModuleClass) -> bool:
    gl = x.catalog.global_dimension()
    return all(not nonvanishing_cells(x, y, i) for i in range(1, gl + 1))


# completeness ----------------------------------------------------------------------------
@dataclass
class CompletenessResult:
    status: str
    bounds: SearchBounds
    outcomes: dict[str, tuple[SearchOutcome | None, SearchOutcome | None]] = field(default_factory=dict)
    problems: list[str] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED

    def to_json(self, catalog: Catalog, witnesses: bool = True) -> dict:
        rows = {}
        for name, pair in self.outcomes.items():
            row = {}
            for label, out in zip(("precover", "preenvelope"), pair):
                if out is None:
                    row[label] = {"status": "cap exceeded"}
                    continue
                entry = {
                    "found": out.found,
                    "trivial": out.trivial,
                    "proved_absent": out.proved_absent,
                    "multiplicity_bound": out.multiplicity,
                    "candidates_tried": out.candidates_tried,
                    "classes_tried": out.classes_tried,
                    "partner": list(out.partner),
                    "middle": list(out.middle),
                }
                if witnesses and out.witness is not None:
                    entry["witness"] = conflation_to_json(out.witness)
                row[label] = entry
            rows[name] = row
        return {"status": self.status, "bounds": self.bounds.to_json(), "justification": COMPLETENESS_NOTE,
                "problems": self.problems, "objects": rows}


def is_complete(x: ModuleClass, y: ModuleClass, bounds: SearchBounds | None = None) -> CompletenessResult:
    """Tri-state completeness over the catalog.

    FailedWitness is only reported when a search is exhaustive by
    construction; an unsuccessful bounded search gives Inconclusive.
    """
    bounds = bounds or SearchBounds()
    cat = x.catalog
    key = ("complete", x.members, y.members, bounds.multiplicity, bounds.cap_enum)
    if key in cat.cache:
        return cat.cache[key]
    approx = Approximations(cat, x.members, y.members, bounds)
    res = CompletenessResult(CERTIFIED, bounds)
    failed = inconclusive = False
    for name in cat.names:
        pair = []
        for kind in ("precover", "preenvelope"):
            try:
                out = approx.outcome(name, kind)
            except CapExceeded as exc:
                res.problems.append(f"{name} {kind}: {exc}")
                inconclusive = True
                pair.append(None)
                continue
            pair.append(out)
            if out.found:
                continue
            if out.proved_absent:
                failed = True
                res.problems.append(f"{name} has no special {kind}: every candidate conflation splits")
            else:
                inconclusive = True
                res.problems.append(f"{name} {kind}: search exhausted within bounds (m={out.multiplicity})")
        res.outcomes[name] = tuple(pair)
    res.status = FAILED if failed else INCONCLUSIVE if inconclusive else CERTIFIED
    cat.cache[key] = res
    return res


@dataclass
class CotorsionPair:
    X: ModuleClass
    Y: ModuleClass
    is_pair: bool | None = None
    is_hereditary: bool | None = None
    completeness: CompletenessResult | None = None

    @property
    def name(self) -> str:
        return f"({self.X.name}, {self.Y.name})"

    def to_json(self, witnesses: bool = True) -> dict:
        out = {"X": self.X.to_json(), "Y": self.Y.to_json(), "is_pair": self.is_pair,
               "is_hereditary": self.is_hereditary}
        if not self.is_pair:
            out["counterexamples"] = {
                "Ext1(X,Y) nonzero": [list(c) for c in nonvanishing_cells(self.X, self.Y)],
                "in X^⊥ but not Y": right_orth(self.X).missing_from(self.Y),
                "in ^⊥Y but not X": left_orth(self.Y).missing_from(self.X),
            }
        if self.completeness is not None:
            out["completeness"] = self.completeness.to_json(self.X.catalog, witnesses)
        return out


def certify_pair(x: ModuleClass, y: ModuleClass, complete: bool = True, hereditary: bool = True,
                 bounds: SearchBounds | None = None) -> CotorsionPair:
    pair = CotorsionPair(x, y, is_pair=is_cotorsion_pair(x, y))
    if hereditary:
        pair.is_hereditary = is_hereditary(x, y)
    if complete and pair.is_pair:
        pair.completeness = is_complete(x, y, bounds)
    return pair


def pair_from_class(c: ModuleClass, name: str | None = None) -> tuple[ModuleClass, ModuleClass]:
    """``(^⊥(C^⊥), C^⊥)``, the cotorsion pair generated by ``C``."""
    y = right_orth(c)
    x = left_orth(y)
    base = name or c.name
    return x.renamed(f"^⊥({base}^⊥)" if x != c else base), y.renamed(f"{base}^⊥")


# Smd closure -------------------------------------------------------------------------------
@dataclass
class ClosureResult:
    members: ModuleClass
    saturation_level: int
    max_level: int
    witnesses: dict[str, dict] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"members": list(self.members.members), "saturation_level": self.saturation_level,
                "max_level": self.max_level, "witnesses": self.witnesses}


def _atlas_entry(cat: Catalog, quots: tuple[str, ...], subs: tuple[str, ...], cap: int):
    """Summands of middle terms over block-full classes of ``Ext^1(⊕quots, ⊕subs)``; memoised."""
    atlas = cat.cache.setdefault("atlas", {})
    key = (quots, subs)
    if key not in atlas:
        blk = BlockExt([cat[q] for q in quots], [cat[s] for s in subs])
        n = class_count(blk.dim, cat.alg.p)
        if n > cap:
            raise CapExceeded(f"closure classes for {quots} under {subs}", n, cap)
        found: dict[str, tuple[int, ...]] = {}
        for coeffs in enumerate_classes(blk.dim, cat.alg.p):
            if not blk.is_block_full(coeffs):
                continue
            for name, _ in cat.decompose_with_maps(blk.realize(coeffs).mid):
                found.setdefault(name, coeffs)
        atlas[key] = found
    return atlas[key]


def extension_closure_smd(quot: ModuleClass, sub: ModuleClass, bounds: SearchBounds | None = None) -> ClosureResult:
    """Indecomposable summands of middle terms ``S >-> B ->> Q`` with ``Q ∈ add quot``, ``S ∈ add sub``.

    Pairs of sums are enumerated by total number of summands up to
    ``bounds.closure_terms``. Only block-full classes are realised: a class
    vanishing on some summand splits it off, and the rest was seen at a lower
    level. ``saturation_level`` is the last level that added a member.
    """
    bounds = bounds or SearchBounds()
    cat = quot.catalog
    key = ("closure", quot.members, sub.members, bounds.closure_terms, bounds.multiplicity, bounds.cap_enum)
    if key in cat.cache:
        return cat.cache[key]
    found = {n: {"trivial": True} for n in cat.order(set(quot.members) | set(sub.members))}
    qs = [q for q in quot.members if any(cat.ext(q, s) for s in sub.members)]
    ss = [s for s in sub.members if any(cat.ext(q, s) for q in quot.members)]
    m = bounds.multiplicity
    saturation = 1
    for level in range(2, bounds.closure_terms + 1):
        if len(found) == len(cat):
            break
        grew = False
        for nq in range(1, level):
            for qm in itertools.combinations_with_replacement(qs, nq):
                if m and max(qm.count(q) for q in qm) > m:
                    continue
                for sm in itertools.combinations_with_replacement(ss, level - nq):
                    if m and max(sm.count(s) for s in sm) > m:
                        continue
                    if not all(any(cat.ext(q, s) for s in sm) for q in qm):
                        continue
                    if not all(any(cat.ext(q, s) for q in qm) for s in sm):
                        continue
                    for name, coeffs in _atlas_entry(cat, qm, sm, bounds.cap_enum).items():
                        if name not in found:
                            found[name] = {"quotient": list(qm), "sub": list(sm), "class": list(coeffs)}
                            grew = True
        if grew:
            saturation = level
    members = ModuleClass(cat, tuple(found), f"Smd<{quot.name},{sub.name}>")
    res = ClosureResult(members, saturation, bounds.closure_terms,
                        {n: found[n] for n in members.members})
    cat.cache[key] = res
    return res


# theorem engine --------------------------------------------------------------------
@dataclass
class CotorsionReport:
    variant: str
    inputs: list[CotorsionPair]
    hypothesis: dict
    conclusion: CotorsionPair | None = None
    closure: ClosureResult | None = None
    cross_oracle: dict = field(default_factory=dict)
    construction: dict = field(default_factory=dict)
    bounds: SearchBounds = field(default_factory=SearchBounds)
    status: str = INCONCLUSIVE
    problems: list[str] = field(default_factory=list)
    witnesses: dict = field(default_factory=dict, repr=False)

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED

    def to_json(self, witnesses: bool = True) -> dict:
        out = {
            "variant": self.variant,
            "status": self.status,
            "inputs": [p.to_json(witnesses=False) for p in self.inputs],
            "hypothesis": self.hypothesis,
            "conclusion": self.conclusion.to_json(witnesses) if self.conclusion else None,
            "closure": self.closure.to_json() if self.closure else None,
            "cross_oracle": self.cross_oracle,
            "construction": self.construction,
            "bounds": self.bounds.to_json(),
            "problems": self.problems,
        }
        if witnesses and self.witnesses:
            out["construction_witnesses"] = {
                name: {kind: conflation_to_json(c) for kind, c in pair.items()}
                for name, pair in self.witnesses.items()
            }
        return out


def hypothesis_check(variant: str, p1: CotorsionPair, p2: CotorsionPair) -> dict:
    if variant == "i":
        small, big, text = p2.Y, p1.X, "Y2 ⊆ X1"
    elif variant == "ii":
        small, big, text = p1.X, p2.Y, "X1 ⊆ Y2"
    else:
        raise MalformedInput(f"unknown variant {variant!r}")
    missing = small.missing_from(big)
    return {"statement": text, "holds": not missing, "missing": missing,
            "sets": {"small": small.name, "big": big.name}}


def theorem_check(variant: str, pair1: CotorsionPair, pair2: CotorsionPair,
                  bounds: SearchBounds | None = None, construct: bool = True) -> CotorsionReport:
    """Check the intersection theorem for one ordered pair of cotorsion pairs.

    Variant i (``Y2 ⊆ X1``) concludes ``(X1 ∩ X2, Smd<Y1, Y2>)``; variant ii
    (``X1 ⊆ Y2``) concludes ``(Smd<X1, X2>, Y1 ∩ Y2)``. The closure is computed
    by bounded enumeration and compared with the orthogonal of the
    intersection.
    """
    bounds = bounds or SearchBounds()
    hyp = hypothesis_check(variant, pair1, pair2)
    if not hyp["holds"]:
        raise HypothesisViolated(
            f"hypothesis {hyp['statement']} fails: {', '.join(hyp['missing'])} in "
            f"{hyp['sets']['small']} but not in {hyp['sets']['big']}", hyp["missing"])
    report = CotorsionReport(variant, [pair1, pair2], hyp, bounds=bounds)
    for i, p in enumerate((pair1, pair2), 1):
        if p.is_pair is None:
            p.is_pair = is_cotorsion_pair(p.X, p.Y)
        if not p.is_pair:
            raise HypothesisViolated(f"input {i} {p.name} is not a cotorsion pair", [])
        if p.completeness is None:
            p.completeness = is_complete(p.X, p.Y, bounds)
        if p.is_hereditary is None:
            p.is_hereditary = is_hereditary(p.X, p.Y)
    if not all(p.completeness.certified for p in (pair1, pair2)):
        report.problems.append("an input pair is not certified complete")
        report.status = INCONCLUSIVE if all(p.completeness.status != FAILED for p in (pair1, pair2)) else FAILED
        return report

    if variant == "i":
        x = pair1.X & pair2.X
        closure = extension_closure_smd(pair1.Y, pair2.Y, bounds)
        y = closure.members
        oracle = right_orth(x)
        x = x.renamed(f"{pair1.X.name}∩{pair2.X.name}")
        y = y.renamed(f"Smd<{pair1.Y.name},{pair2.Y.name}>")
        computed = y
    else:
        y = pair1.Y & pair2.Y
        closure = extension_closure_smd(pair1.X, pair2.X, bounds)
        x = closure.members
        oracle = left_orth(y)
        x = x.renamed(f"Smd<{pair1.X.name},{pair2.X.name}>")
        y = y.renamed(f"{pair1.Y.name}∩{pair2.Y.name}")
        computed = x
    report.closure = closure
    agree = computed == oracle
    report.cross_oracle = {
        "closure": list(computed.members),
        "orthogonal": list(oracle.members),
        "agree": agree,
        "only_in_closure": computed.missing_from(oracle),
        "only_in_orthogonal": oracle.missing_from(computed),
    }
    if not agree:
        report.problems.append("closure differs from the orthogonal oracle (closure bound too small?)")
    conclusion = CotorsionPair(x, y, is_pair=is_cotorsion_pair(x, y))
    if conclusion.is_pair:
        conclusion.completeness = is_complete(x, y, bounds)
    else:
        report.problems.append("conclusion is not a cotorsion pair")
    if pair1.is_hereditary and pair2.is_hereditary:
        conclusion.is_hereditary = is_hereditary(x, y)
        if not conclusion.is_hereditary:
            report.problems.append("inputs hereditary but conclusion is not")
    report.conclusion = conclusion

    if construct:
        _run_constructions(report, variant, pair1, pair2, x, y, bounds)

    if not agree or not conclusion.is_pair or report.problems:
        report.status = FAILED
    elif conclusion.completeness.status == CERTIFIED:
        report.status = CERTIFIED
    else:
        report.status = conclusion.completeness.status
    return report


def _run_constructions(report: CotorsionReport, variant: str, pair1: CotorsionPair, pair2: CotorsionPair,
                       x: ModuleClass, y: ModuleClass, bounds: SearchBounds) -> None:
    cat = x.catalog
    a1 = Approximations(cat, pair1.X.members, pair1.Y.members, bounds)
    a2 = Approximations(cat, pair2.X.members, pair2.Y.members, bounds)
    checked = 0
    for name, a in cat:
        built = {}
        try:
            built["precover"] = theorem_precover(a, a1, a2, variant)
            built["preenvelope"] = theorem_preenvelope(a, a1, a2, variant)
        except CTLError as exc:
            report.problems.append(f"construction for {name}: {exc}")
            continue
        pc, pe = built["precover"], built["preenvelope"]
        if not (x.contains(pc.mid) and y.contains(pc.sub) and pc.quot.dims == a.dims):
            report.problems.append(f"constructed precover of {name} leaves the conclusion pair")
        if not (y.contains(pe.mid) and x.contains(pe.quot) and pe.sub.dims == a.dims):
            report.problems.append(f"constructed preenvelope of {name} leaves the conclusion pair")
        report.witnesses[name] = built
        checked += 1
    report.construction = {"objects_checked": checked, "ok": not any("construct" in p for p in report.problems)}


# converse failure ---------------------------------------------------------------------
@dataclass
class ConverseReport:
    completeness: dict[str, str]
    cross_inclusions: dict[str, dict]
    common_witnesses: list[str]
    failed_assertions: list[str]

    @property
    def holds(self) -> bool:
        return not self.failed_assertions

    def to_json(self) -> dict:
        return {"holds": self.holds, "completeness": self.completeness, "cross_inclusions": self.cross_inclusions,
                "common_witnesses": self.common_witnesses, "failed_assertions": self.failed_assertions}


def converse_failure_check(pairs: Sequence[CotorsionPair], bounds: SearchBounds | None = None) -> ConverseReport:
    """Completeness holds for every pair while the cross inclusions ``X_a ⊆ Y_b`` fail.

    The last two pairs are the cross pairing. ``common_witnesses`` lists the
    members of ``X_a ∩ X_b`` outside ``Y_a ∪ Y_b``; each of them breaks both
    inclusions at once.
    """
    if len(pairs) < 2:
        raise MalformedInput("need at least two pairs")
    for p in pairs:
        if not p.X.members or not p.Y.members:
            raise MalformedInput(f"empty class in {p.name}")
    failed = []
    comp = {}
    for p in pairs:
        cp = certify_pair(p.X, p.Y, complete=True, hereditary=False, bounds=bounds)
        status = cp.completeness.status if cp.completeness else "not a cotorsion pair"
        comp[p.name] = status
        if status != CERTIFIED:
            failed.append(f"{p.name} is not certified complete ({status})")
    a, b = pairs[-2], pairs[-1]
    cross = {}
    for p, q in ((a, b), (b, a)):
        missing = p.X.missing_from(q.Y)
        cross[f"{p.X.name} ⊆ {q.Y.name}"] = {"holds": not missing, "missing": missing}
        if not missing:
            failed.append(f"{p.X.name} ⊆ {q.Y.name} holds")
    common = [n for n in (a.X & b.X).members if n not in a.Y.members and n not in b.Y.members]
    if not common:
        failed.append(f"no member of {a.X.name}∩{b.X.name} lies outside {a.Y.name}∪{b.Y.name}")
    return ConverseReport(comp, cross, common, failed)
