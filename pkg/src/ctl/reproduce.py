"""One-shot pipeline over a fixture workspace, diffed against its ``golden.json``."""
from __future__ import annotations

import json
from collections import Counter

from .conflation import ExtClass, canonical_multiset, conflation_to_json, enumerate_classes, is_split, realize_extension
from .cotorsion import CERTIFIED, certify_pair, converse_failure_check, right_orth
from .errors import CTLError, MalformedInput
from .pathalg import path_basis
from .repcat import catalog_verify, ext_space, global_dimension
from .workspace import Workspace


def realize_with_middle(catalog, left: str, right: str, middle) -> dict:
    """First nonzero class of ``Ext^1(right, left)`` whose middle term decomposes as ``middle``."""
    e = ext_space(catalog[right], catalog[left])
    want = Counter(middle)
    seen = []
    for coeffs in enumerate_classes(e.dim, catalog.alg.p):
        if not any(coeffs):
            continue
        conf = realize_extension(ExtClass(e, coeffs))
        got = catalog.decompose(conf.mid)
        seen.append(list(canonical_multiset(got.elements(), catalog)))
        if got == want:
            return {"ext_dim": e.dim, "class": list(coeffs), "middle": seen[-1], "split": is_split(conf),
                    "witness": conflation_to_json(conf)}
    return {"ext_dim": e.dim, "class": None, "middle": None, "seen": seen}


def reproduce(ws: Workspace) -> dict:
    golden_path = ws.root / "golden.json"
    if not golden_path.exists():
        raise MalformedInput(f"no golden values at {golden_path}")
    try:
        gold = json.loads(golden_path.read_text())
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{golden_path}: {exc}") from exc
    alg = ws.algebra
    diffs: list[str] = []
    out: dict = {"characteristic": alg.p, "seed": ws.seed, "bounds": ws.bounds.to_json()}

    def stage(name, fn):
        try:
            out[name] = fn()
        except CTLError as exc:
            out[name] = {"error": f"{type(exc).__name__}: {exc}"}
            diffs.append(f"{name}: {type(exc).__name__}: {exc}")

    def algebra_stage():
        basis = path_basis(alg)
        gl = global_dimension(alg)
        if basis.dimension != gold["path_basis_dim"]:
            diffs.append(f"algebra: path basis dimension {basis.dimension} ≠ {gold['path_basis_dim']}")
        if gl != gold["gldim"]:
            diffs.append(f"algebra: global dimension {gl} ≠ {gold['gldim']}")
        return {"path_basis_dim": basis.dimension, "certificate_length": basis.certificate_length, "gldim": gl}

    stage("algebra", algebra_stage)
    cat = ws.catalog

    def catalog_stage():
        rep = catalog_verify(cat, cap_enum=ws.cap_enum, seed=ws.seed)
        if rep.count != gold["count"]:
            diffs.append(f"catalog: {rep.count} members, expected {gold['count']}")
        diffs.extend(f"catalog: {f}" for f in rep.failures)
        return rep.to_json()

    stage("catalog", catalog_stage)

    classes = {}
    for name in gold["right_orth"]:
        try:
            classes[name] = ws.module_class(name)
        except CTLError as exc:
            diffs.append(f"class {name}: {exc}")

    def orth_stage():
        res = {}
        for name, c in classes.items():
            got = right_orth(c).members
            res[name] = list(got)
            want = set(gold["right_orth"][name])
            if set(got) != want:
                diffs.append(f"right_orth({name}): extra {sorted(set(got) - want)}, missing {sorted(want - set(got))}")
        return res

    stage("right_orth", orth_stage)

    def almost_split_stage():
        res = []
        for entry in gold["almost_split"]:
            row = {"left": entry["left"], "right": entry["right"], "expected_middle": entry["middle"]}
            row.update(realize_with_middle(cat, entry["left"], entry["right"], entry["middle"]))
            if row["class"] is None:
                diffs.append(f"almost split {entry['left']} -> {'+'.join(entry['middle'])} -> {entry['right']}: "
                             f"no class realises the middle term")
            elif row["split"]:
                diffs.append(f"almost split {entry['left']} -> {entry['right']}: realised conflation splits")
            res.append(row)
        return res

    stage("almost_split", almost_split_stage)

    pairs = {}

    def pairs_stage():
        res = {}
        for name in gold["complete"]:
            c = classes.get(name)
            if c is None:
                continue
            pair = certify_pair(c, right_orth(c).renamed(f"{name}^⊥"), bounds=ws.bounds)
            pairs[name] = pair
            res[name] = pair.to_json()
            status = pair.completeness.status if pair.completeness else "not a pair"
            if not pair.is_pair:
                diffs.append(f"pair ({name}, {name}^⊥) is not a cotorsion pair")
            elif status != CERTIFIED:
                diffs.append(f"pair ({name}, {name}^⊥) completeness: {status}")
        return res

    stage("pairs", pairs_stage)

    def converse_stage():
        names = gold["converse"]["pairs"]
        if not all(n in pairs for n in names):
            raise MalformedInput("converse check needs the certified pairs")
        rep = converse_failure_check([pairs[n] for n in names], ws.bounds)
        diffs.extend(f"converse: {f}" for f in rep.failed_assertions)
        if rep.common_witnesses != gold["converse"]["witnesses"]:
            diffs.append(f"converse: witnesses {rep.common_witnesses} ≠ {gold['converse']['witnesses']}")
        return rep.to_json()

    stage("converse", converse_stage)
    out["diffs"] = diffs
    out["ok"] = not diffs
    return out
