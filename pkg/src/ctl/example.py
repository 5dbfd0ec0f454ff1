"""The commutative-square algebra and its eleven indecomposables.

Quiver ``4 -alpha-> 3 -beta-> 1`` and ``4 -alpha'-> 2 -beta'-> 1`` with the
commutativity relation ``beta alpha = beta' alpha'``. ``M1`` and ``M2`` are
built as the quotients ``(P2 ⊕ P3) / P1`` and ``(S2 ⊕ S3 ⊕ P4) / M1``.
"""
from __future__ import annotations

from typing import Sequence

from .errors import CTLError
from .modules import Representation, biproduct, cokernel, map_into_sum
from .pathalg import AlgebraPresentation, injective_module, projective_module, simple_module
from .repcat import Catalog, hom_space

CATALOG_ORDER = ("P1", "P2", "P3", "P4", "I2", "I3", "I4", "S2", "S3", "M1", "M2")

CLASSES = {
    "D": ("P1", "P2", "P3", "P4", "I2", "M1", "S2"),
    "D1": ("P1", "P2", "P3", "P4", "I2"),
    "D2": ("P1", "P2", "P3", "P4", "M1", "S2"),
}

ALGEBRA_JSON = {
    "characteristic": 2,
    "vertices": ["1", "2", "3", "4"],
    "arrows": [
        {"name": "alpha", "from": "4", "to": "3"},
        {"name": "alpha'", "from": "4", "to": "2"},
        {"name": "beta", "from": "3", "to": "1"},
        {"name": "beta'", "from": "2", "to": "1"},
    ],
    "relations": [[
        {"coeff": 1, "path": ["alpha", "beta"]},
        {"coeff": -1, "path": ["alpha'", "beta'"]},
    ]],
}


def square_algebra(p: int = 2) -> AlgebraPresentation:
    return AlgebraPresentation.from_json(ALGEBRA_JSON, characteristic=p)


def quotient_by(sub: Representation, summands: Sequence[Representation], name: str) -> Representation:
    """Cokernel of ``sub -> ⊕ summands`` built from the first Hom basis vector into each summand."""
    parts = []
    for s in summands:
        h = hom_space(sub, s)
        if h.dim == 0:
            raise CTLError(f"no map {sub.name} -> {s.name}")
        parts.append(h.basis[0])
    total, _, _ = biproduct(list(summands))
    f = map_into_sum(parts, sub, total)
    if not f.is_injective():
        raise CTLError(f"{sub.name} does not embed in {total.name}")
    return cokernel(f, name=name)[0]


def square_catalog(alg: AlgebraPresentation | None = None) -> Catalog:
    alg = alg or square_algebra()
    P = {i: projective_module(alg, i) for i in "1234"}
    I = {i: injective_module(alg, i) for i in "234"}
    S = {i: simple_module(alg, i) for i in "23"}
    m1 = quotient_by(P["1"], [P["2"], P["3"]], "M1")
    m2 = quotient_by(m1, [S["2"], S["3"], P["4"]], "M2")
    mods = {
        "P1": P["1"], "P2": P["2"], "P3": P["3"], "P4": P["4"],
        "I2": I["2"], "I3": I["3"], "I4": I["4"],
        "S2": S["2"], "S3": S["3"], "M1": m1, "M2": m2,
    }
    return Catalog(alg, [(n, mods[n]) for n in CATALOG_ORDER])


# almost split sequences listed for the square algebra: (left, middle summands, right)
ALMOST_SPLIT = (
    ("P1", ("P2",), "S2"),
    ("P3", ("M1",), "S2"),
    ("P3", ("P4",), "I2"),
    ("M1", ("P4", "S2"), "I2"),
    ("S3", ("M2",), "I2"),
)

# right orthogonals of D, D1, D2 as listed for the square algebra
EXPECTED_RIGHT_ORTH = {
    "D": ("P2", "P4", "I2", "I3", "I4", "M2", "S2"),
    "D1": ("P1", "P2", "P4", "I2", "I3", "I4", "M2", "S2"),
    "D2": ("P2", "P4", "I2", "I3", "I4", "M1", "M2", "S2", "S3"),
}


def golden() -> dict:
    return {
        "count": len(CATALOG_ORDER),
        "path_basis_dim": 9,
        "gldim": 2,
        "right_orth": {k: list(v) for k, v in EXPECTED_RIGHT_ORTH.items()},
        "almost_split": [{"left": l, "middle": list(m), "right": r} for l, m, r in ALMOST_SPLIT],
        "complete": list(CLASSES),
        "converse": {"pairs": ["D", "D1", "D2"], "witnesses": ["P3"]},
    }


def write_fixtures(root, p: int = 2) -> None:
    """Write the algebra, the eleven module files, the class files and the golden values under ``root``."""
    import json
    from pathlib import Path

    from .repcat.catalog import module_to_json

    root = Path(root)
    (root / "modules").mkdir(parents=True, exist_ok=True)
    (root / "classes").mkdir(parents=True, exist_ok=True)
    alg = square_algebra(p)
    cat = square_catalog(alg)

    def dump(path, data):
        path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")

    dump(root / "algebra.json", alg.to_json())
    for name, m in cat:
        dump(root / "modules" / f"{name}.json", module_to_json(m, name))
    dump(root / "modules" / "index.json", {"order": list(CATALOG_ORDER)})
    for name, members in CLASSES.items():
        dump(root / "classes" / f"{name}.json", {"name": name, "members": list(members)})
    dump(root / "golden.json", golden())
