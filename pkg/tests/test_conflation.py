import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import catalog_sum
from ctl.conflation import (
    Approximations,
    BlockExt,
    Conflation,
    ExtClass,
    SearchBounds,
    conflation_from_json,
    conflation_to_json,
    direct_sum_conflation,
    enumerate_classes,
    enumerate_middle_terms,
    find_special_precover,
    find_special_preenvelope,
    is_split,
    pullback,
    pushout,
    realize_extension,
    search_special_precover,
    search_special_preenvelope,
    theorem_precover,
    theorem_preenvelope,
)
from ctl.errors import CapExceeded, HypothesisViolated, NotAModuleMap, ShapeMismatch
from ctl.example import ALMOST_SPLIT, CATALOG_ORDER, CLASSES, EXPECTED_RIGHT_ORTH
from ctl.modules import ModuleMap, kernel, zero_module
from ctl.repcat import ext_space, hom_space, is_isomorphic, projective_cover, syzygy


def middle_of(cat, c, a, coeffs):
    conf = realize_extension(ExtClass(ext_space(cat[c], cat[a]), tuple(coeffs)))
    return conf, Counter(cat.decompose(conf.mid).elements())


def test_zero_class_splits(cat):
    for c, a in (("S2", "P1"), ("I2", "M1"), ("S3", "P2")):
        conf, mid = middle_of(cat, c, a, (0,))
        assert is_split(conf)
        assert mid == Counter([c, a])


@pytest.mark.parametrize("left,middle,right", ALMOST_SPLIT)
def test_almost_split_middles(cat, left, middle, right):
    e = ext_space(cat[right], cat[left])
    assert e.dim == 1
    for lam in range(1, cat.alg.p):
        conf, mid = middle_of(cat, right, left, (lam,))
        assert conf.is_exact()
        assert not is_split(conf)
        assert mid == Counter(middle)


def test_split_iff_zero_class_on_one_dimensional_ext(cat):
    checked = 0
    for c, a in itertools.product(cat.names, repeat=2):
        e = ext_space(cat[c], cat[a])
        if e.dim != 1:
            continue
        for lam in range(cat.alg.p):
            conf = realize_extension(ExtClass(e, (lam,)))
            assert is_split(conf) == (lam == 0)
            assert is_split(conf) == (Counter(cat.decompose(conf.mid).elements()) == Counter([c, a]))
        checked += 1
    assert checked == 19  # nonzero cells of the Ext^1 table, all one-dimensional


def test_scalar_invariance_of_middles(cat3):
    for c, a in itertools.product(cat3.names, repeat=2):
        e = ext_space(cat3[c], cat3[a])
        for coeffs in itertools.product(range(3), repeat=e.dim):
            if not any(coeffs):
                continue
            base = realize_extension(ExtClass(e, coeffs)).mid
            twice = realize_extension(ExtClass(e, tuple(2 * x % 3 for x in coeffs))).mid
            assert is_isomorphic(base, twice)


def test_projective_quotient_splits(cat2):
    for proj in ("P1", "P2", "P3", "P4"):
        for name in cat2.names:
            assert ext_space(cat2[proj], cat2[name]).dim == 0
            assert is_split(Conflation.split(cat2[name], cat2[proj]))


def test_class_coordinates_length(cat2):
    with pytest.raises(ShapeMismatch):
        ExtClass(ext_space(cat2["S2"], cat2["P1"]), (1, 0))


def test_exactness_enforced(cat2):
    s = Conflation.split(cat2["S2"], cat2["S3"])
    with pytest.raises(NotAModuleMap):
        Conflation(s.inflation, s.deflation.scale(0))


def test_enumerate_middle_terms(cat2):
    assert enumerate_middle_terms(cat2["S2"], cat2["P1"], cat2) == {("P1", "S2"), ("P2",)}
    assert ("P4", "S2") in enumerate_middle_terms(cat2["I2"], cat2["M1"], cat2)
    assert enumerate_middle_terms(cat2["P1"], cat2["S2"], cat2) == {("P1", "S2")}
    with pytest.raises(CapExceeded):
        enumerate_middle_terms(cat2["S2"], cat2["P1"], cat2, cap=1)


def test_class_enumeration_counts():
    assert len(list(enumerate_classes(3, 3))) == 1 + (27 - 1) // 2
    assert len(list(enumerate_classes(3, 3, scalar_dedup=False))) == 27
    assert list(enumerate_classes(0, 5)) == [()]


def test_pullback_degenerate_cases(cat2):
    b, c = cat2["M1"], cat2["S2"]
    z = zero_module(cat2.alg)
    pb, p1, p2 = pullback(ModuleMap.zero(b, z), ModuleMap.zero(c, z))
    assert pb.dims == tuple(x + y for x, y in zip(b.dims, c.dims))
    # pulling back along an isomorphism returns the source
    f = hom_space(b, c).basis[0]
    pb, p1, p2 = pullback(f, ModuleMap.identity(c))
    assert p1.is_isomorphism()
    assert f.compose(p1) == p2


def test_pullback_along_deflation_keeps_kernel(cat2):
    conf = realize_extension(ExtClass(ext_space(cat2["S2"], cat2["P3"]), (1,)))
    f = hom_space(cat2["M1"], cat2["S2"]).basis[0]
    pb, p1, p2 = pullback(f, conf.deflation)
    assert f.compose(p1) == conf.deflation.compose(p2)
    assert p1.is_surjective()
    assert is_isomorphic(kernel(p1)[0], kernel(conf.deflation)[0])


def test_pushout_degenerate_cases(cat2):
    b, c = cat2["M1"], cat2["S3"]
    z = zero_module(cat2.alg)
    q, _, _ = pushout(ModuleMap.zero(z, b), ModuleMap.zero(z, c))
    assert q.dims == tuple(x + y for x, y in zip(b.dims, c.dims))
    g = hom_space(b, c).basis[0]
    q, q1, q2 = pushout(ModuleMap.identity(b), g)
    assert is_isomorphic(q, c) and q2.is_isomorphism()


def test_pushout_realisation_matches_gluing(cat2):
    # the almost split middle P2 glued by hand: P2 is the projective cover of S2 with syzygy P1
    p0, cover = projective_cover(cat2["S2"])
    assert is_isomorphic(p0, cat2["P2"])
    assert is_isomorphic(syzygy(cat2["S2"]), cat2["P1"])
    conf = realize_extension(ExtClass(ext_space(cat2["S2"], cat2["P1"]), (1,)))
    assert is_isomorphic(conf.mid, p0)


def test_block_ext_is_additive(cat2):
    blk = BlockExt([cat2["I2"], cat2["S2"]], [cat2["P3"], cat2["M1"]])
    assert blk.dim == sum(cat2.ext(q, s) for q in ("I2", "S2") for s in ("P3", "M1"))
    conf = blk.realize((1,) * blk.dim)
    assert conf.is_exact()
    assert not blk.is_block_full((0,) * blk.dim)


def test_direct_sum_of_conflations(cat2):
    a = realize_extension(ExtClass(ext_space(cat2["S2"], cat2["P1"]), (1,)))
    b = Conflation.split(cat2["S3"], cat2["I4"])
    s = direct_sum_conflation([a, b])
    assert s.is_exact()
    assert Counter(cat2.decompose(s.mid).elements()) == Counter(["P2", "S3", "I4"])


def test_json_round_trip(cat3):
    conf = realize_extension(ExtClass(ext_space(cat3["I2"], cat3["M1"]), (2,)))
    again = conflation_from_json(conflation_to_json(conf, cat3), cat3.alg)
    assert again.is_exact()
    assert again.inflation.components == conf.inflation.components


def test_search_trivial_cases(cat2):
    proj, every = ("P1", "P2", "P3", "P4"), tuple(cat2.names)
    out = find_special_precover(cat2["P3"], CLASSES["D"], EXPECTED_RIGHT_ORTH["D"], cat2)
    assert out.trivial and out.witness.mid is cat2["P3"]
    for name, m in cat2:
        # projective precovers and trivial preenvelopes for (proj, all)
        pc = search_special_precover(m, proj, every, cat2)
        assert pc is not None and all(n in proj for n in cat2.decompose(pc.mid))
        pe = search_special_preenvelope(m, proj, every, cat2)
        assert pe is not None and pe.quot.is_zero()


def test_search_examples(cat2):
    out = find_special_precover(cat2["S3"], CLASSES["D"], EXPECTED_RIGHT_ORTH["D"], cat2)
    assert out.found and not out.trivial
    assert out.witness.is_exact()
    out = find_special_preenvelope(cat2["P3"], CLASSES["D1"], EXPECTED_RIGHT_ORTH["D1"], cat2)
    assert out.found
    assert set(cat2.decompose(out.witness.mid)) <= set(EXPECTED_RIGHT_ORTH["D1"])
    assert set(cat2.decompose(out.witness.quot)) <= set(CLASSES["D1"])


def test_search_proves_absence(cat2):
    # S2 is not in add{P1}, and nothing in {I4} receives extensions from S2
    out = find_special_precover(cat2["S2"], ["P1"], ["I4"], cat2)
    assert out.proved_absent and not out.found


def test_search_records_exhaustion(cat2):
    out = find_special_precover(cat2["S2"], ["P1"], ["P1"], cat2, SearchBounds(multiplicity=1))
    assert not out.found and not out.proved_absent
    assert out.candidates_tried == 1


@given(st.lists(st.sampled_from(CATALOG_ORDER), min_size=1, max_size=3), st.integers(0, 2**32))
@settings(max_examples=25)
def test_approximations_of_sums(cat2, names, seed):
    m = catalog_sum(cat2, names, np.random.default_rng(seed))
    ap = Approximations(cat2, CLASSES["D"], EXPECTED_RIGHT_ORTH["D"])
    pc = ap.precover(m)
    assert pc.quot is m and pc.is_exact()
    assert set(cat2.decompose(pc.mid)) <= set(CLASSES["D"])
    assert set(cat2.decompose(pc.sub)) <= set(EXPECTED_RIGHT_ORTH["D"])
    pe = ap.preenvelope(m)
    assert pe.sub is m and pe.is_exact()
    assert set(cat2.decompose(pe.mid)) <= set(EXPECTED_RIGHT_ORTH["D"])
    assert set(cat2.decompose(pe.quot)) <= set(CLASSES["D"])


def test_theorem_construction_degenerate(cat2):
    every, proj = cat2.names, cat2.projectives()
    inj = cat2.injectives()
    pair1 = Approximations(cat2, every, inj)
    pair2 = Approximations(cat2, proj, every)
    for name, m in cat2:
        pc = theorem_precover(m, pair1, pair2, "i")
        assert pc.is_exact() and set(cat2.decompose(pc.mid)) <= set(proj)
        pe = theorem_preenvelope(m, pair1, pair2, "i")
        assert pe.is_exact() and set(cat2.decompose(pe.quot)) <= set(proj)


def test_theorem_construction_variant_ii(cat2):
    # X1 = proj ⊆ Y2 = D^⊥ fails (P1, P3), but X1 = D ⊆ Y2 = all holds
    d, dperp = CLASSES["D"], EXPECTED_RIGHT_ORTH["D"]
    pair1 = Approximations(cat2, cat2.projectives(), cat2.names)
    pair2 = Approximations(cat2, d, dperp)
    with pytest.raises(HypothesisViolated):
        theorem_precover(cat2["S3"], pair1, pair2, "ii")
    pair1, pair2 = pair2, pair1
    y = set(dperp)
    for name, m in cat2:
        pc = theorem_precover(m, pair1, pair2, "ii")
        assert pc.is_exact() and set(cat2.decompose(pc.sub)) <= y
        pe = theorem_preenvelope(m, pair1, pair2, "ii")
        assert pe.is_exact() and set(cat2.decompose(pe.mid)) <= y


def test_hypothesis_violation(cat2):
    pair1 = Approximations(cat2, CLASSES["D1"], EXPECTED_RIGHT_ORTH["D1"])
    pair2 = Approximations(cat2, CLASSES["D2"], EXPECTED_RIGHT_ORTH["D2"])
    with pytest.raises(HypothesisViolated) as err:
        theorem_precover(cat2["S2"], pair1, pair2, "i")
    assert "S2" in err.value.witnesses
