import json

import pytest
from hypothesis import given, strategies as st

from ctl.errors import MalformedInput, NonTerminating, UnknownVertex
from ctl.example import ALGEBRA_JSON, square_algebra
from ctl.pathalg import (
    AlgebraPresentation,
    Quiver,
    dual_module,
    injective_module,
    path_basis,
    projective_module,
    simple_module,
    verify_relations,
)


def count_paths(n_vertices, arrows):
    """Paths in an acyclic quiver by depth-first search, trivial paths included."""
    out = {}

    def walk(v):
        total = 1
        for s, t in arrows:
            if s == v:
                total += walk(t)
        return total

    for v in range(n_vertices):
        out[v] = walk(v)
    return out


@st.composite
def acyclic_quivers(draw):
    n = draw(st.integers(1, 5))
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=6))
    edges = [(min(a, b), max(a, b)) for a, b in edges if a != b]
    return n, edges


def free_algebra(n, edges, p=2):
    data = {
        "characteristic": p,
        "vertices": [str(i) for i in range(n)],
        "arrows": [{"name": f"a{k}", "from": str(s), "to": str(t)} for k, (s, t) in enumerate(edges)],
        "relations": [],
    }
    return AlgebraPresentation.from_json(data)


def test_square_basis():
    for p in (2, 3):
        b = path_basis(square_algebra(p))
        assert b.dimension == 9
        # the two length-2 paths are identified: one basis path from 4 to 1
        assert len(b.between(3, 0)) == 1


def test_loop_does_not_terminate():
    alg = AlgebraPresentation.from_json({
        "characteristic": 2, "vertices": ["1"],
        "arrows": [{"name": "x", "from": "1", "to": "1"}], "relations": []})
    with pytest.raises(NonTerminating):
        path_basis(alg)


def test_truncated_loop_terminates():
    alg = AlgebraPresentation.from_json({
        "characteristic": 3, "vertices": ["1"],
        "arrows": [{"name": "x", "from": "1", "to": "1"}],
        "relations": [[{"coeff": 1, "path": ["x", "x", "x"]}]]})
    assert path_basis(alg).dimension == 3
    assert projective_module(alg, "1").dims == (3,)


def test_non_monomial_relation_cuts_a_path():
    # x y = z w together with z w = 0 kills both length-2 paths
    alg = AlgebraPresentation.from_json({
        "characteristic": 5, "vertices": ["1", "2", "3", "4"],
        "arrows": [{"name": "x", "from": "1", "to": "2"}, {"name": "y", "from": "2", "to": "4"},
                   {"name": "z", "from": "1", "to": "3"}, {"name": "w", "from": "3", "to": "4"}],
        "relations": [[{"coeff": 1, "path": ["x", "y"]}, {"coeff": 4, "path": ["z", "w"]}],
                      [{"coeff": 1, "path": ["z", "w"]}]]})
    assert path_basis(alg).dimension == 8


@given(acyclic_quivers())
def test_free_basis_counts_paths(q):
    n, edges = q
    alg = free_algebra(n, edges)
    counts = count_paths(n, edges)
    assert path_basis(alg).dimension == sum(counts.values())
    for v in range(n):
        assert sum(projective_module(alg, v).dims) == counts[v]


def test_square_projectives_and_injectives():
    alg = square_algebra()
    assert [projective_module(alg, v).dims for v in "1234"] == [(1, 0, 0, 0), (1, 1, 0, 0), (1, 0, 1, 0), (1, 1, 1, 1)]
    assert [injective_module(alg, v).dims for v in "1234"] == [(1, 1, 1, 1), (0, 1, 0, 1), (0, 0, 1, 1), (0, 0, 0, 1)]
    for v in "1234":
        for m in (projective_module(alg, v), injective_module(alg, v), simple_module(alg, v)):
            assert verify_relations(alg, m)


def test_dual_of_projective_is_injective():
    alg = square_algebra(3)
    op = alg.opposite()
    for v in "1234":
        assert dual_module(projective_module(op, v), alg).dims == injective_module(alg, v).dims


def test_json_round_trip():
    alg = square_algebra(3)
    again = AlgebraPresentation.from_json(json.loads(json.dumps(alg.to_json())))
    assert again == alg
    assert AlgebraPresentation.from_json(ALGEBRA_JSON, characteristic=3).p == 3


def test_relation_coefficients_survive_char_override():
    # -1 must stay -1 in characteristic 3, not become 1
    alg = AlgebraPresentation.from_json(ALGEBRA_JSON, characteristic=3)
    coeffs = sorted(c % 3 for c, _ in alg.relations[0].index_terms(alg.quiver))
    assert coeffs == [1, 2]


@pytest.mark.parametrize("bad", [
    {"characteristic": 2, "vertices": ["1"], "arrows": [{"name": "a", "from": "1", "to": "9"}], "relations": []},
    {"characteristic": 4, "vertices": ["1"], "arrows": [], "relations": []},
    {"characteristic": 2, "vertices": ["1", "2"], "arrows": [{"name": "a", "from": "1", "to": "2"}],
     "relations": [[{"coeff": 1, "path": ["a"]}]]},
    {"vertices": ["1"]},
])
def test_malformed_algebra(bad):
    with pytest.raises((MalformedInput, UnknownVertex, ValueError)):
        AlgebraPresentation.from_json(bad)


def test_unknown_vertex():
    q = Quiver.from_names(["1", "2"], [("a", "1", "2")])
    with pytest.raises(UnknownVertex):
        q.vertex_index("7")
