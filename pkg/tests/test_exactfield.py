import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st
from sympy.polys.domains import FF
from sympy.polys.matrices import DomainMatrix

from ctl.errors import CharacteristicMismatch, DimensionMismatch
from ctl.exactfield import (
    FMatrix,
    FScalar,
    check_characteristic,
    column_space_basis,
    complement_basis,
    is_prime,
    kernel_basis,
    left_kernel_basis,
    rank,
    rref,
    solve_right,
)

PRIMES = [2, 3, 5, 7, 101, 2**31 - 1]


def sympy_matrix(a, p):
    dom = FF(p)
    rows, cols = a.shape
    return DomainMatrix([[dom(int(x)) for x in row] for row in a.tolist()], (rows, cols), dom)


@st.composite
def matrices(draw, max_dim=6, primes=(2, 3, 5, 7, 101)):
    p = draw(st.sampled_from(primes))
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return FMatrix(np.array(vals, dtype=np.int64).reshape(r, c), p)


def test_is_prime():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert is_prime(2**31 - 1)


@pytest.mark.parametrize("p", [0, 1, 4, 9, 2**31 + 11])
def test_bad_characteristic(p):
    with pytest.raises(ValueError):
        check_characteristic(p)


def test_scalar_inverse():
    for p in (2, 3, 7, 101):
        for a in range(1, p):
            assert int(FScalar(a, p) * FScalar(a, p).inverse()) == 1
    with pytest.raises(ZeroDivisionError):
        FScalar(0, 5).inverse()


def test_rref_small():
    m = FMatrix([[1, 2], [2, 4]], 5)
    r, piv = rref(m)
    assert piv == [0]
    assert r.tolist() == [[1, 2], [0, 0]]
    assert rank(FMatrix([[1, 1], [1, 1]], 2)) == 1
    assert rank(FMatrix([[1, 1], [1, 2]], 3)) == 2


def test_shape_checks():
    with pytest.raises(DimensionMismatch):
        FMatrix.identity(2, 3) @ FMatrix.identity(3, 3)
    with pytest.raises(CharacteristicMismatch):
        FMatrix.identity(2, 3) + FMatrix.identity(2, 5)


def test_large_prime_products_do_not_overflow():
    p = 2**31 - 1
    a = FMatrix([[p - 1] * 40], p)
    b = FMatrix([[p - 1]] * 40, p)
    assert (a @ b).entry(0, 0) == 40 % p


@given(matrices())
def test_rref_matches_sympy(m):
    ours, piv = rref(m)
    if m.rows and m.cols:
        theirs, tpiv = sympy_matrix(m.array, m.p).rref()
        assert list(tpiv) == piv
        expect = [[int(x) % m.p for x in row] for row in theirs.to_Matrix().tolist()]
        assert ours.tolist() == expect
    else:
        assert piv == []


@given(matrices())
def test_rank_nullity(m):
    k = kernel_basis(m)
    assert k.shape == (m.cols, m.cols - rank(m))
    assert (m @ k).is_zero()
    assert rank(k) == k.cols


@given(matrices(max_dim=4, primes=(2, 3)))
def test_kernel_size_by_enumeration(m):
    # brute force: count vectors x with m x = 0
    count = sum(1 for x in itertools.product(range(m.p), repeat=m.cols)
                if not ((m.array @ np.array(x, dtype=np.int64)) % m.p).any())
    assert count == m.p ** kernel_basis(m).cols


@given(matrices(), st.data())
def test_solve_right(m, data):
    x = FMatrix(np.array(data.draw(st.lists(st.integers(0, m.p - 1), min_size=m.cols, max_size=m.cols)),
                         dtype=np.int64).reshape(m.cols, 1), m.p)
    b = m @ x
    sol = solve_right(m, b)
    assert sol is not None
    assert m @ sol == b


def test_solve_right_inconsistent():
    assert solve_right(FMatrix([[1, 0], [0, 0]], 3), FMatrix([[0], [1]], 3)) is None


@given(matrices())
def test_left_kernel_and_column_space(m):
    lk = left_kernel_basis(m)
    assert (lk @ m).is_zero()
    assert lk.rows == m.rows - rank(m)
    cs = column_space_basis(m)
    assert cs.cols == rank(m) and rank(cs) == rank(m)


@given(matrices(max_dim=5))
def test_complement_spans(m):
    c = complement_basis(m, m.rows, m.p)
    total = FMatrix.hstack([m, c], rows=m.rows, p=m.p)
    assert rank(total) == m.rows
    assert c.cols == m.rows - rank(m)


@given(st.sampled_from(PRIMES), st.integers(1, 5), st.integers(0, 2**32))
def test_inverse(p, n, seed):
    rng = np.random.default_rng(seed)
    a = FMatrix(rng.integers(0, p, size=(n, n)), p)
    if rank(a) < n:
        with pytest.raises(ZeroDivisionError):
            a.inverse()
    else:
        assert a @ a.inverse() == FMatrix.identity(n, p)


def test_kron_and_stacking():
    a = FMatrix([[1, 2]], 5)
    b = FMatrix([[3], [4]], 5)
    assert a.kron(b).tolist() == [[3, 1], [4, 3]]
    assert FMatrix.vstack([a, a], cols=2, p=5).shape == (2, 2)
    assert FMatrix.block_diag([a, b], 5).shape == (3, 3)
    assert FMatrix.hstack([], rows=2, p=5).shape == (2, 0)


def test_immutability():
    a = FMatrix([[1, 2]], 5)
    with pytest.raises(ValueError):
        a.array[0, 0] = 3
