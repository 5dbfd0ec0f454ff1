"""Exact linear algebra over a prime field F_p.

Everything above this module (Hom spaces, syzygies, pullbacks) reduces to
rank computations, null spaces and linear solves over F_p. Matrices are
immutable wrappers around ``int64`` numpy arrays whose entries are always
reduced into ``[0, p)``. Pivots are chosen deterministically (first non-zero
entry in column order) so every derived basis is reproducible bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import CharacteristicMismatch, DimensionMismatch

# entries < p < 2**31 keep every product inside int64
MAX_CHARACTERISTIC = 2**31 - 1


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_characteristic(p: int) -> int:
    p = int(p)
    if not is_prime(p) or p > MAX_CHARACTERISTIC:
        raise ValueError(f"characteristic must be a prime below 2**31, got {p}")
    return p


@dataclass(frozen=True)
class FScalar:
    """An element of F_p."""

    value: int
    p: int

    def __post_init__(self):
        check_characteristic(self.p)
        object.__setattr__(self, "value", int(self.value) % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FScalar):
            if other.p != self.p:
                raise CharacteristicMismatch(f"F_{self.p} vs F_{other.p}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other) % self.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FScalar(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FScalar(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FScalar(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FScalar(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FScalar(-self.value, self.p)

    def inverse(self) -> "FScalar":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return FScalar(pow(self.value, -1, self.p), self.p)

    def __int__(self):
        return self.value


class FMatrix:
    """Immutable matrix over F_p.

    ``FMatrix(entries, p)`` accepts anything ``numpy.asarray`` understands;
    entries are reduced mod ``p``. Empty shapes (``0 x n``, ``n x 0``) are
    legal and stand for zero maps between a zero space and ``F_p^n``.
    """

    __slots__ = ("_a", "p")

    def __init__(self, entries, p: int, shape: tuple[int, int] | None = None):
        a = np.asarray(entries, dtype=np.int64)
        if shape is not None:
            a = a.reshape(shape)
        if a.ndim != 2:
            raise DimensionMismatch(f"expected a 2-d array, got shape {a.shape}")
        a = np.mod(a, p)
        a.setflags(write=False)
        self._a = a
        self.p = p

    @classmethod
    def _wrap(cls, a: np.ndarray, p: int) -> "FMatrix":
        # trusted constructor: a is already reduced and owned
        m = cls.__new__(cls)
        a.setflags(write=False)
        m._a = a
        m.p = p
        return m

    # constructors ---------------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "FMatrix":
        return cls._wrap(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def identity(cls, n: int, p: int) -> "FMatrix":
        return cls._wrap(np.eye(n, dtype=np.int64), p)

    @classmethod
    def hstack(cls, blocks: Sequence["FMatrix"], rows: int | None = None, p: int | None = None) -> "FMatrix":
        if not blocks:
            return cls.zeros(rows or 0, 0, p)
        q = _common_p(blocks)
        return cls._wrap(np.hstack([b._a for b in blocks]), q)

    @classmethod
    def vstack(cls, blocks: Sequence["FMatrix"], cols: int | None = None, p: int | None = None) -> "FMatrix":
        if not blocks:
            return cls.zeros(0, cols or 0, p)
        q = _common_p(blocks)
        return cls._wrap(np.vstack([b._a for b in blocks]), q)

    @classmethod
    def block_diag(cls, blocks: Sequence["FMatrix"], p: int) -> "FMatrix":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = np.zeros((rows, cols), dtype=np.int64)
        r = c = 0
        for b in blocks:
            if b.p != p:
                raise CharacteristicMismatch(f"F_{b.p} block in F_{p} matrix")
            out[r:r + b.rows, c:c + b.cols] = b._a
            r += b.rows
            c += b.cols
        return cls._wrap(out, p)

    # accessors -------------------------------------------------------------
    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the reduced entries."""
        return self._a

    def tolist(self) -> list[list[int]]:
        return self._a.tolist()

    def __getitem__(self, idx):
        out = self._a[idx]
        if isinstance(out, np.ndarray):
            if out.ndim == 2:
                return FMatrix._wrap(out.copy(), self.p)
            return out.copy()
        return FScalar(int(out), self.p)

    def entry(self, i: int, j: int) -> int:
        return int(self._a[i, j])

    def __repr__(self):
        return f"FMatrix({self._a.tolist()}, p={self.p})"

    def __eq__(self, other):
        if not isinstance(other, FMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self):
        return hash((self.p, self.shape, self._a.tobytes()))

    # arithmetic ------------------------------------------------------------
    def _check(self, other: "FMatrix"):
        if other.p != self.p:
            raise CharacteristicMismatch(f"F_{self.p} vs F_{other.p}")

    def __add__(self, other: "FMatrix") -> "FMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return FMatrix._wrap((self._a + other._a) % self.p, self.p)

    def __sub__(self, other: "FMatrix") -> "FMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} - {other.shape}")
        return FMatrix._wrap((self._a - other._a) % self.p, self.p)

    def __neg__(self) -> "FMatrix":
        return FMatrix._wrap((-self._a) % self.p, self.p)

    def scale(self, c) -> "FMatrix":
        return FMatrix._wrap((self._a * (int(c) % self.p)) % self.p, self.p)

    def __matmul__(self, other: "FMatrix") -> "FMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        if self.p < 3_000_000_000 ** 0.5 and self.cols < 1000:
            out = (self._a @ other._a) % self.p
        else:
            out = _safe_matmul(self._a, other._a, self.p)
        return FMatrix._wrap(out, self.p)

    @property
    def T(self) -> "FMatrix":
        return FMatrix._wrap(self._a.T.copy(), self.p)

    def is_zero(self) -> bool:
        return not self._a.any()

    def kron(self, other: "FMatrix") -> "FMatrix":
        self._check(other)
        return FMatrix._wrap(np.kron(self._a, other._a) % self.p, self.p)

    def flatten(self) -> np.ndarray:
        return self._a.reshape(-1).copy()

    def inverse(self) -> "FMatrix":
        if self.rows != self.cols:
            raise DimensionMismatch(f"cannot invert a {self.shape} matrix")
        x = solve_right(self, FMatrix.identity(self.rows, self.p))
        if x is None:
            raise ZeroDivisionError("singular matrix")
        return x


def _common_p(blocks: Iterable[FMatrix]) -> int:
    ps = {b.p for b in blocks}
    if len(ps) != 1:
        raise CharacteristicMismatch(f"mixed characteristics {sorted(ps)}")
    return ps.pop()


def _safe_matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(a.shape[1]):
        out = (out + np.outer(a[:, k], b[k]) % p) % p
    return out


def rref_array(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a reduced int64 array. Returns a fresh array."""
    m = np.array(a, dtype=np.int64, copy=True)
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        lead = int(m[r, c])
        if lead != 1:
            m[r] = (m[r] * pow(lead, -1, p)) % p
        col = m[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            m[others] = (m[others] - np.outer(col[others], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rref(m: FMatrix) -> tuple[FMatrix, list[int]]:
    out, pivots = rref_array(m.array, m.p)
    return FMatrix._wrap(out, m.p), pivots


def rank(m: FMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(rref_array(m.array, m.p)[1])


def kernel_basis(m: FMatrix) -> FMatrix:
    """Columns form a basis of ``{x : m x = 0}``, one per free column, in column order."""
    n = m.cols
    if m.rows == 0:
        return FMatrix.identity(n, m.p)
    red, pivots = rref_array(m.array, m.p)
    pivset = set(pivots)
    free = [c for c in range(n) if c not in pivset]
    out = np.zeros((n, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        out[f, j] = 1
        for i, c in enumerate(pivots):
            out[c, j] = (-red[i, f]) % m.p
    return FMatrix._wrap(out, m.p)


def solve_right(a: FMatrix, b: FMatrix) -> FMatrix | None:
    """Particular solution of ``a @ x == b`` with free variables set to 0, or None."""
    if a.p != b.p:
        raise CharacteristicMismatch(f"F_{a.p} vs F_{b.p}")
    if a.rows != b.rows:
        raise DimensionMismatch(f"solve_right: a has {a.rows} rows, b has {b.rows}")
    n = a.cols
    if a.rows == 0:
        return FMatrix.zeros(n, b.cols, a.p)
    aug = np.hstack([a.array, b.array])
    red, pivots = rref_array(aug, a.p)
    if pivots and pivots[-1] >= n:
        return None
    x = np.zeros((n, b.cols), dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = red[i, n:]
    return FMatrix._wrap(x, a.p)


def left_kernel_basis(m: FMatrix) -> FMatrix:
    """Rows form a basis of ``{y : y m = 0}``."""
    return kernel_basis(m.T).T


def column_space_basis(m: FMatrix) -> FMatrix:
    """The pivot columns of ``m``: a basis of its image, drawn from its own columns."""
    if m.cols == 0 or m.rows == 0:
        return FMatrix.zeros(m.rows, 0, m.p)
    _, pivots = rref_array(m.array, m.p)
    return FMatrix._wrap(m.array[:, pivots].copy(), m.p)


def complement_basis(sub: FMatrix, ambient_dim: int, p: int) -> FMatrix:
    """Standard basis vectors completing the column span of ``sub`` to ``F_p^ambient_dim``.

    Deterministic: scans ``e_0, e_1, ...`` and keeps those that raise the rank.
    """
    base = sub if sub.cols else FMatrix.zeros(ambient_dim, 0, p)
    aug = np.hstack([base.array, np.eye(ambient_dim, dtype=np.int64)])
    _, pivots = rref_array(aug, p)
    picked = [c - base.cols for c in pivots if c >= base.cols]
    out = np.zeros((ambient_dim, len(picked)), dtype=np.int64)
    for j, i in enumerate(picked):
        out[i, j] = 1
    return FMatrix._wrap(out, p)
