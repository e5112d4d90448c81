"""Dense linear algebra over the two-element field.

Matrices are ``numpy`` arrays of dtype ``uint8`` holding 0/1.  Every
function takes array-likes, never mutates its inputs and returns fresh
arrays, so results can be shared freely.  Canonical bases are read off
reduced row echelon forms with free variables set to zero, which makes
all outputs bit-for-bit deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

DTYPE = np.uint8


def asmatrix(M, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Coerce ``M`` to a 2-D 0/1 ``uint8`` array (entries reduced mod 2)."""
    A = np.asarray(M)
    if A.size == 0 and shape is not None:
        return np.zeros(shape, dtype=DTYPE)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {A.shape}")
    A = (A.astype(np.int64) % 2).astype(DTYPE)
    if shape is not None and A.shape != tuple(shape):
        raise ValueError(f"expected shape {shape}, got {A.shape}")
    return A


def asvector(b) -> np.ndarray:
    v = np.asarray(b)
    if v.ndim != 1:
        raise ValueError(f"expected a vector, got shape {v.shape}")
    return (v.astype(np.int64) % 2).astype(DTYPE)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=DTYPE)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=DTYPE)


def rref(M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``M`` and its pivot columns.

    Zero rows are kept at the bottom so the result has the shape of ``M``.
    """
    A = asmatrix(M)
    rows, cols = A.shape
    if rows == 0 or cols == 0:
        return A.copy(), []
    # rows as integers with column c at bit c; elimination is then plain xor
    weights = 1 << np.arange(cols, dtype=object)
    work = [int(x) for x in A.astype(object) @ weights]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        bit = 1 << c
        k = next((k for k in range(r, rows) if work[k] & bit), None)
        if k is None:
            continue
        work[r], work[k] = work[k], work[r]
        pr = work[r]
        for i in range(rows):
            if i != r and work[i] & bit:
                work[i] ^= pr
        pivots.append(c)
        r += 1
        if r == rows:
            break
    R = np.array([[(w >> c) & 1 for c in range(cols)] for w in work], dtype=DTYPE)
    return R, pivots


def rank(M) -> int:
    return len(rref(M)[1])


def kernel_basis(M) -> np.ndarray:
    """Basis of the null space of ``M`` as the columns of the result.

    One column per free variable of the reduced echelon form, in
    increasing order of the free column.
    """
    R, pivots = rref(M)
    cols = R.shape[1]
    free = [c for c in range(cols) if c not in set(pivots)]
    K = zeros(cols, len(free))
    for j, f in enumerate(free):
        K[f, j] = 1
        for i, p in enumerate(pivots):
            K[p, j] = R[i, f]
    return K


def image_basis(M) -> np.ndarray:
    """Basis of the column space of ``M``: the nonzero rows of rref(Mᵀ), as columns."""
    A = asmatrix(M)
    R, pivots = rref(A.T)
    return R[: len(pivots)].T.copy().reshape(A.shape[0], len(pivots))


def row_space_basis(M) -> np.ndarray:
    R, pivots = rref(M)
    return R[: len(pivots)].copy()


def left_kernel_basis(M) -> np.ndarray:
    """Rows ``y`` with ``y @ M = 0``; they cut out the column space of ``M``."""
    K = kernel_basis(asmatrix(M).T)
    return K.T.copy()


def mul(A, B) -> np.ndarray:
    A, B = asmatrix(A), asmatrix(B)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"cannot multiply {A.shape} by {B.shape}")
    return ((A.astype(np.int64) @ B.astype(np.int64)) % 2).astype(DTYPE)


def matvec(A, x) -> np.ndarray:
    A, x = asmatrix(A), asvector(x)
    if A.shape[1] != x.shape[0]:
        raise ValueError(f"cannot apply {A.shape} to a vector of length {x.shape[0]}")
    return ((A.astype(np.int64) @ x.astype(np.int64)) % 2).astype(DTYPE)


def add(A, B) -> np.ndarray:
    A, B = asmatrix(A), asmatrix(B)
    if A.shape != B.shape:
        raise ValueError(f"cannot add {A.shape} and {B.shape}")
    return A ^ B


def is_unit_upper_triangular(A) -> bool:
    A = asmatrix(A)
    n, m = A.shape
    if n != m:
        return False
    return bool(np.all(np.diag(A) == 1) and not np.any(np.tril(A, -1)))


def invert_unitriangular(A) -> np.ndarray:
    """Inverse of an upper triangular matrix with unit diagonal, by back substitution."""
    A = asmatrix(A)
    if not is_unit_upper_triangular(A):
        raise ValueError("matrix is not upper triangular with unit diagonal")
    n = A.shape[0]
    inv = identity(n)
    # column j of the inverse: x_j = 1, x_i = sum_{i<k<=j} A[i,k] x_k for i < j
    for j in range(n):
        for i in range(j - 1, -1, -1):
            inv[i, j] = np.bitwise_xor.reduce(A[i, i + 1 : j + 1] & inv[i + 1 : j + 1, j], initial=0)
    return inv


def inverse(A) -> np.ndarray:
    """Inverse of a square invertible matrix (Gauss-Jordan)."""
    A = asmatrix(A)
    n, m = A.shape
    if n != m:
        raise ValueError(f"cannot invert a non-square {A.shape} matrix")
    R, pivots = rref(np.hstack([A, identity(n)]))
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular over GF(2)")
    return R[:, n:].copy()


def solve(M, b) -> np.ndarray | None:
    """Some ``x`` with ``M x = b``, free variables zero; ``None`` if inconsistent."""
    A = asmatrix(M)
    v = asvector(b)
    if v.shape[0] != A.shape[0]:
        raise ValueError(f"right-hand side has length {v.shape[0]}, expected {A.shape[0]}")
    cols = A.shape[1]
    R, pivots = rref(np.hstack([A, v.reshape(-1, 1)]))
    if pivots and pivots[-1] == cols:
        return None
    x = np.zeros(cols, dtype=DTYPE)
    for i, p in enumerate(pivots):
        x[p] = R[i, cols]
    return x


def in_span(basis_cols, v) -> bool:
    """Whether ``v`` lies in the span of the columns of ``basis_cols``."""
    v = asvector(v)
    if np.size(basis_cols) == 0:
        return not v.any()
    return solve(basis_cols, v) is not None


@dataclass(frozen=True)
class AffineSolutionSet:
    """``particular + span(basis rows)``, or the empty set when ``particular is None``."""

    dimension: int
    particular: np.ndarray | None
    basis: np.ndarray = field(default=None)  # rows, shape (k, dimension)

    def __post_init__(self):
        basis = self.basis
        if basis is None:
            basis = zeros(0, self.dimension)
        basis = asmatrix(basis, shape=(0, self.dimension) if np.size(basis) == 0 else None)
        basis.flags.writeable = False
        object.__setattr__(self, "basis", basis)
        if self.particular is not None:
            p = asvector(self.particular)
            p.flags.writeable = False
            object.__setattr__(self, "particular", p)

    @property
    def empty(self) -> bool:
        return self.particular is None

    @property
    def nullity(self) -> int:
        return 0 if self.empty else self.basis.shape[0]

    @property
    def size(self) -> int:
        return 0 if self.empty else 2**self.nullity

    def member(self, coefficients: Sequence[int]) -> np.ndarray:
        if self.empty:
            raise ValueError("the solution set is empty")
        c = asvector(coefficients)
        if c.shape[0] != self.nullity:
            raise ValueError(f"expected {self.nullity} coefficients")
        return self.particular ^ matvec(self.basis.T, c) if self.nullity else self.particular.copy()

    def members(self) -> Iterator[np.ndarray]:
        """All members, in binary counting order of the coefficients."""
        if self.empty:
            return
        for k in range(self.size):
            yield self.member([(k >> i) & 1 for i in range(self.nullity)])

    def __contains__(self, x) -> bool:
        if self.empty:
            return False
        d = asvector(x) ^ self.particular
        return in_span(self.basis.T, d)

    def random_member(self, rng: np.random.Generator) -> np.ndarray:
        return self.member(rng.integers(0, 2, size=self.nullity))


def solve_affine(constraints: Iterable[tuple[Sequence[int], int]], dimension: int | None = None) -> AffineSolutionSet:
    """Exact solution set of the system ``row · x = rhs`` over GF(2).

    ``constraints`` is an iterable of ``(coefficient_row, rhs_bit)``;
    ``dimension`` is required when there are no constraints.
    """
    rows, rhs = [], []
    for row, bit in constraints:
        rows.append(asvector(row))
        rhs.append(int(bit) % 2)
    if dimension is None:
        if not rows:
            raise ValueError("dimension is required for an empty system")
        dimension = rows[0].shape[0]
    if any(r.shape[0] != dimension for r in rows):
        raise ValueError("all constraint rows must have the same width")
    A = np.array(rows, dtype=DTYPE).reshape(len(rows), dimension)
    x = solve(A, np.array(rhs, dtype=DTYPE))
    if x is None:
        return AffineSolutionSet(dimension, None)
    return AffineSolutionSet(dimension, x, kernel_basis(A).T)


def subspace_sum(*bases) -> np.ndarray:
    """Column basis of the sum of the column spaces (canonical form)."""
    mats = [asmatrix(B) for B in bases if np.size(B)]
    if not mats:
        n = next((np.shape(B)[0] for B in bases if np.ndim(B) == 2), 0)
        return zeros(n, 0)
    return image_basis(np.hstack(mats))


def dim_span(*bases) -> int:
    mats = [asmatrix(B) for B in bases if np.size(B)]
    return rank(np.hstack(mats)) if mats else 0
