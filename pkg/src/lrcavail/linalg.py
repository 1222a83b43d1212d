"""Dense linear algebra over a :class:`~lrcavail.gf.FieldSpec`.

Matrices are 2-d ``int64`` arrays of field elements.  ``batch_rank``
eliminates a whole stack of equally shaped matrices at once; the
distance and decoding sweeps lean on it.
"""

from __future__ import annotations

import numpy as np

from .gf import FieldSpec


class SingularMatrixError(ArithmeticError):
    pass


def asmatrix(a) -> np.ndarray:
    return np.array(a, dtype=np.int64, ndmin=2)


def matmul(F: FieldSpec, A, B) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    vec = A.ndim == 1
    if vec:
        A = A[None, :]
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} x {B.shape}")
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for l in range(A.shape[1]):
        out = F.add(out, F.mul(A[:, l:l + 1], B[l:l + 1, :]))
    return out[0] if vec else out


def rref(F: FieldSpec, A) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = np.array(A, dtype=np.int64)
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            A[[r, p]] = A[[p, r]]
        A[r] = F.mul(A[r], F.inv(int(A[r, c])))
        factors = A[:, c].copy()
        factors[r] = 0
        A = F.sub(A, F.mul(factors[:, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    return A, pivots


def rank(F: FieldSpec, A) -> int:
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return 0
    return len(rref(F, A)[1])


def inverse(F: FieldSpec, A) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix is not square")
    aug = np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1)
    R, piv = rref(F, aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise SingularMatrixError("matrix is singular")
    return R[:, n:]


def solve_left(F: FieldSpec, A, b) -> np.ndarray:
    """Solve ``x @ A = b`` for x, requiring a unique solution.

    Raises :class:`SingularMatrixError` when A does not have full row rank
    or the system is inconsistent.
    """
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    k = A.shape[0]
    aug = np.concatenate([A.T, b[:, None]], axis=1)
    R, piv = rref(F, aug)
    if k in piv:
        raise SingularMatrixError("inconsistent system")
    if len(piv) < k:
        raise SingularMatrixError(f"rank {len(piv)} < {k}")
    x = np.zeros(k, dtype=np.int64)
    for row, c in enumerate(piv):
        x[c] = R[row, k]
    return x


def left_kernel(F: FieldSpec, A) -> np.ndarray:
    """Basis (as rows) of ``{x : x @ A = 0}``."""
    A = np.asarray(A, dtype=np.int64)
    k = A.shape[0]
    R, piv = rref(F, A.T)
    free = [c for c in range(k) if c not in piv]
    basis = []
    for f in free:
        x = np.zeros(k, dtype=np.int64)
        x[f] = 1
        for row, c in enumerate(piv):
            x[c] = F.neg(int(R[row, f]))
        basis.append(x)
    return np.array(basis, dtype=np.int64).reshape(len(basis), k)


def in_span(F: FieldSpec, cols, target) -> bool:
    """Whether ``target`` is a linear combination of the columns ``cols``."""
    cols = np.asarray(cols, dtype=np.int64)
    target = np.asarray(target, dtype=np.int64).reshape(-1, 1)
    if cols.size == 0:
        return not target.any()
    return rank(F, cols) == rank(F, np.concatenate([cols, target], axis=1))


def batch_rank(F: FieldSpec, A) -> np.ndarray:
    """Ranks of a stack of matrices of shape ``(B, rows, cols)``."""
    A = np.array(A, dtype=np.int64)
    B, rows, cols = A.shape
    rank_ = np.zeros(B, dtype=np.int64)
    if rows == 0 or cols == 0 or B == 0:
        return rank_
    ridx = np.arange(rows)
    bidx = np.arange(B)
    for c in range(cols):
        live = rank_ < rows
        if not live.any():
            break
        cand = (A[:, :, c] != 0) & (ridx[None, :] >= rank_[:, None])
        has = cand.any(axis=1) & live
        if not has.any():
            continue
        b = bidx[has]
        top = rank_[has]
        piv = np.argmax(cand[has], axis=1)
        # swap pivot row into position `top`
        tmp = A[b, top].copy()
        A[b, top] = A[b, piv]
        A[b, piv] = tmp
        prow = A[b, top]
        scale = F.inv(prow[:, c])
        prow = F.mul(prow, scale[:, None])
        sub = A[b]
        factors = sub[:, :, c].copy()
        below = ridx[None, :] > top[:, None]
        factors = np.where(below, factors, 0)
        A[b] = F.sub(sub, F.mul(factors[:, :, None], prow[:, None, :]))
        rank_[has] += 1
    return rank_


def solve_any(F: FieldSpec, A, b) -> np.ndarray | None:
    """Some x with ``A @ x = b`` (free variables zero), or None."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    cols = A.shape[1]
    R, piv = rref(F, np.concatenate([A, b[:, None]], axis=1))
    if cols in piv:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for row, c in enumerate(piv):
        x[c] = R[row, cols]
    return x
