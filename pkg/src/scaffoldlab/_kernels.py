"""Hot loops of tower arithmetic, with a numba path and a pure-numpy path.

Tower elements are ``(R, L)`` int64 arrays: one row of Laurent coefficients
per monomial of the x-basis, all rows sharing one exponent offset.  Two
kernels do all the work:

``pair_products``
    ``U[idx[a, b]] += A[a] (*) B[b]`` over all row pairs (``(*)`` is
    polynomial convolution).  This is the unreduced product.
``apply_map``
    ``C[dst] += U[src] (*) D`` for every entry of a sparse linear map whose
    entries are Laurent polynomials.  Used both for normal-form reduction of
    an unreduced product and for applying a Galois automorphism.

The numba path is used when numba imports and ``SCAFFOLDLAB_BACKEND`` is not
``numpy``.  Both paths are exact integer arithmetic and must agree bit for
bit (checked in the test suite).
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

__all__ = [
    "HAVE_NUMBA",
    "backend",
    "set_backend",
    "pair_products",
    "apply_map",
    "row_spans",
]


def _initial_backend() -> str:
    want = os.environ.get("SCAFFOLDLAB_BACKEND", "numba").strip().lower()
    if want not in ("numba", "numpy"):
        raise ValueError(f"SCAFFOLDLAB_BACKEND must be 'numba' or 'numpy', got {want!r}")
    if want == "numba" and not HAVE_NUMBA:
        return "numpy"
    return want


_backend = _initial_backend()


def backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(name)
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not importable")
    _backend = name


def row_spans(A: np.ndarray) -> np.ndarray:
    """``(R, 2)`` array of ``[first, last+1)`` nonzero columns per row; ``[0, 0)`` if empty."""
    nz = A != 0
    has = nz.any(axis=1)
    first = np.where(has, nz.argmax(axis=1), 0)
    last = np.where(has, A.shape[1] - nz[:, ::-1].argmax(axis=1), 0)
    return np.stack([first, last], axis=1).astype(np.int64)


# -- numpy path --------------------------------------------------------------


def _pair_products_np(A, B, pair_index, n_out, p):
    La, Lb = A.shape[1], B.shape[1]
    U = np.zeros((n_out, La + Lb - 1), dtype=np.int64)
    sa, sb = row_spans(A), row_spans(B)
    rows_a = [(a, int(sa[a, 0]), int(sa[a, 1])) for a in range(A.shape[0]) if sa[a, 1] > sa[a, 0]]
    rows_b = [(b, int(sb[b, 0]), int(sb[b, 1])) for b in range(B.shape[0]) if sb[b, 1] > sb[b, 0]]
    for a, a0, a1 in rows_a:
        ra = A[a, a0:a1]
        for b, b0, b1 in rows_b:
            prod = np.convolve(ra, B[b, b0:b1])
            U[pair_index[a, b], a0 + b0 : a0 + b0 + prod.shape[0]] += prod
    U %= p
    return U


def _apply_map_np(U, src, dst, start, length, shift, data, n_dst, width, p):
    C = np.zeros((n_dst, width), dtype=np.int64)
    su = row_spans(U)
    for q in range(src.shape[0]):
        e = src[q]
        u0, u1 = su[e]
        if u1 <= u0:
            continue
        d = data[start[q] : start[q] + length[q]]
        prod = np.convolve(U[e, u0:u1], d)
        s = shift[q] + u0
        C[dst[q], s : s + prod.shape[0]] += prod
    C %= p
    return C


# -- numba path --------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _spans_nb(A):
        R, L = A.shape
        out = np.zeros((R, 2), dtype=np.int64)
        for r in range(R):
            lo = -1
            hi = -1
            for j in range(L):
                if A[r, j] != 0:
                    if lo < 0:
                        lo = j
                    hi = j + 1
            if lo >= 0:
                out[r, 0] = lo
                out[r, 1] = hi
        return out

    @njit(cache=True)
    def _pair_products_nb(A, B, pair_index, n_out, p):
        La = A.shape[1]
        Lb = B.shape[1]
        U = np.zeros((n_out, La + Lb - 1), dtype=np.int64)
        sa = _spans_nb(A)
        sb = _spans_nb(B)
        for a in range(A.shape[0]):
            a0 = sa[a, 0]
            a1 = sa[a, 1]
            if a1 <= a0:
                continue
            for b in range(B.shape[0]):
                b0 = sb[b, 0]
                b1 = sb[b, 1]
                if b1 <= b0:
                    continue
                e = pair_index[a, b]
                for i in range(a0, a1):
                    x = A[a, i]
                    if x == 0:
                        continue
                    for j in range(b0, b1):
                        U[e, i + j] += x * B[b, j]
        for e in range(n_out):
            for j in range(La + Lb - 1):
                U[e, j] %= p
        return U

    @njit(cache=True)
    def _apply_map_nb(U, src, dst, start, length, shift, data, n_dst, width, p):
        C = np.zeros((n_dst, width), dtype=np.int64)
        su = _spans_nb(U)
        for q in range(src.shape[0]):
            e = src[q]
            u0 = su[e, 0]
            u1 = su[e, 1]
            if u1 <= u0:
                continue
            r = dst[q]
            st = start[q]
            ln = length[q]
            sh = shift[q]
            for j in range(u0, u1):
                x = U[e, j]
                if x == 0:
                    continue
                base = sh + j
                for k in range(ln):
                    C[r, base + k] += x * data[st + k]
        for r in range(n_dst):
            for j in range(width):
                C[r, j] %= p
        return C


# -- dispatch ----------------------------------------------------------------


def pair_products(A: np.ndarray, B: np.ndarray, pair_index: np.ndarray, n_out: int, p: int) -> np.ndarray:
    if _backend == "numba":
        return _pair_products_nb(A, B, pair_index, n_out, p)
    return _pair_products_np(A, B, pair_index, n_out, p)


def apply_map(U: np.ndarray, smap, n_dst: int, p: int) -> np.ndarray:
    """Apply a :class:`SparseMap`-like object (attributes ``src, dst, start,
    length, shift, data, span``) to the rows of ``U``."""
    width = U.shape[1] + smap.span - 1
    if width <= 0 or smap.src.shape[0] == 0:
        return np.zeros((n_dst, max(width, 1)), dtype=np.int64)
    args = (U, smap.src, smap.dst, smap.start, smap.length, smap.shift, smap.data, n_dst, width, p)
    if _backend == "numba":
        return _apply_map_nb(*args)
    return _apply_map_np(*args)
