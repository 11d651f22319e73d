"""Reference numeric kernels: partial-pivot LU and adaptive Simpson.

These are written out longhand, not delegated to a library solver, because
the interpreter is the oracle that checks generated code built on library
solvers; the two sides of that comparison must stay independent.
"""

from __future__ import annotations

import numpy as np

from .errors import err

PIVOT_RTOL = 1e-12
RESIDUAL_RTOL = 1e-8
QUAD_TOL = 1e-9
QUAD_MAX_DEPTH = 40


def lu_factor(a: np.ndarray) -> tuple[np.ndarray, list[int], int]:
    """In-place Doolittle LU with partial pivoting on a copy.

    Returns (compact LU, pivot rows, permutation sign). Raises E_SINGULAR
    when a pivot falls below PIVOT_RTOL times the largest row norm.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise err("E_SINGULAR", "solve needs a square matrix")
    scale = float(np.max(np.abs(a))) if n else 0.0
    piv: list[int] = []
    sign = 1
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) <= PIVOT_RTOL * scale or scale == 0.0:
            raise err("E_SINGULAR",
                      f"matrix is numerically singular (pivot {a[p, k]:.3e})")
        if p != k:
            a[[k, p], :] = a[[p, k], :]
            sign = -sign
        piv.append(p)
        a[k + 1:, k] /= a[k, k]
        a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    return a, piv, sign


def lu_solve(lu: np.ndarray, piv: list[int], b: np.ndarray) -> np.ndarray:
    n = lu.shape[0]
    x = np.array(b, dtype=float)
    vector = x.ndim == 1
    if vector:
        x = x.reshape(n, 1)
    for k, p in enumerate(piv):
        if p != k:
            x[[k, p], :] = x[[p, k], :]
    for k in range(n):  # forward: L has unit diagonal
        for i in range(k + 1, n):
            x[i, :] -= lu[i, k] * x[k, :]
    for k in range(n - 1, -1, -1):  # backward
        x[k, :] /= lu[k, k]
        for i in range(k):
            x[i, :] -= lu[i, k] * x[k, :]
    return x[:, 0] if vector else x


def solve_linear(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a x = b with partial-pivot LU and a residual acceptance bound."""
    lu, piv, _ = lu_factor(a)
    x = lu_solve(lu, piv, b)
    residual = float(np.max(np.abs(np.asarray(a) @ x - np.asarray(b, dtype=float))))
    bnorm = float(np.max(np.abs(b))) if np.asarray(b).size else 0.0
    if residual > RESIDUAL_RTOL * (1.0 + bnorm):
        raise err("E_SINGULAR",
                  f"solve residual {residual:.3e} exceeds the acceptance bound")
    return x


def determinant(a: np.ndarray) -> float:
    """Determinant via the same elimination; singular matrices give 0."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    det = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if a[p, k] == 0.0:
            return 0.0
        if p != k:
            a[[k, p], :] = a[[p, k], :]
            det = -det
        det *= a[k, k]
        a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k] / a[k, k], a[k, k + 1:])
    return det


def adaptive_simpson(f, lo: float, hi: float,
                     tol: float = QUAD_TOL, max_depth: int = QUAD_MAX_DEPTH) -> float:
    """Adaptive Simpson quadrature to an absolute tolerance."""
    if lo == hi:
        return 0.0
    if lo > hi:
        return -adaptive_simpson(f, hi, lo, tol, max_depth)

    def simpson(a: float, fa: float, fm: float, fb: float, b: float) -> float:
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = simpson(a, fa, flm, fm, m)
        right = simpson(m, fm, frm, fb, b)
        delta = left + right - whole
        if abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        if depth >= max_depth:
            raise err("E_QUAD_DEPTH",
                      "quadrature tolerance unreachable at maximum depth")
        return (recurse(a, m, fa, flm, fm, left, tol / 2.0, depth + 1)
                + recurse(m, b, fm, frm, fb, right, tol / 2.0, depth + 1))

    fa, fb = f(lo), f(hi)
    m = 0.5 * (lo + hi)
    fm = f(m)
    whole = simpson(lo, fa, fm, fb, hi)
    return recurse(lo, hi, fa, fm, fb, whole, tol, 0)
