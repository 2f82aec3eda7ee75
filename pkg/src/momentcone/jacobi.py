"""Deterministic symmetric eigensolver based on cyclic Jacobi rotations.

The rotation schedule is a fixed row-major sweep over the strict upper
triangle, so the result is bit-identical across runs and platforms with the
same BLAS-free arithmetic.
"""

from __future__ import annotations

import math

import numpy as np


def jacobi_eigh(a, rel_tol: float = 1e-14, max_sweeps: int = 60):
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.

    Returns (w, v) with eigenvalues w ascending and v[:, k] the eigenvector
    for w[k].  Sweeps stop once the off-diagonal Frobenius mass drops below
    rel_tol times the matrix norm.
    """
    a = np.array(a, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    m = a.shape[0]
    a = 0.5 * (a + a.T)
    v = np.eye(m)
    scale = float(np.linalg.norm(a))
    if m > 1 and scale > 0.0:
        for _ in range(max_sweeps):
            off = math.sqrt(2.0 * float(np.sum(np.tril(a, -1) ** 2)))
            if off <= rel_tol * scale:
                break
            for p in range(m - 1):
                for q in range(p + 1, m):
                    apq = a[p, q]
                    if apq == 0.0:
                        continue
                    theta = 0.5 * (a[q, q] - a[p, p]) / apq
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                    c = 1.0 / math.sqrt(1.0 + t * t)
                    s = t * c
                    col_p = a[:, p].copy()
                    col_q = a[:, q].copy()
                    a[:, p] = c * col_p - s * col_q
                    a[:, q] = s * col_p + c * col_q
                    row_p = a[p, :].copy()
                    row_q = a[q, :].copy()
                    a[p, :] = c * row_p - s * row_q
                    a[q, :] = s * row_p + c * row_q
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    vec_p = v[:, p].copy()
                    vec_q = v[:, q].copy()
                    v[:, p] = c * vec_p - s * vec_q
                    v[:, q] = s * vec_p + c * vec_q
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def jacobi_eigvals(a, rel_tol: float = 1e-14, max_sweeps: int = 60) -> np.ndarray:
    """Eigenvalues only, ascending."""
    return jacobi_eigh(a, rel_tol=rel_tol, max_sweeps=max_sweeps)[0]
