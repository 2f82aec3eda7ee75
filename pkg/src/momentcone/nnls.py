"""Nonnegative least squares by projected Barzilai-Borwein gradient steps.

Deterministic by construction: zero start, fixed step rule, no randomized
pivoting.  Intended for the moderately sized, moderately conditioned systems
that grid-based measure recovery produces.
"""

from __future__ import annotations

import numpy as np


def nnls_bb(a, b, max_iter: int = 20000, kkt_tol: float | None = None):
    """Minimize ||a @ x - b||_2 subject to x >= 0.

    Parameters
    ----------
    a : array_like, shape (m, n)
    b : array_like, shape (m,)
    max_iter : iteration cap.
    kkt_tol : tolerance on the projected-gradient optimality conditions;
        defaults to 1e-12 * max(1, ||a.T b||_inf).

    Returns
    -------
    x : ndarray, shape (n,)
        Best iterate found (lowest residual norm).
    residual : float
        ||a @ x - b||_2 at the returned x.
    iterations : int
        Number of gradient steps taken.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2:
        raise ValueError("a must be a matrix")
    m, n = a.shape
    if b.shape != (m,):
        raise ValueError(f"b must have shape ({m},)")
    atb = a.T @ b
    if kkt_tol is None:
        kkt_tol = 1e-12 * max(1.0, float(np.max(np.abs(atb))) if n else 1.0)

    x = np.zeros(n)
    resid = -b.copy()
    g = a.T @ resid
    best_x = x.copy()
    best_res = float(np.linalg.norm(resid))

    gg = float(g @ g)
    if gg == 0.0 or n == 0:
        return best_x, best_res, 0
    ag = a @ g
    curv = float(ag @ ag)
    alpha = gg / curv if curv > 0.0 else 1.0

    iterations = 0
    for iterations in range(1, max_iter + 1):
        x_new = np.maximum(x - alpha * g, 0.0)
        step = x_new - x
        if not step.any():
            break  # projected step is null: stationary point reached
        resid_new = a @ x_new - b
        g_new = a.T @ resid_new
        rnorm = float(np.linalg.norm(resid_new))
        if rnorm < best_res:
            best_res = rnorm
            best_x = x_new.copy()
        support = x_new > 0.0
        kkt = 0.0
        if support.any():
            kkt = float(np.max(np.abs(g_new[support])))
        if not support.all():
            kkt = max(kkt, max(0.0, -float(np.min(g_new[~support]))))
        if kkt <= kkt_tol:
            break
        y = g_new - g
        sy = float(step @ y)
        if sy > 0.0:
            alpha = float(step @ step) / sy
        else:
            alpha *= 2.0
        alpha = min(max(alpha, 1e-12), 1e12)
        x, g = x_new, g_new

    return best_x, best_res, iterations
