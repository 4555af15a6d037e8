"""Cyclic Jacobi eigensolver for batches of real symmetric matrices."""

from __future__ import annotations

import numba
import numpy as np

DEFAULT_TOL = 1e-10
MAX_SWEEPS = 100


@numba.njit(cache=True)
def _jacobi_inplace(a, v, tol, max_sweeps, with_vectors):
    """Diagonalize ``a`` in place by row-cyclic Jacobi sweeps.

    Returns the number of sweeps run.  ``v`` accumulates the rotations when
    ``with_vectors`` is set.
    """
    n = a.shape[0]
    norm = 0.0
    for i in range(n):
        for j in range(n):
            norm += a[i, j] * a[i, j]
    threshold = tol * max(1.0, np.sqrt(norm))
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j] * a[i, j]
        if np.sqrt(off) < threshold:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                elif theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for r in range(n):
                    arp = a[r, p]
                    arq = a[r, q]
                    a[r, p] = c * arp - s * arq
                    a[r, q] = s * arp + c * arq
                for r in range(n):
                    apr = a[p, r]
                    aqr = a[q, r]
                    a[p, r] = c * apr - s * aqr
                    a[q, r] = s * apr + c * aqr
                if with_vectors:
                    for r in range(n):
                        vrp = v[r, p]
                        vrq = v[r, q]
                        v[r, p] = c * vrp - s * vrq
                        v[r, q] = s * vrp + c * vrq
    return max_sweeps


@numba.njit(cache=True)
def _jacobi_batch(a, v, tol, max_sweeps, with_vectors):
    worst = 0
    for b in range(a.shape[0]):
        worst = max(worst, _jacobi_inplace(a[b], v[b], tol, max_sweeps, with_vectors))
    return worst


def jacobi_eigh(matrices, tol: float = DEFAULT_TOL, max_sweeps: int = MAX_SWEEPS,
                compute_vectors: bool = True):
    """Eigen-decompose symmetric matrices with cyclic Jacobi rotations.

    Accepts a single ``(n, n)`` matrix or a stack ``(..., n, n)``.  Returns
    eigenvalues in nondecreasing order and, if requested, the matching
    orthonormal eigenvectors as columns.  A matrix counts as converged once
    its off-diagonal Frobenius norm drops below ``tol * max(1, ||A||_F)``.
    """
    a = np.array(matrices, dtype=np.float64)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError("expected square matrices")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrices must be finite")
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    if not np.allclose(a, np.swapaxes(a, -1, -2), rtol=0.0, atol=1e-12 * scale):
        raise ValueError("matrices must be symmetric")
    lead = a.shape[:-2]
    n = a.shape[-1]
    a = np.ascontiguousarray(0.5 * (a + np.swapaxes(a, -1, -2))).reshape((-1, n, n))
    if compute_vectors:
        v = np.zeros(a.shape)
        v[:, np.arange(n), np.arange(n)] = 1.0
    else:
        v = np.zeros((a.shape[0], 0, 0))
    _jacobi_batch(a, v, float(tol), int(max_sweeps), bool(compute_vectors))

    eigenvalues = np.diagonal(a, axis1=-2, axis2=-1).copy()
    order = np.argsort(eigenvalues, axis=-1, kind="stable")
    eigenvalues = np.take_along_axis(eigenvalues, order, axis=-1).reshape(lead + (n,))
    if not compute_vectors:
        return eigenvalues
    vectors = np.take_along_axis(v, order[:, None, :], axis=-1).reshape(lead + (n, n))
    return eigenvalues, vectors


def eigvalsh(matrices, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Eigenvalues only, nondecreasing."""
    return jacobi_eigh(matrices, tol=tol, compute_vectors=False)
