"""Numpy fallback for the alternating-projections kernel.

Dykstra-corrected alternating projections between the affine set
{h : A h = b} and the PSD cone, in the coordinates of an orthonormal
Hermitian basis: for an n x n Hermitian X the coordinate vector h of length
n*n is

    h[i]          = X[i, i].real                       for i < n
    h[n + 2t]     = sqrt(2) * Re X[i, j]               for the t-th pair
    h[n + 2t + 1] = sqrt(2) * Im X[i, j]               (i < j, row-major)

so that ||h||_2 equals ||X||_F and projections in h-coordinates are
projections in Frobenius norm.
"""

from __future__ import annotations

import numpy as np

_SQRT2 = np.sqrt(2.0)


def _upper(n: int):
    return np.triu_indices(n, 1)


def unpack_hermitian(h: np.ndarray, n: int) -> np.ndarray:
    """Coordinate vector (length n*n) to Hermitian matrix."""
    iu = _upper(n)
    x = np.zeros((n, n), dtype=complex)
    x[np.arange(n), np.arange(n)] = h[:n]
    c = (h[n::2] + 1j * h[n + 1 :: 2]) / _SQRT2
    x[iu] = c
    x[iu[1], iu[0]] = c.conj()
    return x


def pack_hermitian(x: np.ndarray, n: int) -> np.ndarray:
    """Hermitian matrix to coordinate vector; inverse of unpack_hermitian."""
    iu = _upper(n)
    h = np.empty(n * n)
    h[:n] = np.diagonal(x).real
    c = x[iu]
    h[n::2] = c.real * _SQRT2
    h[n + 1 :: 2] = c.imag * _SQRT2
    return h


def run_projections(
    a: np.ndarray,
    pinv_a: np.ndarray,
    b: np.ndarray,
    n: int,
    tol: float = 1e-8,
    max_iters: int = 50000,
    stall_window: int = 1000,
    stall_rtol: float = 1e-4,
):
    """Iterate until the affine and PSD iterates agree within ``tol``.

    Returns (y, delta, iters, converged): y is the final affine-projected
    coordinate vector, delta = ||y - z||_2 with z the final PSD iterate.
    A stall (no stall_rtol relative improvement of delta over stall_window
    iterations) terminates early with converged=False; a positive final
    delta of a stalled run estimates the distance between the two sets.
    """
    nh = n * n
    iu = _upper(n)
    diag = np.arange(n)
    h = np.zeros(nh)
    p = np.zeros(nh)
    y = h
    best = np.inf
    stall = 0
    delta = np.inf
    it = 0
    for it in range(1, max_iters + 1):
        y = h - pinv_a @ (a @ h - b)
        w = y + p
        # PSD projection by eigenvalue clipping
        x = np.zeros((n, n), dtype=complex)
        x[diag, diag] = w[:n]
        c = (w[n::2] + 1j * w[n + 1 :: 2]) / _SQRT2
        x[iu] = c
        x[iu[1], iu[0]] = c.conj()
        ev, v = np.linalg.eigh(x)
        pos = ev > 0.0
        vp = v[:, pos]
        xz = (vp * ev[pos]) @ vp.conj().T
        z = np.empty(nh)
        z[:n] = np.diagonal(xz).real
        cz = xz[iu]
        z[n::2] = cz.real * _SQRT2
        z[n + 1 :: 2] = cz.imag * _SQRT2
        p = w - z
        delta = float(np.linalg.norm(y - z))
        h = z
        if delta <= tol:
            return y, delta, it, True
        if delta < best * (1.0 - stall_rtol):
            best = delta
            stall = 0
        else:
            stall += 1
            if stall >= stall_window:
                return y, delta, it, False
    return y, delta, it, False
