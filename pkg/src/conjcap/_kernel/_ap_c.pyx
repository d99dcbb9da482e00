"""Compiled alternating-projections kernel.

Identical contract and Hermitian-basis layout as the numpy fallback in
_ap_np. LAPACK zheevd performs the PSD projection, BLAS dgemv the affine
one; all scratch buffers are allocated once before the loop. Buffers are
handed to LAPACK in Fortran interpretation; Hermiticity makes the flat
buffer's C reading of the reconstructed PSD part come out right (the
Fortran result is the conjugate, i.e. the transpose, of the C one).
"""

import numpy as np

from libc.math cimport INFINITY, sqrt
from scipy.linalg.cython_blas cimport dgemv, zgemm
from scipy.linalg.cython_lapack cimport zheevd


def run_projections(double[:, ::1] a, double[:, ::1] pinv_a, double[:] b, int n,
                    double tol=1e-8, int max_iters=50000,
                    int stall_window=1000, double stall_rtol=1e-4):
    """See _ap_np.run_projections; same semantics, same return tuple."""
    cdef int m = a.shape[0]
    cdef int nh = a.shape[1]
    if nh != n * n:
        raise ValueError("a must have n*n columns")
    if pinv_a.shape[0] != nh or pinv_a.shape[1] != m or b.shape[0] != m:
        raise ValueError("inconsistent operator shapes")

    h_arr = np.zeros(nh)
    y_arr = np.zeros(nh)
    p_arr = np.zeros(nh)
    z_arr = np.zeros(nh)
    w_arr = np.empty(nh)
    r_arr = np.empty(m)
    x_arr = np.empty(n * n, dtype=np.complex128)
    vs_arr = np.empty(n * n, dtype=np.complex128)
    zz_arr = np.empty(n * n, dtype=np.complex128)
    ev_arr = np.empty(n)
    cdef double[:] h = h_arr
    cdef double[:] y = y_arr
    cdef double[:] p = p_arr
    cdef double[:] z = z_arr
    cdef double[:] w = w_arr
    cdef double[:] r = r_arr
    cdef double complex[:] x = x_arr
    cdef double complex[:] vs = vs_arr
    cdef double complex[:] zz = zz_arr
    cdef double[:] ev = ev_arr

    # workspace query
    cdef char jobz = ord('V')
    cdef char uplo = ord('L')
    cdef char trans_t = ord('T')
    cdef char trans_n = ord('N')
    cdef char trans_c = ord('C')
    cdef int info = 0
    cdef int lwork = -1
    cdef int lrwork = -1
    cdef int liwork = -1
    cdef double complex wkopt
    cdef double rwkopt
    cdef int iwkopt
    zheevd(&jobz, &uplo, &n, &x[0], &n, &ev[0], &wkopt, &lwork,
           &rwkopt, &lrwork, &iwkopt, &liwork, &info)
    lwork = <int>wkopt.real
    lrwork = <int>rwkopt
    liwork = iwkopt
    work_arr = np.empty(lwork, dtype=np.complex128)
    rwork_arr = np.empty(lrwork)
    iwork_arr = np.empty(liwork, dtype=np.intc)
    cdef double complex[:] work = work_arr
    cdef double[:] rwork = rwork_arr
    cdef int[:] iwork = iwork_arr

    cdef double s2 = sqrt(2.0)
    cdef double inv_s2 = 1.0 / s2
    cdef double done = 1.0
    cdef double dzero = 0.0
    cdef double dmone = -1.0
    cdef double complex cone = 1.0
    cdef double complex czero = 0.0
    cdef int incx = 1
    cdef int it = 0
    cdef int stall = 0
    cdef int converged = 0
    cdef int i, j, k, q, t
    cdef double best = INFINITY
    cdef double delta = INFINITY
    cdef double re, im, d, acc
    cdef double complex v

    for it in range(1, max_iters + 1):
        # r = A h - b   (C-order A viewed by BLAS as its own transpose)
        dgemv(&trans_t, &nh, &m, &done, &a[0, 0], &nh, &h[0], &incx,
              &dzero, &r[0], &incx)
        for k in range(m):
            r[k] -= b[k]
        # y = h - P r
        for k in range(nh):
            y[k] = h[k]
        dgemv(&trans_t, &m, &nh, &dmone, &pinv_a[0, 0], &m, &r[0], &incx,
              &done, &y[0], &incx)
        # w = y + p, unpacked into the Hermitian matrix buffer
        for k in range(nh):
            w[k] = y[k] + p[k]
        for i in range(n):
            x[i * n + i] = w[i]
        t = n
        for i in range(n):
            for j in range(i + 1, n):
                re = w[t] * inv_s2
                im = w[t + 1] * inv_s2
                x[i * n + j] = re + im * 1j
                x[j * n + i] = re - im * 1j
                t += 2
        # PSD projection: clip eigenvalues, reconstruct V D+ V^H
        zheevd(&jobz, &uplo, &n, &x[0], &n, &ev[0], &work[0], &lwork,
               &rwork[0], &lrwork, &iwork[0], &liwork, &info)
        if info != 0:
            raise RuntimeError(f"zheevd failed with info={info}")
        for q in range(n):
            d = ev[q]
            if d < 0.0:
                d = 0.0
            for i in range(n):
                vs[q * n + i] = x[q * n + i] * d
        zgemm(&trans_n, &trans_c, &n, &n, &n, &cone, &vs[0], &n, &x[0], &n,
              &czero, &zz[0], &n)
        # pack; the flat buffer read C-style is exactly the C-order PSD part
        for i in range(n):
            z[i] = zz[i * n + i].real
        t = n
        for i in range(n):
            for j in range(i + 1, n):
                v = zz[i * n + j]
                z[t] = v.real * s2
                z[t + 1] = v.imag * s2
                t += 2
        # Dykstra correction and distance between the two projections
        acc = 0.0
        for k in range(nh):
            p[k] = w[k] - z[k]
            d = y[k] - z[k]
            acc += d * d
            h[k] = z[k]
        delta = sqrt(acc)
        if delta <= tol:
            converged = 1
            break
        if delta < best * (1.0 - stall_rtol):
            best = delta
            stall = 0
        else:
            stall += 1
            if stall >= stall_window:
                break

    return y_arr.copy(), delta, it, bool(converged)
