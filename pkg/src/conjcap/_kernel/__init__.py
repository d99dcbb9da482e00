"""Alternating-projections iteration kernel.

The compiled Cython kernel is preferred; the numpy implementation is the
fallback when the extension was not built. Both implement the same contract:

    run_projections(a, pinv_a, b, n, tol, max_iters, stall_window, stall_rtol)
        -> (y, delta, iters, converged)

with ``a`` (m, n*n) and ``pinv_a`` (n*n, m) float64 C-contiguous arrays over
the orthonormal Hermitian basis defined in ``_ap_np`` (diagonal entries first,
then sqrt(2)-scaled real/imag parts of the upper triangle, row-major), ``y``
the final affine-projected iterate and ``delta`` the final Frobenius distance
between the affine and PSD iterates.
"""

from . import _ap_np

try:
    from . import _ap_c

    COMPILED = True
    run_projections = _ap_c.run_projections
except ImportError:
    _ap_c = None
    COMPILED = False
    run_projections = _ap_np.run_projections

pack_hermitian = _ap_np.pack_hermitian
unpack_hermitian = _ap_np.unpack_hermitian

__all__ = [
    "COMPILED",
    "run_projections",
    "pack_hermitian",
    "unpack_hermitian",
    "implementations",
]


def implementations() -> dict:
    """Name -> callable for every available kernel (for tests and benchmarks)."""
    impls = {"numpy": _ap_np.run_projections}
    if COMPILED:
        impls["cython"] = _ap_c.run_projections
    return impls
