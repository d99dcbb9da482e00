"""Dense complex matrix primitives: tensor products, partial trace and
transpose, Hermitian eigensystems, von Neumann entropy.

All matrices are numpy complex128 arrays in C (row-major) order. Composite
indices follow the same convention everywhere: for subsystems (d1, d2, ...)
the row index is i1*d2*... + i2*... (first factor is the major index).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, ValidationError

# Hard cap on either side of a tensor product result. Big enough for every
# workload here (largest factor in the suite is a few hundred), small enough
# to catch runaway kron chains before they allocate gigabytes.
DIM_CAP = 4096

# Eigenvalues below this are treated as exact zeros inside entropies.
ENTROPY_CLIP = 1e-12

DEFAULT_STATE_TOL = 1e-9


def _as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {m.shape}")
    return m


def _as_square(a) -> np.ndarray:
    m = _as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class DensityMatrix:
    """A validated density matrix.

    Raises ValidationError unless ``mat`` is Hermitian within ``tol``, has
    unit trace within ``tol`` and minimum eigenvalue >= -tol.
    """

    mat: np.ndarray
    tol: float = DEFAULT_STATE_TOL

    def __post_init__(self):
        m = _as_square(self.mat)
        object.__setattr__(self, "mat", m)
        if np.abs(m - m.conj().T).max() > self.tol:
            raise ValidationError("density matrix is not Hermitian within tol")
        if abs(np.trace(m) - 1.0) > self.tol:
            raise ValidationError("density matrix trace differs from 1")
        if np.linalg.eigvalsh(m).min() < -self.tol:
            raise ValidationError("density matrix has a negative eigenvalue")

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


def as_density(rho, tol: float = DEFAULT_STATE_TOL) -> np.ndarray:
    """Accept a DensityMatrix or a raw array; validate and return the array."""
    if isinstance(rho, DensityMatrix):
        return rho.mat
    return DensityMatrix(np.asarray(rho, dtype=complex), tol).mat


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product with the first factor as the major index."""
    a, b = _as_matrix(a), _as_matrix(b)
    if a.shape[0] * b.shape[0] > DIM_CAP or a.shape[1] * b.shape[1] > DIM_CAP:
        raise DimensionError(
            f"tensor product result {a.shape[0] * b.shape[0]}x"
            f"{a.shape[1] * b.shape[1]} exceeds DIM_CAP={DIM_CAP}"
        )
    return np.kron(a, b)


def _check_dims(m: np.ndarray, dims) -> tuple:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise DimensionError("subsystem dimensions must be positive")
    n = int(np.prod(dims))
    if m.shape != (n, n):
        raise DimensionError(f"matrix shape {m.shape} does not factor as {dims}")
    return dims


def partial_trace(mat, dims, keep) -> np.ndarray:
    """Trace out all subsystems not listed in ``keep``.

    Parameters
    ----------
    mat : array, square on prod(dims)
    dims : sequence of subsystem dimensions, major index first
    keep : iterable of subsystem positions to retain, order preserved

    Returns the reduced matrix on the kept subsystems in their given order.
    """
    m = _as_square(mat)
    dims = _check_dims(m, dims)
    keep = [int(k) for k in keep]
    if any(k < 0 or k >= len(dims) for k in keep) or len(set(keep)) != len(keep):
        raise DimensionError(f"invalid keep list {keep} for {len(dims)} subsystems")
    n = len(dims)
    t = m.reshape(dims + dims)
    # einsum with traced subsystems sharing a row/column index
    row = list(range(n))
    col = [i + n if i in keep else i for i in range(n)]
    out = [row[k] for k in keep] + [col[k] for k in keep]
    r = np.einsum(t, row + col, out)
    dkeep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return r.reshape(dkeep, dkeep)


def partial_transpose(mat, dims, subsystem: int) -> np.ndarray:
    """Transpose one tensor factor, leaving the others untouched."""
    m = _as_square(mat)
    dims = _check_dims(m, dims)
    if not 0 <= subsystem < len(dims):
        raise DimensionError(f"subsystem {subsystem} out of range")
    n = len(dims)
    t = m.reshape(dims + dims)
    axes = list(range(2 * n))
    axes[subsystem], axes[subsystem + n] = axes[subsystem + n], axes[subsystem]
    d = int(np.prod(dims))
    return t.transpose(axes).reshape(d, d)


def conjugate(mat) -> np.ndarray:
    """Entrywise complex conjugate."""
    return np.conj(_as_matrix(mat))


def hermitian_eigensystem(mat, tol: float = 1e-10):
    """Eigenvalues (descending) and matching eigenvectors of a Hermitian matrix.

    Returns (w, v) with w[0] >= w[1] >= ... and v[:, i] the eigenvector for
    w[i]. Raises ValidationError if ``mat`` is not Hermitian within ``tol``.
    """
    m = _as_square(mat)
    if np.abs(m - m.conj().T).max() > tol:
        raise ValidationError("matrix is not Hermitian within tol")
    w, v = np.linalg.eigh(m)
    return w[::-1].copy(), v[:, ::-1].copy()


def entropy_of_spectrum(eigenvalues, clip: float = ENTROPY_CLIP) -> float:
    """Base-2 entropy of a nonnegative spectrum; values <= clip count as 0."""
    ev = np.asarray(eigenvalues, dtype=float)
    ev = ev[ev > clip]
    if ev.size == 0:
        return 0.0
    return float(-(ev * np.log2(ev)).sum())


def von_neumann_entropy(rho, tol: float = DEFAULT_STATE_TOL) -> float:
    """H(rho) = -Tr rho log2 rho in bits, with eigenvalue clipping."""
    m = as_density(rho, tol)
    return entropy_of_spectrum(np.linalg.eigvalsh(m))
