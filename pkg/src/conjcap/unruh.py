"""Capacity of the accelerated-receiver channel with certified truncation.

The channel output decomposes into an infinite direct sum of SU(2) blocks
with geometric weights.  All sums are truncated at an index whose analytic
tail bound is below a caller-chosen tolerance, so reported values carry a
certificate rather than a convergence guess.  Values are in bits.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, ValidationError
from .qmat import DIM_CAP

UNIT_TOL = 1e-10
DEFAULT_TAIL_TOL = 1e-12
_LN2 = math.log(2.0)


def _check_z(z: float) -> None:
    if not 0.0 < z < 1.0:
        raise ValidationError(f"acceleration parameter must be in (0, 1), got {z}")


def truncation_k(z: float, tail_tol: float) -> int:
    """Smallest K whose capacity-series tail is provably below tail_tol.

    Bounding log2((k+2)/(k+1)) by 1/((k+1) ln 2) makes the tail a geometric
    sum with closed form (1-z)/(2 ln 2) z^(K+1) ((K+1) - K z + 2(1-z)).
    """
    _check_z(z)
    if tail_tol <= 0:
        raise ValidationError(f"tail tolerance must be positive, got {tail_tol}")
    k = 0
    zpow = z  # z^(k+1)
    while True:
        bound = (1 - z) / (2 * _LN2) * zpow * ((k + 1) - k * z + 2 * (1 - z))
        if bound <= tail_tol:
            return k
        k += 1
        zpow *= z


@dataclass(frozen=True)
class UnruhSpec:
    """Acceleration parameter plus a certified truncation index."""

    z: float
    tail_tol: float = DEFAULT_TAIL_TOL
    k_max: int = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "k_max", truncation_k(self.z, self.tail_tol))


@dataclass(frozen=True)
class BlockWeights:
    """Scalar data of block k: weight t_k = (1-z)^3 z^k and the flat
    spectral heights s_k = (k+1)/2 (system) and s~_k = (k+2)/2 (environment)."""

    k: int
    t_k: float
    s_k: float
    s_tilde_k: float


def block_weights(z: float, k: int) -> BlockWeights:
    _check_z(z)
    if k < 0:
        raise ValidationError(f"block index must be nonnegative, got {k}")
    return BlockWeights(k=k, t_k=(1 - z) ** 3 * z ** k,
                        s_k=(k + 1) / 2, s_tilde_k=(k + 2) / 2)


def su2_generators(dim: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Spin matrices (Jx, Jy, Jz) of the dim-dimensional irreducible
    representation, Jz diagonal with entries j..-j for j = (dim-1)/2."""
    if dim < 2:
        raise DimensionError(f"representation dimension must be >= 2, got {dim}")
    j = (dim - 1) / 2
    m = j - np.arange(dim)
    jz = np.diag(m).astype(complex)
    jplus = np.zeros((dim, dim), dtype=complex)
    for i in range(1, dim):
        jplus[i - 1, i] = math.sqrt(j * (j + 1) - m[i] * (m[i] + 1))
    jx = (jplus + jplus.conj().T) / 2
    jy = (jplus - jplus.conj().T) / 2j
    return jx, jy, jz


def unruh_block(n_hat: np.ndarray, k: int) -> np.ndarray:
    """Unweighted output block (k+1)/2 I + n.J on the (k+2)-dimensional
    representation; PSD with smallest eigenvalue exactly zero."""
    n_hat = np.asarray(n_hat, dtype=float).reshape(-1)
    if n_hat.shape != (3,):
        raise DimensionError("direction must be a 3-vector")
    if abs(np.linalg.norm(n_hat) - 1.0) > UNIT_TOL:
        raise ValidationError("direction vector must have unit norm")
    if k < 0:
        raise ValidationError(f"block index must be nonnegative, got {k}")
    jx, jy, jz = su2_generators(k + 2)
    return (k + 1) / 2 * np.eye(k + 2, dtype=complex) \
        + n_hat[0] * jx + n_hat[1] * jy + n_hat[2] * jz


def unruh_capacity(z: float, tail_tol: float = DEFAULT_TAIL_TOL) -> float:
    """Capacity series (1-z)^3/2 sum_k z^k (k+1)(k+2) log2((k+2)/(k+1)),
    truncated at the certified index; the result is within tail_tol of the
    infinite sum."""
    spec = UnruhSpec(z, tail_tol)
    total = 0.0
    zpow = 1.0
    for k in range(spec.k_max + 1):
        total += zpow * (k + 1) * (k + 2) * math.log2((k + 2) / (k + 1))
        zpow *= z
    return (1 - z) ** 3 / 2 * total


def unruh_capacity_entropy_route(z: float, tail_tol: float = DEFAULT_TAIL_TOL) -> float:
    """H(B) - H(E) evaluated from the flat block spectra and their
    multiplicities; an independent arithmetic path to the series value."""
    spec = UnruhSpec(z, tail_tol)
    k = np.arange(spec.k_max + 1, dtype=float)
    t = (1 - z) ** 3 * z ** k
    w_b = t * (k + 1) / 2
    w_e = t * (k + 2) / 2
    h_b = -np.sum((k + 2) * w_b * np.log2(w_b))
    h_e = -np.sum((k + 1) * w_e * np.log2(w_e))
    return float(h_b - h_e)


def unruh_outputs_maxmixed(z: float, k_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Dense truncated output pair (tau_B, tau_E) at the maximally mixed
    dual-rail input: diagonal blocks t_k s_k I_(k+2) and t_k s~_k I_(k+1).

    Dimensions grow quadratically in k_max, so the global cap applies; use
    the entropy route for large truncations.
    """
    _check_z(z)
    if k_max < 0:
        raise ValidationError(f"truncation index must be nonnegative, got {k_max}")
    dim_b = (k_max + 1) * (k_max + 4) // 2
    dim_e = (k_max + 1) * (k_max + 2) // 2
    if dim_b > DIM_CAP:
        raise DimensionError(
            f"truncated output dimension {dim_b} exceeds the cap {DIM_CAP}")
    diag_b = np.concatenate([
        np.full(k + 2, block_weights(z, k).t_k * (k + 1) / 2) for k in range(k_max + 1)])
    diag_e = np.concatenate([
        np.full(k + 1, block_weights(z, k).t_k * (k + 2) / 2) for k in range(k_max + 1)])
    assert diag_b.size == dim_b and diag_e.size == dim_e
    return np.diag(diag_b).astype(complex), np.diag(diag_e).astype(complex)


def unruh_sweep(z_min: float, z_max: float, steps: int,
                tail_tol: float = DEFAULT_TAIL_TOL) -> list[tuple[float, float]]:
    """Capacity on a uniform grid of ``steps`` points from z_min to z_max
    inclusive; monotone decreasing with nonnegative second differences."""
    if not 0.0 < z_min < z_max < 1.0:
        raise ValidationError(
            f"need 0 < z_min < z_max < 1, got ({z_min}, {z_max})")
    if steps < 2:
        raise ValidationError(f"sweep needs at least 2 points, got {steps}")
    grid = np.linspace(z_min, z_max, steps)
    return [(float(z), unruh_capacity(float(z), tail_tol)) for z in grid]


def write_sweep_csv(rows: list[tuple[float, float]], path: str) -> None:
    """Write sweep rows as 'z,Q_bits' CSV with round-trip precision; the
    file appears atomically or not at all."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write("z,Q_bits\n")
            for z, q in rows:
                fh.write(f"{z!r},{q!r}\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
