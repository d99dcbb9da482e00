"""Quantum channels in Kraus, Choi and Stinespring form.

Conventions, used consistently by every function here:

* Choi matrix: R = (N (x) id)(Phi) with Phi = sum_ij |ii><jj| unnormalized,
  so R = sum_ij N(E_ij) (x) E_ij lives on (output, input) with the OUTPUT
  factor as the major index and Tr R = din.
* Stinespring isometry: U|psi> = sum_k E_k|psi> (x) |k>_env, rows indexed
  (b, e) with the system index b major, environment e minor.
* Transfer matrix: T vec(rho) = vec(N(rho)) for row-major vec. T equals the
  index reshuffle (gamma involution) of the Choi matrix, and composition of
  channels is matrix multiplication of transfer matrices.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NotCompletelyPositiveError, ValidationError
from .qmat import DensityMatrix, as_density, partial_trace

COMPLETENESS_TOL = 1e-10
ISOMETRY_TOL = 1e-10
CHOI_PSD_TOL = 1e-8
CHOI_TP_TOL = 1e-10
KRAUS_CUTOFF = 1e-10
RANK_CUTOFF = 1e-9


@dataclass(frozen=True)
class KrausChannel:
    """A CPTP map given by Kraus operators E_k (each dout x din)."""

    din: int
    dout: int
    kraus: tuple

    def __post_init__(self):
        ks = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        if not ks:
            raise ValidationError("channel needs at least one Kraus operator")
        for k in ks:
            if k.shape != (self.dout, self.din):
                raise DimensionError(
                    f"Kraus operator shape {k.shape} != ({self.dout}, {self.din})"
                )
        object.__setattr__(self, "kraus", ks)
        s = sum(k.conj().T @ k for k in ks)
        if np.abs(s - np.eye(self.din)).max() > COMPLETENESS_TOL:
            raise ValidationError("Kraus operators do not sum to identity")


@dataclass(frozen=True)
class ChoiMatrix:
    """Choi matrix of a CPTP map, output factor major, trace = din."""

    din: int
    dout: int
    mat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=complex)
        n = self.din * self.dout
        if m.shape != (n, n):
            raise DimensionError(f"Choi matrix shape {m.shape} != ({n}, {n})")
        object.__setattr__(self, "mat", m)
        if np.abs(m - m.conj().T).max() > CHOI_PSD_TOL:
            raise ValidationError("Choi matrix is not Hermitian")
        if np.linalg.eigvalsh(m).min() < -CHOI_PSD_TOL:
            raise NotCompletelyPositiveError("Choi matrix has a negative eigenvalue")
        red = partial_trace(m, (self.dout, self.din), keep=(1,))
        if np.abs(red - np.eye(self.din)).max() > CHOI_TP_TOL:
            raise ValidationError("Choi matrix is not trace preserving")


@dataclass(frozen=True)
class StinespringIsometry:
    """Isometry U: din -> dout*denv with U^dag U = 1."""

    din: int
    dout: int
    denv: int
    u: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=complex)
        if u.shape != (self.dout * self.denv, self.din):
            raise DimensionError(
                f"isometry shape {u.shape} != ({self.dout * self.denv}, {self.din})"
            )
        object.__setattr__(self, "u", u)
        if np.abs(u.conj().T @ u - np.eye(self.din)).max() > ISOMETRY_TOL:
            raise ValidationError("matrix is not an isometry within tol")


def _vec(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=complex).reshape(-1)


def kraus_to_choi(ch: KrausChannel) -> ChoiMatrix:
    """R = sum_k vec(E_k) vec(E_k)^dag."""
    n = ch.din * ch.dout
    r = np.zeros((n, n), dtype=complex)
    for k in ch.kraus:
        v = _vec(k)
        r += np.outer(v, v.conj())
    return ChoiMatrix(ch.din, ch.dout, r)


def choi_to_kraus(choi: ChoiMatrix, cutoff: float = KRAUS_CUTOFF) -> KrausChannel:
    """Minimal Kraus set from the Choi eigendecomposition.

    Eigenvalues <= cutoff are dropped; a negative eigenvalue below the PSD
    tolerance raises NotCompletelyPositiveError (via ChoiMatrix validation
    when constructing, or here for raw input).
    """
    w, v = np.linalg.eigh(choi.mat)
    if w.min() < -CHOI_PSD_TOL:
        raise NotCompletelyPositiveError("Choi matrix has a negative eigenvalue")
    ks = []
    for i in range(w.size - 1, -1, -1):  # descending
        if w[i] <= cutoff:
            break
        ks.append(np.sqrt(w[i]) * v[:, i].reshape(choi.dout, choi.din))
    return KrausChannel(choi.din, choi.dout, tuple(ks))


def choi_rank(choi: ChoiMatrix, cutoff: float = RANK_CUTOFF) -> int:
    """Number of Choi eigenvalues above the cutoff."""
    return int((np.linalg.eigvalsh(choi.mat) > cutoff).sum())


def kraus_to_stinespring(ch: KrausChannel) -> StinespringIsometry:
    """Stack Kraus operators into U|psi> = sum_k E_k|psi> (x) |k>_env."""
    denv = len(ch.kraus)
    u = np.zeros((ch.dout * denv, ch.din), dtype=complex)
    for e, k in enumerate(ch.kraus):
        for b in range(ch.dout):
            u[b * denv + e, :] = k[b, :]
    return StinespringIsometry(ch.din, ch.dout, denv, u)


def stinespring_to_kraus(iso: StinespringIsometry) -> KrausChannel:
    """Read Kraus operators back off the isometry, E_e[b, a] = U[(b, e), a]."""
    u = iso.u.reshape(iso.dout, iso.denv, iso.din)
    ks = tuple(u[:, e, :].copy() for e in range(iso.denv))
    return KrausChannel(iso.din, iso.dout, ks)


def minimal_kraus(ch: KrausChannel) -> KrausChannel:
    """Round-trip through the Choi matrix to drop redundant Kraus operators."""
    return choi_to_kraus(kraus_to_choi(ch))


def apply(ch, rho) -> DensityMatrix:
    """Apply a channel (any representation) to a state."""
    r = as_density(rho)
    if isinstance(ch, ChoiMatrix):
        ch = choi_to_kraus(ch)
    if isinstance(ch, KrausChannel):
        if r.shape[0] != ch.din:
            raise DimensionError(f"state dim {r.shape[0]} != channel din {ch.din}")
        out = sum(k @ r @ k.conj().T for k in ch.kraus)
        return DensityMatrix(out)
    if isinstance(ch, StinespringIsometry):
        if r.shape[0] != ch.din:
            raise DimensionError(f"state dim {r.shape[0]} != channel din {ch.din}")
        big = ch.u @ r @ ch.u.conj().T
        return DensityMatrix(partial_trace(big, (ch.dout, ch.denv), keep=(0,)))
    raise TypeError(f"not a channel representation: {type(ch).__name__}")


def complementary(ch) -> KrausChannel:
    """The channel to the environment, N^c(rho) = Tr_B(U rho U^dag).

    Kraus operators of N^c are F_b[e, a] = U[(b, e), a], one per system
    basis index b.
    """
    if isinstance(ch, KrausChannel):
        ch = kraus_to_stinespring(ch)
    if not isinstance(ch, StinespringIsometry):
        raise TypeError("complementary needs a KrausChannel or StinespringIsometry")
    u = ch.u.reshape(ch.dout, ch.denv, ch.din)
    fs = tuple(u[b, :, :].copy() for b in range(ch.dout))
    return KrausChannel(ch.din, ch.denv, fs)


def compose(second: KrausChannel, first: KrausChannel) -> KrausChannel:
    """second o first, as Kraus products."""
    if first.dout != second.din:
        raise DimensionError(
            f"cannot compose: first.dout={first.dout} != second.din={second.din}"
        )
    ks = tuple(s @ f for s in second.kraus for f in first.kraus)
    return KrausChannel(first.din, second.dout, ks)


def gamma_involution(mat, dout: int | None = None, din: int | None = None) -> np.ndarray:
    """Index reshuffle <ik|R^G|jl> = <ij|R|kl> on a (dout*din) x (dout*din) matrix.

    For square factors (dout == din) the operation is an involution. The
    result is the row-major transfer matrix of the map whose Choi matrix is
    ``mat``, so channel composition becomes a matrix product:
    gamma(R_{M1 o M2}) = gamma(R_{M1}) gamma(R_{M2}).
    """
    if isinstance(mat, ChoiMatrix):
        m, dout, din = mat.mat, mat.dout, mat.din
    else:
        m = np.asarray(mat, dtype=complex)
    if dout is None or din is None:
        d = math.isqrt(m.shape[0])
        if d * d != m.shape[0]:
            raise DimensionError("cannot infer factor dims; pass dout and din")
        dout = din = d
    if m.shape != (dout * din, dout * din):
        raise DimensionError(f"shape {m.shape} != ({dout * din}, {dout * din})")
    return (
        m.reshape(dout, din, dout, din)
        .transpose(0, 2, 1, 3)
        .reshape(dout * dout, din * din)
        .copy()
    )


def gamma_involution_inverse(t, dout: int, din: int) -> np.ndarray:
    """Inverse reshuffle: transfer matrix (dout^2 x din^2) back to Choi form."""
    t = np.asarray(t, dtype=complex)
    if t.shape != (dout * dout, din * din):
        raise DimensionError(f"shape {t.shape} != ({dout * dout}, {din * din})")
    return (
        t.reshape(dout, dout, din, din)
        .transpose(0, 2, 1, 3)
        .reshape(dout * din, dout * din)
        .copy()
    )


# ---------------------------------------------------------------------------
# JSON channel files: {"din": d, "dout": d', "kraus": [[[[re, im], ...]]]}
# ---------------------------------------------------------------------------


def channel_to_dict(ch: KrausChannel) -> dict:
    kraus = [
        [[[float(x.real), float(x.imag)] for x in row] for row in k]
        for k in ch.kraus
    ]
    return {"din": ch.din, "dout": ch.dout, "kraus": kraus}


def channel_from_dict(d: dict) -> KrausChannel:
    try:
        din, dout, kraus = int(d["din"]), int(d["dout"]), d["kraus"]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed channel dict: {exc}") from exc
    ks = []
    for k in kraus:
        a = np.asarray(k, dtype=float)
        if a.ndim != 3 or a.shape[2] != 2:
            raise ValidationError("each Kraus entry must be a [re, im] pair")
        ks.append(a[..., 0] + 1j * a[..., 1])
    return KrausChannel(din, dout, tuple(ks))


def save_channel(ch: KrausChannel, path: str) -> None:
    """Write a channel JSON file atomically (write to temp, then rename)."""
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            json.dump(channel_to_dict(ch), f, indent=1)
            f.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_channel(path: str) -> KrausChannel:
    with open(path) as f:
        try:
            d = json.load(f)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid channel JSON: {exc}") from exc
    return channel_from_dict(d)
