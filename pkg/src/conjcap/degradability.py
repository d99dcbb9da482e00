"""Degradability classification and candidate degrading-map construction.

Two complementary tools live here.  For rank-two qubit channels the
candidate (anti)degrading maps, possibly valid only up to output
conjugation, come out of closed Choi algebra: compose with the
pseudo-inverse of the known half and read off the spectrum.  For everything
else a feasibility solver runs Dykstra-corrected alternating projections
between the PSD cone and the affine set of correctly composing,
trace-preserving Choi matrices.

A conjugation constraint linearizes to a partial transpose: on density
matrices entrywise conjugation equals transposition, so requiring
"conjugate of (D o N)" to match a target is the same linear condition with
the target partially transposed over its output factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernel import pack_hermitian, run_projections, unpack_hermitian
from .channels import (
    ChoiMatrix,
    KrausChannel,
    choi_rank,
    complementary,
    gamma_involution,
    gamma_involution_inverse,
    kraus_to_choi,
    minimal_kraus,
)
from .errors import ResourceLimitError, SingularConstructionError, ValidationError
from .qmat import partial_transpose

PINV_CUTOFF = 1e-10
CONSISTENCY_TOL = 1e-6
EB_PSD_TOL = 1e-9
RESIDUAL_TOL = 1e-6
PSD_SLACK = 1e-8
MAX_ITERS = 50000
CHOI_DIM_CAP = 64
_ASSEMBLY_CHUNK = 256

MODES = ("degradable", "antidegradable", "conjugate_degradable", "conjugate_antidegradable")


@dataclass(frozen=True)
class Rank2QubitParams:
    """Angles of the canonical two-Kraus qubit channel."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise ValidationError("channel angles must be finite")


@dataclass(frozen=True)
class DegradabilityVerdict:
    """Outcome of a feasibility search in one mode.

    ``holds=False`` is a non-certificate: the solver failed to find a valid
    map, which proves nothing about its absence.  ``witness`` is the final
    affine iterate (the candidate map's Choi matrix); ``residual`` is its
    composition defect recomputed independently of the solver.
    """

    mode: str
    holds: bool
    witness: np.ndarray
    residual: float
    min_eigenvalue: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class ClassificationReport:
    verdicts: dict
    entanglement_breaking: bool
    choi_rank: int


def rank2_qubit_channel(p: Rank2QubitParams) -> KrausChannel:
    """Canonical qubit channel with Kraus diag(cos a, cos b) and the
    antidiagonal (sin b, sin a); completeness holds exactly."""
    a_plus = np.array([[math.cos(p.alpha), 0.0], [0.0, math.cos(p.beta)]], dtype=complex)
    a_minus = np.array([[0.0, math.sin(p.beta)], [math.sin(p.alpha), 0.0]], dtype=complex)
    return KrausChannel(din=2, dout=2, kraus=(a_plus, a_minus))


def _candidate_choi(known: KrausChannel, target: KrausChannel) -> tuple[np.ndarray, np.ndarray]:
    """Choi matrix of the map D with conj(D(known(rho))) = target(rho).

    Solves the transfer-matrix equation T_D T_known = T_target on the range
    of T_known, then strips the conjugation by a partial transpose over the
    output factor.  Inconsistency off the range means no such map exists for
    any conjugation convention, which is a construction failure rather than
    a non-CP verdict.
    """
    t_known = gamma_involution(kraus_to_choi(known))
    t_target = gamma_involution(kraus_to_choi(target))
    t_d = t_target @ np.linalg.pinv(t_known, rcond=PINV_CUTOFF)
    if np.abs(t_d @ t_known - t_target).max() > CONSISTENCY_TOL:
        raise SingularConstructionError(
            "transfer equation has no solution consistent on the range")
    choi = gamma_involution_inverse(t_d, dout=target.dout, din=known.dout)
    jami = partial_transpose(choi, (target.dout, known.dout), 0)
    return jami, np.linalg.eigvalsh(jami)


def candidate_conjugate_antidegrading_map(ch: KrausChannel) -> tuple[np.ndarray, np.ndarray]:
    """Environment-to-output candidate: conj(D(N^c(rho))) = N(rho).

    Returns the candidate's Choi matrix and eigenvalues; the map is
    completely positive iff the smallest eigenvalue clears -tol.  For
    rank-two qubit channels the spectrum is
    {1, 1, +-(sin^2 b + sin^2 a - 1)/(sin^2 b - sin^2 a)}.
    """
    ch = minimal_kraus(ch)
    return _candidate_choi(known=complementary(ch), target=ch)


def candidate_conjugate_degrading_map(ch: KrausChannel) -> tuple[np.ndarray, np.ndarray]:
    """Output-to-environment candidate: conj(D(N(rho))) = N^c(rho).

    For rank-two qubit channels the spectrum is
    {1, 1, +-(sin^2 b - sin^2 a)/(sin^2 b + sin^2 a - 1)}, diverging on the
    entanglement-breaking manifold sin^2 a + sin^2 b = 1.
    """
    ch = minimal_kraus(ch)
    return _candidate_choi(known=ch, target=complementary(ch))


def is_entanglement_breaking(ch: KrausChannel, tol: float = EB_PSD_TOL) -> bool:
    """PPT criterion on the Choi matrix; exact for total dimension <= 6."""
    choi = kraus_to_choi(ch)
    pt = partial_transpose(choi.mat, (ch.dout, ch.din), 0)
    return bool(np.linalg.eigvalsh(pt).min() >= -tol)


def _pack_batch(mats: np.ndarray) -> np.ndarray:
    """pack_hermitian applied along the first axis; returns (batch, d*d)."""
    b, d, _ = mats.shape
    rows, cols = np.triu_indices(d, 1)
    out = np.empty((b, d * d))
    out[:, :d] = np.einsum("bii->bi", mats).real
    upper = mats[:, rows, cols]
    out[:, d::2] = math.sqrt(2.0) * upper.real
    out[:, d + 1::2] = math.sqrt(2.0) * upper.imag
    return out


def _basis_entries(d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Sparse triplets (basis index, row, col, value) of the orthonormal
    Hermitian basis underlying pack_hermitian."""
    rows, cols = np.triu_indices(d, 1)
    npairs = rows.size
    diag = np.arange(d)
    s = 1.0 / math.sqrt(2.0)
    bidx = np.concatenate([
        diag,
        d + 2 * np.arange(npairs), d + 2 * np.arange(npairs),
        d + 2 * np.arange(npairs) + 1, d + 2 * np.arange(npairs) + 1,
    ])
    r = np.concatenate([diag, rows, cols, rows, cols])
    c = np.concatenate([diag, cols, rows, cols, rows])
    v = np.concatenate([
        np.ones(d, dtype=complex),
        np.full(npairs, s, dtype=complex), np.full(npairs, s, dtype=complex),
        np.full(npairs, 1j * s, dtype=complex), np.full(npairs, -1j * s, dtype=complex),
    ])
    return bidx, r, c, v


def _assemble_constraints(t_first: np.ndarray, target: np.ndarray,
                          dd_in: int, dd_out: int, din: int) -> tuple[np.ndarray, np.ndarray]:
    """Real linear system A h = b over Hermitian-basis coordinates h of the
    unknown Choi matrix: composition rows first, trace-preservation rows last.

    Columns are filled in chunks of basis elements; per-element assembly is
    quadratically slower at the dimension cap.
    """
    n = dd_in * dd_out
    nh = n * n
    ncomp = (dd_out * din) ** 2
    ntp = dd_in * dd_in
    a = np.empty((ncomp + ntp, nh))
    bidx, r, c, v = _basis_entries(n)
    for start in range(0, nh, _ASSEMBLY_CHUNK):
        stop = min(start + _ASSEMBLY_CHUNK, nh)
        sel = (bidx >= start) & (bidx < stop)
        mats = np.zeros((stop - start, n, n), dtype=complex)
        mats[bidx[sel] - start, r[sel], c[sel]] = v[sel]
        m5 = mats.reshape(-1, dd_out, dd_in, dd_out, dd_in)
        t_x = m5.transpose(0, 1, 3, 2, 4).reshape(-1, dd_out * dd_out, dd_in * dd_in)
        comp = (t_x @ t_first).reshape(-1, dd_out, dd_out, din, din)
        comp = comp.transpose(0, 1, 3, 2, 4).reshape(-1, dd_out * din, dd_out * din)
        a[:ncomp, start:stop] = _pack_batch(comp).T
        a[ncomp:, start:stop] = _pack_batch(np.einsum("bojol->bjl", m5)).T
    b = np.concatenate([pack_hermitian(target, dd_out * din),
                        pack_hermitian(np.eye(dd_in, dtype=complex), dd_in)])
    return a, b


def _mode_setup(ch: KrausChannel, mode: str) -> tuple[KrausChannel, np.ndarray, int, int]:
    """Returns (first channel applied, target Choi matrix, dd_in, dd_out) for
    the unknown map D with D(first(rho)) matching the target channel."""
    comp = complementary(ch)
    if mode == "degradable":
        first, target_ch, conjugated = ch, comp, False
    elif mode == "antidegradable":
        first, target_ch, conjugated = comp, ch, False
    elif mode == "conjugate_degradable":
        first, target_ch, conjugated = ch, comp, True
    elif mode == "conjugate_antidegradable":
        first, target_ch, conjugated = comp, ch, True
    else:
        raise ValidationError(f"unknown mode {mode!r}; expected one of {MODES}")
    target = kraus_to_choi(target_ch).mat
    if conjugated:
        target = partial_transpose(target, (target_ch.dout, target_ch.din), 0)
    return first, target, first.dout, target_ch.dout


def feasibility_search(ch: KrausChannel, mode: str,
                       residual_tol: float = RESIDUAL_TOL,
                       psd_slack: float = PSD_SLACK,
                       max_iters: int = MAX_ITERS,
                       dim_cap: int = CHOI_DIM_CAP) -> DegradabilityVerdict:
    """Search for a CPTP map certifying the given mode.

    Alternates projections onto the PSD cone (eigenvalue clipping) and onto
    the affine set of Choi matrices with the right composition and trace
    behavior, with Dykstra's correction so the limit is the true projection.
    The verdict's residual and minimum eigenvalue are recomputed from the
    witness by plain channel algebra, independent of solver bookkeeping.
    """
    ch = minimal_kraus(ch)
    first, target, dd_in, dd_out = _mode_setup(ch, mode)
    n = dd_in * dd_out
    if n > dim_cap:
        raise ResourceLimitError(
            f"candidate Choi dimension {n} exceeds the cap {dim_cap}")
    t_first = gamma_involution(kraus_to_choi(first))
    a, b = _assemble_constraints(t_first, target, dd_in, dd_out, ch.din)
    pinv_a = np.linalg.pinv(a, rcond=PINV_CUTOFF)
    y, _, iters, converged = run_projections(
        a, pinv_a, b, n, tol=psd_slack, max_iters=max_iters)

    witness = unpack_hermitian(y, n)
    t_w = gamma_involution(witness, dout=dd_out, din=dd_in)
    composed = gamma_involution_inverse(t_w @ t_first, dout=dd_out, din=ch.din)
    residual = float(np.linalg.norm(composed - target))
    min_eig = float(np.linalg.eigvalsh(witness).min())
    holds = bool(converged and residual < residual_tol and min_eig > -psd_slack)
    return DegradabilityVerdict(
        mode=mode, holds=holds, witness=witness, residual=residual,
        min_eigenvalue=min_eig, iterations=iters, converged=converged)


def classify(ch: KrausChannel, residual_tol: float = RESIDUAL_TOL,
             psd_slack: float = PSD_SLACK, max_iters: int = MAX_ITERS,
             dim_cap: int = CHOI_DIM_CAP) -> ClassificationReport:
    """Feasibility verdicts in all four modes plus the PPT flag and Choi rank."""
    verdicts = {
        mode: feasibility_search(ch, mode, residual_tol=residual_tol,
                                 psd_slack=psd_slack, max_iters=max_iters,
                                 dim_cap=dim_cap)
        for mode in MODES
    }
    return ClassificationReport(
        verdicts=verdicts,
        entanglement_breaking=is_entanglement_breaking(ch),
        choi_rank=choi_rank(kraus_to_choi(ch)),
    )
