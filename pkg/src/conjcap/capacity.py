"""Coherent information and its maximization over input states.

Values are in bits.  The maximizer parametrizes density matrices through a
Cholesky-like factor and climbs with a derivative-free simplex method, which
is adequate for the small dimensions this package targets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .channels import KrausChannel, ChoiMatrix, StinespringIsometry, choi_to_kraus, kraus_to_stinespring
from .errors import DimensionError
from .qmat import DensityMatrix, as_density, entropy_of_spectrum

VALUE_TOL = 1e-8
MAX_EVALS = 10000
RESTARTS = 20
FACTOR_TRACE_FLOOR = 1e-12


@dataclass(frozen=True)
class CoherentInfoResult:
    """Outcome of a coherent-information maximization."""

    value: float
    argmax_state: DensityMatrix
    iterations: int
    converged: bool


def _as_isometry(ch: KrausChannel | ChoiMatrix | StinespringIsometry) -> StinespringIsometry:
    if isinstance(ch, StinespringIsometry):
        return ch
    if isinstance(ch, ChoiMatrix):
        ch = choi_to_kraus(ch)
    if isinstance(ch, KrausChannel):
        return kraus_to_stinespring(ch)
    raise TypeError(f"expected a channel representation, got {type(ch).__name__}")


def _output_spectra(u: StinespringIsometry, rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues of the system and environment outputs for input ``rho``."""
    big = (u.u @ rho @ u.u.conj().T).reshape(u.dout, u.denv, u.dout, u.denv)
    rho_b = np.einsum("aebe->ab", big)
    rho_e = np.einsum("aeaf->ef", big)
    return np.linalg.eigvalsh(rho_b), np.linalg.eigvalsh(rho_e)


def coherent_information(ch: KrausChannel | ChoiMatrix | StinespringIsometry,
                         rho: DensityMatrix | np.ndarray) -> float:
    """I_c(ch, rho) = H(B) - H(E) for the joint output of the dilation.

    ``rho`` must act on the channel input space.
    """
    u = _as_isometry(ch)
    state = as_density(rho)
    if state.shape[0] != u.din:
        raise DimensionError(
            f"input state dimension {state.shape[0]} != channel input {u.din}")
    eig_b, eig_e = _output_spectra(u, state)
    return entropy_of_spectrum(eig_b) - entropy_of_spectrum(eig_e)


def _factor_params_to_state(x: np.ndarray, dim: int) -> np.ndarray | None:
    """Map a real parameter vector to rho = LL^dag / tr(LL^dag).

    Layout: the first ``dim`` entries are the (real) diagonal of L, the rest
    alternate real/imaginary parts of the strictly lower triangle, row-major.
    Returns None when the factor has numerically vanishing trace.
    """
    low = np.zeros((dim, dim), dtype=complex)
    low[np.diag_indices(dim)] = x[:dim]
    rows, cols = np.tril_indices(dim, -1)
    tail = x[dim:]
    low[rows, cols] = tail[0::2] + 1j * tail[1::2]
    rho = low @ low.conj().T
    tr = rho.trace().real
    if tr < FACTOR_TRACE_FLOOR:
        return None
    return rho / tr


def maximize_coherent_information(ch: KrausChannel | ChoiMatrix | StinespringIsometry,
                                  covariant: bool = False,
                                  tol: float = VALUE_TOL,
                                  max_evals: int = MAX_EVALS,
                                  restarts: int = RESTARTS,
                                  seed: int = 0) -> CoherentInfoResult:
    """Maximize I_c over input states.

    With ``covariant=True`` the caller asserts the channel is unitarily
    covariant, so the maximum is attained at the maximally mixed input and a
    single evaluation suffices.  Otherwise a simplex search over the Cholesky
    parametrization runs from ``restarts`` starting points (the first is the
    maximally mixed state, the rest are seeded Gaussian factors) and the best
    value is returned with convergence metadata from its restart.
    """
    u = _as_isometry(ch)
    dim = u.din
    if covariant:
        mixed = DensityMatrix(np.eye(dim, dtype=complex) / dim)
        return CoherentInfoResult(
            value=coherent_information(u, mixed),
            argmax_state=mixed,
            iterations=1,
            converged=True,
        )

    def negated(x: np.ndarray) -> float:
        rho = _factor_params_to_state(x, dim)
        if rho is None:
            return np.inf
        eig_b, eig_e = _output_spectra(u, rho)
        return entropy_of_spectrum(eig_e) - entropy_of_spectrum(eig_b)

    nparams = dim * dim
    identity_factor = np.zeros(nparams)
    identity_factor[:dim] = 1.0
    rng = np.random.default_rng(seed)

    best_x = identity_factor
    best_val = np.inf
    best_ok = False
    evals = 0
    for trial in range(max(restarts, 1)):
        x0 = identity_factor if trial == 0 else rng.standard_normal(nparams)
        res = scipy.optimize.minimize(
            negated, x0, method="Nelder-Mead",
            options={"maxfev": max_evals, "fatol": tol, "xatol": 1e-9},
        )
        evals += res.nfev
        if res.fun < best_val:
            best_val = res.fun
            best_x = res.x
            best_ok = bool(res.success)

    rho_best = _factor_params_to_state(best_x, dim)
    if rho_best is None:
        rho_best = np.eye(dim, dtype=complex) / dim
    return CoherentInfoResult(
        value=-best_val,
        argmax_state=DensityMatrix(rho_best),
        iterations=evals,
        converged=best_ok,
    )


def _pair_isometry(u: StinespringIsometry) -> StinespringIsometry:
    """Dilation of ch x ch with both system factors grouped before both
    environment factors, so the single-channel marginal logic applies."""
    two = np.kron(u.u, u.u)
    two = two.reshape(u.dout, u.denv, u.dout, u.denv, u.din * u.din)
    two = two.transpose(0, 2, 1, 3, 4).reshape(
        u.dout * u.dout * u.denv * u.denv, u.din * u.din)
    return StinespringIsometry(din=u.din * u.din, dout=u.dout * u.dout,
                               denv=u.denv * u.denv, u=two)


def subadditivity_check(ch: KrausChannel | ChoiMatrix | StinespringIsometry,
                        rho12: DensityMatrix | np.ndarray) -> tuple[float, float]:
    """Return (I_c(ch x ch, rho12), I_c(ch, rho1) + I_c(ch, rho2)).

    The caller asserts lhs <= rhs + tol; equality holds on product inputs.
    """
    u = _as_isometry(ch)
    state = as_density(rho12)
    if state.shape[0] != u.din * u.din:
        raise DimensionError(
            f"two-copy input dimension {state.shape[0]} != {u.din}^2")
    joint = state.reshape(u.din, u.din, u.din, u.din)
    rho1 = np.einsum("acbc->ab", joint)
    rho2 = np.einsum("cacb->ab", joint)
    lhs = coherent_information(_pair_isometry(u), state)
    rhs = coherent_information(u, rho1) + coherent_information(u, rho2)
    return lhs, rhs
