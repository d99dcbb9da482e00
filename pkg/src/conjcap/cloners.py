"""Symmetric-subspace cloning machines and their degrading maps.

The N qubit input lives on the (N+1)-dimensional symmetric subspace and the
M qubit output on the (M+1)-dimensional one, indexed by excitation count, so
all constructions stay linear in M.  The environment carries an abstract
orthonormal basis of dimension M-N+1.  Coefficient formulas are evaluated in
exact rational arithmetic and converted to floats at the edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .channels import KrausChannel, StinespringIsometry
from .errors import DimensionError, ValidationError
from .qmat import DIM_CAP, DensityMatrix

STATE_NORM_TOL = 1e-9
MAJORIZATION_SLACK = 1e-12

_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass(frozen=True)
class ClonerSpec:
    """Parameters of an N -> M symmetric qubit cloner."""

    n_in: int
    m_out: int

    def __post_init__(self) -> None:
        if not (1 <= self.n_in <= self.m_out):
            raise ValidationError(
                f"cloner requires 1 <= n_in <= m_out, got ({self.n_in}, {self.m_out})")

    @property
    def din(self) -> int:
        return self.n_in + 1

    @property
    def dout(self) -> int:
        return self.m_out + 1

    @property
    def denv(self) -> int:
        return self.m_out - self.n_in + 1


@dataclass(frozen=True)
class CssBasis:
    """Index bookkeeping for the symmetric subspace of ``num_qubits`` qubits.

    Basis vector j is the normalized sum over computational strings with
    exactly j ones.
    """

    num_qubits: int

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise ValidationError("symmetric basis needs at least one qubit")

    @property
    def dimension(self) -> int:
        return self.num_qubits + 1

    def label(self, j: int) -> str:
        if not 0 <= j <= self.num_qubits:
            raise IndexError(f"excitation index {j} outside 0..{self.num_qubits}")
        return f"|{self.num_qubits - j}x0,{j}x1>"

    def embedding(self) -> np.ndarray:
        """Isometry from the symmetric index space into the full qubit register.

        Column j spreads weight 1/sqrt(C(n, j)) over all strings of Hamming
        weight j.  Rows grow as 2^n; the global dimension cap applies.
        """
        n = self.num_qubits
        if 2 ** n > DIM_CAP:
            raise DimensionError(f"2^{n} exceeds the dimension cap {DIM_CAP}")
        emb = np.zeros((2 ** n, n + 1))
        for string in range(2 ** n):
            j = string.bit_count()
            emb[string, j] = 1.0 / math.sqrt(comb(n, j))
        return emb


def alpha_fraction(spec: ClonerSpec, j: int) -> Fraction:
    """Exact alpha_j(N, M); see alpha_j for the closed form."""
    n, m = spec.n_in, spec.m_out
    if not 0 <= j <= m - n:
        raise IndexError(f"alpha index {j} outside 0..{m - n}")
    return Fraction(n + 1, m + 1) * Fraction(
        factorial(m - n) * factorial(m - j),
        factorial(m - n - j) * factorial(m))


def alpha_j(spec: ClonerSpec, j: int) -> float:
    """Weight of the j-th environment branch at a pure symmetric input.

    alpha_j = ((N+1)/(M+1)) * (M-N)!(M-j)! / ((M-N-j)! M!); the weights sum
    to one and fall off monotonically in j.
    """
    return float(alpha_fraction(spec, j))


def alpha_fractions(spec: ClonerSpec) -> list[Fraction]:
    return [alpha_fraction(spec, j) for j in range(spec.m_out - spec.n_in + 1)]


def alpha_kj_fraction(spec: ClonerSpec, k: int, j: int) -> Fraction:
    """Exact transition probability from input excitation k to output k+j."""
    n, m = spec.n_in, spec.m_out
    if not 0 <= k <= n:
        raise IndexError(f"input excitation {k} outside 0..{n}")
    if not 0 <= j <= m - n:
        raise IndexError(f"environment index {j} outside 0..{m - n}")
    return Fraction(n + 1, m + 1) * Fraction(comb(n, k) * comb(m - n, j), comb(m, k + j))


def _alpha_kj_factorial_form(spec: ClonerSpec, k: int, j: int) -> Fraction:
    # Independent route used only to cross-check alpha_kj_fraction.
    n, m = spec.n_in, spec.m_out
    head = Fraction(factorial(m - n) * factorial(n + 1),
                    factorial(k) * factorial(n - k) * factorial(m + 1))
    tail = Fraction(factorial(k + j) * factorial(m - k - j),
                    factorial(j) * factorial(m - n - j))
    return head * tail


def alpha_kj(spec: ClonerSpec, k: int, j: int) -> float:
    """Probability that input excitation k lands on output excitation k+j."""
    return float(alpha_kj_fraction(spec, k, j))


def build_cloner_isometry(spec: ClonerSpec) -> StinespringIsometry:
    """Dilation of the N -> M cloner on symmetric-subspace coordinates.

    Input excitation k maps to sqrt(alpha_kj) |k+j>_B |j>_E summed over the
    environment index j.  The two closed forms for alpha_kj are recomputed
    exactly and compared here, so a construction that passes is internally
    cross-validated.
    """
    n, m = spec.n_in, spec.m_out
    dout, denv = spec.dout, spec.denv
    if dout * denv > DIM_CAP:
        raise DimensionError(
            f"joint output dimension {dout * denv} exceeds the cap {DIM_CAP}")
    u = np.zeros((dout * denv, spec.din), dtype=complex)
    for k in range(n + 1):
        for j in range(denv):
            prob = alpha_kj_fraction(spec, k, j)
            if prob != _alpha_kj_factorial_form(spec, k, j):
                raise ValidationError(
                    f"coefficient cross-check failed at (k={k}, j={j})")
            u[(k + j) * denv + j, k] = math.sqrt(prob)
    return StinespringIsometry(din=spec.din, dout=dout, denv=denv, u=u)


def css_input_coordinates(n: int, psi: np.ndarray) -> np.ndarray:
    """Symmetric-subspace coordinates of n copies of the qubit state psi."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.shape != (2,):
        raise DimensionError("expected a single-qubit state vector")
    if abs(np.linalg.norm(psi) - 1.0) > STATE_NORM_TOL:
        raise ValidationError("input state vector is not normalized")
    a, b = psi
    return np.array([math.sqrt(comb(n, k)) * a ** (n - k) * b ** k
                     for k in range(n + 1)], dtype=complex)


def single_qubit_marginal_css(rho: np.ndarray, num_qubits: int) -> np.ndarray:
    """Reduced state of one qubit from a symmetric-subspace density matrix.

    Permutation symmetry makes every single-qubit marginal equal, so the
    closed form below (diagonal weights (M-j)/M and j/M, one off-diagonal
    band) avoids the 2^M embedding.
    """
    m = num_qubits
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (m + 1, m + 1):
        raise DimensionError(f"expected a {m + 1}-dimensional symmetric state")
    diag = np.diagonal(rho)
    idx = np.arange(m + 1)
    out = np.zeros((2, 2), dtype=complex)
    out[0, 0] = (((m - idx) / m) * diag).sum()
    out[1, 1] = ((idx / m) * diag).sum()
    band = sum(math.sqrt((j + 1) * (m - j)) / m * rho[j, j + 1] for j in range(m))
    out[0, 1] = band
    out[1, 0] = np.conj(band)
    return out


def trace_one_qubit_css(rho: np.ndarray, num_qubits: int) -> np.ndarray:
    """Trace one qubit out of a symmetric state, staying in symmetric coordinates.

    Splitting off a qubit from the excitation-j basis vector carries weight
    sqrt((M-j)/M) on |0> and sqrt(j/M) on |1>, which gives the two-band
    contraction below.
    """
    m = num_qubits
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (m + 1, m + 1):
        raise DimensionError(f"expected a {m + 1}-dimensional symmetric state")
    out = np.zeros((m, m), dtype=complex)
    for r in range(m):
        for c in range(m):
            out[r, c] = (math.sqrt((m - r) * (m - c)) / m * rho[r, c]
                         + math.sqrt((r + 1) * (c + 1)) / m * rho[r + 1, c + 1])
    return out


def _trace_one_qubit_kraus(num_qubits: int) -> list[np.ndarray]:
    """Kraus pair of trace_one_qubit_css (split-off qubit measured in 0/1)."""
    m = num_qubits
    k0 = np.zeros((m, m + 1), dtype=complex)
    k1 = np.zeros((m, m + 1), dtype=complex)
    for j in range(m):
        k0[j, j] = math.sqrt((m - j) / m)
        k1[j, j + 1] = math.sqrt((j + 1) / m)
    return [k0, k1]


def clone_marginal(spec: ClonerSpec, psi: np.ndarray) -> DensityMatrix:
    """Single-clone reduced state for n_in copies of the pure input psi.

    For M = N+1 this equals eta |psi><psi| + (1-eta) I/2 with
    eta = (N/(N+1)) (N+3)/(N+2); the fidelity is input-independent for every
    (N, M).
    """
    u = build_cloner_isometry(spec)
    out = u.u @ css_input_coordinates(spec.n_in, psi)
    joint = np.outer(out, out.conj()).reshape(spec.dout, spec.denv,
                                              spec.dout, spec.denv)
    rho_b = np.einsum("bjcj->bc", joint)
    return DensityMatrix(single_qubit_marginal_css(rho_b, spec.m_out))


def environment_shrink_factors(spec: ClonerSpec) -> tuple[float, float]:
    """(eta, upsilon) for the N -> N+1 machine.

    eta scales the clone's Bloch vector, upsilon = N/(N+2) the environment's;
    eta > upsilon strictly for every N.
    """
    n = spec.n_in
    if spec.m_out != n + 1:
        raise ValidationError(
            f"shrink factors are defined for m_out = n_in + 1, got ({n}, {spec.m_out})")
    eta = (n / (n + 1)) * ((n + 3) / (n + 2))
    upsilon = n / (n + 2)
    return eta, upsilon


def one_to_m_degrading_coefficients(m: int) -> tuple[float, float]:
    """(a_M, b_M) mixing weights of the 1 -> M degrading decomposition.

    a_M = 1/D_M and b_M = (1/D_M)(M^2+M-2)/(M(M-1)) with D_M = M(M+1)/2;
    the ratio a_M/b_M stays below one and tends to one as M grows.
    """
    if m < 2:
        raise ValidationError(f"degrading coefficients need m >= 2, got {m}")
    delta = m * (m + 1) / 2
    a = 1.0 / delta
    b = (1.0 / delta) * (m * m + m - 2) / (m * (m - 1))
    return a, b


def traced_b_fractions(m: int) -> list[Fraction]:
    """Exact spectrum of the 1 -> M clone block after one qubit is traced out."""
    if m < 2:
        raise ValidationError(f"traced spectrum needs m >= 2, got {m}")
    delta = Fraction(m * (m + 1), 2)
    return [Fraction(m * m + m - 1 - j * (m + 2), 1) / (m * delta) for j in range(m)]


def traced_b_eigenvalues(m: int) -> list[float]:
    """Eigenvalues (m^2+m-1-j(m+2))/(m D_m), j = 0..m-1; equally spaced."""
    return [float(x) for x in traced_b_fractions(m)]


def beta_fractions(spec: ClonerSpec) -> list[Fraction]:
    """Exact beta_j = alpha_j (M-j)/M + alpha_{j+1} (j+1)/M, with the
    out-of-range alpha taken as zero."""
    m = spec.m_out
    alphas = alpha_fractions(spec) + [Fraction(0)]
    return [alphas[j] * Fraction(m - j, m) + alphas[j + 1] * Fraction(j + 1, m)
            for j in range(spec.m_out - spec.n_in + 1)]


def beta_coefficients(spec: ClonerSpec) -> list[float]:
    """Branch weights after one output qubit is traced out; sum to one and
    majorize the alpha weights."""
    return [float(x) for x in beta_fractions(spec)]


def majorizes(beta: list[float], alpha: list[float],
              slack: float = MAJORIZATION_SLACK) -> bool:
    """True when descending prefix sums of beta dominate those of alpha."""
    if len(beta) != len(alpha):
        raise DimensionError(
            f"majorization needs equal lengths, got {len(beta)} and {len(alpha)}")
    pb = np.cumsum(sorted(beta, reverse=True))
    pa = np.cumsum(sorted(alpha, reverse=True))
    return bool(np.all(pb >= pa - slack))


def cloner_capacity_closed_form(spec: ClonerSpec) -> float:
    """Quantum capacity log2((M+1)/(M-N+1)) in bits."""
    return math.log2((spec.m_out + 1) / (spec.m_out - spec.n_in + 1))


def degrading_map_1to2(shrink: float) -> tuple[np.ndarray, np.ndarray]:
    """Output-to-environment degrading candidate for the 1 -> 2 cloner.

    The map projects two physical qubits onto their symmetric subspace,
    traces the second, shrinks the Bloch vector by ``shrink`` and applies the
    spin flip y -> sy y^T sy.  Returns the map's matrix on the normalized
    maximally entangled test state together with its eigenvalue list; a
    negative eigenvalue means the candidate is not completely positive, which
    is reported rather than raised.  Shrink 2 sits exactly on the boundary.
    """
    if shrink <= 0:
        raise ValidationError(f"shrink factor must be positive, got {shrink}")
    lam = 1.0 / shrink
    sym = np.zeros((4, 4))
    sym[0, 0] = sym[3, 3] = 1.0
    half = np.zeros(4)
    half[1] = half[2] = math.sqrt(0.5)
    sym += np.outer(half, half)

    def act(x: np.ndarray) -> np.ndarray:
        x = sym @ x @ sym
        y = np.einsum("aibi->ab", x.reshape(2, 2, 2, 2))
        y = lam * y + (1 - lam) * np.trace(y) * np.eye(2) / 2
        return _SIGMA_Y @ y.T @ _SIGMA_Y.conj().T

    jami = np.zeros((8, 8), dtype=complex)
    for row in range(4):
        for col in range(4):
            unit = np.zeros((4, 4), dtype=complex)
            unit[row, col] = 1.0
            jami += 0.25 * np.kron(act(unit), unit)
    return jami, np.linalg.eigvalsh(jami)


def conjugate_degrading_map_1to2() -> KrausChannel:
    """Degrading map of the 1 -> 2 cloner, valid up to output conjugation.

    Traces one clone out of the symmetric two-qubit output, then shrinks the
    Bloch vector by two.  Composed after the cloner and conjugated entrywise,
    the result reproduces the complementary channel; on input |0> the
    environment state diag(2/3, 1/3) comes out exactly.
    """
    dep = [math.sqrt(5 / 8) * np.eye(2, dtype=complex),
           math.sqrt(1 / 8) * _SIGMA_X,
           math.sqrt(1 / 8) * _SIGMA_Y,
           math.sqrt(1 / 8) * _SIGMA_Z]
    kraus = [d @ t for d in dep for t in _trace_one_qubit_kraus(2)]
    return KrausChannel(din=3, dout=2, kraus=tuple(kraus))
