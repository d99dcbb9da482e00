"""Shared random-object builders for the test suite.

Everything is seeded by the caller so failures replay exactly.
"""

import numpy as np

from conjcap.channels import KrausChannel, StinespringIsometry, stinespring_to_kraus


def haar_isometry(rng: np.random.Generator, din: int, dout: int,
                  denv: int) -> StinespringIsometry:
    """Random channel dilation: first din columns of a Haar unitary on the
    joint output space."""
    n = dout * denv
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    return StinespringIsometry(din, dout, denv, q[:, :din])


def haar_channel(rng: np.random.Generator, din: int, dout: int,
                 denv: int) -> KrausChannel:
    return stinespring_to_kraus(haar_isometry(rng, din, dout, denv))


def ginibre_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / rho.trace()


def random_pure_qubit(rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    return v / np.linalg.norm(v)
