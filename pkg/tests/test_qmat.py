import numpy as np
import pytest

from conjcap.errors import DimensionError, ValidationError
from conjcap.qmat import (
    DensityMatrix,
    as_density,
    conjugate,
    entropy_of_spectrum,
    hermitian_eigensystem,
    partial_trace,
    partial_transpose,
    tensor_product,
    von_neumann_entropy,
)

from conftest import ginibre_state


def test_density_matrix_validation():
    DensityMatrix(np.eye(2) / 2)
    with pytest.raises(ValidationError):
        DensityMatrix(np.array([[0.5, 0.5], [0.0, 0.5]]))  # not Hermitian
    with pytest.raises(ValidationError):
        DensityMatrix(np.eye(2))  # trace 2
    with pytest.raises(ValidationError):
        DensityMatrix(np.diag([1.5, -0.5]))  # negative eigenvalue
    with pytest.raises(DimensionError):
        DensityMatrix(np.zeros((2, 3)))


def test_as_density_accepts_both_forms():
    rho = np.eye(3) / 3
    assert np.array_equal(as_density(rho), as_density(DensityMatrix(rho)))


def test_partial_trace_against_kron():
    rng = np.random.default_rng(5)
    a = ginibre_state(rng, 3)
    b = ginibre_state(rng, 4)
    joint = np.kron(a, b)
    assert np.abs(partial_trace(joint, (3, 4), keep=(0,)) - a).max() < 1e-12
    assert np.abs(partial_trace(joint, (3, 4), keep=(1,)) - b).max() < 1e-12
    # keep order is preserved, not sorted
    c = ginibre_state(rng, 2)
    swapped = partial_trace(np.kron(joint, c), (3, 4, 2), keep=(2, 0))
    assert np.abs(swapped - np.kron(c, a)).max() < 1e-12


def test_partial_trace_full_keep_is_identity():
    rng = np.random.default_rng(6)
    joint = ginibre_state(rng, 6)
    assert np.abs(partial_trace(joint, (2, 3), keep=(0, 1)) - joint).max() == 0


def test_partial_transpose_involution_and_product():
    rng = np.random.default_rng(7)
    a = ginibre_state(rng, 2)
    b = ginibre_state(rng, 3)
    joint = np.kron(a, b)
    pt = partial_transpose(joint, (2, 3), 0)
    assert np.abs(pt - np.kron(a.T, b)).max() < 1e-14
    assert np.abs(partial_transpose(pt, (2, 3), 0) - joint).max() == 0
    with pytest.raises(DimensionError):
        partial_transpose(joint, (2, 3), 2)


def test_tensor_product_and_conjugate():
    x = np.array([[0.0, 1.0j], [-1.0j, 0.0]])
    y = np.eye(2)
    assert np.abs(tensor_product(x, y) - np.kron(x, y)).max() == 0
    assert np.abs(conjugate(x) - x.conj()).max() == 0


def test_entropy_values():
    assert von_neumann_entropy(np.eye(2) / 2) == pytest.approx(1.0, abs=1e-12)
    assert von_neumann_entropy(np.diag([1.0, 0.0])) == pytest.approx(0.0, abs=1e-12)
    assert von_neumann_entropy(np.eye(8) / 8) == pytest.approx(3.0, abs=1e-12)
    # clip guards against harmless negative rounding noise
    assert entropy_of_spectrum(np.array([1.0, -1e-15])) == pytest.approx(0.0, abs=1e-12)


def test_hermitian_eigensystem_descending_and_consistent():
    rng = np.random.default_rng(8)
    g = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    x = g + g.conj().T
    w, v = hermitian_eigensystem(x)
    assert np.all(np.diff(w) <= 0)
    assert np.abs(v @ np.diag(w) @ v.conj().T - x).max() < 1e-10
