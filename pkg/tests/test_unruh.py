import math

import numpy as np
import pytest

from conjcap.errors import DimensionError, ValidationError
from conjcap.qmat import entropy_of_spectrum
from conjcap.unruh import (
    BlockWeights,
    UnruhSpec,
    block_weights,
    su2_generators,
    truncation_k,
    unruh_block,
    unruh_capacity,
    unruh_capacity_entropy_route,
    unruh_outputs_maxmixed,
    unruh_sweep,
    write_sweep_csv,
)


def test_su2_qubit_representation():
    jx, jy, jz = su2_generators(2)
    assert np.abs(jx - np.array([[0, 0.5], [0.5, 0]])).max() < 1e-15
    assert np.abs(jy - np.array([[0, -0.5j], [0.5j, 0]])).max() < 1e-15
    assert np.abs(jz - np.diag([0.5, -0.5])).max() < 1e-15


def test_su2_commutators_and_casimir():
    for dim in (2, 3, 5, 8):
        jx, jy, jz = su2_generators(dim)
        assert np.abs(jz - np.diag(np.diagonal(jz))).max() == 0
        assert np.diagonal(jz)[0] == pytest.approx((dim - 1) / 2)
        assert np.abs(jx @ jy - jy @ jx - 1j * jz).max() < 1e-12
        assert np.abs(jy @ jz - jz @ jy - 1j * jx).max() < 1e-12
        assert np.abs(jz @ jx - jx @ jz - 1j * jy).max() < 1e-12
        j = (dim - 1) / 2
        casimir = jx @ jx + jy @ jy + jz @ jz
        assert np.abs(casimir - j * (j + 1) * np.eye(dim)).max() < 1e-12
    with pytest.raises(DimensionError):
        su2_generators(1)


def test_unruh_block_spectrum():
    # (k+1)/2 I + n.J has flat-spaced spectrum 0..k+1 along any direction
    for k in (0, 1, 4):
        for n_hat in (np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0]),
                      np.array([1.0, 1.0, 1.0]) / math.sqrt(3)):
            block = unruh_block(n_hat, k)
            eigs = np.sort(np.linalg.eigvalsh(block))
            assert np.abs(eigs - np.arange(k + 2)).max() < 1e-12
            assert abs(np.trace(block).real - (k + 1) * (k + 2) / 2) < 1e-12
    with pytest.raises(ValidationError):
        unruh_block(np.array([1.0, 1.0, 0.0]), 1)
    with pytest.raises(DimensionError):
        unruh_block(np.ones(2), 1)


def test_block_weights():
    w = block_weights(0.5, 3)
    assert w == BlockWeights(k=3, t_k=0.125 ** 1 * 0.5 ** 3, s_k=2.0, s_tilde_k=2.5)
    assert w.t_k == pytest.approx((1 - 0.5) ** 3 * 0.5 ** 3)
    with pytest.raises(ValidationError):
        block_weights(0.5, -1)
    with pytest.raises(ValidationError):
        block_weights(1.0, 0)


def test_truncation_index_is_certified():
    # frozen values for the default tail tolerance
    assert UnruhSpec(0.01).k_max == 6
    assert UnruhSpec(0.5).k_max == 42
    assert UnruhSpec(0.9).k_max == 268
    assert UnruhSpec(0.99).k_max == 2586
    # truncating 50 blocks later moves the value by less than the tolerance
    for z in (0.2, 0.6, 0.9):
        k = truncation_k(z, 1e-12)
        full = unruh_capacity(z, 1e-12)
        longer = _series(z, k + 50)
        assert abs(full - longer) < 1e-12


def _series(z: float, k_max: int) -> float:
    total = 0.0
    for k in range(k_max + 1):
        total += z ** k * (k + 1) * (k + 2) * math.log2((k + 2) / (k + 1))
    return (1 - z) ** 3 / 2 * total


def test_capacity_frozen_values():
    assert unruh_capacity(0.01) == pytest.approx(0.987571444574, abs=1e-9)
    assert unruh_capacity(0.5) == pytest.approx(0.4357632173757913, abs=1e-12)
    assert unruh_capacity(0.9) == pytest.approx(0.075494103201, abs=1e-9)
    assert unruh_capacity(0.99) == pytest.approx(0.007249052235, abs=1e-9)
    with pytest.raises(ValidationError):
        unruh_capacity(0.0)
    with pytest.raises(ValidationError):
        unruh_capacity(1.0)


def test_capacity_routes_agree():
    for z in (0.1, 0.3, 0.5, 0.7, 0.9):
        a = unruh_capacity(z)
        b = unruh_capacity_entropy_route(z)
        assert abs(a - b) < 1e-10


def test_dense_route_matches_series():
    z = 0.5
    tau_b, tau_e = unruh_outputs_maxmixed(z, 42)
    q = entropy_of_spectrum(np.diagonal(tau_b).real) \
        - entropy_of_spectrum(np.diagonal(tau_e).real)
    assert abs(q - unruh_capacity(z)) < 1e-9


def test_dense_outputs_structure():
    z = 0.3
    k_max = 5
    tau_b, tau_e = unruh_outputs_maxmixed(z, k_max)
    assert tau_b.shape == ((k_max + 1) * (k_max + 4) // 2,) * 2
    assert tau_e.shape == ((k_max + 1) * (k_max + 2) // 2,) * 2
    # block k occupies k+2 (system) and k+1 (environment) flat diagonal slots
    w = block_weights(z, 0)
    assert tau_b[0, 0].real == pytest.approx(w.t_k * 0.5)
    assert tau_e[0, 0].real == pytest.approx(w.t_k * 1.0)
    # truncated traces approach one from below
    assert np.trace(tau_b).real < 1.0
    assert np.trace(tau_e).real < 1.0
    assert np.trace(tau_b).real > 0.98
    with pytest.raises(DimensionError):
        unruh_outputs_maxmixed(0.99, 2586)


def test_capacity_limits():
    assert abs(unruh_capacity(1e-6) - 1.0) < 1e-4
    assert unruh_capacity(0.999) < 1e-3


def test_sweep_shape_and_convexity():
    rows = unruh_sweep(0.1, 0.9, 33)
    assert len(rows) == 33
    assert rows[0][0] == pytest.approx(0.1)
    assert rows[-1][0] == pytest.approx(0.9)
    qs = [q for _, q in rows]
    assert all(a > b for a, b in zip(qs, qs[1:]))
    second = np.diff(qs, n=2)
    assert second.min() > -1e-9
    with pytest.raises(ValidationError):
        unruh_sweep(0.5, 0.4, 10)
    with pytest.raises(ValidationError):
        unruh_sweep(0.0, 0.5, 10)
    with pytest.raises(ValidationError):
        unruh_sweep(0.1, 0.9, 1)


def test_sweep_csv_round_trip(tmp_path):
    rows = unruh_sweep(0.2, 0.8, 7)
    path = str(tmp_path / "sweep.csv")
    write_sweep_csv(rows, path)
    lines = open(path).read().splitlines()
    assert lines[0] == "z,Q_bits"
    assert len(lines) == 8
    for (z, q), line in zip(rows, lines[1:]):
        zs, qs = line.split(",")
        assert float(zs) == z
        assert float(qs) == q
