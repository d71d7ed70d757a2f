"""Spectral synthesis: weights, recurrence, reconstruction, eigenvectors."""

import numpy as np
import pytest
import scipy.linalg

from domechain.inverse_eigen import (
    ReconstructionError,
    compute_weights,
    eigenvectors,
    polynomial_table,
    reconstruct,
)
from domechain.models import DomeParams, dome_hamiltonian
from domechain.spectrum import Spectrum, dome_spectrum


def test_weights_positive_and_normalized():
    ws = compute_weights(dome_spectrum(9, 3))
    assert np.all(ws.weights > 0)
    assert abs(ws.weights.sum() - 1.0) < 1e-12


def test_weights_two_site():
    ws = compute_weights(Spectrum(values=np.array([-0.5, 0.5])))
    np.testing.assert_allclose(ws.weights, [0.5, 0.5], atol=1e-15)


def test_weights_line_three_site():
    # lambda = (-1, 0, 1): derivative magnitudes (2, 1, 2) invert to
    # weights (1/4, 1/2, 1/4), the squared end components of the chain.
    ws = compute_weights(Spectrum(values=np.array([-1.0, 0.0, 1.0])))
    np.testing.assert_allclose(ws.weights, [0.25, 0.5, 0.25], atol=1e-14)


def test_weights_symmetric_spectrum_gives_symmetric_weights():
    ws = compute_weights(Spectrum(values=np.array([-3.0, -1.0, 1.0, 3.0])))
    np.testing.assert_allclose(ws.weights, ws.weights[::-1], atol=1e-14)


def test_reconstruct_two_site_example():
    ham = reconstruct(Spectrum(values=np.array([-0.5, 0.5])))
    np.testing.assert_allclose(ham.omegas, [0.0, 0.0], atol=1e-12)
    np.testing.assert_allclose(ham.couplings, [0.5], atol=1e-12)


def test_reconstruct_matches_closed_forms():
    for N in range(2, 11):
        for m in (0, 1, 2, 5, 10):
            ham = reconstruct(dome_spectrum(N, m))
            ref = dome_hamiltonian(DomeParams(N=N, m=m))
            scale = max(1.0, np.max(np.abs(ref.omegas)), np.max(np.abs(ref.couplings)))
            assert np.max(np.abs(ham.omegas - ref.omegas)) / scale < 1e-9
            assert np.max(np.abs(ham.couplings - ref.couplings)) / scale < 1e-9


def test_reconstruct_round_trip_eigenvalues():
    for N in (2, 7, 16, 24):
        for m in (0, 2, 10, 102):
            spec = dome_spectrum(N, m)
            ham = reconstruct(spec)
            ev = scipy.linalg.eigh_tridiagonal(
                ham.omegas, ham.couplings, eigvals_only=True
            )
            scale = max(1.0, float(np.max(np.abs(spec.values))))
            assert np.max(np.abs(ev - spec.values)) / scale < 1e-8


def test_reconstruct_is_mirror_symmetric():
    for N in (5, 8, 13):
        ham = reconstruct(dome_spectrum(N, 4))
        assert ham.is_mirror_symmetric(1e-9)
        assert np.all(ham.couplings > 0)


def test_reconstruct_carries_rate():
    ham = reconstruct(dome_spectrum(5, 2, J=3.0e6))
    assert ham.rate_J == 3.0e6


def test_reconstruct_single_eigenvalue():
    ham = reconstruct(Spectrum(values=np.array([2.5])))
    np.testing.assert_allclose(ham.omegas, [2.5])
    assert ham.couplings.size == 0


def test_reconstruct_arbitrary_spectrum_round_trip():
    rng = np.random.default_rng(7)
    for _ in range(10):
        vals = np.sort(rng.normal(0.0, 3.0, 6))
        if np.min(np.diff(vals)) < 1e-3:
            continue
        ham = reconstruct(Spectrum(values=vals))
        ev = scipy.linalg.eigh_tridiagonal(ham.omegas, ham.couplings, eigvals_only=True)
        np.testing.assert_allclose(ev, vals, atol=1e-8, rtol=1e-8)


def test_polynomial_table_weighted_orthonormality():
    ws = compute_weights(dome_spectrum(8, 2))
    table = polynomial_table(ws)
    gram = (table.normalized * ws.weights[None, :]) @ table.normalized.T
    np.testing.assert_allclose(gram, np.eye(8), atol=1e-9)


def test_polynomial_table_monic_overflow_guard():
    ws = compute_weights(dome_spectrum(64, 1000))
    table = polynomial_table(ws)
    with pytest.raises(OverflowError):
        table.monic_values(63)


def test_eigenvectors_orthonormal_rows():
    spec = dome_spectrum(7, 2)
    ws = compute_weights(spec)
    ham = reconstruct(spec)
    basis = eigenvectors(ham, ws)
    np.testing.assert_allclose(basis.matrix @ basis.matrix.T, np.eye(7), atol=1e-9)


def test_eigenvectors_diagonalize_the_chain():
    spec = dome_spectrum(6, 3)
    ws = compute_weights(spec)
    ham = reconstruct(spec)
    W = eigenvectors(ham, ws).matrix
    H = ham.matrix()
    np.testing.assert_allclose(W @ H @ W.T, np.diag(spec.values), atol=1e-8)


def test_eigenvectors_first_column_is_sqrt_weight():
    spec = dome_spectrum(5, 2)
    ws = compute_weights(spec)
    basis = eigenvectors(reconstruct(spec), ws)
    np.testing.assert_allclose(basis.matrix[:, 0], np.sqrt(ws.weights), atol=1e-10)


def test_eigenvectors_end_site_sign_alternation():
    # End-site coefficients alternate in sign across ascending eigenvalues.
    spec = dome_spectrum(6, 2)
    ws = compute_weights(spec)
    basis = eigenvectors(reconstruct(spec), ws)
    last = basis.matrix[:, -1]
    assert np.all(last[::2] * last[1::2] < 0)


def test_eigenvectors_reject_mismatched_pair():
    ws = compute_weights(dome_spectrum(5, 2))
    wrong = dome_hamiltonian(DomeParams(N=5, m=4))
    with pytest.raises(ValueError):
        eigenvectors(wrong, ws)


def test_reconstruction_error_carries_degree():
    err = ReconstructionError("collapsed", degree=3)
    assert err.degree == 3
