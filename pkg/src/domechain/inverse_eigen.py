"""Mirror-symmetric chain synthesis from a prescribed spectrum.

Given N distinct eigenvalues, a unique mirror-symmetric tridiagonal
matrix with positive couplings shares them.  The construction runs a
discrete orthogonal-polynomial recurrence over the spectral nodes
lambda_s with weights alpha_s:

    (p, q) = sum_s alpha_s p(lambda_s) q(lambda_s)

    P_n = (lambda - omega_n) P_{n-1} - J_{n-1}^2 P_{n-2}

where omega_n is the weighted Rayleigh quotient of P_{n-1} and
J_n = ||P_n|| / ||P_{n-1}||.  The weights follow from the node polynomial
P_N(lambda) = prod_s (lambda - lambda_s):

    alpha_s  proportional to  1 / |P_N'(lambda_s)|,

normalized to unit sum; for mirror-symmetric chains they are exactly the
squared first components of the eigenvectors.

Monic polynomial values overflow quickly on wide spectra, so the
recurrence is carried entirely in normalized form: the stored table rows
are P_n / ||P_n|| and the norms are tracked as logarithms.  This keeps
every intermediate O(1) and the normalized rows are exactly the
eigenvector coefficient functions chi_{n+1}(lambda_s).

Mirror symmetry makes the second half of the coefficients a reflection
of the first, so only ceil(N/2) recurrence steps are taken; the result
is then verified by re-diagonalization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .chain import TridiagonalHamiltonian
from .spectrum import Spectrum

__all__ = [
    "WeightedSpectrum",
    "PolynomialTable",
    "EigenBasis",
    "ReconstructionError",
    "compute_weights",
    "reconstruct",
    "eigenvectors",
]


class ReconstructionError(RuntimeError):
    """Numerical breakdown of the synthesis recurrence.

    degree marks the first polynomial degree at which the recurrence lost
    positivity or the synthesized chain failed re-diagonalization.
    """

    def __init__(self, message: str, degree: int | None = None):
        super().__init__(message)
        self.degree = degree


@dataclass(frozen=True)
class WeightedSpectrum:
    """Spectrum plus the inner-product weights alpha_s (positive, unit sum)."""

    spectrum: Spectrum
    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        if w.shape != self.spectrum.values.shape:
            raise ValueError("weights must match the spectrum length")
        if not np.all(w > 0):
            raise ValueError("weights must be strictly positive")
        if abs(w.sum() - 1.0) > 1e-9:
            raise ValueError("weights must sum to 1")


@dataclass(frozen=True)
class PolynomialTable:
    """Normalized node evaluations of the recurrence polynomials.

    normalized[n] holds P_n(lambda_s) / ||P_n|| for n = 0..N-1 (row n, all
    nodes s); log_norms[n] = ln ||P_n||.  Row n equals the eigenvector
    coefficient function chi_{n+1} at the nodes.  Monic values are
    exp(log_norms[n]) * normalized[n] and may overflow; callers that need
    them should work in logs.
    """

    nodes: np.ndarray
    normalized: np.ndarray
    log_norms: np.ndarray

    def monic_values(self, n: int) -> np.ndarray:
        """Raw P_n at the nodes; raises OverflowError if not representable."""
        ln = self.log_norms[n]
        if ln > 700.0:
            raise OverflowError(
                f"monic values of degree {n} exceed double range (log norm {ln:.1f})"
            )
        return np.exp(ln) * self.normalized[n]


@dataclass(frozen=True)
class EigenBasis:
    """Eigenvector matrix W with rows indexed by eigenvalue, columns by site.

    W[s, n] = sqrt(alpha_s) chi_{n+1}(lambda_s); rows are orthonormal and
    row s is the eigenvector of eigenvalue lambda_s.
    """

    weighted: WeightedSpectrum
    matrix: np.ndarray


def compute_weights(spec: Spectrum) -> WeightedSpectrum:
    """Inner-product weights from the node-polynomial derivative.

    P_N'(lambda_s) = prod_{r != s} (lambda_s - lambda_r); the weights are
    1/|P_N'| normalized to unit sum.  Differences are computed pairwise,
    in logs, so wide spectra do not overflow.
    """
    lam = spec.values
    N = lam.size
    if N == 1:
        return WeightedSpectrum(spectrum=spec, weights=np.ones(1))
    diff = lam[:, None] - lam[None, :]
    np.fill_diagonal(diff, 1.0)
    if np.any(diff == 0.0):
        raise ValueError("repeated eigenvalues: weights are undefined")
    log_abs = np.sum(np.log(np.abs(diff)), axis=1)
    log_w = -log_abs
    log_w -= log_w.max()
    w = np.exp(log_w)
    return WeightedSpectrum(spectrum=spec, weights=w / w.sum())


def _recurrence(ws: WeightedSpectrum, steps: int):
    """Run the normalized recurrence for a given number of steps.

    Returns (omegas, couplings, rows, log_norms) with rows[n] the
    normalized P_n at the nodes.  Raises ReconstructionError when a norm
    collapses before the final degree.
    """
    lam = ws.spectrum.values
    a = ws.weights
    N = lam.size
    span = max(1.0, float(np.max(np.abs(lam))))
    rows = [np.ones(N)]
    log_norms = [0.0]  # ||P_0|| = sqrt(sum alpha) = 1
    omegas = []
    couplings = []
    p_prev = np.zeros(N)
    p_cur = rows[0]
    j_prev = 0.0
    for n in range(1, steps + 1):
        om = float(np.sum(a * lam * p_cur**2))
        omegas.append(om)
        if n <= N - 1:
            q = (lam - om) * p_cur - j_prev * p_prev
            norm_sq = float(np.sum(a * q * q))
            if not norm_sq > (1e-14 * span) ** 2:
                raise ReconstructionError(
                    f"recurrence norm collapsed at degree {n}", degree=n
                )
            jn = float(np.sqrt(norm_sq))
            couplings.append(jn)
            p_prev, p_cur, j_prev = p_cur, q / jn, jn
            rows.append(p_cur)
            log_norms.append(log_norms[-1] + np.log(jn))
    return np.array(omegas), np.array(couplings), rows, np.array(log_norms)


def reconstruct(spec: Spectrum, *, validate: bool = True) -> TridiagonalHamiltonian:
    """Synthesize the mirror-symmetric chain with the prescribed spectrum.

    Only ceil(N/2) recurrence steps are taken; the remaining coefficients
    follow by reflection (omega_n = omega_{N+1-n}, J_n = J_{N-n}).  With
    validate=True the output is re-diagonalized and required to match the
    input spectrum to 1e-8 relative, which doubles as a breakdown check.
    """
    ws = compute_weights(spec)
    N = spec.n
    if N == 1:
        return TridiagonalHamiltonian(
            omegas=spec.values.copy(), couplings=np.zeros(0), rate_J=spec.rate_J
        )
    half = (N + 1) // 2
    omegas_half, couplings_half, _, _ = _recurrence(ws, half)
    omegas = np.zeros(N)
    omegas[:half] = omegas_half
    omegas[half:] = omegas_half[: N - half][::-1]
    couplings = np.zeros(N - 1)
    keep = min(len(couplings_half), N - 1)
    couplings[:keep] = couplings_half[:keep]
    half_c = (N - 1 + 1) // 2
    couplings[half_c:] = couplings[: (N - 1) - half_c][::-1]
    ham = TridiagonalHamiltonian(omegas=omegas, couplings=couplings, rate_J=spec.rate_J)
    if validate:
        ev = scipy.linalg.eigh_tridiagonal(omegas, couplings, eigvals_only=True)
        scale = max(1.0, float(np.max(np.abs(spec.values))))
        err = float(np.max(np.abs(ev - spec.values))) / scale
        if err > 1e-8:
            raise ReconstructionError(
                f"synthesized chain eigenvalues deviate by {err:.2e} relative; "
                f"spectrum outside the validated double-precision range",
                degree=N,
            )
    return ham


def polynomial_table(ws: WeightedSpectrum) -> PolynomialTable:
    """Full normalized table of degrees 0..N-1 at the nodes."""
    N = ws.spectrum.n
    _, _, rows, log_norms = _recurrence(ws, N)
    return PolynomialTable(
        nodes=ws.spectrum.values.copy(),
        normalized=np.vstack(rows),
        log_norms=log_norms,
    )


def eigenvectors(ham: TridiagonalHamiltonian, ws: WeightedSpectrum) -> EigenBasis:
    """Eigenvector matrix from the chain coefficients and the weights.

    Uses the site recurrence J_n chi_{n+1} = (lambda - omega_n) chi_n
    - J_{n-1} chi_{n-1} with chi_1 = 1, then scales rows by
    sqrt(alpha_s).  The pair is rejected when the eigen-residual
    ||H W^T - W^T Lambda|| exceeds tolerance, which catches mismatched
    (ham, weights) inputs.
    """
    lam = ws.spectrum.values
    a = ws.weights
    N = ham.n
    if lam.size != N:
        raise ValueError("spectrum size does not match the chain size")
    om = ham.omegas
    J = ham.couplings
    chi = np.zeros((N, N))
    chi[:, 0] = 1.0
    if N > 1:
        chi[:, 1] = (lam - om[0]) / J[0]
    for n in range(2, N):
        chi[:, n] = ((lam - om[n - 1]) * chi[:, n - 1] - J[n - 2] * chi[:, n - 2]) / J[n - 1]
    W = np.sqrt(a)[:, None] * chi
    H = ham.matrix()
    residual = np.max(np.abs(H @ W.T - W.T * lam[None, :]))
    scale = max(1.0, float(np.max(np.abs(lam))))
    if residual / scale > 1e-8:
        raise ValueError(
            f"inconsistent chain/weights pair: eigen-residual {residual:.2e}"
        )
    return EigenBasis(weighted=ws, matrix=W)
