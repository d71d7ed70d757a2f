"""Target spectra for state-transfer chains and their transfer conditions.

A chain supports perfect state transfer (PST) at time tau when every
adjacent eigenvalue gap times tau is an odd multiple of pi.  Fractional
state transfer (FST) generalizes this: the end-site amplitudes at tau
form a fixed superposition parameterized by a mixing angle theta and a
relative phase psi.  Both conditions are properties of the spectrum
alone once the Hamiltonian is mirror symmetric.

The dome spectrum is the one-parameter family

    lambda_s = s - (N + 1)/2 + (s - 2)(s - 1) m / 2,   s = 1..N,

in units of the overall rate J.  m = 0 recovers the linear spectrum of
the standard engineered-coupling chain; even m preserves PST at half
period, and m = 2 (mod 4) additionally yields FST with theta = pi/4 at
quarter period.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Spectrum",
    "FstPhase",
    "TransferCapability",
    "dome_spectrum",
    "check_pst_spacing",
    "solve_fst_phase",
    "classify_m",
]

# Phase-matching tolerance for the PST/FST predicates.  Dome spectra are
# integers or half-integers in units of J, so roundoff is the only noise.
PHASE_TOL = 1e-9


class TransferCapability(enum.Enum):
    """Transfer behavior of a dome chain as a function of the shape parameter m."""

    PST_AND_FST = "pst_and_fst"
    PST_ONLY = "pst_only"
    PERIODIC_ONLY = "periodic_only"


@dataclass(frozen=True)
class Spectrum:
    """Ordered eigenvalue list in units of the rate J.

    values must be strictly increasing; rate_J carries the physical scale
    in rad/s (1.0 means natural units).
    """

    values: np.ndarray
    rate_J: float = 1.0

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1 or vals.size < 1:
            raise ValueError("spectrum must be a non-empty 1-D array")
        if not np.all(np.diff(vals) > 0):
            raise ValueError("spectrum values must be strictly increasing")
        if not self.rate_J > 0:
            raise ValueError("rate_J must be positive")

    @property
    def n(self) -> int:
        return int(self.values.size)

    def physical_values(self) -> np.ndarray:
        """Eigenvalues in rad/s."""
        return self.values * self.rate_J


@dataclass(frozen=True)
class FstPhase:
    """Solution of the end-site transfer phase equations at a fixed time.

    theta in [0, pi/2] is the mixing angle between staying and transferring;
    psi is the relative phase of the transferred component and phi a global
    phase.  theta = 0 describes PST (psi folded into phi by convention),
    theta = pi/2 describes full return.
    """

    theta: float
    psi: float
    phi: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta <= math.pi / 2 + 1e-12:
            raise ValueError("theta outside [0, pi/2]")


def dome_spectrum(N: int, m: int, J: float = 1.0) -> Spectrum:
    """Dome spectrum for an N-site chain with shape parameter m.

    Adjacent gaps are 1 + (s - 1) m in units of J, so the spectrum is
    strictly increasing for every m >= 0 and the evolution period is
    T = 2 pi / J.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if m < 0 or m != int(m):
        raise ValueError("m must be a non-negative integer")
    s = np.arange(1, N + 1, dtype=float)
    vals = s - (N + 1) / 2.0 + (s - 2.0) * (s - 1.0) * m / 2.0
    return Spectrum(values=vals, rate_J=J)


def check_pst_spacing(spec: Spectrum, tau: float) -> bool:
    """True when every adjacent gap times tau is an odd multiple of pi.

    tau is physical time; gaps are scaled by spec.rate_J before the check.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    gaps = np.diff(spec.physical_values())
    if gaps.size == 0:
        return True
    ratio = gaps * tau / math.pi
    return bool(np.all(np.abs(np.mod(ratio, 2.0) - 1.0) < PHASE_TOL))


def _class_signs(N: int) -> np.ndarray:
    # Sign of the end-site eigenvector component for a mirror-symmetric
    # chain: (-1)^(N+s) with s = 1..N and eigenvalues ascending.
    s = np.arange(1, N + 1)
    return np.where((N + s) % 2 == 0, 1.0, -1.0)


def solve_fst_phase(spec: Spectrum, tau: float) -> FstPhase | None:
    """Solve e^{-i lambda_s tau} = e^{i phi}(sin theta + e^{i psi} cos theta c_s).

    c_s = (-1)^(N+s) is the mirror end-site sign pattern.  The two residue
    classes of c_s each pin one complex number; the pair is solved as a
    2x2 linear system and the solution is verified against all N
    constraints.  Returns None when no (theta, psi, phi) satisfies them.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    lam = spec.physical_values()
    N = lam.size
    z = np.exp(-1j * lam * tau)
    signs = _class_signs(N)
    plus = z[signs > 0]
    minus = z[signs < 0]
    # Within-class consistency: each class must collapse to a single value.
    if plus.size and np.max(np.abs(plus - plus[0])) > PHASE_TOL:
        return None
    if minus.size and np.max(np.abs(minus - minus[0])) > PHASE_TOL:
        return None
    if not plus.size or not minus.size:
        # N = 1 or single-class spectra carry no transfer information.
        return None
    A, B = plus[0], minus[0]
    u = (A + B) / 2.0  # e^{i phi} sin(theta)
    v = (A - B) / 2.0  # e^{i phi} e^{i psi} cos(theta)
    if abs(abs(u) ** 2 + abs(v) ** 2 - 1.0) > 1e-8:
        return None
    theta = math.atan2(abs(u), abs(v))
    if abs(u) < PHASE_TOL:
        sol = FstPhase(theta=0.0, psi=0.0, phi=float(np.angle(v)))
    elif abs(v) < PHASE_TOL:
        sol = FstPhase(theta=math.pi / 2, psi=0.0, phi=float(np.angle(u)))
    else:
        phi = float(np.angle(u))
        psi = float(np.angle(v) - phi)
        psi = (psi + math.pi) % (2 * math.pi) - math.pi
        sol = FstPhase(theta=theta, psi=psi, phi=phi)
    # Final verification against every constraint.
    model = np.exp(1j * sol.phi) * (
        math.sin(sol.theta) + np.exp(1j * sol.psi) * math.cos(sol.theta) * signs
    )
    if np.max(np.abs(model - z)) > 10 * PHASE_TOL:
        return None
    return sol


def classify_m(m: int) -> TransferCapability:
    """Transfer capability of the dome family by shape parameter.

    m = 2 (mod 4) gives PST at half period plus FST at quarter period.
    Other even m (including 0) give PST only; odd m only revives at the
    full period.
    """
    if m < 0 or m != int(m):
        raise ValueError("m must be a non-negative integer")
    m = int(m)
    if m % 2 == 1:
        return TransferCapability.PERIODIC_ONLY
    if m % 4 == 2:
        return TransferCapability.PST_AND_FST
    return TransferCapability.PST_ONLY
