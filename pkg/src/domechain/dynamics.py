"""Closed and open dynamics in the vacuum-plus-one-excitation subspace.

States live in dimension D + 1 where D is the site count: index 0 is the
vacuum (all qubits down) and index n >= 1 is the single excitation on
site n.  Excitation-conserving Hamiltonians act on the site block only,
so closed evolution diagonalizes the D x D block once and leaves the
vacuum amplitude untouched.

Open dynamics integrates the master equation

    drho/dt = -i [H, rho] + sum_n (1/T1) D[|0><n|] rho
                          + sum_n (1/(2 Tphi)) D[Z_n] rho

with D[L] rho = L rho L+ - {L+ L, rho}/2 and Z_n the qubit-n parity
operator (diagonal, +1 on site n, -1 elsewhere including vacuum).  Per
site this reproduces the usual rates: populations relax at 1/T1 and
single-qubit coherences dephase at 1/Tphi on top of the 1/(2 T1)
relaxation contribution.  The integrator is an adaptive 4th/5th-order
explicit scheme (solve_ivp RK45) on the vectorized density matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

__all__ = [
    "DecoherenceConfig",
    "Trajectory",
    "ClosedPropagator",
    "vacuum_state",
    "site_state",
    "eigendecompose",
    "evolve_closed",
    "evolve_lindblad",
    "populations",
    "default_time_grid",
]

# Points per period on default output grids; dense enough for plotting
# the fastest dome modes used in practice.
POINTS_PER_PERIOD = 401


def vacuum_state(n_sites: int) -> np.ndarray:
    psi = np.zeros(n_sites + 1, dtype=complex)
    psi[0] = 1.0
    return psi


def site_state(n_sites: int, site: int) -> np.ndarray:
    """Single excitation on 1-based site index."""
    if not 1 <= site <= n_sites:
        raise ValueError("site index out of range")
    psi = np.zeros(n_sites + 1, dtype=complex)
    psi[site] = 1.0
    return psi


@dataclass(frozen=True)
class DecoherenceConfig:
    """Uniform per-site relaxation and pure-dephasing times in seconds.

    None disables the corresponding channel.
    """

    t1: float | None = None
    t_phi: float | None = None

    def __post_init__(self) -> None:
        for name, val in (("t1", self.t1), ("t_phi", self.t_phi)):
            if val is not None and not val > 0:
                raise ValueError(f"{name} must be positive when given")

    @property
    def gamma1(self) -> float:
        return 0.0 if self.t1 is None else 1.0 / self.t1

    @property
    def gamma_phi(self) -> float:
        return 0.0 if self.t_phi is None else 0.5 / self.t_phi


@dataclass(frozen=True)
class Trajectory:
    """Time series of states (closed) or density matrices (open)."""

    times: np.ndarray
    states: np.ndarray | None = None
    rhos: np.ndarray | None = None

    def site_populations(self) -> np.ndarray:
        """(T, D) array of per-site populations."""
        if self.states is not None:
            return np.abs(self.states[:, 1:]) ** 2
        return np.real(np.einsum("tii->ti", self.rhos))[:, 1:]

    def vacuum_population(self) -> np.ndarray:
        if self.states is not None:
            return np.abs(self.states[:, 0]) ** 2
        return np.real(self.rhos[:, 0, 0])


def _check_symmetric(H: np.ndarray) -> np.ndarray:
    H = np.asarray(H, dtype=float)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError("H must be a square matrix")
    scale = max(1.0, float(np.max(np.abs(H))))
    if np.max(np.abs(H - H.T)) > 1e-10 * scale:
        raise ValueError("H must be symmetric")
    return H


def eigendecompose(H: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvector columns.

    Eigenvector signs are fixed (largest-magnitude component positive) so
    identical inputs give identical output.
    """
    H = _check_symmetric(H)
    w, V = np.linalg.eigh(H)
    for k in range(V.shape[1]):
        i = int(np.argmax(np.abs(V[:, k])))
        if V[i, k] < 0:
            V[:, k] = -V[:, k]
    return w, V


class ClosedPropagator:
    """Cached eigendecomposition of a site-block Hamiltonian.

    Reused across output times and across observables within a Monte
    Carlo sample, which keeps sweeps at one diagonalization per sample.
    """

    def __init__(self, H: np.ndarray):
        self.w, self.V = eigendecompose(H)
        self.dim = self.w.size

    def apply(self, psi: np.ndarray, t: float) -> np.ndarray:
        """Evolve a (D+1)-component state by time t."""
        psi = np.asarray(psi, dtype=complex)
        if psi.shape != (self.dim + 1,):
            raise ValueError("state must have length D + 1 (vacuum slot first)")
        out = psi.copy()
        phases = np.exp(-1j * self.w * t)
        out[1:] = self.V @ (phases * (self.V.T @ psi[1:]))
        return out


def evolve_closed(H: np.ndarray, psi0: np.ndarray, times: np.ndarray) -> Trajectory:
    """Unitarily evolve psi0 through the site block of H.

    H is the D x D site block (physical units, rad/s when times are in
    seconds); psi0 has D + 1 entries with index 0 the vacuum amplitude.
    """
    prop = ClosedPropagator(H)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    psi0 = np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-9:
        raise ValueError("psi0 must be normalized")
    states = np.empty((times.size, psi0.size), dtype=complex)
    c0 = prop.V.T @ psi0[1:]
    for k, t in enumerate(times):
        states[k, 0] = psi0[0]
        states[k, 1:] = prop.V @ (np.exp(-1j * prop.w * t) * c0)
    return Trajectory(times=times, states=states)


def _lindblad_operators(dim: int, deco: DecoherenceConfig):
    """(rate, L) pairs on the (D+1)-dimensional subspace."""
    ops = []
    if deco.gamma1 > 0:
        for n in range(1, dim):
            L = np.zeros((dim, dim), dtype=complex)
            L[0, n] = 1.0
            ops.append((deco.gamma1, L))
    if deco.gamma_phi > 0:
        for n in range(1, dim):
            diag = -np.ones(dim)
            diag[n] = 1.0
            ops.append((deco.gamma_phi, np.diag(diag).astype(complex)))
    return ops


def _evolve_lindblad_stack(
    H: np.ndarray,
    rhos0: np.ndarray,
    times: np.ndarray,
    deco: DecoherenceConfig,
    rtol: float,
    atol: float,
) -> np.ndarray:
    """Integrate a batch of density matrices under one Liouvillian.

    rhos0 has shape (k, dim, dim); all batch members share H and deco, so
    the whole stack rides a single adaptive integration.
    """
    D = H.shape[0]
    dim = D + 1
    Hfull = np.zeros((dim, dim), dtype=complex)
    Hfull[1:, 1:] = H
    ops = [(g, L, L.conj().T @ L) for g, L in _lindblad_operators(dim, deco)]
    k = rhos0.shape[0]

    def rhs(_t, y):
        rho = y.reshape(k, dim, dim)
        out = -1j * (Hfull @ rho - rho @ Hfull)
        for g, L, LdL in ops:
            out += g * (L @ rho @ L.conj().T - 0.5 * (LdL @ rho + rho @ LdL))
        return out.reshape(-1)

    t0, t1 = float(times[0]), float(times[-1])
    if t0 != 0.0:
        raise ValueError("times must start at 0")
    sol = solve_ivp(
        rhs,
        (t0, t1),
        rhos0.reshape(-1).astype(complex),
        t_eval=times,
        method="RK45",
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        raise RuntimeError(f"master-equation integration failed: {sol.message}")
    return sol.y.T.reshape(times.size, k, dim, dim)


def evolve_lindblad(
    H: np.ndarray,
    rho0: np.ndarray,
    times: np.ndarray,
    deco: DecoherenceConfig,
    rtol: float = 1e-8,
    atol: float = 1e-10,
) -> Trajectory:
    """Open evolution of rho0 under H with uniform T1 and Tphi channels.

    rho0 is (D+1) x (D+1) on the vacuum-plus-sites basis.  Trace and
    positivity of the result are validated to 1e-6; tighten rtol/atol for
    stricter agreement with the exact propagator.
    """
    H = _check_symmetric(H)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    rho0 = np.asarray(rho0, dtype=complex)
    dim = H.shape[0] + 1
    if rho0.shape != (dim, dim):
        raise ValueError("rho0 must be (D+1) x (D+1)")
    if abs(np.trace(rho0).real - 1.0) > 1e-9 or np.max(np.abs(rho0 - rho0.conj().T)) > 1e-9:
        raise ValueError("rho0 must be Hermitian with unit trace")
    rhos = _evolve_lindblad_stack(H, rho0[None], times, deco, rtol, atol)[:, 0]
    traces = np.real(np.einsum("tii->t", rhos))
    if np.max(np.abs(traces - 1.0)) > 1e-6:
        raise RuntimeError("trace drifted beyond tolerance; tighten rtol/atol")
    if min(np.linalg.eigvalsh(r).min() for r in rhos) < -1e-6:
        raise RuntimeError("density matrix lost positivity; tighten rtol/atol")
    return Trajectory(times=times, rhos=rhos)


def populations(traj: Trajectory) -> np.ndarray:
    """Per-site populations P_n(t) as a (T, D) array."""
    return traj.site_populations()


def default_time_grid(period: float, n_periods: float = 1.0) -> np.ndarray:
    """Uniform output grid with POINTS_PER_PERIOD points per period."""
    n = int(np.ceil(POINTS_PER_PERIOD * n_periods))
    return np.linspace(0.0, period * n_periods, n + 1)
