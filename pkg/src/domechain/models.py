"""Closed-form chain and grid builders, and the large-m two-site reduction.

The dome chain realizes the dome spectrum directly:

    omega_n = (n - 1)(N - n) m J
    J_n = (J / 2) sqrt(n (N - n - 1) m + n) sqrt((n - 1)(N - n) m + N - n)

m = 0 is the engineered line J_n = (J/2) sqrt(n (N - n)) with flat
frequencies.  These forms are exactly mirror symmetric and provide the
independent check on the spectral synthesis route.

A 2D grid applies the same profile along rows and columns; on-site
frequencies add and the single-excitation spectrum is the Kronecker sum
of the two 1D spectra.

For large m the middle sites are far detuned from the ends and the chain
reduces to an effective two-site system with J_eff -> (-1)^N J / 2 and
end frequencies shifted by -(N - 2) J / 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import TridiagonalHamiltonian
from .spectrum import TransferCapability, classify_m

__all__ = [
    "DomeParams",
    "Grid2D",
    "EffectiveTwoSite",
    "PerturbativeBreakdownError",
    "dome_hamiltonian",
    "grid_2d",
    "single_excitation_matrix",
    "schrieffer_wolff_reduce",
]


@dataclass(frozen=True)
class DomeParams:
    """Dome-chain parameters: length N, shape m, rate J (rad/s)."""

    N: int
    m: int
    J: float = 1.0

    def __post_init__(self) -> None:
        if self.N < 2:
            raise ValueError("N must be >= 2")
        if self.m < 0 or self.m != int(self.m):
            raise ValueError("m must be a non-negative integer")
        if not self.J > 0:
            raise ValueError("J must be positive")

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.J

    @property
    def capability(self) -> TransferCapability:
        return classify_m(self.m)


def dome_hamiltonian(params: DomeParams) -> TridiagonalHamiltonian:
    """Dome chain from the closed forms (no spectral synthesis involved)."""
    N, m = params.N, params.m
    n = np.arange(1, N + 1, dtype=float)
    omegas = (n - 1.0) * (N - n) * m
    k = np.arange(1, N, dtype=float)
    couplings = 0.5 * np.sqrt(k * (N - k - 1.0) * m + k) * np.sqrt(
        (k - 1.0) * (N - k) * m + N - k
    )
    ham = TridiagonalHamiltonian(omegas=omegas, couplings=couplings, rate_J=params.J)
    ham.validate_synthesized()
    return ham


@dataclass(frozen=True)
class Grid2D:
    """Rectangular grid whose rows and columns are dome chains.

    Row chains have length cols with shape m_x; column chains length rows
    with shape m_y.  On-site frequencies are omega_x[c] + omega_y[r]; all
    rows share the x couplings and all columns the y couplings.  Site
    (r, c) maps to flat index r * cols + c (0-based, row major).
    """

    rows: int
    cols: int
    m_x: int
    m_y: int
    J: float = 1.0

    def __post_init__(self) -> None:
        if self.rows < 2 or self.cols < 2:
            raise ValueError("grid must be at least 2 x 2")
        for m in (self.m_x, self.m_y):
            if m < 0 or m != int(m):
                raise ValueError("m_x and m_y must be non-negative integers")
        if not self.J > 0:
            raise ValueError("J must be positive")

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.J

    def row_chain(self) -> TridiagonalHamiltonian:
        return dome_hamiltonian(DomeParams(N=self.cols, m=self.m_x, J=self.J))

    def column_chain(self) -> TridiagonalHamiltonian:
        return dome_hamiltonian(DomeParams(N=self.rows, m=self.m_y, J=self.J))

    def frequency_table(self) -> np.ndarray:
        """rows x cols table of on-site frequencies in units of J."""
        wx = self.row_chain().omegas
        wy = self.column_chain().omegas
        return wy[:, None] + wx[None, :]

    def x_bonds(self) -> np.ndarray:
        """rows x (cols-1) horizontal couplings in units of J."""
        jx = self.row_chain().couplings
        return np.tile(jx, (self.rows, 1))

    def y_bonds(self) -> np.ndarray:
        """(rows-1) x cols vertical couplings in units of J."""
        jy = self.column_chain().couplings
        return np.tile(jy[:, None], (1, self.cols))

    def corner_indices(self) -> list[int]:
        """Flat indices of corners in the order (1,1), (1,C), (R,1), (R,C)."""
        R, C = self.rows, self.cols
        return [0, C - 1, (R - 1) * C, R * C - 1]


def grid_2d(rows: int, cols: int, m_x: int, m_y: int, J: float = 1.0) -> Grid2D:
    return Grid2D(rows=rows, cols=cols, m_x=m_x, m_y=m_y, J=J)


def single_excitation_matrix(
    freqs: np.ndarray | Grid2D,
    x_bonds: np.ndarray | None = None,
    y_bonds: np.ndarray | None = None,
    physical: bool = False,
) -> np.ndarray:
    """Dense single-excitation matrix of a grid, row-major site order.

    Accepts either a Grid2D or explicit per-site frequency and per-bond
    coupling tables (which is what disorder perturbation produces).
    """
    if isinstance(freqs, Grid2D):
        grid = freqs
        table = grid.frequency_table()
        xb = grid.x_bonds()
        yb = grid.y_bonds()
        scale = grid.J if physical else 1.0
    else:
        table = np.asarray(freqs, dtype=float)
        if x_bonds is None or y_bonds is None:
            raise ValueError("explicit tables require x_bonds and y_bonds")
        xb = np.asarray(x_bonds, dtype=float)
        yb = np.asarray(y_bonds, dtype=float)
        scale = 1.0
    R, C = table.shape
    if xb.shape != (R, C - 1) or yb.shape != (R - 1, C):
        raise ValueError("bond tables do not match the grid shape")
    D = R * C
    H = np.zeros((D, D))
    idx = lambda r, c: r * C + c
    for r in range(R):
        for c in range(C):
            H[idx(r, c), idx(r, c)] = table[r, c]
            if c + 1 < C:
                H[idx(r, c), idx(r, c + 1)] = xb[r, c]
                H[idx(r, c + 1), idx(r, c)] = xb[r, c]
            if r + 1 < R:
                H[idx(r, c), idx(r + 1, c)] = yb[r, c]
                H[idx(r + 1, c), idx(r, c)] = yb[r, c]
    return H * scale


class PerturbativeBreakdownError(RuntimeError):
    """Edge/middle gap too small for the second-order reduction."""


@dataclass(frozen=True)
class EffectiveTwoSite:
    """Effective end-pair model after integrating out the middle sites."""

    omega1_eff: float
    omegaN_eff: float
    j_eff: float
    gap: float
    max_edge_coupling: float

    def eigenvalues(self) -> np.ndarray:
        H = np.array(
            [[self.omega1_eff, self.j_eff], [self.j_eff, self.omegaN_eff]]
        )
        return np.linalg.eigvalsh(H)


def schrieffer_wolff_reduce(
    ham: TridiagonalHamiltonian, gap_factor: float = 5.0
) -> EffectiveTwoSite:
    """Second-order reduction of a chain onto its two end sites.

    The middle block is diagonalized exactly and each eigenmode mu is
    integrated out with the symmetric energy denominator

        1/2 [ 1 / (E_a - d_mu) + 1 / (E_b - d_mu) ],

    E_a, E_b being the bare end frequencies.  Breakdown is declared when
    the smallest edge/middle gap is below gap_factor times the largest
    edge-to-middle coupling.
    """
    N = ham.n
    if N < 3:
        raise ValueError("reduction needs at least one middle site")
    H = ham.matrix()
    d, U = np.linalg.eigh(H[1 : N - 1, 1 : N - 1])
    v1 = H[0, 1 : N - 1] @ U
    vN = H[N - 1, 1 : N - 1] @ U
    E1, EN = H[0, 0], H[N - 1, N - 1]
    vmax = float(max(abs(ham.couplings[0]), abs(ham.couplings[-1])))
    gap = float(min(np.min(np.abs(E1 - d)), np.min(np.abs(EN - d))))
    if gap < gap_factor * vmax:
        raise PerturbativeBreakdownError(
            f"edge/middle gap {gap:.3g} below {gap_factor} x coupling {vmax:.3g}"
        )
    inv1 = 1.0 / (E1 - d)
    invN = 1.0 / (EN - d)
    j_eff = float(0.5 * np.sum(v1 * vN * (inv1 + invN)))
    omega1 = float(E1 + np.sum(v1 * v1 * inv1))
    omegaN = float(EN + np.sum(vN * vN * invN))
    return EffectiveTwoSite(
        omega1_eff=omega1,
        omegaN_eff=omegaN,
        j_eff=j_eff,
        gap=gap,
        max_edge_coupling=vmax,
    )
