"""Coupling-budget planning for cascaded long-distance transfer.

Hardware caps the largest realizable coupling at j_max while decoherence
floors the usable rate at j_min.  A length-N transfer is split into k
segments that share boundary sites (k segments cover N distinct sites
with N + k - 1 site slots); each segment runs as an independent chain
whose rate is pushed up until its largest coupling hits j_max.  Line
chains gain nothing from splitting (their segment time is linear in
length), while dome chains gain a factor of k (quadratic in length).

Totals are reported two ways: exactly, from each segment's true maximum
coupling, and asymptotically, from the large-N envelopes

    line: tau = pi N / (4 j_max)        (k independent)
    dome: tau = pi m N^2 / (8 k j_max)

with a half-segment deduction when the first segment is a fractional
transfer (it runs T/4 instead of T/2).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .dynamics import ClosedPropagator, site_state
from .models import DomeParams, dome_hamiltonian

__all__ = [
    "ChainKind",
    "TransferMode",
    "CouplingBudget",
    "MaxCoupling",
    "CascadePlan",
    "CascadeInfeasibleError",
    "max_coupling",
    "segment_lengths",
    "plan_cascade",
    "feasible_N",
    "execute_cascade",
]


class ChainKind(Enum):
    LINE = "line"
    DOME = "dome"


class TransferMode(Enum):
    PST = "pst"
    FST = "fst"


@dataclass(frozen=True)
class CouplingBudget:
    """Hardware coupling ceiling and decoherence rate floor, in rad/s."""

    j_max: float
    j_min: float

    def __post_init__(self) -> None:
        if not self.j_max > self.j_min > 0:
            raise ValueError("budget requires j_max > j_min > 0")


class MaxCoupling(NamedTuple):
    exact: float
    asymptotic: float


class CascadeInfeasibleError(RuntimeError):
    """Some segment would need a rate below the budget floor."""

    def __init__(self, segment_index: int, length: int, required_rate: float, j_min: float):
        self.segment_index = segment_index
        self.length = length
        self.required_rate = required_rate
        super().__init__(
            f"segment {segment_index} (length {length}) needs rate "
            f"{required_rate:.6g} rad/s below the floor {j_min:.6g} rad/s"
        )


def _kind_m(kind: ChainKind, m: int) -> int:
    if kind is ChainKind.LINE:
        return 0
    if m < 1:
        raise ValueError("dome planning needs m >= 1; use ChainKind.LINE for m = 0")
    return int(m)


def max_coupling(kind: ChainKind, N: int, m: int = 0, J: float = 1.0) -> MaxCoupling:
    """Largest coupling of a length-N chain at rate J, exact and envelope.

    The exact value (authoritative for planning) is the maximum of the
    closed-form coupling array; the asymptotic envelope is N J / 4 for
    lines and m N^2 J / 8 for domes.
    """
    m = _kind_m(kind, m)
    couplings = dome_hamiltonian(DomeParams(N=N, m=m, J=1.0)).couplings
    exact = float(np.max(couplings)) * J
    if kind is ChainKind.LINE:
        asym = N * J / 4.0
    else:
        asym = m * N**2 * J / 8.0
    return MaxCoupling(exact=exact, asymptotic=asym)


def segment_lengths(N: int, k: int) -> tuple[int, ...]:
    """Segment site counts; consecutive segments share one boundary site.

    The N - 1 bonds are split as evenly as possible with the remainder
    given to the earliest segments, so site counts sum to N + k - 1.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if N - 1 < k:
        raise ValueError("each segment needs at least one bond (k <= N - 1)")
    q, r = divmod(N - 1, k)
    return tuple(q + 2 if i < r else q + 1 for i in range(k))


def _asymptotic_total(
    kind: ChainKind, N: int, m: int, k: int, j_max: float, mode: TransferMode
) -> float:
    if kind is ChainKind.LINE:
        total = np.pi * N / (4.0 * j_max)
    else:
        total = np.pi * m * N**2 / (8.0 * k * j_max)
    if mode is TransferMode.FST:
        total -= total / (2.0 * k)
    return float(total)


@dataclass(frozen=True)
class CascadePlan:
    """Feasible segmentation with per-segment rates and durations."""

    kind: ChainKind
    mode: TransferMode
    n_sites: int
    m: int
    k: int
    budget: CouplingBudget
    lengths: tuple[int, ...]
    rates: tuple[float, ...]
    durations: tuple[float, ...]
    total_duration: float
    asymptotic_duration: float

    @property
    def first_segment(self) -> TransferMode:
        return TransferMode.FST if self.mode is TransferMode.FST else TransferMode.PST


def plan_cascade(
    N: int,
    k: int,
    budget: CouplingBudget,
    kind: ChainKind,
    m: int = 0,
    mode: TransferMode = TransferMode.PST,
) -> CascadePlan:
    """Size k segments and push each rate to the coupling ceiling.

    Each segment's rate is j_max divided by its unit-rate maximum
    coupling, so its largest coupling lands exactly on the ceiling.  A
    fractional-transfer plan runs its first segment for a quarter period
    instead of half.  Raises CascadeInfeasibleError (naming the limiting
    segment) if any rate falls below j_min.
    """
    m = _kind_m(kind, m)
    lengths = segment_lengths(N, k)
    rates = []
    for i, L in enumerate(lengths):
        rate = budget.j_max / max_coupling(kind, L, m).exact
        if rate < budget.j_min * (1.0 - 1e-12):
            raise CascadeInfeasibleError(i, L, rate, budget.j_min)
        rates.append(rate)
    durations = [np.pi / r for r in rates]
    if mode is TransferMode.FST:
        durations[0] /= 2.0
    return CascadePlan(
        kind=kind,
        mode=mode,
        n_sites=N,
        m=m if kind is ChainKind.DOME else 0,
        k=k,
        budget=budget,
        lengths=lengths,
        rates=tuple(rates),
        durations=tuple(durations),
        total_duration=float(sum(durations)),
        asymptotic_duration=_asymptotic_total(kind, N, m, k, budget.j_max, mode),
    )


def feasible_N(budget: CouplingBudget, kind: ChainKind, m: int = 0) -> int:
    """Largest single-segment N whose peak coupling fits the budget.

    Uses the asymptotic envelopes at rate j_min: N = 4 j_max / j_min for
    lines and N = sqrt(8 j_max / (m j_min)) for domes, rounded to the
    nearest integer.
    """
    ratio = budget.j_max / budget.j_min
    if kind is ChainKind.LINE:
        return int(round(4.0 * ratio))
    m = _kind_m(kind, m)
    return int(round(np.sqrt(8.0 * ratio / m)))


def execute_cascade(plan: CascadePlan) -> np.ndarray:
    """Run the planned segments back to back on a global state.

    Segments are applied sequentially: the active segment's chain evolves
    the amplitudes in its site window for its planned duration while all
    other couplings are off (idle amplitudes frozen).  Returns the final
    global state of length n_sites + 1 (vacuum slot first), starting from
    an excitation on site 1.
    """
    psi = site_state(plan.n_sites, 1)
    start = 0
    for L, rate, tau in zip(plan.lengths, plan.rates, plan.durations):
        ham = dome_hamiltonian(DomeParams(N=L, m=plan.m, J=rate))
        prop = ClosedPropagator(ham.matrix(physical=True))
        window = np.zeros(L + 1, dtype=complex)
        window[1:] = psi[1 + start : 1 + start + L]
        window = prop.apply(window, tau)
        psi[1 + start : 1 + start + L] = window[1:]
        start += L - 1
    return psi
