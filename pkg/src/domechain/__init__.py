"""Spin-chain state transfer: spectrum design, synthesis, and analysis.

The package covers the full workflow: closed-form dome spectra and their
tridiagonal realizations (`spectrum`, `inverse_eigen`, `models`), closed
and open-system propagation (`dynamics`), entanglement and process
metrics (`metrics`), disorder and decoherence sweeps (`noise`), and
coupling-budget cascade planning (`cascade`).  `cli` exposes the same
workflow as the `domechain` command.
"""

from .cascade import (
    CascadeInfeasibleError,
    CascadePlan,
    ChainKind,
    CouplingBudget,
    TransferMode,
    execute_cascade,
    feasible_N,
    max_coupling,
    plan_cascade,
    segment_lengths,
)
from .chain import TridiagonalHamiltonian
from .dynamics import (
    DecoherenceConfig,
    ClosedPropagator,
    Trajectory,
    default_time_grid,
    eigendecompose,
    evolve_closed,
    evolve_lindblad,
    site_state,
    vacuum_state,
)
from .inverse_eigen import (
    EigenBasis,
    ReconstructionError,
    WeightedSpectrum,
    compute_weights,
    eigenvectors,
    reconstruct,
)
from .metrics import (
    ProcessMatrix,
    bell_fidelity,
    bell_state,
    chain_bell_target,
    corner_w_target,
    process_matrix,
    qpt_fiducials,
    quarter_period_phase,
    reduce_to_corners,
    reduce_to_pair,
    reduce_to_sites,
    simulate_qpt,
    state_fidelity,
    w_fidelity,
)
from .models import (
    DomeParams,
    EffectiveTwoSite,
    Grid2D,
    PerturbativeBreakdownError,
    dome_hamiltonian,
    grid_2d,
    schrieffer_wolff_reduce,
    single_excitation_matrix,
)
from .noise import (
    DisorderConfig,
    DisorderTarget,
    DecoherenceScan,
    SweepMetric,
    SweepResult,
    perturb,
    sweep_coherent,
    sweep_decoherence,
)
from .spectrum import (
    FstPhase,
    Spectrum,
    TransferCapability,
    check_pst_spacing,
    classify_m,
    dome_spectrum,
    solve_fst_phase,
)

__all__ = [
    "CascadeInfeasibleError",
    "CascadePlan",
    "ChainKind",
    "ClosedPropagator",
    "CouplingBudget",
    "DecoherenceConfig",
    "DecoherenceScan",
    "DisorderConfig",
    "DisorderTarget",
    "DomeParams",
    "EffectiveTwoSite",
    "EigenBasis",
    "FstPhase",
    "Grid2D",
    "PerturbativeBreakdownError",
    "ProcessMatrix",
    "ReconstructionError",
    "Spectrum",
    "SweepMetric",
    "SweepResult",
    "Trajectory",
    "TransferCapability",
    "TransferMode",
    "TridiagonalHamiltonian",
    "WeightedSpectrum",
    "bell_fidelity",
    "bell_state",
    "chain_bell_target",
    "check_pst_spacing",
    "classify_m",
    "compute_weights",
    "corner_w_target",
    "default_time_grid",
    "dome_hamiltonian",
    "dome_spectrum",
    "eigendecompose",
    "eigenvectors",
    "evolve_closed",
    "evolve_lindblad",
    "execute_cascade",
    "feasible_N",
    "grid_2d",
    "max_coupling",
    "perturb",
    "plan_cascade",
    "process_matrix",
    "qpt_fiducials",
    "quarter_period_phase",
    "reconstruct",
    "reduce_to_corners",
    "reduce_to_pair",
    "reduce_to_sites",
    "schrieffer_wolff_reduce",
    "segment_lengths",
    "simulate_qpt",
    "single_excitation_matrix",
    "site_state",
    "solve_fst_phase",
    "state_fidelity",
    "sweep_coherent",
    "sweep_decoherence",
    "vacuum_state",
    "w_fidelity",
]
