"""Simulation library for continuous parity-type measurements of cat qubits.

The package builds the rotating-wave Hamiltonians of junction-coupled cavity
modes, projects them onto multi-photon-dissipation cat manifolds, evaluates
the dispersive measurement rates and their second-order corrections, and
reproduces the associated datasets (spectra, efficiency curves, feasibility
maps) at desk scale with dense numpy linear algebra.
"""

__version__ = "0.1.0"

from .fock import (
    CatBasis,
    DensityMatrix,
    FockOperator,
    FockSpace,
    FockState,
    annihilation,
    cat_basis,
    cat_state,
    coherent_state,
    default_dim,
    displacement,
    husimi_q,
    safe_dim,
    tensor,
    tensor_state,
)
from .lindblad import LindbladSpec, Trajectory, efficiency_curve, evolve, fit_decay_rate
from .measurement import (
    DephasingRatios,
    DispersiveRates,
    ReadoutParams,
    dephasing_ratios_two_mode,
    dispersive_rates_joint,
    dispersive_rates_single,
)
from .results import SweepResult
from .rwa import (
    JunctionParams,
    ModeFrequencies,
    angular,
    h_rwa2_two_mode,
    h_rwa_multi_junction,
    h_rwa_single,
    h_rwa_two_mode,
)
from .zeno import (
    DegeneracyDiagnostics,
    ProjectedHamiltonian,
    ZenoJumpSet,
    asymptotic_projection_map,
    c_pm_closed_form,
    four_photon_diagnostics,
    gamma_ind,
    omega_a,
    project,
    projected_spectrum_q,
    zeno_jump_ops,
)

__all__ = [name for name in dir() if not name.startswith("_")]
