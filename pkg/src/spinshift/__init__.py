"""Spin-1/2 chain spectra from raising and lowering (shift) operators.

The package builds the nearest-neighbour Heisenberg ring and the
inverse-sine-squared exchange chain sector by sector, constructs their
eigenstates from analytic amplitude families moved between sectors by
shift operators, solves the coupled momentum equations for the ring,
evaluates both closed-form energy ladders, cross-checks everything
against dense diagonalization, and simulates dipole-driven transitions
between the resulting levels.
"""

__version__ = "0.1.0"

from .basis import (
    SectorBasis,
    StateVector,
    apply_cross_minus,
    apply_cross_plus,
    apply_site_lowering,
    down_sites,
    enumerate_sector,
    mask_from_sites,
    rank,
    translate,
)
from .bethe import (
    BetheRoots,
    BetheSolveError,
    DegenerateRootsError,
    DivergedError,
    PairPhaseTable,
    PhaseSingularityError,
    QuantumNumberSet,
    bethe_amplitude,
    bethe_energy,
    enumerate_quantum_numbers,
    pair_phase,
    solve_bethe,
    solve_sector_roots,
    theta_scatter,
)
from .checks import CheckResult, run_verify
from .hsm import HsConstants, hs_constants, hs_energy, jastrow_amplitude
from .models import (
    HamiltonianSpec,
    SectorMatrix,
    apply_hamiltonian,
    build_hamiltonian,
    coupling_hs,
)
from .oracle import (
    EigenDecomposition,
    SpectrumMatch,
    eig_hermitian,
    eigen_residual,
    rayleigh,
    spectrum_contains,
)
from .resonance import (
    AmplitudeTrajectory,
    DriveField,
    LevelSystem,
    ScanResult,
    UnitarityError,
    dipole_from_ladder,
    integrate_amplitudes,
    resonance_scan,
    transfer_probability,
)
from .shift import (
    AmplitudeFamily,
    LadderChain,
    LadderStep,
    bethe_family,
    build_state,
    commutator_residual,
    jastrow_family,
    ladder_compose,
    lower_action,
    lowering_chain,
    plane_wave_family,
    raise_action,
    raising_chain,
    shift_coefficients_r1,
    shift_matrix_r1,
    simplified_lowering_r1,
    simplified_shift_r1,
    vacuum_family,
)
