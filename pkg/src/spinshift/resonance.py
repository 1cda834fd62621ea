"""Driven transitions between chain eigenstates (hbar = 1).

A set of levels E_n is coupled by a Hermitian dipole matrix d assembled
from ladder chains between eigenstates.  Under a classical drive of
amplitude E, angular frequency w and scalar polarization weight p the
interaction-picture amplitudes obey

    -i dC_n/dt = sum_k sum_drives d_nk p [ E  exp(-i (w - w_nk) t)
                                         + E* exp(+i (w + w_nk) t) ] C_k

with Bohr frequencies w_nk = E_n - E_k.  The conjugate term's exponent
carries +w_nk so the generator stays Hermitian (it is the expansion of a
real drive field in the interaction picture); the rotating-wave option
keeps, per matrix element, only the slowly rotating half.  Populations do
not depend on the overall sign convention of the left-hand side.

Integration is classic fixed-step fourth-order Runge-Kutta with a
unitarity watchdog.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .basis import enumerate_sector, inner, norm
from .shift import AmplitudeFamily, build_state, ladder_compose, raising_chain

UNITARITY_LIMIT = 1e-6
MIN_STEPS_PER_PERIOD = 20


class UnitarityError(RuntimeError):
    """Integrator lost more probability than the failure threshold."""


@dataclass(frozen=True)
class DriveField:
    """Constant-envelope drive: complex amplitude, frequency, scalar weight."""

    amplitude: complex
    frequency: float
    weight: float = 1.0

    def __post_init__(self):
        amp = complex(self.amplitude)
        if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
            raise ValueError("drive amplitude must be finite")
        if not (math.isfinite(self.frequency) and self.frequency >= 0):
            raise ValueError("drive frequency must be finite and >= 0")
        object.__setattr__(self, "amplitude", amp)


@dataclass(frozen=True)
class LevelSystem:
    """Level energies and the Hermitian dipole matrix coupling them."""

    energies: np.ndarray = field(repr=False)
    dipole: np.ndarray = field(repr=False)

    def __post_init__(self):
        energies = np.array(self.energies, dtype=float)
        dipole = np.array(self.dipole, dtype=complex)
        if energies.ndim != 1:
            raise ValueError("energies must be a one-dimensional array")
        n = energies.size
        if dipole.shape != (n, n):
            raise ValueError("dipole matrix shape does not match level count")
        if np.max(np.abs(dipole - dipole.conj().T), initial=0.0) > 1e-12:
            raise ValueError("dipole matrix must be Hermitian")
        energies.setflags(write=False)
        dipole.setflags(write=False)
        object.__setattr__(self, "energies", energies)
        object.__setattr__(self, "dipole", dipole)

    @property
    def n_levels(self) -> int:
        return self.energies.size

    @property
    def bohr_frequencies(self) -> np.ndarray:
        return self.energies[:, None] - self.energies[None, :]


@dataclass(frozen=True)
class AmplitudeTrajectory:
    """Time grid and level amplitudes C_n(t), one row per recorded time."""

    times: np.ndarray = field(repr=False)
    amplitudes: np.ndarray = field(repr=False)
    max_unitarity_drift: float = 0.0

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        amps = np.array(self.amplitudes, dtype=complex)
        times.setflags(write=False)
        amps.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "amplitudes", amps)


def dipole_from_ladder(
    weights: dict[tuple[int, int], float],
    families: Sequence[AmplitudeFamily],
) -> np.ndarray:
    """Dipole matrix from ladder chains between consecutive-family states.

    ``families[i]`` describes level i; a weight for the pair (n, m)
    attaches to the chain of shifts from level m up to level n.  The
    transition element is normalized to unit modulus (the chains
    reproduce the target eigenstate exactly, so the normalized overlap is
    a pure phase, 1 for the built-in families) and scaled by the weight.
    Weights must be symmetric under (n, m) swap.
    """
    levels = len(families)
    canonical: dict[tuple[int, int], float] = {}
    for (a, b), w in weights.items():
        if a == b:
            raise ValueError("dipole weights connect distinct levels")
        if not 0 <= a < levels and 0 <= b < levels:
            raise ValueError(f"weight ({a},{b}) outside the level range")
        hi, lo = max(a, b), min(a, b)
        prev = canonical.get((hi, lo))
        if prev is not None and prev != w:
            raise ValueError(f"asymmetric weights for pair ({a},{b})")
        canonical[(hi, lo)] = float(w)
    dipole = np.zeros((levels, levels), dtype=complex)
    for (hi, lo), w in sorted(canonical.items()):
        if w == 0.0:
            continue
        n_sites = families[lo].n_sites
        start_sector = enumerate_sector(n_sites, families[lo].n_down)
        start = build_state(families[lo], start_sector)
        chain = raising_chain(families[lo : hi + 1])
        raised = ladder_compose(chain, start)
        target = build_state(families[hi], raised.sector)
        raised_norm = norm(raised)
        target_norm = norm(target)
        if raised_norm == 0.0 or target_norm == 0.0:
            continue
        overlap = inner(target, raised) / (raised_norm * target_norm)
        if abs(overlap) < 1e-12:
            continue
        element = w * overlap / abs(overlap)
        dipole[hi, lo] = element
        dipole[lo, hi] = np.conj(element)
    return dipole


def coupling_matrix(
    system: LevelSystem,
    drives: Sequence[DriveField],
    t: float,
    rwa: bool,
) -> np.ndarray:
    """Interaction-picture generator M(t) with dC/dt = i M(t) C."""
    bohr = system.bohr_frequencies
    total = np.zeros_like(system.dipole)
    for drive in drives:
        rot = (
            drive.weight
            * drive.amplitude
            * np.exp(-1j * (drive.frequency - bohr) * t)
        )
        counter = (
            drive.weight
            * np.conj(drive.amplitude)
            * np.exp(1j * (drive.frequency + bohr) * t)
        )
        if rwa:
            term = np.where(bohr > 0, rot, np.where(bohr < 0, counter, rot + counter))
        else:
            term = rot + counter
        total = total + system.dipole * term
    return total


def _frequency_scale(system, drives, rwa: bool) -> float:
    """Fastest rate the integrator must resolve: detunings and couplings."""
    bohr = system.bohr_frequencies
    fastest = 0.0
    for drive in drives:
        coupling = abs(drive.amplitude) * abs(drive.weight) * float(
            np.max(np.abs(system.dipole), initial=0.0)
        )
        fastest = max(fastest, coupling)
        detunings = np.abs(drive.frequency - bohr)
        if not rwa:
            detunings = np.maximum(detunings, np.abs(drive.frequency + bohr))
        mask = np.abs(system.dipole) > 0
        if mask.any():
            fastest = max(fastest, float(detunings[mask].max()))
    return fastest


def default_timestep(
    system: LevelSystem,
    drives: Sequence[DriveField],
    *,
    rwa: bool = True,
    steps_per_period: int = 256,
) -> float:
    """Timestep resolving the fastest relevant frequency."""
    fastest = _frequency_scale(system, drives, rwa)
    if fastest == 0.0:
        raise ValueError("system is uncoupled; pass an explicit timestep")
    return 2.0 * math.pi / (fastest * steps_per_period)


def integrate_amplitudes(
    system: LevelSystem,
    drives: Sequence[DriveField],
    t_end: float,
    dt: float,
    *,
    rwa: bool = True,
    initial: int = 0,
    c0: np.ndarray | None = None,
) -> AmplitudeTrajectory:
    """Fourth-order Runge-Kutta integration of the coupled amplitudes.

    ``dt`` must give at least 20 steps per period of the fastest resolved
    frequency.  Raises UnitarityError when the total probability drifts
    from 1 by more than 1e-6 at any step.
    """
    if t_end <= 0 or dt <= 0:
        raise ValueError("t_end and dt must be positive")
    fastest = _frequency_scale(system, drives, rwa)
    if fastest > 0 and dt > 2.0 * math.pi / (fastest * MIN_STEPS_PER_PERIOD):
        raise ValueError(
            f"dt={dt:.3e} under-resolves the fastest period "
            f"{2 * math.pi / fastest:.3e} (need >= {MIN_STEPS_PER_PERIOD} steps)"
        )
    levels = system.n_levels
    if c0 is None:
        if not 0 <= initial < levels:
            raise ValueError(f"initial level {initial} outside 0..{levels - 1}")
        c = np.zeros(levels, dtype=complex)
        c[initial] = 1.0
    else:
        c = np.array(c0, dtype=complex)
        if c.shape != (levels,):
            raise ValueError("initial amplitudes have the wrong length")
        if abs(np.linalg.norm(c) - 1.0) > 1e-10:
            raise ValueError("initial amplitudes must be normalized")
    steps = max(1, round(t_end / dt))
    h = t_end / steps
    times = np.empty(steps + 1)
    history = np.empty((steps + 1, levels), dtype=complex)
    times[0] = 0.0
    history[0] = c
    max_drift = abs(float(np.vdot(c, c).real) - 1.0)

    def rhs(t, vec):
        return 1j * (coupling_matrix(system, drives, t, rwa) @ vec)

    t = 0.0
    for step in range(1, steps + 1):
        k1 = rhs(t, c)
        k2 = rhs(t + 0.5 * h, c + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, c + 0.5 * h * k2)
        k4 = rhs(t + h, c + h * k3)
        c = c + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = step * h
        drift = abs(float(np.vdot(c, c).real) - 1.0)
        max_drift = max(max_drift, drift)
        if drift > UNITARITY_LIMIT:
            raise UnitarityError(
                f"probability drifted by {drift:.3e} at t={t:.6g}"
            )
        times[step] = t
        history[step] = c
    return AmplitudeTrajectory(times, history, max_drift)


def transfer_probability(traj: AmplitudeTrajectory, initial: int = 0) -> float:
    """Largest probability found outside the initial level."""
    occupancy = np.abs(traj.amplitudes[:, initial]) ** 2
    return float(np.max(1.0 - occupancy))


@dataclass(frozen=True)
class ScanResult:
    """Peak transfer per scanned drive frequency, plus the best point."""

    omegas: np.ndarray = field(repr=False)
    transfers: np.ndarray = field(repr=False)
    best_index: int
    best_omega: float
    best_transfer: float
    max_unitarity_drift: float

    def __post_init__(self):
        for name in ("omegas", "transfers"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def resonance_scan(
    system: LevelSystem,
    amplitude: complex,
    omegas,
    *,
    weight: float = 1.0,
    t_end: float | None = None,
    dt: float | None = None,
    rwa: bool = True,
    initial: int = 0,
    steps_per_period: int = 256,
    workers: int = 1,
) -> ScanResult:
    """Integrate at each drive frequency and report the transfer peak.

    The defaults pick t_end as the full-transfer time pi / (2 V) of the
    strongest coupled element V and a timestep resolving every detuning
    on the grid, so a grid crossing a Bohr frequency peaks within one
    step of it.
    """
    omegas = np.asarray(omegas, dtype=float)
    if omegas.ndim != 1 or omegas.size == 0:
        raise ValueError("frequency grid must be a non-empty 1-d array")
    if not np.all(np.isfinite(omegas)) or np.any(omegas < 0):
        raise ValueError("frequency grid must be finite and non-negative")
    coupling = abs(amplitude) * abs(weight) * float(
        np.max(np.abs(system.dipole), initial=0.0)
    )
    if t_end is None:
        if coupling == 0.0:
            raise ValueError("zero coupling; pass t_end explicitly")
        t_end = math.pi / (2.0 * coupling)

    def run(omega: float) -> tuple[float, float]:
        drive = DriveField(amplitude, float(omega), weight)
        step = dt if dt is not None else default_timestep(
            system, [drive], rwa=rwa, steps_per_period=steps_per_period
        )
        traj = integrate_amplitudes(
            system, [drive], t_end, step, rwa=rwa, initial=initial
        )
        return transfer_probability(traj, initial), traj.max_unitarity_drift

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, omegas))
    else:
        outcomes = [run(w) for w in omegas]
    transfers = np.array([o[0] for o in outcomes])
    drift = max(o[1] for o in outcomes)
    best = int(np.argmax(transfers))
    return ScanResult(
        omegas=omegas,
        transfers=transfers,
        best_index=best,
        best_omega=float(omegas[best]),
        best_transfer=float(transfers[best]),
        max_unitarity_drift=drift,
    )
