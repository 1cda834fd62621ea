"""Coupled-momentum equations for the nearest-neighbour ring.

The r magnon pseudo-momenta theta_m solve

    N * theta_m = 2*pi*I_m - sum_{k != m} Theta(theta_m, theta_k)

with the two-body phase Theta(t, t') = 2*arctan([cot(t/2) - cot(t'/2)]/2)
and quantum numbers I_m that are distinct integers for odd r and distinct
half-odd integers for even r.  A converged root set feeds the permutation
sum amplitude

    a(m_1..m_r) = sum_P exp(i * [sum_k theta_{P_k} m_k
                                 + 1/2 sum_{k<n} phi_{P_k P_n}])

with the pair phase phi fixed by 2*cot(phi/2) = cot(t1/2) - cot(t2/2),
phi in [-pi, pi], and the closed-form energy J * sum_m (cos theta_m - 1).

Only real, pairwise-distinct roots are supported; anything else raises
instead of returning a silently wrong state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

import numpy as np

TAU = 2.0 * math.pi

SEPARATION_FLOOR = 1e-8


class PhaseSingularityError(ValueError):
    """Two-body phase evaluated at an angle that is 0 mod 2*pi."""


class BetheSolveError(RuntimeError):
    """Base class for root-solver failures."""


class DivergedError(BetheSolveError):
    """Fixed-point iteration failed to converge to real roots."""


class DegenerateRootsError(BetheSolveError):
    """Roots collided; the corresponding state vanishes identically."""


@dataclass(frozen=True)
class QuantumNumberSet:
    """Distinct magnon quantum numbers, parity-matched to the magnon count.

    Odd r uses integers in {0, +-1, ..., +-N/2}; even r uses half-odd
    integers in {+-1/2, ..., +-(N-1)/2}.
    """

    values: tuple[Fraction, ...]
    n_sites: int

    def __post_init__(self):
        values = tuple(Fraction(v) for v in self.values)
        object.__setattr__(self, "values", values)
        r = len(values)
        if r < 1:
            raise ValueError("need at least one quantum number")
        if len(set(values)) != r:
            raise ValueError("quantum numbers must be distinct")
        n = self.n_sites
        if r % 2:
            bad = [v for v in values if v.denominator != 1 or abs(v) > Fraction(n, 2)]
        else:
            bad = [
                v
                for v in values
                if v.denominator != 2 or abs(v) > Fraction(n - 1, 2)
            ]
        if bad:
            kind = "integers" if r % 2 else "half-odd integers"
            raise ValueError(
                f"quantum numbers for r={r} must be {kind} within the window; "
                f"offending values: {bad}"
            )

    @property
    def r(self) -> int:
        return len(self.values)


def admissible_window(n_sites: int, r: int) -> tuple[Fraction, ...]:
    """All allowed quantum-number values for an r-magnon set, ascending."""
    if r % 2:
        half = n_sites // 2
        return tuple(Fraction(k) for k in range(-half, half + 1))
    # largest odd numerator with k/2 <= (N-1)/2
    top = n_sites - 1 if (n_sites - 1) % 2 else n_sites - 2
    return tuple(Fraction(k, 2) for k in range(-top, top + 1, 2))


def enumerate_quantum_numbers(n_sites: int, r: int):
    """Yield every admissible r-element QuantumNumberSet."""
    for combo in combinations(admissible_window(n_sites, r), r):
        yield QuantumNumberSet(combo, n_sites)


def _half_cot(theta: float) -> float:
    reduced = math.remainder(theta, TAU)
    if reduced == 0.0:
        raise PhaseSingularityError("angle is 0 mod 2*pi; cot(theta/2) undefined")
    return 1.0 / math.tan(0.5 * reduced)


def theta_scatter(theta: float, theta_prime: float) -> float:
    """Two-body scattering phase, odd under argument swap, in (-pi, pi)."""
    return 2.0 * math.atan(0.5 * (_half_cot(theta) - _half_cot(theta_prime)))


def pair_phase(theta1: float, theta2: float) -> float:
    """Pair phase phi with 2*cot(phi/2) = cot(t1/2) - cot(t2/2), in [-pi, pi].

    The zero right-hand side (equal half-cotangents) maps to the branch
    boundary and returns +pi; antisymmetry holds everywhere else exactly.
    """
    x = 0.5 * (_half_cot(theta1) - _half_cot(theta2))
    if x == 0.0:
        return math.pi
    return 2.0 * math.atan(1.0 / x)


@dataclass(frozen=True)
class PairPhaseTable:
    """Antisymmetric r x r table of pair phases, zero diagonal."""

    phi: np.ndarray = field(repr=False)

    def __post_init__(self):
        phi = np.array(self.phi, dtype=float)
        if phi.ndim != 2 or phi.shape[0] != phi.shape[1]:
            raise ValueError("pair-phase table must be square")
        if np.max(np.abs(phi + phi.T)) > 1e-12:
            raise ValueError("pair-phase table must be antisymmetric")
        phi.setflags(write=False)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def from_thetas(cls, thetas) -> "PairPhaseTable":
        r = len(thetas)
        phi = np.zeros((r, r), dtype=float)
        for a in range(r):
            for b in range(a + 1, r):
                phi[a, b] = pair_phase(thetas[a], thetas[b])
                phi[b, a] = -phi[a, b]
        return cls(phi)


@dataclass(frozen=True)
class BetheRoots:
    """Solved pseudo-momenta with their quantum numbers and defect."""

    thetas: tuple[float, ...]
    quantum_numbers: QuantumNumberSet | None
    residual: float
    converged: bool

    @property
    def r(self) -> int:
        return len(self.thetas)


EMPTY_ROOTS = BetheRoots(thetas=(), quantum_numbers=None, residual=0.0, converged=True)


def bethe_residual(n_sites: int, thetas, quantum_numbers: QuantumNumberSet) -> float:
    """Max-norm defect of the coupled momentum equations, evaluated fresh."""
    thetas = list(thetas)
    r = len(thetas)
    worst = 0.0
    for m in range(r):
        scatter = sum(
            theta_scatter(thetas[m], thetas[k]) for k in range(r) if k != m
        )
        defect = (
            n_sites * thetas[m]
            - TAU * float(quantum_numbers.values[m])
            + scatter
        )
        worst = max(worst, abs(defect))
    return worst


def _circle_gap(a: float, b: float) -> float:
    return abs(math.remainder(a - b, TAU))


def solve_bethe(
    n_sites: int,
    quantum_numbers: QuantumNumberSet,
    *,
    damping: float = 0.5,
    tol: float = 1e-12,
    max_iter: int = 10_000,
    separation: float = SEPARATION_FLOOR,
) -> BetheRoots:
    """Damped fixed-point solve of the coupled momentum equations.

    Starts from theta_m = 2*pi*I_m/N and mixes each update with weight
    ``damping``.  Raises DivergedError when the update fails to shrink
    below ``tol`` within ``max_iter`` sweeps (or hits a phase singularity)
    and DegenerateRootsError when two roots end up closer than
    ``separation`` on the circle, which makes the amplitudes vanish.
    """
    if quantum_numbers.n_sites != n_sites:
        raise ValueError("quantum numbers were built for a different chain length")
    qn = [float(v) for v in quantum_numbers.values]
    r = len(qn)
    thetas = [TAU * v / n_sites for v in qn]
    if r == 1:
        roots = BetheRoots((thetas[0],), quantum_numbers, 0.0, True)
        return roots
    converged = False
    update = math.inf
    for _ in range(max_iter):
        try:
            new = []
            for m in range(r):
                scatter = sum(
                    theta_scatter(thetas[m], thetas[k]) for k in range(r) if k != m
                )
                target = (TAU * qn[m] - scatter) / n_sites
                new.append((1.0 - damping) * thetas[m] + damping * target)
        except PhaseSingularityError as exc:
            raise DivergedError(f"iteration hit a phase singularity: {exc}") from exc
        update = max(abs(a - b) for a, b in zip(new, thetas))
        thetas = new
        if not all(math.isfinite(t) for t in thetas):
            raise DivergedError("iteration produced non-finite roots")
        if update < tol:
            converged = True
            break
    if not converged:
        raise DivergedError(
            f"no convergence after {max_iter} sweeps (last update {update:.3e})"
        )
    for a, b in combinations(range(r), 2):
        if _circle_gap(thetas[a], thetas[b]) < separation:
            raise DegenerateRootsError(
                f"roots {a} and {b} collided at theta={thetas[a]:.6g}; "
                "the state vanishes"
            )
    residual = bethe_residual(n_sites, thetas, quantum_numbers)
    if residual > 1e-10:
        raise DivergedError(
            f"converged update but equation defect {residual:.3e} exceeds 1e-10"
        )
    return BetheRoots(tuple(thetas), quantum_numbers, residual, True)


def bethe_amplitude(roots: BetheRoots, phases: PairPhaseTable, sites) -> complex:
    """Permutation-sum amplitude at an ordered down-site tuple.

    Sites must be strictly increasing integers; values beyond N are legal
    so the cyclic re-entry identity a(m2..mr, m1+N) = a(m1..mr) can be
    probed directly.
    """
    sites = tuple(int(m) for m in sites)
    if any(a >= b for a, b in zip(sites, sites[1:])):
        raise ValueError("down sites must be strictly increasing")
    r = roots.r
    if len(sites) != r:
        raise ValueError(f"expected {r} sites, got {len(sites)}")
    if phases.phi.shape != (r, r):
        raise ValueError("pair-phase table size does not match root count")
    thetas = roots.thetas
    phi = phases.phi
    total = 0.0 + 0.0j
    for perm in permutations(range(r)):
        phase = sum(thetas[perm[k]] * sites[k] for k in range(r))
        phase += 0.5 * sum(
            phi[perm[k], perm[n]] for k in range(r) for n in range(k + 1, r)
        )
        total += complex(math.cos(phase), math.sin(phase))
    return total


def bethe_energy(roots: BetheRoots, j: float) -> float:
    """Closed-form energy J * sum_m (cos theta_m - 1)."""
    if not roots.converged:
        raise ValueError("energy requires converged roots")
    return j * sum(math.cos(t) - 1.0 for t in roots.thetas)


def _dedupe_key(thetas, digits: int = 8):
    return tuple(
        sorted((round(math.cos(t), digits), round(math.sin(t), digits)) for t in thetas)
    )


def solve_sector_roots(n_sites: int, r: int) -> list[BetheRoots]:
    """Every distinct converged real root set for the r-magnon sector.

    Quantum-number sets whose iteration diverges or collapses are skipped;
    solutions that coincide as root multisets mod 2*pi (the window aliases
    theta = +-pi) are reported once.
    """
    seen = {}
    for qn in enumerate_quantum_numbers(n_sites, r):
        try:
            roots = solve_bethe(n_sites, qn)
        except BetheSolveError:
            continue
        key = _dedupe_key(roots.thetas)
        if key not in seen:
            seen[key] = roots
    return list(seen.values())
