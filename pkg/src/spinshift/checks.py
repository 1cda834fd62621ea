"""Runtime invariant suite behind the ``verify`` command.

Each check recomputes an invariant from scratch at a pinned tolerance and
reports the worst observed defect.  The suite is deterministic for a
fixed seed: random draws use a seeded generator and all aggregation
orders are fixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import enumerate_sector, norm, translate, translate_mask
from .bethe import (
    bethe_energy,
    solve_sector_roots,
    theta_scatter,
)
from .hsm import coupling_sums, hs_constants, hs_energy
from .models import (
    MODEL_HS,
    MODEL_XXX,
    HamiltonianSpec,
    bonds,
    build_hamiltonian,
)
from .oracle import eig_hermitian, eigen_residual, spectrum_contains
from .resonance import (
    DriveField,
    LevelSystem,
    default_timestep,
    integrate_amplitudes,
    resonance_scan,
)
from .shift import (
    bethe_family,
    build_state,
    commutator_residual,
    jastrow_family,
    lower_action,
    one_site_amplitudes,
    plane_wave_family,
    raise_action,
    shift_coefficients_r1,
    shift_matrix_r1,
    vacuum_family,
)

DEFAULT_SEED = 20260809

# Residual tolerance defaults per model; everything else is pinned below.
DEFAULT_RESIDUAL_TOL = {MODEL_XXX: 1e-8, MODEL_HS: 1e-9}

TOL_HERMITICITY = 0.0
TOL_VACUUM = 1e-14
TOL_TRANSLATION = 1e-10
TOL_PATTERN = 1e-12
TOL_SEMIDEFINITE = 1e-12
TOL_ONE_MAGNON = 1e-10
TOL_THETA_ANTISYM = 1e-13
TOL_SUM_RULE = 1e-12
TOL_ROW_SUM = 1e-12
TOL_SHIFT_FIDELITY = 1e-12
TOL_EQ_RESIDUAL = 1e-10
TOL_ED_MATCH = 1e-8
TOL_COMMUTATOR = 1e-10
TOL_TRANSLATION_EIGEN = 1e-12
TOL_COUPLING_SUMS = 1e-10
TOL_ALTERNATING_IDENTITY = 1e-12
TOL_COT_IDENTITY = 1e-10
TOL_FORMULA = 1e-12
TOL_RABI = 1e-6
TOL_UNITARITY = 1e-8


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    tol: float
    note: str = ""


def _check(name: str, value: float, tol: float, note: str = "") -> CheckResult:
    return CheckResult(name, bool(value <= tol), float(value), float(tol), note)


def _sector_range(n_sites: int):
    return range(0, n_sites // 2 + 1)


def _dense_blocks(spec: HamiltonianSpec):
    for r in _sector_range(spec.n_sites):
        sector = enumerate_sector(spec.n_sites, r)
        yield r, sector, build_hamiltonian(spec, sector)


def structural_checks(spec: HamiltonianSpec, rng) -> list[CheckResult]:
    results = []
    herm = 0.0
    pattern = 0.0
    translation = 0.0
    top = 0.0
    pair_weight = {(i, j): w for i, j, w in bonds(spec)}
    for r, sector, block in _dense_blocks(spec):
        dense = block.to_dense()
        if dense.size:
            herm = max(herm, float(np.max(np.abs(dense - dense.conj().T))))
        # entry pattern: every entry must follow from the pair couplings
        for row, col, value in zip(block.rows, block.cols, block.values):
            mask_col = sector.configs[col]
            if row == col:
                expect = 0.0
                for (i, j), w in pair_weight.items():
                    bi, bj = 1 << (i - 1), 1 << (j - 1)
                    if bool(mask_col & bi) != bool(mask_col & bj):
                        expect -= 0.5 * w
            else:
                diff = mask_col ^ sector.configs[row]
                if bin(diff).count("1") != 2:
                    pattern = max(pattern, abs(value))
                    continue
                i, j = (b.bit_length() for b in (diff & -diff, diff ^ (diff & -diff)))
                expect = 0.5 * pair_weight.get((min(i, j), max(i, j)), 0.0)
            pattern = max(pattern, abs(value - expect))
        # translation commutation on random vectors
        perm = np.array(
            [
                sector.rank_index[translate_mask(m, spec.n_sites)]
                for m in sector.configs
            ]
        )
        draws = rng.standard_normal((sector.dim, 100)) + 1j * rng.standard_normal(
            (sector.dim, 100)
        )
        draws /= np.linalg.norm(draws, axis=0, keepdims=True)
        shifted = np.zeros_like(draws)
        shifted[perm] = draws
        h_shifted = dense @ draws
        lhs = dense @ shifted
        rhs = np.zeros_like(h_shifted)
        rhs[perm] = h_shifted
        translation = max(translation, float(np.max(np.abs(lhs - rhs))))
        eigs = eig_hermitian(block)
        top = max(top, float(eigs.eigenvalues[-1]))
    results.append(_check("hamiltonian_hermiticity", herm, TOL_HERMITICITY))
    results.append(
        _check(
            "hamiltonian_entry_pattern",
            pattern,
            TOL_PATTERN * max(1.0, abs(spec.coupling)),
        )
    )
    results.append(
        _check(
            "translation_commutation",
            translation,
            TOL_TRANSLATION * max(1.0, abs(spec.coupling)),
        )
    )
    vac = enumerate_sector(spec.n_sites, 0)
    vac_energy = float(
        np.max(np.abs(build_hamiltonian(spec, vac).to_dense() @ np.ones(1)))
    )
    results.append(_check("vacuum_energy", vac_energy, TOL_VACUUM))
    results.append(
        _check(
            "spectrum_nonpositive",
            max(top, 0.0),
            TOL_SEMIDEFINITE * max(1.0, abs(spec.coupling)),
            note="largest sector eigenvalue",
        )
    )
    return results


def _xxx_one_magnon(spec: HamiltonianSpec) -> CheckResult:
    sector = enumerate_sector(spec.n_sites, 1)
    eigs = eig_hermitian(build_hamiltonian(spec, sector))
    band = np.sort(
        [
            spec.coupling * (math.cos(2.0 * math.pi * n / spec.n_sites) - 1.0)
            for n in range(spec.n_sites)
        ]
    )
    gap = float(np.max(np.abs(np.sort(eigs.eigenvalues) - band)))
    return _check(
        "one_magnon_band", gap, TOL_ONE_MAGNON * max(1.0, abs(spec.coupling))
    )


def _theta_antisymmetry(rng) -> CheckResult:
    worst = 0.0
    for _ in range(10_000):
        a, b = rng.uniform(1e-6, math.pi, size=2) * rng.choice([-1.0, 1.0], size=2)
        worst = max(worst, abs(theta_scatter(a, b) + theta_scatter(b, a)))
    return _check("theta_antisymmetry", worst, TOL_THETA_ANTISYM)


def _r1_shift_checks(spec: HamiltonianSpec, family, tag: str) -> list[CheckResult]:
    n = spec.n_sites
    amps = one_site_amplitudes(family)
    w = shift_coefficients_r1(family)
    antisym = float(np.max(np.abs(w + w.T)))
    row_sum = float(np.max(np.abs(0.5 * w.sum(axis=1) - amps)))
    matrix = shift_matrix_r1(family)
    column = matrix.to_dense() @ np.ones(1, dtype=complex)
    target = build_state(family, enumerate_sector(n, 1))
    fidelity = float(np.max(np.abs(column - target.amplitudes)))
    return [
        _check(f"{tag}_coefficients_antisymmetric", antisym, 0.0),
        _check(f"{tag}_row_sum", row_sum, TOL_ROW_SUM),
        _check(f"{tag}_matrix_reproduces_state", fidelity, TOL_SHIFT_FIDELITY),
    ]


def _ladder_checks(
    spec: HamiltonianSpec,
    families: list,
    energies: list[float],
    residual_tol: float,
    tag: str,
) -> list[CheckResult]:
    """Eigen-residual, shift fidelity and commutator checks along a ladder.

    families[i] describes the sector with families[i].n_down down spins;
    index 0 must be an eigenstate family at energies[0].
    """
    results = []
    worst_resid = 0.0
    worst_fidelity = 0.0
    worst_commutator = 0.0
    for idx in range(1, len(families)):
        fam_lo, fam_hi = families[idx - 1], families[idx]
        sector_lo = enumerate_sector(spec.n_sites, fam_lo.n_down)
        sector_hi = enumerate_sector(spec.n_sites, fam_hi.n_down)
        psi_hi = build_state(fam_hi, sector_hi)
        worst_resid = max(
            worst_resid, eigen_residual(spec, psi_hi, energies[idx])
        )
        raised = raise_action(fam_lo, fam_hi, sector_hi)
        worst_fidelity = max(
            worst_fidelity,
            float(np.max(np.abs(raised.amplitudes - psi_hi.amplitudes))),
        )
        lowered = lower_action(fam_hi, fam_lo, sector_lo)
        psi_lo = build_state(fam_lo, sector_lo)
        worst_fidelity = max(
            worst_fidelity,
            float(np.max(np.abs(lowered.amplitudes - psi_lo.amplitudes))),
        )
        worst_commutator = max(
            worst_commutator,
            commutator_residual(
                spec, fam_lo, fam_hi, energies[idx - 1], energies[idx]
            ),
        )
    results.append(_check(f"{tag}_eigen_residual", worst_resid, residual_tol))
    results.append(
        _check(f"{tag}_shift_fidelity", worst_fidelity, TOL_SHIFT_FIDELITY)
    )
    results.append(
        _check(f"{tag}_commutator_residual", worst_commutator, TOL_COMMUTATOR)
    )
    return results


def xxx_checks(
    spec: HamiltonianSpec, residual_tol: float, rng
) -> list[CheckResult]:
    n = spec.n_sites
    results = [_xxx_one_magnon(spec), _theta_antisymmetry(rng)]
    # sum rule for the one-magnon amplitude families
    worst = 0.0
    for k in range(1, n):
        theta = 2.0 * math.pi * k / n
        worst = max(
            worst, abs(sum(np.exp(1j * theta * m) for m in range(1, n + 1)))
        )
    results.append(_check("plane_wave_sum_rule", worst, TOL_SUM_RULE))
    results.extend(
        _r1_shift_checks(spec, plane_wave_family(n, 2.0 * math.pi / n), "shift_r1")
    )
    # enumerate real root sets per sector and validate everything on them
    ground: dict[int, tuple] = {0: (vacuum_family(n), 0.0)}
    worst_eq = 0.0
    worst_gap = 0.0
    worst_resid = 0.0
    worst_fidelity = 0.0
    worst_commutator = 0.0
    n_sets = 0
    zero_norm_sets = 0
    for r in range(1, n // 2 + 1):
        sector = enumerate_sector(n, r)
        eigs = eig_hermitian(build_hamiltonian(spec, sector))
        sets = solve_sector_roots(n, r)
        n_sets += len(sets)
        best: tuple | None = None
        fam_lo, e_lo = ground[r - 1]
        for roots in sets:
            worst_eq = max(worst_eq, roots.residual)
            energy = bethe_energy(roots, spec.coupling)
            worst_gap = max(
                worst_gap, spectrum_contains(eigs, energy, TOL_ED_MATCH).gap
            )
            family = bethe_family(n, roots)
            psi = build_state(family, sector)
            scale = norm(psi)
            if scale < 1e-10 * sector.dim * math.factorial(r):
                zero_norm_sets += 1
                continue
            worst_resid = max(worst_resid, eigen_residual(spec, psi, energy))
            raised = raise_action(fam_lo, family, sector)
            worst_fidelity = max(
                worst_fidelity,
                float(np.max(np.abs(raised.amplitudes - psi.amplitudes))),
            )
            sector_lo = enumerate_sector(n, r - 1)
            lowered = lower_action(family, fam_lo, sector_lo)
            psi_lo = build_state(fam_lo, sector_lo)
            worst_fidelity = max(
                worst_fidelity,
                float(np.max(np.abs(lowered.amplitudes - psi_lo.amplitudes))),
            )
            worst_commutator = max(
                worst_commutator,
                commutator_residual(spec, fam_lo, family, e_lo, energy),
            )
            if best is None or energy < best[1]:
                best = (family, energy)
        if best is None:
            break
        ground[r] = best
    scale = max(1.0, abs(spec.coupling))
    results.append(
        _check(
            "bethe_equation_residual",
            worst_eq,
            TOL_EQ_RESIDUAL,
            note=f"{n_sets} converged root sets, r <= {n // 2}",
        )
    )
    results.append(
        _check(
            "bethe_state_norms",
            float(zero_norm_sets),
            0.0,
            note="converged root sets whose built state vanished",
        )
    )
    results.append(
        _check("bethe_energy_ed_match", worst_gap, TOL_ED_MATCH * scale)
    )
    results.append(
        _check("bethe_eigen_residual", worst_resid, residual_tol * scale)
    )
    results.append(
        _check("bethe_shift_fidelity", worst_fidelity, TOL_SHIFT_FIDELITY)
    )
    results.append(
        _check(
            "bethe_commutator_residual", worst_commutator, TOL_COMMUTATOR * scale
        )
    )
    return results


def hs_checks(spec: HamiltonianSpec, residual_tol: float, rng) -> list[CheckResult]:
    n = spec.n_sites
    j0 = spec.coupling
    results = []
    const = hs_constants(n, j0)
    sx, sy = coupling_sums(n, j0)
    scale = max(abs(const.x), abs(const.y))
    results.append(
        _check(
            "coupling_sums_closed_form",
            max(abs(sx - const.x), abs(sy - const.y)) / scale,
            TOL_COUPLING_SUMS,
        )
    )
    results.append(
        _check(
            "coupling_sum_identity",
            abs(const.x + const.y - j0 * n**2 / 2.0) / scale,
            1e-14,
            note="x + y = J0 N^2 / 2",
        )
    )
    # energy ladder values against their low-order expansions
    expansions = [
        -2.0 * (const.x + const.y),
        -4.0 * (const.x + const.y) + 8.0 * j0,
        -6.0 * (const.x + const.y) + 32.0 * j0,
    ]
    formula_defect = max(
        abs(hs_energy(n, r, j0) - expected)
        for r, expected in zip((1, 2, 3), expansions)
    )
    results.append(
        _check(
            "energy_ladder_low_orders",
            formula_defect / max(1.0, abs(j0) * n**2),
            TOL_FORMULA,
        )
    )
    # alternating lattice sums entering the ladder derivation
    ns = np.arange(1, n)
    signs = (-1.0) ** ns
    identities = max(
        abs(np.sum(signs * np.sin(ns * math.pi / n) ** 2)),
        abs(np.sum(signs * np.cos(ns * math.pi / n) ** 2) + 1.0),
        abs(np.sum(signs) + 1.0),
    )
    results.append(
        _check("alternating_sum_identities", float(identities), TOL_ALTERNATING_IDENTITY)
    )
    # cotangent identity for additive angle triples
    worst = 0.0
    for _ in range(1000):
        l1, l2 = rng.uniform(0.05, math.pi / 2 - 0.05, size=2)
        l3 = l1 + l2
        cot = lambda x: math.cos(x) / math.sin(x)
        worst = max(
            worst,
            abs(cot(l1) * cot(l3) + cot(l2) * cot(l3) - cot(l1) * cot(l2) + 1.0),
        )
    results.append(_check("cot_triple_identity", worst, TOL_COT_IDENTITY))
    results.extend(_r1_shift_checks(spec, jastrow_family(n, 1), "shift_r1"))
    # full product-form ladder
    families = [jastrow_family(n, r) for r in range(0, n // 2 + 1)]
    energies = [hs_energy(n, r, j0) for r in range(0, n // 2 + 1)]
    results.extend(
        _ladder_checks(spec, families, energies, residual_tol * max(1.0, abs(j0)), "jastrow")
    )
    # translation eigenvalue (-1)^r per rung
    worst = 0.0
    for r in range(0, n // 2 + 1):
        sector = enumerate_sector(n, r)
        psi = build_state(families[r], sector)
        shifted = translate(psi)
        expect = (-1.0) ** r
        worst = max(
            worst,
            float(np.max(np.abs(shifted.amplitudes - expect * psi.amplitudes))),
        )
    results.append(
        _check("jastrow_translation_eigenvalue", worst, TOL_TRANSLATION_EIGEN)
    )
    # ladder energies against diagonalization, reported rung by rung
    for r in range(0, n // 2 + 1):
        sector = enumerate_sector(n, r)
        eigs = eig_hermitian(build_hamiltonian(spec, sector))
        match = spectrum_contains(
            eigs, hs_energy(n, r, j0), TOL_ED_MATCH * max(1.0, abs(j0))
        )
        results.append(
            _check(
                f"energy_ladder_ed_match_r{r}",
                match.gap,
                match.tol,
                note=f"nearest eigenvalue {match.nearest:.12g}",
            )
        )
    return results


def resonance_checks(spec: HamiltonianSpec) -> list[CheckResult]:
    """Two-level driven-transition checks using the model's first gap."""
    sector = enumerate_sector(spec.n_sites, 1)
    eigs = eig_hermitian(build_hamiltonian(spec, sector))
    omega0 = abs(float(eigs.eigenvalues[0]))
    system = LevelSystem(
        energies=np.array([0.0, float(eigs.eigenvalues[0])]),
        dipole=np.array([[0.0, 1.0], [1.0, 0.0]]),
    )
    coupling = 0.02 * omega0
    drive = DriveField(coupling, omega0)
    dt = default_timestep(system, [drive], rwa=True, steps_per_period=256)
    t_end = math.pi / (2.0 * coupling)
    traj = integrate_amplitudes(system, [drive], t_end, dt, rwa=True)
    phase = coupling * traj.times[-1]
    closed = np.array([math.cos(phase), math.sin(phase) * 1j])
    endpoint = float(np.linalg.norm(traj.amplitudes[-1] - closed))
    results = [
        _check("rabi_closed_form_endpoint", endpoint, TOL_RABI),
        _check("rabi_unitarity_drift", traj.max_unitarity_drift, TOL_UNITARITY),
    ]
    omegas = np.linspace(0.8 * omega0, 1.2 * omega0, 21)
    scan = resonance_scan(
        system, coupling, omegas, steps_per_period=64, t_end=t_end
    )
    grid_step = float(omegas[1] - omegas[0])
    results.append(
        _check(
            "resonance_peak_location",
            abs(scan.best_omega - omega0),
            grid_step + 1e-12,
            note=f"peak transfer {scan.best_transfer:.6f}",
        )
    )
    return results


def run_verify(
    model: str,
    n_sites: int,
    coupling: float,
    tol: float | None = None,
    seed: int = DEFAULT_SEED,
) -> list[CheckResult]:
    """Full invariant suite for one (model, N, coupling) choice."""
    spec = HamiltonianSpec(model, n_sites, coupling)
    residual_tol = tol if tol is not None else DEFAULT_RESIDUAL_TOL[model]
    rng = np.random.default_rng(seed)
    results = structural_checks(spec, rng)
    if model == MODEL_XXX:
        results.extend(xxx_checks(spec, residual_tol, rng))
    else:
        results.extend(hs_checks(spec, residual_tol, rng))
    results.extend(resonance_checks(spec))
    return results
