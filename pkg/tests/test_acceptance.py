"""Acceptance suite: one test per criterion, each printing PASS or FAIL.

Run with ``pytest tests/test_acceptance.py -v -s`` for the line-per-criterion
report.  Tolerances are pinned here and never loosened at runtime.
"""

import math
import subprocess
import sys

import numpy as np

from helpers import full_hamiltonian, sector_block, sector_indices
from spinshift.basis import StateVector, basis_state, enumerate_sector, translate
from spinshift.bethe import (
    bethe_energy,
    solve_sector_roots,
    theta_scatter,
)
from spinshift.hsm import hs_constants, hs_energy
from spinshift.models import HamiltonianSpec, apply_hamiltonian, build_hamiltonian
from spinshift.oracle import eig_hermitian, eigen_residual, spectrum_contains
from spinshift.resonance import (
    DriveField,
    LevelSystem,
    default_timestep,
    integrate_amplitudes,
    resonance_scan,
)
from spinshift.shift import (
    bethe_family,
    build_state,
    commutator_residual,
    jastrow_family,
    lower_action,
    plane_wave_family,
    raise_action,
    shift_matrix_r1,
    vacuum_family,
)


def report(name: str, passed: bool, detail: str) -> None:
    print(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
    assert passed, f"{name}: {detail}"


def test_criterion_1_one_magnon_band():
    worst = 0.0
    for n in (4, 6, 8, 10):
        spec = HamiltonianSpec.xxx(n, 1.0)
        eigs = eig_hermitian(build_hamiltonian(spec, enumerate_sector(n, 1)))
        band = np.sort(
            [math.cos(2 * math.pi * k / n) - 1.0 for k in range(n)]
        )
        worst = max(worst, float(np.max(np.abs(np.sort(eigs.eigenvalues) - band))))
    report(
        "criterion 1 (one-magnon band, N in 4..10)",
        worst <= 1e-10,
        f"max multiset gap {worst:.3e} (tol 1e-10)",
    )


def test_criterion_2_two_magnon_and_full_enumeration():
    from fractions import Fraction

    from spinshift.bethe import QuantumNumberSet, solve_bethe

    roots = solve_bethe(4, QuantumNumberSet((Fraction(3, 2), Fraction(-3, 2)), 4))
    theta_gap = max(
        abs(sorted(roots.thetas)[0] + 2 * math.pi / 3),
        abs(sorted(roots.thetas)[1] - 2 * math.pi / 3),
    )
    spec4 = HamiltonianSpec.xxx(4, 1.0)
    sector = enumerate_sector(4, 2)
    floor = float(
        eig_hermitian(build_hamiltonian(spec4, sector)).eigenvalues[0]
    )
    energy = bethe_energy(roots, 1.0)
    ok = theta_gap <= 1e-9 and abs(energy - floor) <= 1e-8
    detail = (
        f"theta gap {theta_gap:.3e}, E={energy:.12g} vs sector floor "
        f"{floor:.12g}"
    )
    worst_gap = 0.0
    worst_resid = 0.0
    n_sets = 0
    for n in (6, 8):
        spec = HamiltonianSpec.xxx(n, 1.0)
        for r in range(1, n // 2 + 1):
            sec = enumerate_sector(n, r)
            eigs = eig_hermitian(build_hamiltonian(spec, sec))
            for rts in solve_sector_roots(n, r):
                n_sets += 1
                e = bethe_energy(rts, 1.0)
                worst_gap = max(worst_gap, spectrum_contains(eigs, e, 1e-8).gap)
                psi = build_state(bethe_family(n, rts), sec)
                worst_resid = max(worst_resid, eigen_residual(spec, psi, e))
    ok = ok and worst_gap <= 1e-8 and worst_resid <= 1e-8
    report(
        "criterion 2 (real-root solutions vs diagonalization, N in 6..8)",
        ok,
        detail
        + f"; {n_sets} root sets, worst spectrum gap {worst_gap:.3e}, "
        f"worst eigen-residual {worst_resid:.3e} (tol 1e-8)",
    )


def test_criterion_3_product_state_ladder():
    findings = []
    worst_resid = 0.0
    worst_gap = 0.0
    for n in (4, 6, 8):
        spec = HamiltonianSpec.hs(n, 1.0)
        const = hs_constants(n, 1.0)
        s = const.x + const.y
        identities = max(
            abs(hs_energy(n, 1, 1.0) - (-2 * s)),
            abs(hs_energy(n, 2, 1.0) - (-4 * s + 8.0)),
            abs(hs_energy(n, 3, 1.0) - (-6 * s + 32.0)),
        )
        if identities > 1e-12 * max(1.0, s):
            findings.append(f"N={n}: ladder formula identities defect {identities:.3e}")
        for r in range(0, n // 2 + 1):
            sec = enumerate_sector(n, r)
            psi = build_state(jastrow_family(n, r), sec)
            energy = hs_energy(n, r, 1.0)
            resid = eigen_residual(spec, psi, energy)
            worst_resid = max(worst_resid, resid)
            if resid > 1e-9:
                findings.append(f"N={n}, r={r}: eigen-residual {resid:.3e}")
            eigs = eig_hermitian(build_hamiltonian(spec, sec))
            match = spectrum_contains(eigs, energy, 1e-8)
            worst_gap = max(worst_gap, match.gap)
            if not match.matched:
                findings.append(
                    f"N={n}, r={r}: ladder energy {energy:.12g} missed the "
                    f"spectrum by {match.gap:.3e}"
                )
    report(
        "criterion 3 (product-state ladder, N in 4..8, r <= N/2)",
        not findings,
        f"worst residual {worst_resid:.3e} (tol 1e-9), worst spectrum gap "
        f"{worst_gap:.3e} (tol 1e-8); findings: {findings or 'none'}",
    )


def test_criterion_4_shift_operator_fidelity():
    worst_fid = 0.0
    worst_comm = 0.0
    # product family ladders
    for n in (4, 6, 8):
        spec = HamiltonianSpec.hs(n, 1.0)
        fams = [jastrow_family(n, r) for r in range(n // 2 + 1)]
        energies = [hs_energy(n, r, 1.0) for r in range(n // 2 + 1)]
        for lo, hi, e_lo, e_hi in zip(fams, fams[1:], energies, energies[1:]):
            sec_hi = enumerate_sector(n, hi.n_down)
            sec_lo = enumerate_sector(n, lo.n_down)
            target_hi = build_state(hi, sec_hi)
            target_lo = build_state(lo, sec_lo)
            worst_fid = max(
                worst_fid,
                float(np.max(np.abs(
                    raise_action(lo, hi, sec_hi).amplitudes - target_hi.amplitudes
                ))),
                float(np.max(np.abs(
                    lower_action(hi, lo, sec_lo).amplitudes - target_lo.amplitudes
                ))),
            )
            worst_comm = max(
                worst_comm, commutator_residual(spec, lo, hi, e_lo, e_hi)
            )
    # permutation-sum family ladders over every converged root set
    for n in (4, 6, 8):
        spec = HamiltonianSpec.xxx(n, 1.0)
        ground = (vacuum_family(n), 0.0)
        for r in range(1, n // 2 + 1):
            sec_hi = enumerate_sector(n, r)
            sec_lo = enumerate_sector(n, r - 1)
            best = None
            for rts in solve_sector_roots(n, r):
                fam = bethe_family(n, rts)
                e = bethe_energy(rts, 1.0)
                target_hi = build_state(fam, sec_hi)
                target_lo = build_state(ground[0], sec_lo)
                worst_fid = max(
                    worst_fid,
                    float(np.max(np.abs(
                        raise_action(ground[0], fam, sec_hi).amplitudes
                        - target_hi.amplitudes
                    ))),
                    float(np.max(np.abs(
                        lower_action(fam, ground[0], sec_lo).amplitudes
                        - target_lo.amplitudes
                    ))),
                )
                worst_comm = max(
                    worst_comm,
                    commutator_residual(spec, ground[0], fam, ground[1], e),
                )
                if best is None or e < best[1]:
                    best = (fam, e)
            ground = best
    # explicit vacuum-to-one-magnon matrices reproduce the r=1 states
    worst_matrix = 0.0
    for family in (plane_wave_family(8, math.pi / 4), jastrow_family(8, 1)):
        column = shift_matrix_r1(family).to_dense() @ np.ones(1, dtype=complex)
        target = build_state(family, enumerate_sector(8, 1))
        worst_matrix = max(
            worst_matrix, float(np.max(np.abs(column - target.amplitudes)))
        )
    ok = worst_fid <= 1e-12 and worst_matrix <= 1e-12 and worst_comm <= 1e-10
    report(
        "criterion 4 (shift-operator fidelity, N <= 8)",
        ok,
        f"entrywise defect {worst_fid:.3e} (tol 1e-12), r=1 matrix defect "
        f"{worst_matrix:.3e} (tol 1e-12), commutator residual "
        f"{worst_comm:.3e} (tol 1e-10)",
    )


def test_criterion_5_structural_invariants():
    herm = 0.0
    block_leak = 0.0
    vacuum = 0.0
    translation = 0.0
    rng = np.random.default_rng(29)
    specs = [HamiltonianSpec.xxx(n) for n in (4, 6, 8)] + [
        HamiltonianSpec.hs(n) for n in (4, 6, 8)
    ]
    for spec in specs:
        n = spec.n_sites
        for r in range(n // 2 + 1):
            sector = enumerate_sector(n, r)
            dense = build_hamiltonian(spec, sector).to_dense()
            herm = max(herm, float(np.max(np.abs(dense - dense.conj().T))))
            for _ in range(10):
                vec = rng.standard_normal(sector.dim) + 1j * rng.standard_normal(
                    sector.dim
                )
                state = StateVector(sector, vec / np.linalg.norm(vec))
                left = apply_hamiltonian(spec, translate(state))
                right = translate(apply_hamiltonian(spec, state))
                translation = max(
                    translation,
                    float(np.max(np.abs(left.amplitudes - right.amplitudes))),
                )
    for spec in (HamiltonianSpec.xxx(12), HamiltonianSpec.hs(12)):
        vac = basis_state(enumerate_sector(12, 0), 0)
        vacuum = max(
            vacuum, float(np.max(np.abs(apply_hamiltonian(spec, vac).amplitudes)))
        )
    for spec in (HamiltonianSpec.xxx(6), HamiltonianSpec.hs(6)):
        full = full_hamiltonian(spec)
        for r in range(7):
            rows = sector_indices(6, r)
            others = [m for m in range(64) if bin(m).count("1") != r]
            block_leak = max(
                block_leak,
                float(np.max(np.abs(full[np.ix_(rows, others)]), initial=0.0)),
            )
            dense = build_hamiltonian(spec, enumerate_sector(6, r)).to_dense()
            block_leak = max(
                block_leak, float(np.max(np.abs(dense - sector_block(full, 6, r))))
            )
    antisym = 0.0
    for _ in range(10_000):
        a, b = rng.uniform(1e-6, math.pi, size=2) * rng.choice([-1, 1], size=2)
        antisym = max(antisym, abs(theta_scatter(a, b) + theta_scatter(b, a)))
    sums = 0.0
    for n in range(4, 17, 2):
        ks = np.arange(1, n)
        signs = (-1.0) ** ks
        sums = max(
            sums,
            abs(np.sum(signs * np.sin(ks * math.pi / n) ** 2)),
            abs(np.sum(signs * np.cos(ks * math.pi / n) ** 2) + 1.0),
            abs(np.sum(signs) + 1.0),
        )
    cot = lambda x: math.cos(x) / math.sin(x)
    cot_defect = 0.0
    for _ in range(1000):
        l1, l2 = rng.uniform(0.05, math.pi / 2 - 0.05, size=2)
        cot_defect = max(
            cot_defect,
            abs(
                cot(l1) * cot(l1 + l2)
                + cot(l2) * cot(l1 + l2)
                - cot(l1) * cot(l2)
                + 1.0
            ),
        )
    ok = (
        herm == 0.0
        and block_leak <= 1e-12
        and vacuum <= 1e-14
        and translation <= 1e-10
        and antisym <= 1e-13
        and sums <= 1e-12
        and cot_defect <= 1e-10
    )
    report(
        "criterion 5 (structural invariants)",
        ok,
        f"hermiticity {herm:.1e} (=0), sector leakage {block_leak:.1e} "
        f"(tol 1e-12), vacuum {vacuum:.1e} (tol 1e-14), translation "
        f"{translation:.1e}, scatter antisymmetry {antisym:.1e} (tol 1e-13), "
        f"lattice sums {sums:.1e} (tol 1e-12), cot identity {cot_defect:.1e} "
        f"(tol 1e-10)",
    )


def test_criterion_6_resonance():
    omega0, v = 2.0, 0.05 * 2.0
    system = LevelSystem(
        energies=np.array([0.0, omega0]),
        dipole=np.array([[0.0, 1.0], [1.0, 0.0]]),
    )
    drive = DriveField(v, omega0)
    dt = default_timestep(system, [drive], rwa=True, steps_per_period=256)
    t_end = math.pi / (2 * v)
    traj = integrate_amplitudes(system, [drive], t_end, dt, rwa=True)
    closed = np.array(
        [math.cos(v * traj.times[-1]), 1j * math.sin(v * traj.times[-1])]
    )
    endpoint = float(np.linalg.norm(traj.amplitudes[-1] - closed))
    omegas = np.linspace(0.5 * omega0, 1.5 * omega0, 21)
    scan = resonance_scan(system, v, omegas, steps_per_period=256, t_end=t_end)
    grid_step = float(omegas[1] - omegas[0])
    drift = max(traj.max_unitarity_drift, scan.max_unitarity_drift)
    ok = (
        endpoint <= 1e-6
        and abs(scan.best_omega - omega0) <= grid_step
        and drift <= 1e-8
    )
    report(
        "criterion 6 (driven two-level transitions)",
        ok,
        f"closed-form endpoint error {endpoint:.3e} (tol 1e-6), peak at "
        f"{scan.best_omega:.6g} vs Bohr {omega0} (grid step {grid_step:.3g}), "
        f"unitarity drift {drift:.3e} (tol 1e-8)",
    )


def test_criterion_7_verify_determinism():
    cmd = [
        sys.executable, "-m", "spinshift",
        "verify", "--model", "xxx", "--n", "4", "--seed", "11",
    ]
    first = subprocess.run(cmd, capture_output=True, check=True)
    second = subprocess.run(cmd, capture_output=True, check=True)
    ok = first.stdout == second.stdout and len(first.stdout) > 0
    report(
        "criterion 7 (byte-identical verify reports)",
        ok,
        f"{len(first.stdout)} bytes, identical: {first.stdout == second.stdout}",
    )
