"""Command-line surface: spectra, root solving, verification, resonance.

Exit codes: 0 when everything passed, 1 for a scientific failure (a
closed form missed the diagonalized spectrum, roots degenerated, the
integrator lost unitarity, a verify check failed), 2 for a usage error.
Reports go to stdout (JSON by default, CSV on request) and optionally to
``--out``; diagnostics go to stderr.  ``--figdir`` renders figures next
to the delimited output for the spectrum and resonance commands.
SPINSHIFT_THREADS sets the worker count for scan parallelism.
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .basis import enumerate_sector
from .bethe import (
    BetheSolveError,
    QuantumNumberSet,
    bethe_energy,
    solve_bethe,
    solve_sector_roots,
)
from .checks import DEFAULT_SEED, run_verify
from .hsm import hs_energy
from .models import MODEL_HS, MODEL_XXX, HamiltonianSpec, build_hamiltonian
from .oracle import eig_hermitian, spectrum_contains
from .report import (
    assemble_report,
    csv_dumps,
    json_dumps,
    render_resonance_figure,
    render_spectrum_figure,
)
from .resonance import (
    LevelSystem,
    UnitarityError,
    dipole_from_ladder,
    resonance_scan,
)
from .shift import jastrow_family, plane_wave_family, vacuum_family

_QN_TOKEN = re.compile(r"^[+-]?\d+(/\d+)?$")


class UsageError(Exception):
    """Invalid configuration; maps to exit code 2."""


def _coupling(args) -> float:
    return args.j0 if args.model == MODEL_HS else args.j


def _make_spec(args) -> HamiltonianSpec:
    try:
        return HamiltonianSpec(args.model, args.n, _coupling(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _parse_quantum_numbers(text: str, n_sites: int) -> QuantumNumberSet:
    tokens = [t.strip() for t in text.split(",") if t.strip()]
    if not tokens:
        raise UsageError("empty quantum-number list")
    for token in tokens:
        if not _QN_TOKEN.match(token):
            raise UsageError(
                f"quantum number {token!r} is not an integer or p/q rational"
            )
    try:
        return QuantumNumberSet(tuple(Fraction(t) for t in tokens), n_sites)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _parse_sectors(args) -> list[int]:
    if args.sector is None:
        return list(range(0, args.n // 2 + 1))
    sectors = []
    for chunk in args.sector:
        for token in str(chunk).split(","):
            token = token.strip()
            if not token:
                continue
            try:
                r = int(token)
            except ValueError:
                raise UsageError(f"sector {token!r} is not an integer") from None
            if not 0 <= r <= args.n:
                raise UsageError(f"sector {r} outside 0..{args.n}")
            sectors.append(r)
    if not sectors:
        raise UsageError("empty sector list")
    return sorted(set(sectors))


def _emit(report: dict, args, csv_header, csv_rows) -> None:
    if args.format == "csv":
        text = csv_dumps(csv_header, csv_rows)
    else:
        text = json_dumps(report)
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(text)


def _spectrum_predictions(spec: HamiltonianSpec, r: int):
    """Closed-form energies available for one sector, as (label, energy)."""
    out = []
    if r == 0:
        out.append(("vacuum", 0.0))
    elif spec.model == MODEL_HS:
        out.append((f"ladder_r{r}", hs_energy(spec.n_sites, r, spec.coupling)))
    elif r == 1:
        for n in range(spec.n_sites):
            energy = spec.coupling * (
                math.cos(2.0 * math.pi * n / spec.n_sites) - 1.0
            )
            out.append((f"one_magnon_n{n}", energy))
    else:
        for roots in solve_sector_roots(spec.n_sites, r):
            label = "bethe_I=" + ",".join(
                str(v) for v in roots.quantum_numbers.values
            )
            out.append((label, bethe_energy(roots, spec.coupling)))
    return out


def cmd_spectrum(args) -> int:
    spec = _make_spec(args)
    sectors = _parse_sectors(args)
    if args.tol <= 0:
        raise UsageError("tolerance must be positive")
    results = []
    checks = []
    csv_rows = []
    figure_sectors = {}
    figure_predictions = []
    failed = False
    for r in sectors:
        sector = enumerate_sector(spec.n_sites, r)
        eigs = eig_hermitian(build_hamiltonian(spec, sector))
        values = [float(v) for v in eigs.eigenvalues]
        results.append({"sector": r, "dim": sector.dim, "eigenvalues": values})
        figure_sectors[r] = values
        for index, value in enumerate(values):
            csv_rows.append([r, "eigenvalue", str(index), value, None, None])
        for label, energy in _spectrum_predictions(spec, r):
            match = spectrum_contains(eigs, energy, args.tol)
            failed = failed or not match.matched
            checks.append(
                {
                    "name": f"sector{r}:{label}",
                    "passed": match.matched,
                    "value": match.gap,
                    "tol": args.tol,
                    "note": f"prediction {energy:.12g} nearest {match.nearest:.12g}",
                }
            )
            results.append(
                {
                    "sector": r,
                    "prediction": label,
                    "energy": energy,
                    "nearest": match.nearest,
                    "gap": match.gap,
                    "matched": match.matched,
                }
            )
            figure_predictions.append((r, energy, label))
            csv_rows.append([r, "prediction", label, energy, match.gap, match.matched])
    config = {
        "model": spec.model,
        "n": spec.n_sites,
        "coupling": spec.coupling,
        "sectors": sectors,
        "tol": args.tol,
        "format": args.format,
    }
    report = assemble_report("spectrum", config, results, checks)
    _emit(report, args, ["sector", "kind", "label", "value", "gap", "matched"], csv_rows)
    if args.figdir:
        path = Path(args.figdir)
        path.mkdir(parents=True, exist_ok=True)
        target = path / f"spectrum_{spec.model}_n{spec.n_sites}.png"
        render_spectrum_figure(
            target,
            figure_sectors,
            figure_predictions,
            f"{spec.model} chain, N={spec.n_sites}",
        )
        print(f"figure written to {target}", file=sys.stderr)
    return 1 if failed else 0


def cmd_bethe(args) -> int:
    if args.tol <= 0:
        raise UsageError("tolerance must be positive")
    try:
        spec = HamiltonianSpec(MODEL_XXX, args.n, args.j)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    qn = _parse_quantum_numbers(args.qn, args.n)
    config = {
        "n": args.n,
        "coupling": args.j,
        "quantum_numbers": [str(v) for v in qn.values],
        "tol": args.tol,
        "format": args.format,
    }
    try:
        roots = solve_bethe(args.n, qn)
    except BetheSolveError as exc:
        checks = [
            {
                "name": "solve",
                "passed": False,
                "value": None,
                "tol": args.tol,
                "note": f"{type(exc).__name__}: {exc}",
            }
        ]
        report = assemble_report("bethe", config, [], checks)
        _emit(report, args, ["kind", "index", "label", "value"],
              [["error", None, type(exc).__name__, None]])
        print(f"root solve failed: {exc}", file=sys.stderr)
        return 1
    energy = bethe_energy(roots, args.j)
    sector = enumerate_sector(args.n, qn.r)
    eigs = eig_hermitian(build_hamiltonian(spec, sector))
    match = spectrum_contains(eigs, energy, args.tol)
    results = [
        {
            "roots": [
                {"index": i, "quantum_number": str(qn.values[i]), "theta": t}
                for i, t in enumerate(roots.thetas)
            ],
            "residual": roots.residual,
            "energy": energy,
            "nearest_eigenvalue": match.nearest,
            "gap": match.gap,
        }
    ]
    checks = [
        {
            "name": "spectrum_match",
            "passed": match.matched,
            "value": match.gap,
            "tol": args.tol,
            "note": f"energy {energy:.12g} vs sector-{qn.r} spectrum",
        }
    ]
    csv_rows = [["root", i, str(qn.values[i]), t] for i, t in enumerate(roots.thetas)]
    csv_rows.append(["residual", None, None, roots.residual])
    csv_rows.append(["energy", None, None, energy])
    csv_rows.append(["gap", None, None, match.gap])
    report = assemble_report("bethe", config, results, checks)
    _emit(report, args, ["kind", "index", "label", "value"], csv_rows)
    return 0 if match.matched else 1


def cmd_verify(args) -> int:
    spec = _make_spec(args)  # validates model constraints up front
    if args.tol is not None and args.tol <= 0:
        raise UsageError("tolerance must be positive")
    outcomes = run_verify(
        spec.model, spec.n_sites, spec.coupling, tol=args.tol, seed=args.seed
    )
    checks = [
        {
            "name": c.name,
            "passed": c.passed,
            "value": c.value,
            "tol": c.tol,
            "note": c.note,
        }
        for c in outcomes
    ]
    n_failed = sum(not c.passed for c in outcomes)
    results = [{"checks_run": len(outcomes), "checks_failed": n_failed}]
    config = {
        "model": spec.model,
        "n": spec.n_sites,
        "coupling": spec.coupling,
        "tol": args.tol,
        "seed": args.seed,
        "format": args.format,
    }
    report = assemble_report("verify", config, results, checks)
    csv_rows = [[c.name, c.passed, c.value, c.tol, c.note] for c in outcomes]
    _emit(report, args, ["name", "passed", "value", "tol", "note"], csv_rows)
    if n_failed:
        print(f"{n_failed} of {len(outcomes)} checks failed", file=sys.stderr)
    return 1 if n_failed else 0


def _resonance_levels(args):
    """Two-level system: explicit gap or the model's first excitation."""
    if args.two_level:
        if args.omega0 is None or args.omega0 <= 0:
            raise UsageError("--two-level needs --omega0 > 0")
        families = None
        energies = np.array([0.0, args.omega0])
    else:
        if args.model is None:
            raise UsageError("pass --model/--n or --two-level --omega0")
        spec = _make_spec(args)
        n = spec.n_sites
        if spec.model == MODEL_HS:
            families = [vacuum_family(n), jastrow_family(n, 1)]
            e1 = hs_energy(n, 1, spec.coupling)
        else:
            theta = 2.0 * math.pi * (n // 2) / n
            families = [vacuum_family(n), plane_wave_family(n, theta)]
            e1 = spec.coupling * (math.cos(theta) - 1.0)
        energies = np.array([0.0, e1])
    if families is not None:
        dipole = dipole_from_ladder({(1, 0): 1.0}, families)
    else:
        dipole = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    return LevelSystem(energies=energies, dipole=dipole)


def cmd_resonance(args) -> int:
    system = _resonance_levels(args)
    omega0 = abs(float(system.energies[1] - system.energies[0]))
    amplitude = args.amplitude if args.amplitude is not None else 0.02 * omega0
    if amplitude <= 0:
        raise UsageError("drive amplitude must be positive")
    omega_min = args.omega_min if args.omega_min is not None else 0.5 * omega0
    omega_max = args.omega_max if args.omega_max is not None else 1.5 * omega0
    if not (
        math.isfinite(omega_min)
        and math.isfinite(omega_max)
        and 0 <= omega_min <= omega_max
    ):
        raise UsageError(
            f"malformed frequency range [{omega_min}, {omega_max}]"
        )
    if args.omega_steps < 1:
        raise UsageError("need at least one scan frequency")
    omegas = np.linspace(omega_min, omega_max, args.omega_steps)
    workers = int(os.environ.get("SPINSHIFT_THREADS", "1") or "1")
    try:
        scan = resonance_scan(
            system,
            amplitude,
            omegas,
            t_end=args.t_end,
            dt=args.dt,
            rwa=not args.full,
            steps_per_period=128,
            workers=max(1, workers),
        )
    except UnitarityError as exc:
        print(f"integration failed: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        # bad combination of dt / t_end / frequency grid
        raise UsageError(str(exc)) from exc
    results = [
        {
            "best_omega": scan.best_omega,
            "best_transfer": scan.best_transfer,
            "bohr_frequency": omega0,
            "max_unitarity_drift": scan.max_unitarity_drift,
        }
    ]
    results.extend(
        {"omega": float(w), "peak_transfer": float(p)}
        for w, p in zip(scan.omegas, scan.transfers)
    )
    checks = [
        {
            "name": "unitarity_drift",
            "passed": scan.max_unitarity_drift <= 1e-6,
            "value": scan.max_unitarity_drift,
            "tol": 1e-6,
            "note": "",
        }
    ]
    config = {
        "two_level": bool(args.two_level),
        "model": args.model,
        "n": args.n,
        "coupling": None if args.two_level else _coupling(args),
        "omega0": omega0,
        "amplitude": amplitude,
        "omega_min": float(omega_min),
        "omega_max": float(omega_max),
        "omega_steps": args.omega_steps,
        "rwa": not args.full,
        "format": args.format,
    }
    report = assemble_report("resonance", config, results, checks)
    csv_rows = [[float(w), float(p)] for w, p in zip(scan.omegas, scan.transfers)]
    _emit(report, args, ["omega", "peak_transfer"], csv_rows)
    if args.figdir:
        path = Path(args.figdir)
        path.mkdir(parents=True, exist_ok=True)
        target = path / "resonance_scan.png"
        render_resonance_figure(
            target,
            scan.omegas,
            scan.transfers,
            scan.best_omega,
            f"drive scan (Bohr frequency {omega0:.6g})",
        )
        print(f"figure written to {target}", file=sys.stderr)
    return 0


def _add_common_output(parser) -> None:
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", help="also write the report to this file")


def _add_model_args(parser, required: bool = True) -> None:
    parser.add_argument(
        "--model", choices=(MODEL_XXX, MODEL_HS), required=required
    )
    parser.add_argument("--n", type=int, required=required, help="chain length")
    parser.add_argument("--j", type=float, default=1.0, help="xxx coupling J")
    parser.add_argument("--j0", type=float, default=1.0, help="hs coupling J0")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinshift",
        description="Spin-1/2 chain spectra from shift operators, with "
        "diagonalization cross-checks and a driven-transition scanner.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="sector spectra and closed-form matches")
    _add_model_args(p)
    p.add_argument(
        "--sector",
        action="append",
        help="sector r (repeatable or comma-separated); default 0..N/2",
    )
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--figdir", help="render a level-diagram figure here")
    _add_common_output(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("bethe", help="solve the coupled momentum equations")
    p.add_argument("--n", type=int, required=True, help="chain length")
    p.add_argument("--j", type=float, default=1.0, help="coupling J")
    p.add_argument(
        "--qn",
        required=True,
        help="comma-separated quantum numbers, e.g. 3/2,-3/2",
    )
    p.add_argument("--tol", type=float, default=1e-8)
    _add_common_output(p)
    p.set_defaults(func=cmd_bethe)

    p = sub.add_parser("verify", help="run the full invariant suite")
    _add_model_args(p)
    p.add_argument(
        "--tol",
        type=float,
        default=None,
        help="eigen-residual tolerance (default 1e-8 xxx, 1e-9 hs)",
    )
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _add_common_output(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("resonance", help="scan drive frequencies for transfer")
    _add_model_args(p, required=False)
    p.add_argument("--two-level", action="store_true", help="bare two-level demo")
    p.add_argument("--omega0", type=float, help="two-level gap (with --two-level)")
    p.add_argument("--amplitude", type=float, help="drive amplitude (energy units)")
    p.add_argument("--omega-min", type=float)
    p.add_argument("--omega-max", type=float)
    p.add_argument("--omega-steps", type=int, default=41)
    p.add_argument("--t-end", type=float, help="integration time per point")
    p.add_argument("--dt", type=float, help="integrator step")
    p.add_argument(
        "--full",
        action="store_true",
        help="keep the counter-rotating drive term",
    )
    p.add_argument("--figdir", help="render the scan figure here")
    _add_common_output(p)
    p.set_defaults(func=cmd_resonance)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
