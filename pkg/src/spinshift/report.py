"""Machine-readable reports: JSON with 17-significant-digit numbers,
comma-separated tables, and figure rendering for the report-producing
commands.

The JSON writer is hand-rolled so float formatting is pinned: identical
inputs serialize to identical bytes, which the verify command's
determinism contract relies on.
"""

from __future__ import annotations

import json
import math
from typing import Mapping, Sequence

import numpy as np

SCHEMA_VERSION = "0.1.0"


def _denumpy(value):
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def format_number(value) -> str:
    value = _denumpy(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"reports carry finite numbers only, got {value}")
    return format(value, ".17g")


def json_dumps(obj, indent: int = 2) -> str:
    """Serialize dict/list/str/number/bool/None with fixed float format."""

    def emit(node, depth: int) -> str:
        pad = " " * (indent * depth)
        inner = " " * (indent * (depth + 1))
        node = _denumpy(node)
        if node is None:
            return "null"
        if isinstance(node, bool):
            return "true" if node else "false"
        if isinstance(node, (int, float)):
            return format_number(node)
        if isinstance(node, str):
            return json.dumps(node)
        if isinstance(node, Mapping):
            if not node:
                return "{}"
            rows = [
                f"{inner}{json.dumps(str(key))}: {emit(value, depth + 1)}"
                for key, value in node.items()
            ]
            return "{\n" + ",\n".join(rows) + f"\n{pad}}}"
        if isinstance(node, (list, tuple)):
            if not node:
                return "[]"
            rows = [f"{inner}{emit(value, depth + 1)}" for value in node]
            return "[\n" + ",\n".join(rows) + f"\n{pad}]"
        raise TypeError(f"unsupported report node of type {type(node)!r}")

    return emit(obj, 0) + "\n"


def assemble_report(command: str, config: Mapping, results, checks) -> dict:
    return {
        "command": command,
        "config": dict(config),
        "results": list(results),
        "checks": list(checks),
        "version": SCHEMA_VERSION,
    }


def csv_dumps(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    """Comma-separated table with a header row and '.' decimals."""

    def cell(value) -> str:
        if value is None:
            return ""
        if isinstance(value, str):
            if any(c in value for c in ',"\n'):
                return '"' + value.replace('"', '""') + '"'
            return value
        return format_number(value)

    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(cell(v) for v in row))
    return "\n".join(lines) + "\n"


def render_spectrum_figure(path, sectors: Mapping[int, Sequence[float]],
                           predictions: Sequence[tuple[int, float, str]],
                           title: str) -> None:
    """Level diagram: eigenvalues as ticks per sector, predictions as markers."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for r, values in sorted(sectors.items()):
        ax.hlines(values, r - 0.3, r + 0.3, color="tab:blue", lw=1.2)
    seen_label = False
    for r, energy, _label in predictions:
        ax.plot(
            [r],
            [energy],
            "x",
            color="tab:red",
            ms=8,
            label=None if seen_label else "closed form",
        )
        seen_label = True
    ax.set_xlabel("down spins r")
    ax.set_ylabel("energy")
    ax.set_title(title)
    if seen_label:
        ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_resonance_figure(path, omegas, transfers, best_omega: float,
                            title: str) -> None:
    """Transfer-versus-drive-frequency curve with the located peak marked."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(omegas, transfers, "-o", ms=3, color="tab:blue")
    ax.axvline(best_omega, color="tab:red", ls="--", lw=1.0,
               label=f"peak at {best_omega:.6g}")
    ax.set_xlabel("drive frequency")
    ax.set_ylabel("peak transfer probability")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(title)
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
