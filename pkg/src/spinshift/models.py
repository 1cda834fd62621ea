"""Sector-restricted Hamiltonians for the two spin-chain models.

Both models are sums of two-site exchange bonds of the form
w * (S_i . S_j - 1/4).  Within a fixed-magnetization sector each bond
contributes 0 for an aligned pair, -w/2 on the diagonal for an
anti-aligned pair, and +w/2 connecting to the configuration with the pair
swapped.  The nearest-neighbour ring uses a uniform weight w = J; the
long-ranged model couples every pair (i < j) with w = 4 * J0 / sin^2(d
pi / N), d = j - i.  Since sin^2 is symmetric about N/2 the coupling of
separation d equals that of N - d, so the directed difference d = j - i
in 1..N-1 is unambiguous on the ring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .basis import MAX_SITES, SectorBasis, StateVector

MODEL_XXX = "xxx"
MODEL_HS = "hs"

DENSE_DIM_LIMIT = 4096


@dataclass(frozen=True)
class HamiltonianSpec:
    """Model tag plus chain length and coupling (J for xxx, J0 for hs)."""

    model: str
    n_sites: int
    coupling: float = 1.0

    def __post_init__(self):
        if self.model not in (MODEL_XXX, MODEL_HS):
            raise ValueError(f"unknown model {self.model!r}")
        if not (math.isfinite(self.coupling) and self.coupling != 0.0):
            raise ValueError("coupling must be finite and nonzero")
        if self.n_sites > MAX_SITES:
            raise ValueError(f"chain length capped at {MAX_SITES}")
        if self.model == MODEL_XXX and self.n_sites < 3:
            # at N=2 the periodic bond sum visits the single bond twice
            raise ValueError("nearest-neighbour ring needs N >= 3")
        if self.model == MODEL_HS and (self.n_sites < 4 or self.n_sites % 2):
            raise ValueError("long-range model needs even N >= 4")

    @classmethod
    def xxx(cls, n_sites: int, j: float = 1.0) -> "HamiltonianSpec":
        return cls(MODEL_XXX, n_sites, j)

    @classmethod
    def hs(cls, n_sites: int, j0: float = 1.0) -> "HamiltonianSpec":
        return cls(MODEL_HS, n_sites, j0)


def coupling_hs(n: int, n_sites: int, j0: float) -> float:
    """Inverse-sine-squared exchange J0 / sin^2(n pi / N) at separation n."""
    if not 1 <= n <= n_sites - 1:
        raise ValueError(f"separation {n} outside 1..{n_sites - 1}")
    return j0 / math.sin(n * math.pi / n_sites) ** 2


@lru_cache(maxsize=None)
def _bond_list(model: str, n_sites: int, coupling: float):
    """Bonds as (i, j, w) with i < j; w multiplies (S_i . S_j - 1/4)."""
    bonds = []
    if model == MODEL_XXX:
        for i in range(1, n_sites):
            bonds.append((i, i + 1, coupling))
        bonds.append((1, n_sites, coupling))
    else:
        for i in range(1, n_sites + 1):
            for j in range(i + 1, n_sites + 1):
                bonds.append((i, j, 4.0 * coupling_hs(j - i, n_sites, coupling)))
    return tuple(bonds)


def bonds(spec: HamiltonianSpec):
    return _bond_list(spec.model, spec.n_sites, spec.coupling)


@dataclass(frozen=True)
class SectorMatrix:
    """Sparse coordinate-list matrix between two sector bases.

    Entries are stored row-major sorted and duplicate-free, so two
    logically equal assemblies compare entry-for-entry.
    """

    row_basis: SectorBasis
    col_basis: SectorBasis
    rows: np.ndarray = field(repr=False)
    cols: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.int64)
        cols = np.asarray(self.cols, dtype=np.int64)
        values = np.asarray(self.values, dtype=complex)
        if not (rows.shape == cols.shape == values.shape):
            raise ValueError("entry arrays must have equal length")
        if rows.size and (rows.min() < 0 or rows.max() >= self.row_basis.dim):
            raise ValueError("row index out of range")
        if cols.size and (cols.min() < 0 or cols.max() >= self.col_basis.dim):
            raise ValueError("column index out of range")
        for arr, name in ((rows, "rows"), (cols, "cols"), (values, "values")):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.row_basis.dim, self.col_basis.dim)

    def to_dense(self) -> np.ndarray:
        if max(self.shape) > DENSE_DIM_LIMIT:
            raise ValueError(f"dense conversion capped at dim {DENSE_DIM_LIMIT}")
        dense = np.zeros(self.shape, dtype=complex)
        np.add.at(dense, (self.rows, self.cols), self.values)
        return dense

    def matvec(self, vec: np.ndarray) -> np.ndarray:
        vec = np.asarray(vec, dtype=complex)
        if vec.shape != (self.col_basis.dim,):
            raise ValueError("vector length does not match column basis")
        out = np.zeros(self.row_basis.dim, dtype=complex)
        np.add.at(out, self.rows, self.values * vec[self.cols])
        return out


def _entries_from_dict(entries: dict) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    keys = sorted(entries)
    rows = np.array([k[0] for k in keys], dtype=np.int64)
    cols = np.array([k[1] for k in keys], dtype=np.int64)
    values = np.array([entries[k] for k in keys], dtype=complex)
    return rows, cols, values


def build_hamiltonian(spec: HamiltonianSpec, sector: SectorBasis) -> SectorMatrix:
    """Explicit sector block of the Hamiltonian as a SectorMatrix."""
    if sector.n_sites != spec.n_sites:
        raise ValueError("sector chain length does not match the model")
    entries: dict[tuple[int, int], complex] = {}
    ridx = sector.rank_index
    for idx, mask in enumerate(sector.configs):
        diag = 0.0
        for i, j, w in bonds(spec):
            bi = 1 << (i - 1)
            bj = 1 << (j - 1)
            if bool(mask & bi) != bool(mask & bj):
                diag -= 0.5 * w
                swapped = mask ^ (bi | bj)
                key = (ridx[swapped], idx)
                entries[key] = entries.get(key, 0.0) + 0.5 * w
        if diag != 0.0:
            key = (idx, idx)
            entries[key] = entries.get(key, 0.0) + diag
    rows, cols, values = _entries_from_dict(entries)
    return SectorMatrix(sector, sector, rows, cols, values)


def apply_hamiltonian(spec: HamiltonianSpec, state: StateVector) -> StateVector:
    """Matrix-free Hamiltonian action, identical to build_hamiltonian @ state."""
    sector = state.sector
    if sector.n_sites != spec.n_sites:
        raise ValueError("state chain length does not match the model")
    out = np.zeros(sector.dim, dtype=complex)
    ridx = sector.rank_index
    for idx, mask in enumerate(sector.configs):
        a = state.amplitudes[idx]
        if a == 0:
            continue
        for i, j, w in bonds(spec):
            bi = 1 << (i - 1)
            bj = 1 << (j - 1)
            if bool(mask & bi) != bool(mask & bj):
                out[idx] -= 0.5 * w * a
                out[ridx[mask ^ (bi | bj)]] += 0.5 * w * a
    return StateVector(sector, out)
