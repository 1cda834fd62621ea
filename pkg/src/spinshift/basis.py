"""Bit-mask basis for spin-1/2 chains with a fixed number of down spins.

Conventions used everywhere in this package: sites are numbered 1..N and
site m lives in bit (m - 1) of an integer mask; a set bit means the spin
at that site points DOWN.  A sector collects every mask with the same
popcount r, so the total z-magnetization S_z = N/2 - r is fixed.  Sector
configurations are always kept in ascending mask order, and every matrix
or state vector in the package shares that ordering.

All containers are frozen and carry read-only arrays; operations are pure
functions returning fresh data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

MAX_SITES = 24


def down_sites(mask: int) -> tuple[int, ...]:
    """Ascending 1-based positions of the down spins in ``mask``."""
    sites = []
    while mask:
        low = mask & -mask
        sites.append(low.bit_length())
        mask ^= low
    return tuple(sites)


def mask_from_sites(sites) -> int:
    """Inverse of :func:`down_sites`."""
    mask = 0
    for m in sites:
        mask |= 1 << (m - 1)
    return mask


@dataclass(frozen=True)
class SectorBasis:
    """All C(N, r) spin configurations with r down spins, masks ascending."""

    n_sites: int
    n_down: int
    configs: tuple[int, ...]
    rank_index: dict[int, int] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.configs)


@lru_cache(maxsize=None)
def _sector_cached(n_sites: int, n_down: int) -> SectorBasis:
    masks = sorted(
        sum(1 << p for p in positions)
        for positions in combinations(range(n_sites), n_down)
    )
    assert len(masks) == comb(n_sites, n_down)
    return SectorBasis(
        n_sites=n_sites,
        n_down=n_down,
        configs=tuple(masks),
        rank_index={m: i for i, m in enumerate(masks)},
    )


def enumerate_sector(n_sites: int, n_down: int) -> SectorBasis:
    """Basis of the r-down-spin sector of an N-site chain."""
    if not 2 <= n_sites <= MAX_SITES:
        raise ValueError(f"chain length must be in 2..{MAX_SITES}, got {n_sites}")
    if not 0 <= n_down <= n_sites:
        raise ValueError(f"down-spin count must be in 0..{n_sites}, got {n_down}")
    return _sector_cached(n_sites, n_down)


def rank(sector: SectorBasis, mask: int) -> int:
    """Ordinal of ``mask`` within ``sector``; KeyError if it does not belong."""
    try:
        return sector.rank_index[mask]
    except KeyError:
        raise KeyError(
            f"mask {mask} not in sector (N={sector.n_sites}, r={sector.n_down})"
        ) from None


@dataclass(frozen=True)
class StateVector:
    """Complex amplitudes over one sector basis, in the sector's config order."""

    sector: SectorBasis
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (self.sector.dim,):
            raise ValueError(
                f"amplitude length {amps.shape} != sector dim {self.sector.dim}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("state amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)


def zero_state(sector: SectorBasis) -> StateVector:
    return StateVector(sector, np.zeros(sector.dim, dtype=complex))


def basis_state(sector: SectorBasis, mask: int) -> StateVector:
    amps = np.zeros(sector.dim, dtype=complex)
    amps[rank(sector, mask)] = 1.0
    return StateVector(sector, amps)


def inner(bra: StateVector, ket: StateVector) -> complex:
    if bra.sector is not ket.sector and bra.sector != ket.sector:
        raise ValueError("inner product across different sectors")
    return complex(np.vdot(bra.amplitudes, ket.amplitudes))


def norm(state: StateVector) -> float:
    return float(np.linalg.norm(state.amplitudes))


def _check_site(j: int, n_sites: int) -> int:
    if not 1 <= j <= n_sites:
        raise ValueError(f"site index {j} outside 1..{n_sites}")
    return 1 << (j - 1)


def apply_site_lowering(mask: int, j: int, n_sites: int) -> int | None:
    """S_j^- on a configuration: flip site j down, or None if already down."""
    bit = _check_site(j, n_sites)
    if mask & bit:
        return None
    return mask | bit


def apply_cross_minus(state: StateVector, j: int, k: int) -> StateVector:
    """Two-site lowering S_j^- S_k^z - S_k^- S_j^z, mapping sector r to r+1.

    Per ordered pair (j, k) the nonzero matrix elements are
    up,up -> (down,up - up,down)/2;  down,up -> down,down/2;
    up,down -> -down,down/2;  down,down -> 0.
    """
    src = state.sector
    if j == k:
        raise ValueError("two-site operator needs distinct sites")
    bj = _check_site(j, src.n_sites)
    bk = _check_site(k, src.n_sites)
    if src.n_down >= src.n_sites:
        raise ValueError("no sector with one more down spin exists")
    tgt = enumerate_sector(src.n_sites, src.n_down + 1)
    out = np.zeros(tgt.dim, dtype=complex)
    ridx = tgt.rank_index
    for idx, mask in enumerate(src.configs):
        a = state.amplitudes[idx]
        if a == 0:
            continue
        dj = mask & bj
        dk = mask & bk
        if dj and dk:
            continue
        if not dj and not dk:
            out[ridx[mask | bj]] += 0.5 * a
            out[ridx[mask | bk]] -= 0.5 * a
        elif dj:
            out[ridx[mask | bk]] += 0.5 * a
        else:
            out[ridx[mask | bj]] -= 0.5 * a
    return StateVector(tgt, out)


def apply_cross_plus(state: StateVector, j: int, k: int) -> StateVector:
    """Two-site raising S_j^+ S_k^z - S_k^+ S_j^z, mapping sector r to r-1.

    Nonzero matrix elements per ordered pair (j, k):
    up,down -> -up,up/2;  down,up -> up,up/2;
    down,down -> (down,up - up,down)/2;  up,up -> 0.
    """
    src = state.sector
    if j == k:
        raise ValueError("two-site operator needs distinct sites")
    bj = _check_site(j, src.n_sites)
    bk = _check_site(k, src.n_sites)
    if src.n_down == 0:
        raise ValueError("no sector with one fewer down spin exists")
    tgt = enumerate_sector(src.n_sites, src.n_down - 1)
    out = np.zeros(tgt.dim, dtype=complex)
    ridx = tgt.rank_index
    for idx, mask in enumerate(src.configs):
        a = state.amplitudes[idx]
        if a == 0:
            continue
        dj = mask & bj
        dk = mask & bk
        if not dj and not dk:
            continue
        if dj and dk:
            out[ridx[mask ^ bk]] += 0.5 * a
            out[ridx[mask ^ bj]] -= 0.5 * a
        elif dj:
            out[ridx[mask ^ bj]] += 0.5 * a
        else:
            out[ridx[mask ^ bk]] -= 0.5 * a
    return StateVector(tgt, out)


def translate_mask(mask: int, n_sites: int) -> int:
    """Cyclic shift of all sites by one: m -> m+1 (site N wraps to 1)."""
    full = (1 << n_sites) - 1
    return ((mask << 1) | (mask >> (n_sites - 1))) & full


def translate(state: StateVector) -> StateVector:
    """Cyclic site shift of a state: the amplitude of c moves to T(c)."""
    sector = state.sector
    out = np.empty(sector.dim, dtype=complex)
    for idx, mask in enumerate(sector.configs):
        out[sector.rank_index[translate_mask(mask, sector.n_sites)]] = (
            state.amplitudes[idx]
        )
    return StateVector(sector, out)
