"""Closed forms for the inverse-sine-squared exchange chain.

The lattice sums of the couplings J_n = J0 / sin^2(n pi / N),

    x = sum_n J_n             = J0 (N^2 - 1) / 3
    y = sum_n (-1)^(n+1) J_n  = J0 (N^2/2 + 1) / 3,

feed the energy ladder

    E_r = -2 r (x + y) + 4 r (r-1) J0 + (4/3) r (r-1) (r-2) J0

matching the product-form amplitudes

    a(m_1..m_r) = (-1)^(m_1+..+m_r) * prod_{i<j} sin^2(pi (m_j - m_i) / N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .models import coupling_hs


def _require_even(n_sites: int) -> None:
    if n_sites < 4 or n_sites % 2:
        raise ValueError("inverse-sine-squared chain needs even N >= 4")


def coupling_sums(n_sites: int, j0: float) -> tuple[float, float]:
    """Direct sums (sum J_n, sum (-1)^(n+1) J_n) over separations 1..N-1."""
    plain = 0.0
    alternating = 0.0
    for n in range(1, n_sites):
        jn = coupling_hs(n, n_sites, j0)
        plain += jn
        alternating += jn if n % 2 else -jn
    return plain, alternating


@dataclass(frozen=True)
class HsConstants:
    """Coupling sums of the chain: x (plain) and y (alternating)."""

    n_sites: int
    j0: float
    x: float
    y: float


def hs_constants(n_sites: int, j0: float) -> HsConstants:
    """Closed-form x and y, cross-checked against the direct sums."""
    _require_even(n_sites)
    x = j0 * (n_sites**2 - 1) / 3.0
    y = j0 * (n_sites**2 / 2.0 + 1.0) / 3.0
    sx, sy = coupling_sums(n_sites, j0)
    scale = max(abs(x), abs(y))
    if abs(sx - x) > 1e-10 * scale or abs(sy - y) > 1e-10 * scale:
        raise RuntimeError(
            f"closed-form coupling sums disagree with direct summation: "
            f"x {x} vs {sx}, y {y} vs {sy}"
        )
    return HsConstants(n_sites, j0, x, y)


def jastrow_amplitude(n_sites: int, sites) -> complex:
    """Product-form amplitude at an ordered down-site tuple.

    The sign prefactor (-1)^(sum of sites) is exact; the pair product of
    sin^2(pi (m_j - m_i) / N) vanishes only for repeated sites, which are
    rejected.
    """
    _require_even(n_sites)
    sites = tuple(int(m) for m in sites)
    if any(not 1 <= m <= n_sites for m in sites):
        raise ValueError(f"sites must lie in 1..{n_sites}")
    if any(a >= b for a, b in zip(sites, sites[1:])):
        raise ValueError("down sites must be strictly increasing")
    sign = -1.0 if sum(sites) % 2 else 1.0
    product = 1.0
    for a, b in combinations(sites, 2):
        product *= math.sin(math.pi * (b - a) / n_sites) ** 2
    return complex(sign * product)


def hs_energy(n_sites: int, r: int, j0: float) -> float:
    """Energy ladder value for r down spins.

    Defined for all 0 <= r <= N; whether it is an exact eigenvalue for a
    given (N, r) is decided by comparison with diagonalization, never
    assumed.
    """
    _require_even(n_sites)
    if not 0 <= r <= n_sites:
        raise ValueError(f"down-spin count {r} outside 0..{n_sites}")
    const = hs_constants(n_sites, j0)
    return (
        -2.0 * r * (const.x + const.y)
        + 4.0 * r * (r - 1) * j0
        + (4.0 / 3.0) * r * (r - 1) * (r - 2) * j0
    )
