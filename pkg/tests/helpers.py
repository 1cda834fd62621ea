"""Shared oracles for the test suite.

The full-chain Hamiltonian is rebuilt here from Kronecker products of
single-site spin matrices, completely independently of the sector-based
assembly in the package, so block extraction against it is a genuine
cross-check.
"""

import numpy as np

from spinshift.models import bonds

# single-site basis order (up, down), matching bit value 0 = up, 1 = down
SZ = np.diag([0.5, -0.5]).astype(complex)
SP = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SM = SP.T.copy()
SX = 0.5 * (SP + SM)
SY = -0.5j * (SP - SM)
ID2 = np.eye(2, dtype=complex)


def op_at_site(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    """Embed a single-site operator at 1-based ``site`` of an N-site chain.

    Full-space index equals the package's down-spin mask, so site m must
    sit at bit (m - 1): the least significant factor is site 1.
    """
    out = np.eye(2 ** (site - 1), dtype=complex)
    out = np.kron(op, out)
    return np.kron(np.eye(2 ** (n_sites - site), dtype=complex), out)


def full_hamiltonian(spec) -> np.ndarray:
    """Sum of w * (S_i . S_j - 1/4) bonds over the whole 2^N space."""
    n = spec.n_sites
    dim = 2**n
    total = np.zeros((dim, dim), dtype=complex)
    for i, j, w in bonds(spec):
        term = np.zeros_like(total)
        for op in (SX, SY, SZ):
            term += op_at_site(op, i, n) @ op_at_site(op, j, n)
        term -= 0.25 * np.eye(dim)
        total += w * term
    return total


def sector_indices(n_sites: int, n_down: int) -> list[int]:
    return [m for m in range(2**n_sites) if bin(m).count("1") == n_down]


def sector_block(full: np.ndarray, n_sites: int, n_down: int) -> np.ndarray:
    idx = sector_indices(n_sites, n_down)
    return full[np.ix_(idx, idx)]
