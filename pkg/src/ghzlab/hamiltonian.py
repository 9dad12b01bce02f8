"""Extended Heisenberg-XYZ chain with next-nearest couplings and a local defect.

The Hamiltonian is

    H = sum_i [ J1 (S_ix S_{i+1}x + S_iy S_{i+1}y + d S_iz S_{i+1}z)
              + J2 (S_ix S_{i+2}x + S_iy S_{i+2}y + d S_iz S_{i+2}z)
              + h_x S_ix + h_z S_iz ]  +  e S_0x,

with S = sigma/2 and hbar = 1. The defect acts exactly once, on site 0 (the
first site of the chain); summing it over i would be a global field, not a
local defect. Open boundary by default: the nearest-neighbor sum runs over
i = 0..n-2 and the next-nearest sum over i = 0..n-3, so every index stays on
the chain. Periodic boundaries wrap both sums over all n bonds.

In the computational basis H is real symmetric (the only y-terms are the
quadratic sigma_y sigma_y pairs), which the builder exploits by returning a
float64 matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hilbert import MAX_OPERATOR_SITES

OPEN = "open"
PERIODIC = "periodic"


@dataclass(frozen=True)
class Couplings:
    """Chain parameters: two exchange couplings, anisotropy, fields, defect."""

    j1: float = 1.0
    j2: float = 0.0
    d: float = 1.0
    h_x: float = 0.0
    h_z: float = 0.0
    e: float = 0.0
    boundary: str = OPEN

    def __post_init__(self):
        for name in ("j1", "j2", "d", "h_x", "h_z", "e"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"coupling {name}={value} is not finite")
        if self.boundary not in (OPEN, PERIODIC):
            raise ValueError(f"boundary must be '{OPEN}' or '{PERIODIC}'")


# The two survey sets featured throughout: shared h_x=0.2, J1=1.0, J2=1.35,
# d=0.5 and h_z=0.6, differing only in the defect strength.
FEATURED_SET_A = Couplings(j1=1.0, j2=1.35, d=0.5, h_x=0.2, h_z=0.6, e=0.2)
FEATURED_SET_B = Couplings(j1=1.0, j2=1.35, d=0.5, h_x=0.2, h_z=0.6, e=0.1)

GRID_H_Z_VALUES = (0.2, 0.3, 0.4, 0.5, 0.6)
GRID_DEFECT_VALUES = (0.1, 0.2, 0.3, 0.4, 0.5)


def parameter_grid() -> list[Couplings]:
    """The 25-point (h_z, e) survey grid with the remaining couplings fixed.

    Ordered by defect strength, then h_z; contains the two featured sets.
    """
    grid = [
        Couplings(j1=1.0, j2=1.35, d=0.5, h_x=0.2, h_z=h_z, e=e)
        for e in GRID_DEFECT_VALUES
        for h_z in GRID_H_Z_VALUES
    ]
    assert FEATURED_SET_A in grid and FEATURED_SET_B in grid
    return grid


def is_featured(couplings: Couplings) -> bool:
    return couplings in (FEATURED_SET_A, FEATURED_SET_B)


def coupling_label(couplings: Couplings) -> str:
    """Short label for CSV output: 'A'/'B' for the featured sets."""
    if couplings == FEATURED_SET_A:
        return "A"
    if couplings == FEATURED_SET_B:
        return "B"
    return f"hz{couplings.h_z:g}_e{couplings.e:g}"


def _bond_pairs(n: int, distance: int, boundary: str) -> list[tuple[int, int]]:
    if boundary == PERIODIC:
        return [(i, (i + distance) % n) for i in range(n)]
    return [(i, i + distance) for i in range(n - distance)]


def build_hamiltonian(n: int, couplings: Couplings) -> np.ndarray:
    """Dense 2^n x 2^n matrix of the chain Hamiltonian (real symmetric).

    Built with bitwise kernels: diagonal z-terms from bit parities,
    flip terms from XOR index maps; agrees with the explicit
    Kronecker-product construction (tested for small n).
    """
    if n < 2:
        raise ValueError("need at least 2 sites")
    if n == 2 and couplings.j2 != 0.0:
        raise ValueError("next-nearest coupling requires at least 3 sites")
    if n > MAX_OPERATOR_SITES:
        raise ValueError(f"site count {n} exceeds dense-build cap {MAX_OPERATOR_SITES}")

    dim = 1 << n
    s = np.arange(dim)
    bits = (s[:, None] >> np.arange(n)[None, :]) & 1  # (dim, n)
    z = 1.0 - 2.0 * bits  # sigma_z eigenvalue per site; S_z = z/2

    ham = np.zeros((dim, dim))
    diag = 0.5 * couplings.h_z * z.sum(axis=1)

    for distance, strength in ((1, couplings.j1), (2, couplings.j2)):
        if strength == 0.0:
            continue
        for i, j in _bond_pairs(n, distance, couplings.boundary):
            # S_z S_z part is diagonal
            diag += 0.25 * strength * couplings.d * z[:, i] * z[:, j]
            # S_x S_x + S_y S_y moves only anti-aligned pairs, amplitude J/2
            differ = bits[:, i] != bits[:, j]
            targets = s ^ ((1 << i) | (1 << j))
            ham[targets[differ], s[differ]] += 0.5 * strength

    # transverse field on every site, defect on site 0 only
    for i in range(n):
        amp = 0.5 * couplings.h_x + (0.5 * couplings.e if i == 0 else 0.0)
        if amp == 0.0:
            continue
        ham[s ^ (1 << i), s] += amp

    ham[s, s] += diag
    return ham
