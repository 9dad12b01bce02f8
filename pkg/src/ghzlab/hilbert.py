"""Core Hilbert-space kernels for chains of spin-1/2 sites.

Conventions, used consistently everywhere in the package:

* basis index ``s`` in ``[0, 2**n)`` encodes the computational string; bit
  ``j`` of ``s`` (least significant bit = site 0) is the state of site ``j``,
  with bit value 0 meaning ``|0>`` (the ``sigma_z = +1`` eigenstate);
* ``|00...0>`` therefore sits at index 0 and ``|11...1>`` at ``2**n - 1``;
* the y Pauli matrix carries the phase convention that makes the corner
  matrix element of a direction-``n`` Pauli equal ``n_x + i*n_y``, i.e.
  ``<0| sigma_n |1> = n_x + i n_y`` (equivalent to the right-handed set
  under ``n_y -> -n_y``; nothing downstream depends on handedness).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

UNIT_NORM_TOL = 1e-12

# Largest chain buildable as dense state vectors (the 2^N x 2^N operator
# machinery elsewhere caps out earlier, at MAX_OPERATOR_SITES).
MAX_STATE_SITES = 14
MAX_OPERATOR_SITES = 12

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
# phase convention: <0|sigma_y|1> = +i  (see module docstring)
PAULI_Y = np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class Direction:
    """Unit vector on the sphere selecting a measurement axis."""

    nx: float
    ny: float
    nz: float

    def __post_init__(self):
        norm_sq = self.nx * self.nx + self.ny * self.ny + self.nz * self.nz
        if not math.isfinite(norm_sq) or abs(norm_sq - 1.0) > UNIT_NORM_TOL:
            raise ValueError(
                f"direction ({self.nx}, {self.ny}, {self.nz}) is not a unit vector"
            )

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "Direction":
        """Polar/azimuthal angles -> (sin t cos p, sin t sin p, cos t)."""
        st = math.sin(theta)
        return cls(st * math.cos(phi), st * math.sin(phi), math.cos(theta))

    @classmethod
    def normalized(cls, x: float, y: float, z: float) -> "Direction":
        r = math.sqrt(x * x + y * y + z * z)
        if r == 0.0 or not math.isfinite(r):
            raise ValueError("cannot normalize a zero or non-finite vector")
        return cls(x / r, y / r, z / r)

    def as_array(self) -> np.ndarray:
        return np.array([self.nx, self.ny, self.nz])


X_AXIS = Direction(1.0, 0.0, 0.0)
Y_AXIS = Direction(0.0, 1.0, 0.0)
Z_AXIS = Direction(0.0, 0.0, 1.0)


def site_count(dim: int) -> int:
    """Number of sites for a Hilbert-space dimension that must be a power of 2."""
    n = int(dim).bit_length() - 1
    if dim <= 0 or (1 << n) != dim:
        raise ValueError(f"dimension {dim} is not a power of 2")
    return n


def pauli_direction(n: Direction) -> np.ndarray:
    """Pauli operator along ``n``: n_x*sx + n_y*sy + n_z*sz (2x2, Hermitian)."""
    return np.array(
        [
            [n.nz, n.nx + 1j * n.ny],
            [n.nx - 1j * n.ny, -n.nz],
        ],
        dtype=complex,
    )


def _check_sites(n: int, cap: int) -> None:
    if not 1 <= n <= cap:
        raise ValueError(f"site count {n} outside supported range [1, {cap}]")


def ghz_state(n: int) -> np.ndarray:
    """(|00...0> + |11...1>)/sqrt(2) as a dense amplitude vector."""
    _check_sites(n, MAX_STATE_SITES)
    vec = np.zeros(1 << n, dtype=complex)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    vec[0] = inv_sqrt2
    vec[-1] = inv_sqrt2
    return vec


def ghz_density(n: int) -> np.ndarray:
    """Projector onto the GHZ state (four corner entries of exactly 1/2)."""
    _check_sites(n, MAX_OPERATOR_SITES)
    rho = np.zeros((1 << n, 1 << n), dtype=complex)
    rho[0, 0] = rho[0, -1] = rho[-1, 0] = rho[-1, -1] = 0.5
    return rho


def mixture_state(n: int) -> np.ndarray:
    """Incoherent counterpart (|00...0><00...0| + |11...1><11...1|)/2."""
    _check_sites(n, MAX_OPERATOR_SITES)
    rho = np.zeros((1 << n, 1 << n), dtype=complex)
    rho[0, 0] = 0.5
    rho[-1, -1] = 0.5
    return rho


def apply_site_operator(op: np.ndarray, site: int, vec: np.ndarray) -> np.ndarray:
    """Apply a 2x2 operator to one site of a state vector.

    Equivalent to the dense Kronecker-product action
    ``(1 x ... x op x ... x 1) @ vec`` without ever allocating the full
    ``2^n x 2^n`` operator.
    """
    if op.shape != (2, 2):
        raise ValueError("site operator must be 2x2")
    n = site_count(vec.shape[0])
    if not 0 <= site < n:
        raise ValueError(f"site {site} out of range for {n} sites")
    # bit `site` is the middle axis once the vector is viewed as
    # (higher bits, site bit, lower bits)
    view = vec.reshape(1 << (n - 1 - site), 2, 1 << site)
    out = np.einsum("ab,xbz->xaz", op, view)
    return out.reshape(vec.shape[0]).astype(complex, copy=False)


def apply_site_operator_to_columns(op: np.ndarray, site: int, mat: np.ndarray) -> np.ndarray:
    """Left-multiply ``(1 x ... x op x ... x 1)`` onto every column of ``mat``."""
    if op.shape != (2, 2):
        raise ValueError("site operator must be 2x2")
    dim = mat.shape[0]
    n = site_count(dim)
    if not 0 <= site < n:
        raise ValueError(f"site {site} out of range for {n} sites")
    view = mat.reshape(1 << (n - 1 - site), 2, (1 << site) * mat.shape[1])
    out = np.einsum("ab,xbz->xaz", op, view)
    return out.reshape(mat.shape)


def expectation(operator: np.ndarray, rho: np.ndarray, imag_tol: float = 1e-8) -> float:
    """Tr[operator @ rho], checked to be real.

    A residual imaginary part above ``imag_tol`` signals a non-Hermitian
    input and raises.
    """
    if operator.shape != rho.shape or operator.ndim != 2:
        raise ValueError(
            f"dimension mismatch: operator {operator.shape} vs state {rho.shape}"
        )
    value = complex(np.einsum("ij,ji->", operator, rho))
    if abs(value.imag) > imag_tol * max(1.0, abs(value.real)):
        raise ValueError(
            f"Tr[A rho] has imaginary residue {value.imag:.3e}; non-Hermitian input?"
        )
    return float(value.real)
