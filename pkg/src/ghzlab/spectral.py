"""Hermitian eigendecomposition, unitary evolution, dephasing, diagnostics.

Dephasing is the infinite-time average of the unitary trajectory: the state
with all coherences between (quasi-)degenerate energy clusters removed. A
relative gap tolerance merges eigenvalues whose spacing is below
``gap_tol * spectral_width``, which reduces to the plain diagonal-in-energy
map for a nondegenerate spectrum.
"""

from __future__ import annotations

import hashlib
import struct
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .hamiltonian import OPEN, Couplings

# The spectra here assume exact nondegeneracy; floating point needs a
# tolerance. Relative to the spectral width.
DEFAULT_GAP_TOL = 1e-10

HERMITICITY_TOL = 1e-10


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues and the matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def spectral_width(self) -> float:
        width = float(self.eigenvalues[-1] - self.eigenvalues[0])
        return width if width > 0.0 else 1.0


@dataclass(frozen=True)
class SpectrumDiagnostics:
    """Minimum level spacing and count of nontrivial gap coincidences."""

    min_level_gap: float
    degenerate_gap_count: int
    tolerance: float


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude component is real positive.

    Ties in magnitude are broken by the first such component, making the
    decomposition deterministic and reproducible across runs.
    """
    idx = np.argmax(np.abs(vectors), axis=0)
    lead = vectors[idx, np.arange(vectors.shape[1])]
    if np.iscomplexobj(vectors):
        scale = np.abs(lead)
        scale[scale == 0.0] = 1.0
        return vectors * (lead.conj() / scale)[None, :]
    sign = np.where(lead < 0.0, -1.0, 1.0)
    return vectors * sign[None, :]


def diagonalize(hamiltonian: np.ndarray) -> EigenDecomposition:
    """Full Hermitian eigendecomposition with a fixed phase convention."""
    if hamiltonian.ndim != 2 or hamiltonian.shape[0] != hamiltonian.shape[1]:
        raise ValueError("expected a square matrix")
    scale = max(1.0, float(np.max(np.abs(hamiltonian))))
    if np.max(np.abs(hamiltonian - hamiltonian.conj().T)) > HERMITICITY_TOL * scale:
        raise ValueError("matrix is not Hermitian")
    values, vectors = np.linalg.eigh(hamiltonian)
    vectors = _fix_phases(vectors)
    values.flags.writeable = False
    vectors.flags.writeable = False
    return EigenDecomposition(eigenvalues=values, eigenvectors=vectors)


def _check_dim(eig: EigenDecomposition, state: np.ndarray) -> None:
    if state.shape[0] != eig.dim:
        raise ValueError(
            f"dimension mismatch: state {state.shape} vs spectrum of size {eig.dim}"
        )


def evolve(rho: np.ndarray, eig: EigenDecomposition, t: float) -> np.ndarray:
    """Unitary evolution V e^{-i L t} V+ rho V e^{+i L t} V+."""
    _check_dim(eig, rho)
    v = eig.eigenvectors
    phases = np.exp(-1j * eig.eigenvalues * t)
    rho_e = v.conj().T @ rho @ v
    rho_e *= np.outer(phases, phases.conj())
    return v @ rho_e @ v.conj().T


def evolve_state(psi: np.ndarray, eig: EigenDecomposition, t: float) -> np.ndarray:
    """e^{-iHt} |psi> through the eigenbasis."""
    _check_dim(eig, psi)
    v = eig.eigenvectors
    coeff = v.conj().T @ psi
    return v @ (np.exp(-1j * eig.eigenvalues * t) * coeff)


def quasi_degenerate_labels(eigenvalues: np.ndarray, gap_tol: float) -> np.ndarray:
    """Cluster label per eigenvalue; adjacent levels within the tolerance merge."""
    if gap_tol < 0.0:
        raise ValueError("gap tolerance must be nonnegative")
    width = float(eigenvalues[-1] - eigenvalues[0]) if len(eigenvalues) > 1 else 0.0
    threshold = gap_tol * (width if width > 0.0 else 1.0)
    if len(eigenvalues) == 1:
        return np.zeros(1, dtype=int)
    return np.concatenate(([0], np.cumsum(np.diff(eigenvalues) > threshold)))


def dephase(
    rho: np.ndarray, eig: EigenDecomposition, gap_tol: float = DEFAULT_GAP_TOL
) -> np.ndarray:
    """Infinite-time-averaged state: block-pinch rho in the energy eigenbasis.

    Eigenvalues are clustered into quasi-degenerate groups; coherences across
    groups are removed (sum of P_b rho P_b). For a nondegenerate spectrum this
    keeps only the diagonal in the energy basis.
    """
    _check_dim(eig, rho)
    v = eig.eigenvectors
    labels = quasi_degenerate_labels(eig.eigenvalues, gap_tol)
    rho_e = v.conj().T @ rho @ v
    rho_e *= labels[:, None] == labels[None, :]
    return v @ rho_e @ v.conj().T


def purity(rho: np.ndarray) -> float:
    """Tr[rho^2] for a Hermitian density operator."""
    return float(np.real(np.vdot(rho, rho)))


def effective_dimension(rho: np.ndarray) -> float:
    """1 / Tr[rho^2]; large values mean small temporal fluctuations."""
    return 1.0 / purity(rho)


def spectrum_diagnostics(eig: EigenDecomposition, tol: float) -> SpectrumDiagnostics:
    """Scan all level differences for nontrivial gap coincidences.

    A coincidence E_k - E_l = E_m - E_n (within ``tol``) is trivial when both
    gaps vanish, or when the endpoint levels agree pairwise (E_k = E_m and
    E_l = E_n up to ``tol``); everything else counts as a degenerate gap.
    """
    w = np.asarray(eig.eigenvalues, dtype=float)
    if len(w) < 2:
        return SpectrumDiagnostics(np.inf, 0, tol)
    min_gap = float(np.min(np.diff(w)))

    level_labels = quasi_degenerate_labels(w, tol / eig.spectral_width)
    k, l = np.triu_indices(len(w), 1)
    gaps = w[l] - w[k]
    positive = gaps > tol  # zero gaps are trivial by definition
    gaps = gaps[positive]
    upper = level_labels[l[positive]]
    lower = level_labels[k[positive]]

    order = np.argsort(gaps, kind="stable")
    gaps = gaps[order]
    upper = upper[order]
    lower = lower[order]

    count = 0
    start = 0
    for stop in range(1, len(gaps) + 1):
        if stop == len(gaps) or gaps[stop] - gaps[stop - 1] > tol:
            group = stop - start
            if group > 1:
                total_pairs = group * (group - 1) // 2
                # pairs sharing both endpoint clusters are the trivial ones
                keys: dict[tuple[int, int], int] = {}
                for g in range(start, stop):
                    key = (int(upper[g]), int(lower[g]))
                    keys[key] = keys.get(key, 0) + 1
                trivial = sum(c * (c - 1) // 2 for c in keys.values())
                count += total_pairs - trivial
            start = stop
    return SpectrumDiagnostics(min_gap, count, tol)


# -- binary eigendecomposition cache -----------------------------------------
#
# Layout (all little-endian): magic b"GZEC", u32 version, u32 n, u32 boundary
# (0 open / 1 periodic), 6 x f64 couplings (j1, j2, d, h_x, h_z, e), f64
# tolerance, u64 dimension; then the eigenvalues (dim f64) and the
# eigenvector matrix row-major as interleaved re/im f64 pairs.

_CACHE_MAGIC = b"GZEC"
_CACHE_VERSION = 1
_HEADER = struct.Struct("<4sIII6ddQ")


def cache_key(n: int, couplings: Couplings) -> str:
    raw = _HEADER.pack(
        _CACHE_MAGIC,
        _CACHE_VERSION,
        n,
        0 if couplings.boundary == OPEN else 1,
        couplings.j1,
        couplings.j2,
        couplings.d,
        couplings.h_x,
        couplings.h_z,
        couplings.e,
        0.0,
        0,
    )
    return hashlib.sha256(raw).hexdigest()[:24]


def store_eigendecomposition(
    directory: str | Path,
    n: int,
    couplings: Couplings,
    eig: EigenDecomposition,
    tolerance: float = DEFAULT_GAP_TOL,
) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{cache_key(n, couplings)}.eig"
    header = _HEADER.pack(
        _CACHE_MAGIC,
        _CACHE_VERSION,
        n,
        0 if couplings.boundary == OPEN else 1,
        couplings.j1,
        couplings.j2,
        couplings.d,
        couplings.h_x,
        couplings.h_z,
        couplings.e,
        tolerance,
        eig.dim,
    )
    values = np.ascontiguousarray(eig.eigenvalues, dtype="<f8")
    vectors = np.ascontiguousarray(eig.eigenvectors.astype("<c16"))
    tmp = path.with_suffix(".tmp")
    with open(tmp, "wb") as fh:
        fh.write(header)
        fh.write(values.tobytes())
        fh.write(vectors.tobytes())
    tmp.replace(path)
    return path


def load_eigendecomposition(
    directory: str | Path, n: int, couplings: Couplings
) -> EigenDecomposition | None:
    """Load a cached decomposition; None on miss or on a corrupt entry."""
    path = Path(directory) / f"{cache_key(n, couplings)}.eig"
    if not path.is_file():
        return None
    try:
        blob = path.read_bytes()
        header = _HEADER.unpack_from(blob)
        magic, version, n_stored, boundary = header[0], header[1], header[2], header[3]
        stored = header[4:10]
        dim = header[11]
        expected = (
            couplings.j1,
            couplings.j2,
            couplings.d,
            couplings.h_x,
            couplings.h_z,
            couplings.e,
        )
        if (
            magic != _CACHE_MAGIC
            or version != _CACHE_VERSION
            or n_stored != n
            or boundary != (0 if couplings.boundary == OPEN else 1)
            or stored != expected
            or dim != (1 << n)
        ):
            return None
        offset = _HEADER.size
        values = np.frombuffer(blob, dtype="<f8", count=dim, offset=offset).copy()
        offset += dim * 8
        vectors = (
            np.frombuffer(blob, dtype="<c16", count=dim * dim, offset=offset)
            .reshape(dim, dim)
            .copy()
        )
    except (struct.error, ValueError) as exc:
        warnings.warn(f"ignoring corrupt eigendecomposition cache {path}: {exc}")
        return None
    if bool(np.all(vectors.imag == 0.0)):
        vectors = np.ascontiguousarray(vectors.real)
    values.flags.writeable = False
    vectors.flags.writeable = False
    return EigenDecomposition(eigenvalues=values, eigenvectors=vectors)
