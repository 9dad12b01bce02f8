import numpy as np
import pytest

from ghzlab.hamiltonian import (
    FEATURED_SET_A,
    FEATURED_SET_B,
    Couplings,
    build_hamiltonian,
    coupling_label,
    parameter_grid,
)
from ghzlab.hilbert import IDENTITY_2, PAULI_X, PAULI_Y, PAULI_Z


def kron_oracle(n, c):
    """Direct Kronecker-product construction of the same Hamiltonian."""
    from functools import reduce

    spin = {"x": PAULI_X / 2, "y": PAULI_Y / 2, "z": PAULI_Z / 2}

    def op_on(site, mat):
        mats = [IDENTITY_2] * n
        mats[n - 1 - site] = mat
        return reduce(np.kron, mats)

    def pairs(dist):
        if c.boundary == "periodic":
            return [(i, (i + dist) % n) for i in range(n)]
        return [(i, i + dist) for i in range(n - dist)]

    ham = np.zeros((1 << n, 1 << n), dtype=complex)
    for dist, strength in ((1, c.j1), (2, c.j2)):
        for i, j in pairs(dist):
            ham += strength * (
                op_on(i, spin["x"]) @ op_on(j, spin["x"])
                + op_on(i, spin["y"]) @ op_on(j, spin["y"])
                + c.d * op_on(i, spin["z"]) @ op_on(j, spin["z"])
            )
    for i in range(n):
        ham += c.h_x * op_on(i, spin["x"]) + c.h_z * op_on(i, spin["z"])
    ham += c.e * op_on(0, spin["x"])
    return ham


def reflection_permutation(n):
    perm = np.zeros((1 << n, 1 << n))
    for s in range(1 << n):
        r = 0
        for j in range(n):
            if s >> j & 1:
                r |= 1 << (n - 1 - j)
        perm[r, s] = 1.0
    return perm


class TestCouplings:
    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            Couplings(j1=float("nan"))

    def test_bad_boundary(self):
        with pytest.raises(ValueError):
            Couplings(boundary="moebius")


class TestBuildHamiltonian:
    def test_two_site_heisenberg_spectrum(self):
        # hand-diagonalized two-site Heisenberg: singlet -3/4, triplet +1/4
        ham = build_hamiltonian(2, Couplings(j1=1.0, j2=0.0, d=1.0))
        assert np.allclose(np.linalg.eigvalsh(ham), [-0.75, 0.25, 0.25, 0.25])

    def test_all_zero_couplings(self):
        ham = build_hamiltonian(4, Couplings(j1=0, j2=0, d=0, h_x=0, h_z=0, e=0))
        assert np.count_nonzero(ham) == 0

    def test_longitudinal_field_diagonal(self):
        n = 3
        ham = build_hamiltonian(n, Couplings(j1=0, j2=0, d=0, h_x=0, h_z=1.0, e=0))
        assert np.count_nonzero(ham - np.diag(np.diagonal(ham))) == 0
        for s in range(1 << n):
            z_sum = sum(1.0 - 2.0 * (s >> j & 1) for j in range(n))
            assert ham[s, s] == pytest.approx(0.5 * z_sum)

    @pytest.mark.parametrize("boundary", ["open", "periodic"])
    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_matches_kron_oracle(self, n, boundary):
        rng = np.random.default_rng(n * 7 + (boundary == "periodic"))
        c = Couplings(
            j1=rng.normal(),
            j2=rng.normal(),
            d=rng.normal(),
            h_x=rng.normal(),
            h_z=rng.normal(),
            e=rng.normal(),
            boundary=boundary,
        )
        assert np.max(np.abs(build_hamiltonian(n, c) - kron_oracle(n, c))) < 1e-12

    def test_hermitian_random_couplings(self):
        rng = np.random.default_rng(11)
        for n in (3, 5, 8):
            c = Couplings(
                j1=rng.normal(), j2=rng.normal(), d=rng.normal(),
                h_x=rng.normal(), h_z=rng.normal(), e=rng.normal(),
            )
            ham = build_hamiltonian(n, c)
            assert np.max(np.abs(ham - ham.conj().T)) < 1e-12

    def test_reflection_symmetry_without_defect(self):
        c = Couplings(j1=1.0, j2=1.35, d=0.5, h_x=0.2, h_z=0.6, e=0.0)
        for n in (4, 6):
            ham = build_hamiltonian(n, c)
            perm = reflection_permutation(n)
            assert np.max(np.abs(ham @ perm - perm @ ham)) < 1e-12

    def test_defect_breaks_reflection(self):
        ham = build_hamiltonian(4, FEATURED_SET_A)
        perm = reflection_permutation(4)
        assert np.max(np.abs(ham @ perm - perm @ ham)) > 1e-3

    def test_defect_applied_once(self):
        base = Couplings(j1=0, j2=0, d=0, h_x=0, h_z=0, e=1.0)
        ham = build_hamiltonian(3, base)
        oracle = kron_oracle(3, base)
        assert np.max(np.abs(ham - oracle)) < 1e-15
        # only site-0 flips: matrix elements connect s and s^1
        nonzero = np.argwhere(np.abs(ham) > 0)
        assert all(t == s ^ 1 for t, s in nonzero)

    def test_too_small(self):
        with pytest.raises(ValueError):
            build_hamiltonian(1, Couplings())
        with pytest.raises(ValueError):
            build_hamiltonian(2, Couplings(j2=0.5))


class TestParameterGrid:
    def test_grid_size(self):
        assert len(parameter_grid()) == 25

    def test_featured_sets(self):
        assert FEATURED_SET_A == Couplings(j1=1.0, j2=1.35, d=0.5, h_x=0.2, h_z=0.6, e=0.2)
        assert FEATURED_SET_B == Couplings(j1=1.0, j2=1.35, d=0.5, h_x=0.2, h_z=0.6, e=0.1)
        grid = parameter_grid()
        assert FEATURED_SET_A in grid
        assert FEATURED_SET_B in grid

    def test_fixed_values_and_axes(self):
        grid = parameter_grid()
        assert {(c.h_z, c.e) for c in grid} == {
            (hz, e)
            for hz in (0.2, 0.3, 0.4, 0.5, 0.6)
            for e in (0.1, 0.2, 0.3, 0.4, 0.5)
        }
        assert all((c.j1, c.j2, c.d, c.h_x) == (1.0, 1.35, 0.5, 0.2) for c in grid)

    def test_labels(self):
        assert coupling_label(FEATURED_SET_A) == "A"
        assert coupling_label(FEATURED_SET_B) == "B"
        other = Couplings(j1=1.0, j2=1.35, d=0.5, h_x=0.2, h_z=0.3, e=0.4)
        assert coupling_label(other) == "hz0.3_e0.4"
