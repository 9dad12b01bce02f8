import numpy as np
import pytest

from ghzlab.hamiltonian import FEATURED_SET_A, build_hamiltonian
from ghzlab.hilbert import Direction, ghz_density, ghz_state, mixture_state
from ghzlab.macroscopicity import (
    _max_double_commutator,
    double_commutator_norm,
    fit_power_law,
    ghz_family,
    index_p,
    index_q,
    max_variance,
    mixture_family,
    product_family,
    trace_norm_hermitian,
)
from ghzlab.observables import DirectionSearchSettings, ObservableKind, build_observable
from ghzlab.spectral import dephase, diagonalize

Z = Direction(0.0, 0.0, 1.0)
FAST = DirectionSearchSettings(theta_points=24, phi_points=48)


def random_hermitian(dim, seed):
    rng = np.random.default_rng(seed)
    mat = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (mat + mat.conj().T) / 2


class TestTraceNorm:
    def test_matches_singular_values(self):
        for seed in range(5):
            mat = random_hermitian(32, seed)
            assert trace_norm_hermitian(mat) == pytest.approx(
                np.linalg.svd(mat, compute_uv=False).sum(), abs=1e-10
            )


class TestMaxVariance:
    def test_ghz_value_n_squared(self):
        for n in (3, 4, 6):
            value, direction = max_variance(ghz_state(n), FAST)
            assert value == pytest.approx(n**2, rel=1e-9)
            assert abs(direction.nz) == pytest.approx(1.0, abs=1e-6)

    def test_product_state_at_most_n(self):
        for n in (2, 4, 6):
            value, _ = max_variance(product_family(n), FAST)
            assert value <= n + 1e-9
            assert value == pytest.approx(n, rel=1e-6)

    def test_maximally_mixed(self):
        n = 4
        rho = np.eye(1 << n, dtype=complex) / (1 << n)
        value, _ = max_variance(rho, FAST)
        assert value == pytest.approx(n, rel=1e-9)

    def test_dense_and_vector_routes_agree(self):
        n = 3
        rng = np.random.default_rng(9)
        psi = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        psi /= np.linalg.norm(psi)
        v_vec, _ = max_variance(psi, FAST)
        v_dense, _ = max_variance(np.outer(psi, psi.conj()), FAST)
        assert v_vec == pytest.approx(v_dense, abs=1e-9)

    def test_brute_force_direction_scan(self):
        # independent oracle: direct Var over a dense direction sample
        n = 3
        rng = np.random.default_rng(11)
        psi = rng.normal(size=8) + 1j * rng.normal(size=8)
        psi /= np.linalg.norm(psi)
        best = -np.inf
        for theta in np.linspace(0, np.pi, 40):
            for phi in np.linspace(0, 2 * np.pi, 80, endpoint=False):
                d = Direction.from_angles(theta, phi)
                probe = build_observable(ObservableKind.LOCAL_ADDITIVE, d, n)
                mean = np.real(np.vdot(psi, probe @ psi))
                second = np.real(np.vdot(probe @ psi, probe @ psi))
                best = max(best, second - mean**2)
        value, _ = max_variance(psi, FAST)
        assert value >= best - 1e-9
        assert value == pytest.approx(best, rel=0.01)


class TestDoubleCommutator:
    def test_ghz_z_axis_value(self):
        for n in (2, 3, 5):
            assert double_commutator_norm(ghz_density(n), Z) == pytest.approx(
                4.0 * n**2, rel=1e-10
            )

    def test_mixture_z_axis_zero(self):
        assert double_commutator_norm(mixture_state(4), Z) == pytest.approx(0.0, abs=1e-10)

    def test_maximally_mixed_any_axis(self):
        n = 3
        rho = np.eye(1 << n, dtype=complex) / (1 << n)
        for seed in range(3):
            vec = np.random.default_rng(seed).normal(size=3)
            d = Direction.normalized(*vec)
            assert double_commutator_norm(rho, d) == pytest.approx(0.0, abs=1e-10)

    def test_hermitian_traceless(self):
        n = 3
        rng = np.random.default_rng(21)
        mat = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        rho = mat @ mat.conj().T
        rho /= np.trace(rho)
        d = Direction.normalized(0.3, -1.1, 0.4)
        probe = build_observable(ObservableKind.LOCAL_ADDITIVE, d, n)
        commutator = (
            probe @ probe @ rho + rho @ probe @ probe - 2 * probe @ rho @ probe
        )
        assert np.max(np.abs(commutator - commutator.conj().T)) < 1e-10
        assert abs(np.trace(commutator)) < 1e-10

    def test_low_rank_routes_match_dense(self):
        for n in (3, 4):
            settings = DirectionSearchSettings(theta_points=6, phi_points=8)
            for family, dense_state in (
                (ghz_family(n), ghz_density(n)),
                (mixture_family(n), mixture_state(n)),
            ):
                v_fast, d_fast = _max_double_commutator(family, settings)
                v_dense, d_dense = _max_double_commutator(dense_state, settings)
                assert v_fast == pytest.approx(v_dense, rel=1e-9)

    def test_pointwise_low_rank_vs_dense(self):
        n = 4
        rng = np.random.default_rng(33)
        for _ in range(5):
            d = Direction.normalized(*rng.normal(size=3))
            dense_value = double_commutator_norm(ghz_density(n), d)
            f = __import__(
                "ghzlab.macroscopicity", fromlist=["_low_rank_commutator_functional"]
            )._low_rank_commutator_functional(
                ghz_state(n).reshape(-1, 1), np.ones(1)
            )
            assert f(d) == pytest.approx(dense_value, rel=1e-9, abs=1e-9)


class TestFitPowerLaw:
    def test_exact_power(self):
        sizes = (4, 6, 8, 10)
        fit = fit_power_law(sizes, [4.0 * n**2 for n in sizes])
        assert fit.exponent == pytest.approx(2.0, abs=1e-12)
        assert fit.intercept == pytest.approx(np.log(4.0), abs=1e-12)
        assert fit.max_residual < 1e-12

    def test_requires_three_sizes(self):
        with pytest.raises(ValueError):
            fit_power_law((4, 6), [1.0, 2.0])

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            fit_power_law((4, 6, 8), [1.0, -2.0, 3.0])


class TestIndices:
    def test_q_ghz_family_exact(self):
        fit = index_q(ghz_family, (4, 6, 8, 10), FAST)
        assert fit.exponent == pytest.approx(2.0, abs=0.01)

    def test_p_ghz_family_exact(self):
        fit = index_p(ghz_family, (4, 6, 8, 10), FAST)
        assert fit.exponent == pytest.approx(2.0, abs=0.01)

    def test_p_product_family(self):
        fit = index_p(product_family, (4, 6, 8, 10), FAST)
        assert fit.exponent == pytest.approx(1.0, abs=0.1)

    def test_q_clamp_floor(self):
        # a family whose commutator norm is tiny: clamp makes v(N) = N exactly
        def tiny_family(n):
            return np.eye(1 << n, dtype=complex) / (1 << n)

        fit = index_q(tiny_family, (4, 6, 8), DirectionSearchSettings(6, 8))
        assert fit.exponent == pytest.approx(1.0, abs=1e-9)

    def test_p_rejects_mixed(self):
        with pytest.raises(ValueError, match="pure"):
            index_p(lambda n: mixture_state(n), (4, 6, 8), FAST)

    def test_p_requires_three_sizes(self):
        with pytest.raises(ValueError):
            index_p(ghz_family, (4, 6), FAST)

    def test_pq_relation_on_pure_families(self):
        # q = 2 <=> p = 2 spot check on the GHZ family
        q_fit = index_q(ghz_family, (4, 6, 8), FAST)
        p_fit = index_p(ghz_family, (4, 6, 8), FAST)
        if abs(q_fit.exponent - 2.0) < 0.05:
            assert abs(p_fit.exponent - 2.0) < 0.05

    def test_q_mix_family_near_one(self):
        fit = index_q(mixture_family, (4, 6, 8, 10), FAST)
        assert fit.exponent == pytest.approx(1.07, abs=0.10)


class TestDephasedIndices:
    @pytest.mark.slow
    def test_coarse_multistart_matches_full_grid(self):
        # the coarse multi-start default used for dense dephased searches is
        # validated against the full grid (few, occasionally narrow basins)
        from ghzlab.observables import COARSE_SEARCH
        from ghzlab.hilbert import mixture_state

        eig = diagonalize(build_hamiltonian(6, FEATURED_SET_A))
        full = DirectionSearchSettings(
            theta_points=64, phi_points=128, refine_starts=4
        )
        for rho0 in (ghz_density(6), mixture_state(6)):
            rho = dephase(rho0, eig)
            coarse = _max_double_commutator(rho, COARSE_SEARCH)
            fine = _max_double_commutator(rho, full)
            assert coarse[0] == pytest.approx(fine[0], rel=1e-9)
