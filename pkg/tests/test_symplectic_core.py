import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussrel.errors import AsymmetricInput, ComplexSpectrum, NonFiniteEntry, SingularCovariance
from gaussrel.symplectic_core import (
    SIGMA,
    StandardFormParams,
    block_decompose,
    is_physical,
    is_pure,
    make_covariance,
    symplectic_spectrum,
    vacuum,
    wigner_density,
)
from oracles import dense_symplectic_moduli, hermitian_physical, random_physical, std_matrix, wigner_integral


def test_sigma_is_symplectic_unity():
    assert np.array_equal(SIGMA.T, -SIGMA)
    assert np.array_equal(SIGMA @ SIGMA, -np.eye(4))


class TestMakeCovariance:
    def test_vacuum(self):
        V = make_covariance(np.eye(4) / 2, tol=1e-12)
        assert np.array_equal(V, np.eye(4) / 2)
        assert not V.flags.writeable

    def test_symmetrizes_within_tol(self):
        raw = np.eye(4)
        raw[0, 1], raw[1, 0] = 0.1, 0.1000000001
        V = make_covariance(raw, tol=1e-6)
        assert V[0, 1] == V[1, 0] == pytest.approx(0.10000000005, abs=1e-15)

    def test_rejects_asymmetric(self):
        raw = np.eye(4)
        raw[0, 1], raw[1, 0] = 0.5, -0.5
        with pytest.raises(AsymmetricInput):
            make_covariance(raw, tol=1e-6)

    @pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
    def test_rejects_non_finite(self, bad):
        raw = np.eye(4)
        raw[2, 2] = bad
        with pytest.raises(NonFiniteEntry):
            make_covariance(raw)


def test_block_decompose_vacuum():
    A, B, C = block_decompose(vacuum())
    assert np.array_equal(A, np.eye(2) / 2)
    assert np.array_equal(B, np.eye(2) / 2)
    assert np.array_equal(C, np.zeros((2, 2)))


def test_block_decompose_standard_form():
    A, B, C = block_decompose(StandardFormParams(1.2, 0.8, 0.3, -0.1).matrix())
    assert np.array_equal(A, 1.2 * np.eye(2))
    assert np.array_equal(B, 0.8 * np.eye(2))
    assert np.array_equal(C, np.diag([0.3, -0.1]))


def test_block_reassembly_is_exact(physical_states):
    for V in physical_states[:50]:
        A, B, C = block_decompose(V)
        assert np.array_equal(np.block([[A, C], [C.T, B]]), V)


class TestSymplecticSpectrum:
    def test_vacuum(self):
        assert symplectic_spectrum(vacuum()) == pytest.approx((0.5, 0.5), abs=1e-15)

    def test_correlated_thermal(self):
        V = std_matrix(1, 1, 0.3, 0.3)
        spec = symplectic_spectrum(V)
        assert spec == pytest.approx((1.3, 0.7), abs=1e-12)
        assert dense_symplectic_moduli(V) == pytest.approx((1.3, 0.7), abs=1e-12)

    def test_tms_is_pure(self):
        r = 0.7
        a, c = np.cosh(2 * r) / 2, np.sinh(2 * r) / 2
        V = std_matrix(a, a, c, -c)
        assert symplectic_spectrum(V) == pytest.approx((0.5, 0.5), abs=1e-12)
        # the non-Hermitian oracle loses half its digits at a double root
        assert dense_symplectic_moduli(V) == pytest.approx((0.5, 0.5), abs=1e-7)

    def test_complex_spectrum_raises(self):
        # symmetric but indefinite, with complex roots of the biquadratic
        V = np.array(
            [
                [0.3, 0.05, -0.4, -0.15],
                [0.05, 0.8, 0.55, -0.2],
                [-0.4, 0.55, 0.6, -0.25],
                [-0.15, -0.2, -0.25, -0.6],
            ]
        )
        A, B, C = block_decompose(V)
        delta = np.linalg.det(A) + np.linalg.det(B) + 2 * np.linalg.det(C)
        assert delta**2 - 4 * np.linalg.det(V) == pytest.approx(-0.1674, abs=1e-12)
        with pytest.raises(ComplexSpectrum):
            symplectic_spectrum(V)
        assert not is_physical(V)

    def test_matches_dense_oracle(self, physical_states):
        for V in physical_states:
            hi, lo = dense_symplectic_moduli(V)
            spec = symplectic_spectrum(V)
            assert spec.nu_plus == pytest.approx(hi, rel=1e-9, abs=1e-9)
            assert spec.nu_minus == pytest.approx(lo, rel=1e-9, abs=1e-9)

    def test_product_is_sqrt_det(self, physical_states):
        for V in physical_states:
            spec = symplectic_spectrum(V)
            assert spec.nu_plus * spec.nu_minus == pytest.approx(np.sqrt(np.linalg.det(V)), rel=1e-10)


class TestIsPhysical:
    def test_vacuum(self):
        assert is_physical(vacuum())

    def test_strongly_correlated_is_unphysical(self):
        V = std_matrix(1, 1, 0.95, -0.95)
        assert symplectic_spectrum(V).nu_minus == pytest.approx(np.sqrt(0.0975), abs=1e-7)
        assert not is_physical(V)
        assert not hermitian_physical(V)

    def test_mixed_entangled_is_physical(self):
        V = std_matrix(1, 1, 0.8, -0.5)
        assert symplectic_spectrum(V).nu_minus == pytest.approx(np.sqrt(0.3), abs=1e-12)
        assert is_physical(V)
        assert hermitian_physical(V)

    def test_pure_states_pass(self, rng):
        from oracles import random_pure

        for _ in range(200):
            assert is_physical(random_pure(rng, max_squeeze=1.5))

    def test_not_positive_definite(self):
        assert not is_physical(np.diag([1.0, 1.0, 1.0, -1.0]))

    def test_agrees_with_hermitian_oracle(self, rng):
        for _ in range(1000):
            m = np.diag(rng.uniform(0.3, 1.5, 4))
            m[np.triu_indices(4, 1)] = rng.uniform(-0.8, 0.8, 6)
            V = m + np.triu(m, 1).T
            assert is_physical(V) == hermitian_physical(V)


class TestIsPure:
    def test_vacuum(self):
        assert is_pure(vacuum())

    def test_tms(self):
        a, c = np.cosh(1.0) / 2, np.sinh(1.0) / 2
        V = std_matrix(a, a, c, -c)
        assert a == pytest.approx(0.77154, abs=1e-5) and c == pytest.approx(0.58760, abs=1e-5)
        assert np.linalg.det(V) == pytest.approx(1 / 16, abs=1e-14)
        assert is_pure(V)

    def test_thermal_is_mixed(self):
        assert not is_pure(np.eye(4))

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.booleans())
    def test_purity_iff_det(self, seed, pure):
        from oracles import random_pure

        gen = np.random.default_rng(seed)
        V = random_pure(gen) if pure else random_physical(gen)
        assert is_pure(V) == (abs(np.linalg.det(V) - 1 / 16) <= 1e-8)


class TestWigner:
    def test_vacuum_origin(self):
        assert wigner_density(vacuum(), np.zeros(4)) == pytest.approx(1 / np.pi**2, rel=1e-14)

    def test_vacuum_unit_offset(self):
        x = np.array([1.0, 0, 0, 0])
        assert wigner_density(vacuum(), x) == pytest.approx(np.exp(-1) / np.pi**2, rel=1e-14)

    def test_normalized(self, rng):
        for _ in range(3):
            V = random_physical(rng, max_squeeze=0.5)
            assert wigner_integral(V) == pytest.approx(1.0, abs=1e-2)

    def test_singular(self):
        with pytest.raises(SingularCovariance):
            wigner_density(np.diag([1.0, 1.0, 1.0, 0.0]), np.zeros(4))

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.lists(st.floats(-3, 3), min_size=4, max_size=4))
    def test_positive_and_peaked_at_origin(self, seed, x):
        V = random_physical(np.random.default_rng(seed))
        w = wigner_density(V, x)
        assert 0 < w <= wigner_density(V, np.zeros(4))
