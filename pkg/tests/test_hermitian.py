import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qht.errors import DimensionOverflowError, SingularSupportError
from qht.hermitian import (
    DensityOperator,
    as_hermitian,
    eigh,
    fidelity,
    frobenius,
    matrix_function,
    positive_part_trace,
    tensor_power,
)
from qht.selftest import (
    check_fidelity_multiplicative,
    check_fidelity_symmetry,
    check_positive_part_balance,
    check_reconstruction,
    check_tensor_power_trace,
)
from qht.states import mixed_pair, plus_ket_state, zero_ket_state

from conftest import random_density, random_hermitian


class TestEigh:
    def test_identity(self):
        sd = eigh(np.eye(4))
        assert np.allclose(sd.eigenvalues, 1.0, atol=1e-14)
        assert frobenius(sd.eigenvectors.conj().T @ sd.eigenvectors - np.eye(4)) < 1e-12

    def test_pauli_x(self):
        sd = eigh(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert sd.eigenvalues == pytest.approx([1.0, -1.0], abs=1e-14)

    def test_mixed_sigma_spectrum(self):
        # trace 1, det 0.16: closed-form eigenvalues (1 +- sqrt(1-4 det))/2
        _, sigma = mixed_pair()
        det = 0.35 * 0.65 - (3.0 * math.sqrt(3.0) / 20.0) ** 2
        hi = (1.0 + math.sqrt(1.0 - 4.0 * det)) / 2.0
        sd = eigh(sigma.mat)
        assert sd.eigenvalues == pytest.approx([hi, 1.0 - hi], abs=1e-12)
        assert sd.eigenvalues == pytest.approx([0.8, 0.2], abs=1e-12)

    def test_descending_order_and_reconstruction(self, rng):
        h = random_hermitian(rng, 9)
        sd = eigh(h)
        assert all(a >= b for a, b in zip(sd.eigenvalues, sd.eigenvalues[1:]))
        assert frobenius(sd.reconstruct() - h) <= 1e-11 * max(1.0, frobenius(h))

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="not Hermitian"):
            eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_deterministic(self, rng):
        h = random_hermitian(rng, 6)
        a = eigh(h.copy())
        b = eigh(h.copy())
        assert np.array_equal(a.eigenvalues, b.eigenvalues)
        assert np.array_equal(a.eigenvectors, b.eigenvectors)


class TestTensorPower:
    def test_single_copy_identity(self, rng):
        a = random_hermitian(rng, 3)
        assert np.array_equal(tensor_power(a, 1), a.astype(complex))

    def test_identity_cube(self):
        assert np.array_equal(tensor_power(np.eye(2), 3), np.eye(8))

    def test_diagonal_product(self):
        got = tensor_power(np.diag([0.8, 0.2]), 2)
        assert np.allclose(got, np.diag([0.64, 0.16, 0.16, 0.04]), atol=1e-15)

    def test_big_endian_composition(self):
        a = np.array([[1.0, 2.0], [3.0, 4.0]])
        got = tensor_power(a, 2)
        # entry ((i1 i2), (j1 j2)) = a[i1, j1] a[i2, j2], i1 most significant
        assert got[0b10, 0b01] == a[1, 0] * a[0, 1]

    def test_overflow(self):
        with pytest.raises(DimensionOverflowError, match="type-class"):
            tensor_power(np.eye(2), 13)


class TestMatrixFunction:
    def test_power_half(self):
        got = matrix_function(np.diag([4.0, 1.0]), "power", 0.5)
        assert np.allclose(got, np.diag([2.0, 1.0]), atol=1e-14)

    def test_power_zero_is_support_projector(self):
        got = matrix_function(np.diag([0.5, 0.0]), "power", 0.0)
        assert np.allclose(got, np.diag([1.0, 0.0]), atol=1e-14)

    def test_power_one_identity(self, rng):
        h = random_hermitian(rng, 5)
        assert frobenius(matrix_function(h, "power", 1.0) - h) <= 1e-12 * frobenius(h)

    def test_sqrt_squares_back(self, rng):
        rho = random_density(rng, 4)
        root = matrix_function(rho.mat, "sqrt")
        assert frobenius(root @ root - rho.mat) <= 1e-11

    def test_log2_rejects_singular(self):
        with pytest.raises(SingularSupportError) as err:
            matrix_function(np.diag([1.0, 0.0]), "log2")
        assert err.value.eigenvalue == pytest.approx(0.0, abs=1e-15)

    def test_negative_power_rejects_singular(self):
        with pytest.raises(SingularSupportError):
            matrix_function(np.diag([1.0, 1e-15]), "power", -1.0)

    def test_log2_matches_scalar(self):
        got = matrix_function(np.diag([4.0, 0.5]), "log2")
        assert np.allclose(got, np.diag([2.0, -1.0]), atol=1e-14)


class TestFidelity:
    def test_self_fidelity(self, rng):
        rho = random_density(rng, 3)
        assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-12)

    def test_pure_states_inner_product(self):
        assert fidelity(zero_ket_state(), plus_ket_state()) == pytest.approx(
            1.0 / math.sqrt(2.0), abs=1e-12)

    def test_mixed_pair_closed_form(self):
        # 2x2: F^2 = tr M + 2 sqrt(det M), det M = det rho det sigma
        rho, sigma = mixed_pair()
        tr_m = float(np.trace(rho.mat @ sigma.mat).real)
        det_m = float(np.linalg.det(rho.mat).real * np.linalg.det(sigma.mat).real)
        want = math.sqrt(tr_m + 2.0 * math.sqrt(det_m))
        got = fidelity(rho, sigma)
        assert got == pytest.approx(want, abs=1e-12)
        assert got == pytest.approx(0.854400, abs=5e-7)
        assert got ** 2 == pytest.approx(0.73, abs=1e-12)

    def test_dim_mismatch(self, rng):
        with pytest.raises(ValueError, match="mismatch"):
            fidelity(random_density(rng, 2), random_density(rng, 3))


class TestPositivePartTrace:
    def test_negative_definite(self):
        assert positive_part_trace(-np.eye(3)) == 0.0

    def test_diagonal(self):
        assert positive_part_trace(np.diag([3.0, -1.0])) == 3.0

    def test_mixed_difference_half_trace_norm(self):
        # rho - sigma is traceless 2x2: eigenvalues +-sqrt(-det)
        rho, sigma = mixed_pair()
        d = rho.mat - sigma.mat
        want = math.sqrt(-float(np.linalg.det(d).real))
        assert positive_part_trace(d) == pytest.approx(want, abs=1e-13)

    @given(st.integers(0, 2 ** 31 - 1), st.integers(2, 8))
    def test_balance_is_trace(self, seed, dim):
        h = random_hermitian(np.random.default_rng(seed), dim)
        lhs = positive_part_trace(h) - positive_part_trace(-h)
        assert lhs == pytest.approx(float(np.trace(h).real), abs=1e-10)


class TestDensityOperator:
    def test_rejects_bad_trace(self):
        with pytest.raises(ValueError, match="trace"):
            DensityOperator(np.diag([0.9, 0.2]))

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(ValueError, match="positive semidefinite"):
            DensityOperator(np.diag([1.1, -0.1]))

    def test_clamps_tiny_negative(self):
        rho = DensityOperator(np.diag([1.0 + 5e-11, -5e-11]))
        assert rho.spectral.eigenvalues[-1] >= 0.0

    def test_real_input_stays_real(self):
        rho = DensityOperator(np.diag([0.8, 0.2]))
        assert not np.iscomplexobj(rho.mat)

    @given(st.integers(0, 2 ** 31 - 1))
    def test_tensor_power_trace_one(self, seed):
        rho = random_density(np.random.default_rng(seed), 2)
        big = rho.tensor_power(3)
        assert float(np.trace(big.mat).real) == pytest.approx(1.0, abs=1e-12)


class TestHermitianValidation:
    def test_hermitianizes_small_asymmetry(self):
        a = np.array([[1.0, 1e-14], [0.0, 1.0]])
        h = as_hermitian(a)
        assert frobenius(h - h.conj().T) == 0.0

    @given(st.integers(0, 2 ** 31 - 1), st.integers(1, 3))
    def test_fidelity_multiplicative_property(self, seed, n):
        rng = np.random.default_rng(seed)
        r1, s1 = random_density(rng, 2), random_density(rng, 2)
        joint = fidelity(r1.tensor_power(n), s1.tensor_power(n))
        assert joint == pytest.approx(fidelity(r1, s1) ** n, abs=1e-10)


def test_module_invariants():
    check_reconstruction()
    check_fidelity_multiplicative()
    check_fidelity_symmetry()
    check_positive_part_balance()
    check_tensor_power_trace()
