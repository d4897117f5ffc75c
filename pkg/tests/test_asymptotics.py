import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qht.asymptotics import (
    expansion_sweep,
    inv_norm_cdf,
    moderate_rhs,
    norm_cdf,
    second_order_rhs,
)
from qht.errors import DegenerateVarianceError, NumericDomainError
from qht.hermitian import DensityOperator
from qht.nsmap import MomentTriple, moments, ns_map
from qht.selftest import check_phi_roundtrip
from qht.states import mixed_pair

# sqrt(2) * erfinv(0.95) at 30 digits via mpmath, frozen.
PHI_INV_0975 = 1.9599639845400543


class TestNormalCdf:
    def test_center(self):
        assert norm_cdf(0.0) == 0.5
        assert inv_norm_cdf(0.5) == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
    def test_symmetry(self, x):
        assert norm_cdf(-x) == pytest.approx(1.0 - norm_cdf(x), abs=1e-15)

    def test_quantile_against_erfinv_oracle(self):
        assert inv_norm_cdf(0.975) == pytest.approx(PHI_INV_0975, abs=1e-12)
        assert inv_norm_cdf(0.975) == pytest.approx(1.959964, abs=1e-6)

    def test_quantile_domain(self):
        for bad in (0.0, 1.0, -0.1, 1.1):
            with pytest.raises(NumericDomainError):
                inv_norm_cdf(bad)

    @given(st.floats(1e-9, 1.0 - 1e-9))
    def test_roundtrip_quantile(self, p):
        assert norm_cdf(inv_norm_cdf(p)) == pytest.approx(p, abs=1e-12)

    def test_roundtrip_grid(self):
        check_phi_roundtrip()


class TestSecondOrder:
    def test_median_epsilon_drops_sqrt_term(self):
        m = MomentTriple(rel_entropy=0.9, variance=2.19, third_abs=4.6392)
        assert second_order_rhs(m, 7, 0.5) == pytest.approx(6.3, abs=1e-9)
        assert second_order_rhs(m, 7, 0.5, include_logn=True) == pytest.approx(
            6.3 + math.log2(7), abs=1e-9)

    def test_composition_with_quantile(self):
        m = MomentTriple(rel_entropy=1.0, variance=1.0, third_abs=0.0)
        assert second_order_rhs(m, 1, 0.975) == pytest.approx(
            1.0 + PHI_INV_0975, abs=1e-9)

    def test_degenerate_variance(self):
        m = MomentTriple(rel_entropy=1.0, variance=0.0, third_abs=0.0)
        with pytest.raises(DegenerateVarianceError):
            second_order_rhs(m, 4, 0.3)


class TestModerate:
    def test_zero_sequence(self):
        m = MomentTriple(rel_entropy=0.9, variance=2.19, third_abs=4.6392)
        got = moderate_rhs(m, 5, 0.0)
        assert got.value == pytest.approx(4.5, abs=1e-12)
        assert got.eps_n == 1.0

    def test_arithmetic(self):
        m = MomentTriple(rel_entropy=1.0, variance=0.5, third_abs=0.0)
        got = moderate_rhs(m, 100, 0.1)
        assert got.value == pytest.approx(100.0 - 10.0, abs=1e-9)
        assert got.eps_n == pytest.approx(2.0 ** -1.0, abs=1e-12)

    def test_mixed_pair_composition(self):
        rho, sigma = mixed_pair()
        m = moments(ns_map(rho, sigma))
        a_n = 64.0 ** (-1.0 / 3.0)
        got = moderate_rhs(m, 64, a_n)
        assert got.value == pytest.approx(57.6 - 16.0 * math.sqrt(4.38),
                                          abs=1e-9)
        assert got.eps_n == pytest.approx(0.0625, abs=1e-12)


class TestExpansionSweep:
    def test_identical_states_short_circuit(self):
        rho, _ = mixed_pair()
        reports = expansion_sweep(rho, rho, 0.3, [1, 2, 4])
        for rep in reports:
            assert rep.second_order == 0.0
            assert rep.residual == pytest.approx(-math.log2(0.7), abs=1e-8)

    def test_commuting_pair_matches_classical(self):
        rho = DensityOperator(np.diag([0.8, 0.2]))
        sigma = DensityOperator(np.diag([0.2, 0.8]))
        from qht.nsmap import dh_classical
        ns = ns_map(rho, sigma)
        reports = expansion_sweep(rho, sigma, 0.3, [2, 4, 8])
        for rep in reports:
            assert rep.source == "quantum"
            assert rep.dh_exact == pytest.approx(
                dh_classical(ns, rep.n, 0.3), abs=1e-9)

    def test_classical_surrogate_labeled(self):
        rho, sigma = mixed_pair()
        reports = expansion_sweep(rho, sigma, 0.5, [2, 14])
        assert reports[0].source == "quantum"
        assert reports[1].source == "classical"
        assert math.isfinite(reports[1].dh_exact)

    def test_moderate_column(self):
        rho, sigma = mixed_pair()
        reports = expansion_sweep(rho, sigma, 0.5, [8], moderate_power=1.0 / 3.0)
        rep = reports[0]
        assert rep.eps_n == pytest.approx(2.0 ** -(8.0 ** (1.0 / 3.0)), abs=1e-12)
        assert rep.moderate is not None
