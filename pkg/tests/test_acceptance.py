"""Acceptance gate: one test per criterion, each printing a pass line with
its measured runtime. Budgets are asserted where the criterion states one."""

import math
import time

import numpy as np
import pytest

from qht import bounds as B
from qht import nsmap, oracles, tradeoff
from qht.asymptotics import expansion_sweep_multi, inv_norm_cdf
from qht.cli import preset_fig2_csv
from qht.hermitian import DensityOperator, fidelity, matrix_function
from qht.nsmap import (
    LLRAtom,
    atoms_product,
    beta_alpha_classical,
    beta_alpha_classical_variational,
    moments,
    ns_map,
)
from qht.states import mixed_pair, plus_ket_state, random_pair, zero_ket_state
from qht.tradeoff import TradeoffSession, dh_from_beta

from conftest import random_density


def _report(name, t0):
    print(f"PASS {name} ({time.perf_counter() - t0:.1f}s)")


def test_criterion_1_pure_state_curves():
    t0 = time.perf_counter()
    rho, sigma = zero_ket_state(), plus_ket_state()
    n = 5
    a = 2.0 ** -n
    session = TradeoffSession(rho.tensor_power(n), sigma.tensor_power(n))
    atoms = B.product_atoms(rho, sigma, n)
    for p in np.linspace(0.0, 1.0, 101):
        p = float(p)
        alpha_q, beta_q = B.pure_state_curve(a, p)
        exact = session.beta_alpha(alpha_q).beta
        assert abs(exact - beta_q) <= 1e-9, f"p={p}: {exact} vs {beta_q}"
        env, _ = B.theorem1_envelope(rho, sigma, n, alpha_q, atoms=atoms)
        assert env <= exact + 1e-12, f"p={p}: envelope {env} above exact"
        if beta_q > 0.0:
            assert env >= beta_q * (1.0 - 5.0 * a), \
                f"p={p}: envelope gap exceeds 5a"
    elapsed = time.perf_counter() - t0
    assert elapsed <= 10.0, f"criterion 1 took {elapsed:.1f}s > 10s"
    _report("criterion 1 (pure-state curve + envelope)", t0)


def test_criterion_2_mixed_state_bounds():
    t0 = time.perf_counter()
    rho, sigma = mixed_pair()
    n = 5
    f2 = fidelity(rho, sigma) ** 2
    assert abs(f2 - 0.73) <= 1e-12
    fid_range = f2 ** n
    session = TradeoffSession(rho.tensor_power(n), sigma.tensor_power(n))
    atoms = B.product_atoms(rho, sigma, n)
    ds_eval = tradeoff.InfoSpectrumEvaluator(rho, sigma, n)
    for k in range(1, 20):  # the decimal grid 0.05, 0.10, ..., 0.95, exactly
        eps = k / 20.0
        exact = dh_from_beta(session.beta_alpha(eps).beta)
        env, _ = B.theorem1_envelope(rho, sigma, n, eps, atoms=atoms)
        env_dh = B.dh_bound_from_beta(env)
        sym_dh = B.dh_bound_from_beta(
            B.ns_symmetric_bound(rho, sigma, n, eps, atoms=atoms))
        fid_dh = B.dh_bound_from_beta(B.fidelity_bound(rho, sigma, n, eps))
        info_dh, _ = B.info_spectrum_bound(rho, sigma, n, eps,
                                           evaluator=ds_eval)
        # (a) converse validity
        for name, up in (("theorem1_envelope", env_dh), ("ns_symmetric", sym_dh),
                         ("fidelity", fid_dh), ("info_spectrum", info_dh)):
            assert up >= exact - 1e-8, f"eps={eps}: {name} {up} < {exact}"
        # (b) the information-spectrum comparison bound is looser
        assert env_dh <= info_dh, f"eps={eps}: envelope above info-spectrum"
        # (c) fidelity bound finite exactly below F^(2n)
        assert math.isfinite(fid_dh) == (eps < fid_range), f"eps={eps}"
        # (d) symmetric bound finite exactly below 1/2
        assert math.isfinite(sym_dh) == (eps < 0.5), f"eps={eps}"
        # (e) envelope finite across the whole grid
        assert math.isfinite(env_dh), f"eps={eps}: envelope infinite"
    elapsed = time.perf_counter() - t0
    assert elapsed <= 60.0, f"criterion 2 took {elapsed:.1f}s > 60s"
    _report("criterion 2 (mixed-state bound comparison)", t0)


def test_criterion_3_classical_oracle_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(303)
    alphas = np.linspace(0.0, 1.0, 11)
    for _ in range(100):
        k = int(rng.integers(2, 13))
        p = rng.random(k)
        q = rng.random(k)
        if rng.random() < 0.25:
            p[rng.integers(0, k)] = 0.0
        if rng.random() < 0.25:
            q[rng.integers(0, k)] = 0.0
        if p.sum() == 0.0 or q.sum() == 0.0:
            continue
        p /= p.sum()
        q /= q.sum()
        atoms = [LLRAtom(llr=nsmap._llr(pi, qi), p_mass=float(pi),
                         q_mass=float(qi))
                 for pi, qi in zip(p, q) if pi > 0 or qi > 0]
        want = oracles.brute_force_beta_classical(p, q, alphas)
        for alpha, w in zip(alphas, want):
            got = beta_alpha_classical(atoms, float(alpha))
            var = beta_alpha_classical_variational(atoms, float(alpha))
            assert abs(got - w) <= 1e-10, f"k={k} alpha={alpha}"
            assert abs(var - w) <= 1e-10, f"k={k} alpha={alpha} (variational)"
    _report("criterion 3 (classical Neyman-Pearson oracle)", t0)


def test_criterion_4_quantum_classical_reductions():
    t0 = time.perf_counter()
    rng = np.random.default_rng(404)
    # commuting pairs: quantum trade-off equals the classical one
    for _ in range(20):
        d = int(rng.integers(2, 4))
        lam = rng.dirichlet(np.ones(d))
        mu = rng.dirichlet(np.ones(d))
        rho = DensityOperator(np.diag(lam))
        sigma = DensityOperator(np.diag(mu))
        n = int(rng.integers(1, 5))
        if d ** n > 64:
            n = 2
        atoms = atoms_product(ns_map(rho, sigma), n)
        session = TradeoffSession(rho.tensor_power(n), sigma.tensor_power(n))
        for alpha in (0.1, 0.45, 0.8):
            quantum = session.beta_alpha(alpha).beta
            classical = beta_alpha_classical(atoms, alpha)
            assert abs(quantum - classical) <= 1e-10, \
                f"d={d} n={n} alpha={alpha}: {quantum} vs {classical}"
    # non-commuting qubits against the Bloch-grid test envelope
    alphas = np.linspace(0.0, 1.0, 21)
    for _ in range(3):
        rho, sigma = random_density(rng, 2), random_density(rng, 2)
        session = TradeoffSession(rho, sigma)
        exact = np.array([session.beta_alpha(float(a)).beta for a in alphas])
        grid = oracles.bloch_grid_envelope(rho, sigma, alphas)
        assert np.max(np.abs(exact - grid)) <= 2e-4
    _report("criterion 4 (quantum-classical reductions)", t0)


def test_criterion_5_renyi_identity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(505)
    s_values = np.linspace(0.0, 1.0, 11)
    for i in range(50):
        dim = 2 if i % 2 == 0 else 3
        rho = random_density(rng, dim, min_eig=1e-3)
        sigma = random_density(rng, dim, min_eig=1e-3)
        ns = ns_map(rho, sigma)
        for s in s_values:
            s = float(s)
            quantum = float(np.trace(
                matrix_function(rho.mat, "power", s)
                @ matrix_function(sigma.mat, "power", 1.0 - s)).real)
            assert abs(quantum - nsmap.renyi_overlap(ns, s)) <= 1e-10
        d = moments(ns).rel_entropy
        assert abs(B.hoeffding_rhs(rho, sigma, 0.0) - d) <= 1e-6
    _report("criterion 5 (Renyi overlap identity)", t0)


def test_criterion_6_moment_transfer():
    t0 = time.perf_counter()
    rng = np.random.default_rng(606)
    for i in range(20):
        dim = 2 if i % 2 == 0 else 3
        rho = random_density(rng, dim, min_eig=1e-3)
        sigma = random_density(rng, dim, min_eig=1e-3)
        m = moments(ns_map(rho, sigma))
        delta = matrix_function(rho.mat, "log2") - matrix_function(sigma.mat,
                                                                   "log2")
        d_q = float(np.trace(rho.mat @ delta).real)
        v_q = float(np.trace(rho.mat @ delta @ delta).real) - d_q ** 2
        assert abs(m.rel_entropy - d_q) <= 1e-8
        assert abs(m.variance - v_q) <= 1e-8
    _report("criterion 6 (moment transfer)", t0)


@pytest.mark.slow
def test_criterion_7_second_order_window():
    t0 = time.perf_counter()
    rho, sigma = mixed_pair()
    m = moments(ns_map(rho, sigma))
    eps_list = [0.2, 0.5, 0.8]
    n_list = list(range(4, 13))
    sweeps = expansion_sweep_multi(rho, sigma, eps_list, n_list)
    for eps in eps_list:
        for rep in sweeps[eps]:
            upper = (rep.n * m.rel_entropy
                     + math.sqrt(rep.n * m.variance) * inv_norm_cdf(eps)
                     + math.log2(rep.n) + 10.0)
            assert rep.dh_exact <= upper, f"n={rep.n} eps={eps}"
            band = 10.0 * math.log2(rep.n)
            assert -band <= rep.residual <= band, f"n={rep.n} eps={eps}"
    # per-copy rate approaches the relative entropy as n grows
    mid = sweeps[0.5]
    assert abs(mid[-1].dh_exact / mid[-1].n - m.rel_entropy) < \
        abs(mid[0].dh_exact / mid[0].n - m.rel_entropy)
    elapsed = time.perf_counter() - t0
    assert elapsed <= 300.0, f"criterion 7 took {elapsed:.1f}s > 300s"
    _report("criterion 7 (second-order window)", t0)


def test_criterion_8_weighted_bound_validity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(808)
    for _ in range(200):
        dim = int(rng.integers(2, 4))
        n = int(rng.integers(1, 4))
        rho, sigma = random_density(rng, dim), random_density(rng, dim)
        s = float(rng.uniform(0.02, 0.98))
        alpha = float(rng.uniform(0.0, 1.0 - s))
        session = TradeoffSession(rho.tensor_power(n), sigma.tensor_power(n))
        beta_q = session.beta_alpha(alpha).beta
        bound = B.theorem1_beta_bound(rho, sigma, n, alpha, s)
        assert beta_q >= bound - 1e-9, \
            f"dim={dim} n={n} s={s} alpha={alpha}: {beta_q} < {bound}"
    _report("criterion 8 (weighted-bound validity sweep)", t0)


@pytest.mark.slow
def test_criterion_9_determinism_and_performance():
    t0 = time.perf_counter()
    blob1 = preset_fig2_csv()
    blob2 = preset_fig2_csv()
    assert blob1.encode() == blob2.encode(), "fig2 CSV bytes differ"
    rho, sigma = random_pair(909)
    t1 = time.perf_counter()
    session = TradeoffSession(rho.tensor_power(10), sigma.tensor_power(10))
    point = session.beta_alpha(0.3)
    elapsed = time.perf_counter() - t1
    assert 0.0 <= point.beta <= 1.0
    assert elapsed <= 120.0, f"n=10 trade-off took {elapsed:.1f}s > 120s"
    _report("criterion 9 (determinism + n=10 performance)", t0)
