"""Invariant suite runnable from the command line (`qht selftest`).

Each check is a plain function raising AssertionError on violation, grouped
by module. The pytest suite calls the same functions, so the CLI self-test
and the test suite cannot drift apart. All randomness is seeded.
"""

from __future__ import annotations

import csv
import math
import time
from pathlib import Path

import numpy as np

INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

from . import asymptotics, bounds, nsmap, oracles, tradeoff
from .hermitian import (
    DensityOperator,
    eigh,
    fidelity,
    frobenius,
    positive_part_trace,
    tensor_power,
)
from .states import mixed_pair, preset_pair

GOLDEN_DIR = Path(__file__).parent / "golden"
GOLDEN_RTOL = 1e-9


def random_hermitian(rng, dim: int) -> np.ndarray:
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + a.conj().T) / 2


def random_density(rng, dim: int, min_eig: float = 0.0) -> DensityOperator:
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = a @ a.conj().T + min_eig * dim * np.eye(dim)
    return DensityOperator(m / np.trace(m).real)


def random_pure(rng, dim: int) -> DensityOperator:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    return DensityOperator(np.outer(v, v.conj()))


# ----------------------------------------------------------------- hermitian

def check_reconstruction():
    rng = np.random.default_rng(11)
    for _ in range(200):
        dim = int(rng.integers(2, 33))
        h = random_hermitian(rng, dim)
        sd = eigh(h)
        err = frobenius(sd.reconstruct() - h)
        assert err <= 1e-11 * max(1.0, frobenius(h)), f"residual {err:.3e}"
        assert frobenius(sd.eigenvectors.conj().T @ sd.eigenvectors
                         - np.eye(dim)) <= 1e-11


def check_fidelity_multiplicative():
    rng = np.random.default_rng(12)
    for _ in range(25):
        r1, s1 = random_density(rng, 2), random_density(rng, 2)
        r2, s2 = random_density(rng, 3), random_density(rng, 3)
        joint = fidelity(DensityOperator(np.kron(r1.mat, r2.mat)),
                         DensityOperator(np.kron(s1.mat, s2.mat)))
        split = fidelity(r1, s1) * fidelity(r2, s2)
        assert abs(joint - split) <= 1e-10, f"{joint} vs {split}"


def check_fidelity_symmetry():
    rng = np.random.default_rng(13)
    for _ in range(25):
        r, s = random_density(rng, 3), random_density(rng, 3)
        assert abs(fidelity(r, s) - fidelity(s, r)) <= 1e-10


def check_positive_part_balance():
    rng = np.random.default_rng(14)
    for _ in range(50):
        h = random_hermitian(rng, int(rng.integers(2, 9)))
        lhs = positive_part_trace(h) - positive_part_trace(-h)
        assert abs(lhs - float(np.trace(h).real)) <= 1e-10


def check_tensor_power_trace():
    rng = np.random.default_rng(15)
    for _ in range(25):
        dim = int(rng.integers(2, 5))
        a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        n = int(rng.integers(1, 4))
        if dim ** n > 64:
            continue
        got = complex(np.trace(tensor_power(a, n)))
        want = complex(np.trace(a)) ** n
        assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


# ------------------------------------------------------------------ tradeoff

def check_g_concavity():
    rng = np.random.default_rng(21)
    for _ in range(5):
        session = tradeoff.TradeoffSession(random_density(rng, 2),
                                           random_density(rng, 2))
        alpha = float(rng.uniform(0.05, 0.95))
        for _ in range(100):
            ts = np.sort(2.0 ** rng.uniform(-8, 8, size=3))
            t1, t2, t3 = map(float, ts)
            if t3 - t1 < 1e-12:
                continue
            w = (t2 - t1) / (t3 - t1)
            chord = (1.0 - w) * session.g(t1, alpha) + w * session.g(t3, alpha)
            assert session.g(t2, alpha) >= chord - 1e-10


def check_variational_consistency():
    # Every threshold test gives a certified lower bound on the optimum.
    rng = np.random.default_rng(22)
    for _ in range(10):
        rho, sigma = random_density(rng, 2), random_density(rng, 2)
        alpha = float(rng.uniform(0.0, 1.0))
        beta = tradeoff.beta_alpha_quantum(rho, sigma, alpha)
        for t in [0.0, 0.3, 1.0, 2.7, 11.0]:
            pi = tradeoff.helstrom_projector(rho, sigma, t)
            term = float(np.trace(pi.mat @ sigma.mat).real) + t * (
                float(np.trace(pi.complement() @ rho.mat).real) - alpha)
            assert term <= beta + 1e-10, f"t={t}: {term} > {beta}"


def check_achievability():
    # At the maximizing threshold, tests that accept the alternative on the
    # k smallest eigenvectors of t* rho - sigma (k = 0..dim, i.e. mixtures of
    # the threshold projector, its kernel boundary and the trivial tests)
    # realize the optimum after randomizing the bracketing pair.
    rng = np.random.default_rng(23)
    for dim in (2, 4, 8):
        rho, sigma = random_density(rng, dim), random_density(rng, dim)
        session = tradeoff.TradeoffSession(rho, sigma)
        for alpha in (0.1, 0.35, 0.7):
            point = session.beta_alpha(alpha)
            w, u = np.linalg.eigh(point.t * np.asarray(rho.mat)
                                  - np.asarray(sigma.mat))
            gain_r = np.real(np.sum(u.conj() * (np.asarray(rho.mat) @ u),
                                    axis=0))
            gain_s = np.real(np.sum(u.conj() * (np.asarray(sigma.mat) @ u),
                                    axis=0))
            alphas = np.concatenate([[0.0], np.cumsum(gain_r)])
            betas = 1.0 - np.concatenate([[0.0], np.cumsum(gain_s)])
            k = int(np.searchsorted(alphas, alpha, side="right")) - 1
            k = min(k, dim - 1)
            seg = alphas[k + 1] - alphas[k]
            lam = (alpha - alphas[k]) / seg if seg > 0.0 else 0.0
            beta_mix = (1.0 - lam) * betas[k] + lam * betas[k + 1]
            assert abs(beta_mix - point.beta) <= 1e-8, \
                f"dim={dim} alpha={alpha}: {beta_mix} vs {point.beta}"


def check_alpha_monotonicity():
    rng = np.random.default_rng(24)
    rho, sigma = random_density(rng, 3), random_density(rng, 3)
    session = tradeoff.TradeoffSession(rho, sigma)
    betas = [session.beta_alpha(a).beta for a in np.linspace(0.0, 1.0, 21)]
    assert all(b2 <= b1 + 1e-10 for b1, b2 in zip(betas, betas[1:]))
    assert betas[-1] <= 1e-12


def check_bloch_grid():
    rng = np.random.default_rng(25)
    alphas = np.linspace(0.0, 1.0, 21)
    for _ in range(3):
        rho, sigma = random_density(rng, 2), random_density(rng, 2)
        session = tradeoff.TradeoffSession(rho, sigma)
        exact = np.array([session.beta_alpha(float(a)).beta for a in alphas])
        grid = oracles.bloch_grid_envelope(rho, sigma, alphas)
        err = np.max(np.abs(exact - grid))
        assert err <= 2e-4, f"Bloch-grid envelope off by {err:.2e}"


# ---------------------------------------------------------------- classical

def check_type_classes_vs_exhaustive():
    rng = np.random.default_rng(31)
    alphas = np.linspace(0.0, 1.0, 21)
    for _ in range(5):
        ns = nsmap.ns_map(random_density(rng, 2), random_density(rng, 2))
        for n in (2, 4, 6):
            fast = nsmap.atoms_product(ns, n)
            slow = oracles.exhaustive_product_atoms(ns, n)
            for a in alphas:
                b1 = nsmap.beta_alpha_classical(fast, float(a))
                b2 = nsmap.beta_alpha_classical(slow, float(a))
                assert abs(b1 - b2) <= 1e-11, f"n={n} alpha={a}: {b1} vs {b2}"


def check_np_brute_force():
    rng = np.random.default_rng(32)
    alphas = np.linspace(0.0, 1.0, 11)
    for _ in range(10):
        k = int(rng.integers(3, 13))
        p = rng.random(k)
        q = rng.random(k)
        if rng.random() < 0.3:  # exercise support mismatches
            p[0] = 0.0
            q[-1] = 0.0
        p /= p.sum()
        q /= q.sum()
        atoms = [nsmap.LLRAtom(llr=nsmap._llr(pi, qi), p_mass=pi, q_mass=qi)
                 for pi, qi in zip(p, q) if pi > 0 or qi > 0]
        want = oracles.brute_force_beta_classical(p, q, alphas)
        for a, w in zip(alphas, want):
            got = nsmap.beta_alpha_classical(atoms, float(a))
            var = nsmap.beta_alpha_classical_variational(atoms, float(a))
            assert abs(got - w) <= 1e-10, f"alpha={a}: {got} vs {w}"
            assert abs(var - got) <= 1e-10, f"alpha={a}: {var} vs {got}"


def check_moment_transfer():
    from .hermitian import matrix_function
    rng = np.random.default_rng(33)
    for dim in (2, 3, 2, 3):
        rho = random_density(rng, dim, min_eig=1e-3)
        sigma = random_density(rng, dim, min_eig=1e-3)
        m = nsmap.moments(nsmap.ns_map(rho, sigma))
        delta = matrix_function(rho.mat, "log2") - matrix_function(sigma.mat, "log2")
        d_q = float(np.trace(rho.mat @ delta).real)
        v_q = float(np.trace(rho.mat @ delta @ delta).real) - d_q ** 2
        assert abs(m.rel_entropy - d_q) <= 1e-8
        assert abs(m.variance - v_q) <= 1e-8


def check_quantum_classical_chain():
    rng = np.random.default_rng(34)
    for _ in range(50):
        dim = int(rng.integers(2, 4))
        rho, sigma = random_density(rng, dim), random_density(rng, dim)
        s = float(rng.uniform(0.05, 0.95))
        alpha = float(rng.uniform(0.0, 1.0 - s))
        beta_q = tradeoff.beta_alpha_quantum(rho, sigma, alpha)
        bound = bounds.theorem1_beta_bound(rho, sigma, 1, alpha, s)
        assert beta_q >= bound - 1e-9, f"{beta_q} < {bound}"


# ------------------------------------------------------------------- bounds

def fig2_bound_table(n: int, eps_grid) -> dict[str, list[float]]:
    """All bound values (dh scale, per-copy NOT normalized) on the mixed pair."""
    rho, sigma = mixed_pair()
    atoms = bounds.product_atoms(rho, sigma, n)
    session = tradeoff.TradeoffSession(rho.tensor_power(n), sigma.tensor_power(n))
    ds_eval = tradeoff.InfoSpectrumEvaluator(rho, sigma, n)
    table = {"epsilon": [], "exact": [], "theorem1_envelope": [], "s_star": [],
             "ns_symmetric": [], "fidelity": [], "info_spectrum": [],
             "delta_star": []}
    for eps in eps_grid:
        eps = float(eps)
        env, s_star = bounds.theorem1_envelope(rho, sigma, n, eps, atoms=atoms)
        info, d_star = bounds.info_spectrum_bound(rho, sigma, n, eps,
                                                  evaluator=ds_eval)
        table["epsilon"].append(eps)
        table["exact"].append(tradeoff.dh_from_beta(session.beta_alpha(eps).beta))
        table["theorem1_envelope"].append(bounds.dh_bound_from_beta(env))
        table["s_star"].append(s_star)
        table["ns_symmetric"].append(bounds.dh_bound_from_beta(
            bounds.ns_symmetric_bound(rho, sigma, n, eps, atoms=atoms)))
        table["fidelity"].append(bounds.dh_bound_from_beta(
            bounds.fidelity_bound(rho, sigma, n, eps)))
        table["info_spectrum"].append(info)
        table["delta_star"].append(d_star)
    return table


def check_bound_validity():
    eps_grid = np.linspace(0.05, 0.95, 19)
    for n in range(1, 6):
        table = fig2_bound_table(n, eps_grid)
        for name in ("theorem1_envelope", "ns_symmetric", "fidelity",
                     "info_spectrum"):
            for eps, up, exact in zip(table["epsilon"], table[name],
                                      table["exact"]):
                assert up >= exact - 1e-8, \
                    f"n={n} eps={eps}: {name} {up} < exact {exact}"


def check_envelope_dominance():
    rho, sigma = mixed_pair()
    n = 3
    atoms = bounds.product_atoms(rho, sigma, n)
    for alpha in np.linspace(0.05, 0.95, 10):
        alpha = float(alpha)
        env, _ = bounds.theorem1_envelope(rho, sigma, n, alpha, atoms=atoms)
        for s in np.linspace(0.0, 1.0 - alpha, 25):
            s = float(s)
            if s in (0.0, 1.0):
                continue
            b = bounds.theorem1_beta_bound(rho, sigma, n, alpha, s, atoms=atoms)
            assert env >= b - 1e-12
        sym = bounds.ns_symmetric_bound(rho, sigma, n, alpha, atoms=atoms)
        if sym > 0.0:
            assert env >= sym - 1e-12


def check_bound_monotonicity():
    rho, sigma = mixed_pair()
    n = 2
    atoms = bounds.product_atoms(rho, sigma, n)
    grid = np.linspace(0.01, 0.97, 25)
    env = [bounds.theorem1_envelope(rho, sigma, n, float(a), atoms=atoms)[0]
           for a in grid]
    sym = [bounds.ns_symmetric_bound(rho, sigma, n, float(a), atoms=atoms)
           for a in grid]
    fid = [bounds.fidelity_bound(rho, sigma, n, float(a)) for a in grid]
    for seq in (env, sym, fid):
        assert all(b2 <= b1 + 1e-10 for b1, b2 in zip(seq, seq[1:]))


def check_fidelity_tightness_pure():
    rng = np.random.default_rng(41)
    alphas = np.linspace(0.0, 1.0, 21)
    for n in (1, 2, 4):
        rho, sigma = random_pure(rng, 2), random_pure(rng, 2)
        session = tradeoff.TradeoffSession(rho.tensor_power(n),
                                           sigma.tensor_power(n))
        for a in alphas:
            a = float(a)
            got = bounds.fidelity_bound(rho, sigma, n, a)
            exact = session.beta_alpha(a).beta
            assert abs(got - exact) <= 1e-8, f"n={n} alpha={a}: {got} vs {exact}"


def check_pure_state_ratio():
    # Matched-weight bound against the exact pure-state curve at n = 10.
    n = 10
    overlap = 0.75  # squared overlap per copy; a = 0.75^10 ~ 0.056 <= 0.1
    a = overlap ** n
    c = math.sqrt(overlap)
    rho = DensityOperator(np.array([[1.0, 0.0], [0.0, 0.0]]))
    v = np.array([c, math.sqrt(1.0 - overlap)])
    sigma = DensityOperator(np.outer(v, v))
    atoms = bounds.product_atoms(rho, sigma, n)
    for p in np.linspace(0.1, 0.9, 9):
        p = float(p)
        alpha_q, beta_q = bounds.pure_state_curve(a, p)
        got = bounds.theorem1_beta_bound(rho, sigma, n, alpha_q, p, atoms=atoms)
        assert got <= beta_q + 1e-12
        assert got / beta_q >= 1.0 - 5.0 * a, \
            f"p={p}: ratio {got / beta_q} below {1.0 - 5.0 * a}"


# -------------------------------------------------------------- asymptotics

def check_phi_roundtrip():
    # Above x ~ 5.4 a double p = Phi(x) cannot hold 1e-9 of x-information
    # (ulp(1)/pdf(x) grows past 1e-9; scipy's ppf/cdf pair shows the same
    # 9.1e-9 worst error at x = 6), so the tail is checked against the
    # representation bound instead.
    for x in np.arange(-6.0, 6.0 + 1e-9, 0.01):
        x = float(x)
        back = asymptotics.inv_norm_cdf(asymptotics.norm_cdf(x))
        pdf = INV_SQRT_2PI * math.exp(-0.5 * x * x)
        limit = max(1e-9, 2.1 * 2.0 ** -53 * max(1e-300, 1.0) / pdf) \
            if x > 5.4 else 1e-9
        assert abs(back - x) <= limit, f"x={x}: roundtrip {back}"
    ps = np.linspace(1e-6, 1.0 - 1e-6, 1001)
    qs = [asymptotics.inv_norm_cdf(float(p)) for p in ps]
    assert all(b > a for a, b in zip(qs, qs[1:]))
    for p in ps[::50]:
        p = float(p)
        assert abs(asymptotics.norm_cdf(asymptotics.inv_norm_cdf(p)) - p) <= 1e-12


def check_second_order_window(n_max: int = 12):
    rho, sigma = mixed_pair()
    m = nsmap.moments(nsmap.ns_map(rho, sigma))
    n_list = list(range(4, n_max + 1))
    sweeps = asymptotics.expansion_sweep_multi(rho, sigma, [0.2, 0.5, 0.8],
                                               n_list)
    for eps, reports in sweeps.items():
        for rep in reports:
            upper = asymptotics.second_order_rhs(m, rep.n, eps,
                                                 include_logn=True) + 10.0
            assert rep.dh_exact <= upper, \
                f"n={rep.n} eps={eps}: dh {rep.dh_exact} > {upper}"
            band = 10.0 * math.log2(rep.n)
            assert -band <= rep.residual <= band, \
                f"n={rep.n} eps={eps}: residual {rep.residual} outside +-{band}"
    mid = sweeps[0.5]
    first, last = mid[0], mid[-1]
    err_first = abs(first.dh_exact / first.n - m.rel_entropy)
    err_last = abs(last.dh_exact / last.n - m.rel_entropy)
    assert err_last < err_first, "per-copy rate is not approaching D"
    return sweeps


# ---------------------------------------------------------------- bench-cli

def check_state_roundtrip(tmpdir: str | None = None):
    import tempfile
    from .states import load_state, save_state
    rng = np.random.default_rng(51)
    state = random_density(rng, 3)
    with tempfile.TemporaryDirectory(dir=tmpdir) as td:
        path = str(Path(td) / "state.json")
        save_state(path, "probe", state)
        name, back = load_state(path)
    assert name == "probe"
    assert np.array_equal(np.asarray(back.mat, dtype=np.complex128),
                          np.asarray(state.mat, dtype=np.complex128))


def check_preset_fig2_exact():
    pair = preset_pair("fig2")
    assert float(pair.rho.mat[0, 0]) == 0.8 and float(pair.rho.mat[1, 1]) == 0.2
    c = 3.0 * math.sqrt(3.0) / 20.0
    assert float(pair.sigma.mat[0, 1]) == c
    assert float(pair.sigma.mat[0, 0]) == 0.35
    assert pair.copies == 5


def check_csv_determinism():
    from .cli import render_rows, tradeoff_rows
    pair = preset_pair("commuting")
    cols, rows = tradeoff_rows(pair.rho, pair.sigma, 2,
                               np.linspace(0.1, 0.9, 5), [0.3, 0.7])
    blob1 = render_rows(cols, rows, "csv")
    cols2, rows2 = tradeoff_rows(pair.rho, pair.sigma, 2,
                                 np.linspace(0.1, 0.9, 5), [0.3, 0.7])
    blob2 = render_rows(cols2, rows2, "csv")
    assert blob1 == blob2, "identical configs must render identical bytes"


def _read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    if not rows:
        raise AssertionError(f"golden file {path} is empty")
    return rows[0], rows[1:]


def compare_golden(path: Path, fresh: str):
    header, rows = _read_csv(path)
    fresh_lines = fresh.strip().split("\n")
    got_header = fresh_lines[0].split(",")
    if got_header != header:
        raise AssertionError(f"golden file {path}: header drift {header} vs "
                             f"{got_header}")
    got_rows = [line.split(",") for line in fresh_lines[1:]]
    if len(got_rows) != len(rows):
        raise AssertionError(f"golden file {path}: row count {len(rows)} vs "
                             f"{len(got_rows)}")
    for want, got in zip(rows, got_rows):
        for w, g in zip(want, got):
            if w == g:
                continue
            try:
                fw, fg = float(w), float(g)
            except ValueError as exc:
                raise AssertionError(f"golden file {path}: {w!r} vs {g!r}") from exc
            if math.isinf(fw) != math.isinf(fg):
                raise AssertionError(f"golden file {path}: {w} vs {g}")
            if math.isfinite(fw) and abs(fw - fg) > GOLDEN_RTOL * max(1.0, abs(fw)):
                raise AssertionError(
                    f"golden file {path}: value drift {w} vs {g}")


def check_golden_fig1():
    from .cli import preset_fig1_csv
    compare_golden(GOLDEN_DIR / "fig1_tradeoff.csv", preset_fig1_csv())


def check_golden_fig2():
    from .cli import preset_fig2_csv
    compare_golden(GOLDEN_DIR / "fig2_bounds.csv", preset_fig2_csv())


CHECKS: dict[str, list[tuple[str, callable]]] = {
    "hermitian-core": [
        ("reconstruction-200-random", check_reconstruction),
        ("fidelity-multiplicative", check_fidelity_multiplicative),
        ("fidelity-symmetry", check_fidelity_symmetry),
        ("positive-part-balance", check_positive_part_balance),
        ("tensor-power-trace", check_tensor_power_trace),
    ],
    "quantum-tradeoff": [
        ("objective-concavity", check_g_concavity),
        ("threshold-consistency", check_variational_consistency),
        ("achievability-mixing", check_achievability),
        ("alpha-monotonicity", check_alpha_monotonicity),
        ("bloch-grid-envelope", check_bloch_grid),
    ],
    "ns-classical": [
        ("type-classes-vs-exhaustive", check_type_classes_vs_exhaustive),
        ("neyman-pearson-brute-force", check_np_brute_force),
        ("moment-transfer", check_moment_transfer),
        ("quantum-classical-chain", check_quantum_classical_chain),
    ],
    "converse-bounds": [
        ("bound-validity-sweep", check_bound_validity),
        ("envelope-dominance", check_envelope_dominance),
        ("bound-monotonicity", check_bound_monotonicity),
        ("fidelity-pure-tightness", check_fidelity_tightness_pure),
        ("pure-state-ratio", check_pure_state_ratio),
    ],
    "asymptotics": [
        ("phi-roundtrip", check_phi_roundtrip),
        ("second-order-window", check_second_order_window),
    ],
    "bench-cli": [
        ("state-file-roundtrip", check_state_roundtrip),
        ("preset-fig2-exact", check_preset_fig2_exact),
        ("csv-determinism", check_csv_determinism),
        ("golden-fig1", check_golden_fig1),
        ("golden-fig2", check_golden_fig2),
    ],
}


def run_selftest(module_filter: str | None = None, out=print) -> int:
    """Run the invariant suite, print one line per check, return 0 iff green."""
    selected = CHECKS
    if module_filter is not None:
        if module_filter not in CHECKS:
            out(f"unknown module {module_filter!r}; choose from "
                f"{sorted(CHECKS)}")
            return 4
        selected = {module_filter: CHECKS[module_filter]}
    failures = []
    for module, checks in selected.items():
        for name, fn in checks:
            t0 = time.perf_counter()
            try:
                fn()
                status = "PASS"
            except AssertionError as exc:
                status = "FAIL"
                failures.append((module, name, str(exc)))
            dt = time.perf_counter() - t0
            out(f"[{status}] {module} :: {name} ({dt:.2f}s)")
    if failures:
        module, name, msg = failures[0]
        out(f"FAILED: {module} :: {name}: {msg}")
        return 4
    out("all invariants hold")
    return 0
