"""Converse bounds on the quantum error trade-off and on the
hypothesis-testing relative entropy.

Bound names follow the CSV vocabulary: "theorem1" is the weighted classical
bound s * beta_{alpha/(1-s)} built from the eigenbasis-overlap mapping,
"theorem1_envelope" its maximum over s, "ns_symmetric" the s = 1/2 special
case, "fidelity" the pure-state-curve bound with overlap F^(2n), and
"info_spectrum" the spectral-mass bound D_s^(eps+delta) + log2(1/delta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericDomainError, SingularSupportError
from .hermitian import DensityOperator, fidelity
from .nsmap import (
    LLRAtom,
    atoms_product,
    beta_alpha_classical,
    moments,
    ns_map,
    renyi_overlap,
)
from .tradeoff import InfoSpectrumEvaluator, dh_from_beta, golden_max

BOUND_NAMES = ("theorem1_envelope", "ns_symmetric", "fidelity", "info_spectrum")

S_GRID_DEFAULT = 101
S_REFINE_WIDTH = 1e-6
HOEFFDING_GRID = 513
HOEFFDING_S_MAX = 1.0 - 1e-6
DELTA_GRID = 200
FIDELITY_BISECT_TOL = 1e-12


@dataclass(frozen=True)
class BoundPoint:
    """Upper bound on the hypothesis-testing relative entropy at one epsilon."""

    epsilon: float
    dh_upper: float
    bound_name: str
    witness: dict | None = None


def product_atoms(rho: DensityOperator, sigma: DensityOperator,
                  n: int) -> list[LLRAtom]:
    """Atoms of the n-fold product of the mapped classical pair."""
    return atoms_product(ns_map(rho, sigma), n)


def theorem1_beta_bound(rho: DensityOperator, sigma: DensityOperator, n: int,
                        alpha: float, s: float,
                        atoms: list[LLRAtom] | None = None) -> float:
    """Weighted classical lower bound s * beta_{alpha/(1-s)} on the quantum
    type-II error; valid for 0 <= s <= 1 and 0 <= alpha <= 1-s."""
    if not (0.0 <= s <= 1.0):
        raise NumericDomainError(f"weight s={s!r} outside [0, 1]")
    if alpha < 0.0 or alpha > 1.0 - s + 1e-15:
        raise NumericDomainError(
            f"constraint 0 <= alpha <= 1-s violated: alpha={alpha!r}, s={s!r}"
        )
    if s == 0.0 or s == 1.0:
        return 0.0
    if atoms is None:
        atoms = product_atoms(rho, sigma, n)
    return s * beta_alpha_classical(atoms, min(alpha / (1.0 - s), 1.0))


def theorem1_envelope(rho: DensityOperator, sigma: DensityOperator, n: int,
                      alpha: float, atoms: list[LLRAtom] | None = None,
                      s_grid: int = S_GRID_DEFAULT) -> tuple[float, float]:
    """Upper envelope over s of the weighted classical bound.

    Scans a uniform s-grid on [0, 1-alpha] and refines around the best grid
    point by golden section to width 1e-6. Returns (bound, s_star).
    """
    if not (0.0 <= alpha < 1.0):
        raise NumericDomainError(f"alpha {alpha!r} outside [0, 1)")
    if atoms is None:
        atoms = product_atoms(rho, sigma, n)

    def value(s: float) -> float:
        if s <= 0.0 or s >= 1.0:
            return 0.0
        return theorem1_beta_bound(rho, sigma, n, alpha, s, atoms=atoms)

    grid = np.linspace(0.0, 1.0 - alpha, s_grid)
    vals = [value(float(s)) for s in grid]
    k = int(np.argmax(vals))
    best_s, best_v = float(grid[k]), vals[k]
    lo = float(grid[max(k - 1, 0)])
    hi = float(grid[min(k + 1, len(grid) - 1)])
    if hi > lo:
        s_ref, v_ref = golden_max(value, lo, hi, xatol=S_REFINE_WIDTH)
        if v_ref > best_v:
            best_s, best_v = s_ref, v_ref
    return best_v, best_s


def ns_symmetric_bound(rho: DensityOperator, sigma: DensityOperator, n: int,
                       alpha: float,
                       atoms: list[LLRAtom] | None = None) -> float:
    """The s = 1/2 weighted bound; trivial (0) for alpha > 1/2."""
    if alpha > 0.5:
        return 0.0
    return theorem1_beta_bound(rho, sigma, n, alpha, 0.5, atoms=atoms)


def pure_state_curve(a: float, p: float) -> tuple[float, float]:
    """Exact Pareto boundary for a pure-state pair with squared overlap a,
    parametrized by the randomization weight p in [0, 1]."""
    if not (0.0 < a < 1.0):
        raise NumericDomainError(f"squared overlap a={a!r} outside (0, 1)")
    if not (0.0 <= p <= 1.0):
        raise NumericDomainError(f"parameter p={p!r} outside [0, 1]")
    root = math.sqrt(1.0 - 4.0 * p * (1.0 - p) * a)
    alpha_q = (2.0 * (1.0 - p) * a - 1.0 + root) / (2.0 * root)
    beta_q = (2.0 * p * a - 1.0 + root) / (2.0 * root)

    def clamp(x: float) -> float:
        if x < 0.0:
            if x < -1e-14:
                raise NumericDomainError(f"curve value {x!r} below -1e-14")
            return 0.0
        return x

    return clamp(alpha_q), clamp(beta_q)


def fidelity_bound(rho: DensityOperator, sigma: DensityOperator, n: int,
                   alpha: float) -> float:
    """Type-II lower bound from the pure-state curve at squared overlap
    a = F(rho, sigma)^(2n); exact for pure states, 0 once alpha >= a."""
    if not (0.0 <= alpha <= 1.0):
        raise NumericDomainError(f"alpha {alpha!r} outside [0, 1]")
    f = fidelity(rho, sigma)
    a = f ** (2 * n)
    if a >= 1.0:
        return 1.0 - alpha
    if alpha >= a:
        return 0.0
    # alpha_q(p) decreases from a at p=0 to 0 at p=1: bisect for the matching p.
    lo, hi = 0.0, 1.0
    while hi - lo > FIDELITY_BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if pure_state_curve(a, mid)[0] > alpha:
            lo = mid
        else:
            hi = mid
    return pure_state_curve(a, 0.5 * (lo + hi))[1]


def hoeffding_rhs(rho: DensityOperator, sigma: DensityOperator,
                  r: float) -> float:
    """Large-deviations converse rate sup_s [log2 overlap(s) + s r] / (s - 1)
    over s in [0, 1), in bits; requires coinciding supports."""
    if r < 0.0:
        raise NumericDomainError(f"rate r={r!r} must be non-negative")
    ns = ns_map(rho, sigma)
    cells_p = ns.p[(ns.p > 0) | (ns.q > 0)]
    cells_q = ns.q[(ns.p > 0) | (ns.q > 0)]
    if np.any((cells_p > 0) & (cells_q == 0)) or np.any((cells_q > 0) & (cells_p == 0)):
        raise SingularSupportError(
            "supports do not coincide; the exponent is unstable over the s-range"
        )

    def phi(s: float) -> float:
        return (math.log2(renyi_overlap(ns, s)) + s * r) / (s - 1.0)

    grid = np.linspace(0.0, HOEFFDING_S_MAX, HOEFFDING_GRID)
    vals = [phi(float(s)) for s in grid]
    k = int(np.argmax(vals))
    best = vals[k]
    lo = float(grid[max(k - 1, 0)])
    hi = float(grid[min(k + 1, len(grid) - 1)])
    _, refined = golden_max(phi, lo, hi, xatol=1e-9)
    best = max(best, refined)
    if r == 0.0:
        m = moments(ns)
        if math.isfinite(m.rel_entropy):
            best = max(best, m.rel_entropy)  # the s -> 1 limit
    return best


INFO_SPECTRUM_DELTA = 1e-4


def info_spectrum_bound(rho: DensityOperator, sigma: DensityOperator, n: int,
                        eps: float,
                        evaluator: InfoSpectrumEvaluator | None = None,
                        delta: float | None = INFO_SPECTRUM_DELTA,
                        ) -> tuple[float, float]:
    """Spectral-mass converse D_s^(eps+delta) + log2(1/delta), valid for any
    delta in (0, 1-eps). Returns (bound, delta used).

    By default delta is the fixed slack 1e-4 (clamped into the feasible
    interval, so the bound still diverges as eps -> 1), which reproduces the
    reported comparison behavior where this bound is looser than the
    theorem1 envelope. Passing delta=None minimizes over a logarithmic
    delta-grid instead; that variant is substantially tighter than the
    reported curve at both ends of the eps range.
    """
    if not (0.0 < eps < 1.0):
        raise NumericDomainError(f"eps {eps!r} outside (0, 1)")
    if evaluator is None:
        evaluator = InfoSpectrumEvaluator(rho, sigma, n)
    room = 1.0 - eps
    if delta is not None:
        d = min(delta, room / 2.0)
        if d <= 0.0:
            raise NumericDomainError(f"delta {delta!r} leaves no feasible slack")
        return evaluator.d_s(eps + d) + math.log2(1.0 / d), d
    deltas = np.geomspace(room * 1e-6, room * (1.0 - 1e-6), DELTA_GRID)
    best, best_delta = math.inf, float(deltas[0])
    for d in deltas:
        d = float(d)
        value = evaluator.d_s(eps + d) + math.log2(1.0 / d)
        if value < best:
            best, best_delta = value, d
    return best, best_delta


def dh_bound_from_beta(beta_bound: float) -> float:
    """Upper bound on the relative entropy implied by a type-II lower bound."""
    return dh_from_beta(beta_bound)


def bound_points(rho: DensityOperator, sigma: DensityOperator, n: int,
                 eps: float, which: tuple[str, ...] = BOUND_NAMES,
                 session=None, atoms: list[LLRAtom] | None = None,
                 ds_eval: InfoSpectrumEvaluator | None = None,
                 s_grid: int = S_GRID_DEFAULT) -> list[BoundPoint]:
    """The exact value plus every requested bound at one epsilon, with
    witnesses. Pass session/atoms/ds_eval to share work across a grid."""
    from .tradeoff import TradeoffSession

    if session is None:
        session = TradeoffSession(rho.tensor_power(n), sigma.tensor_power(n))
    points = []
    exact = session.beta_alpha(eps)
    points.append(BoundPoint(epsilon=eps, dh_upper=dh_from_beta(exact.beta),
                             bound_name="exact", witness={"t": exact.t}))
    if "theorem1_envelope" in which or "ns_symmetric" in which:
        if atoms is None:
            atoms = product_atoms(rho, sigma, n)
    if "theorem1_envelope" in which:
        env, s_star = theorem1_envelope(rho, sigma, n, eps, atoms=atoms,
                                        s_grid=s_grid)
        points.append(BoundPoint(epsilon=eps, dh_upper=dh_bound_from_beta(env),
                                 bound_name="theorem1_envelope",
                                 witness={"s": s_star}))
    if "ns_symmetric" in which:
        sym = ns_symmetric_bound(rho, sigma, n, eps, atoms=atoms)
        points.append(BoundPoint(epsilon=eps, dh_upper=dh_bound_from_beta(sym),
                                 bound_name="ns_symmetric", witness={"s": 0.5}))
    if "fidelity" in which:
        fid = fidelity_bound(rho, sigma, n, eps)
        points.append(BoundPoint(epsilon=eps, dh_upper=dh_bound_from_beta(fid),
                                 bound_name="fidelity", witness=None))
    if "info_spectrum" in which:
        info, delta = info_spectrum_bound(rho, sigma, n, eps,
                                          evaluator=ds_eval)
        points.append(BoundPoint(epsilon=eps, dh_upper=info,
                                 bound_name="info_spectrum",
                                 witness={"delta": delta}))
    return points
