"""Normal-CDF machinery and finite-n evaluators of the second-order and
moderate-deviations expansions, plus an n-sweep comparing them to the exact
relative entropy.

Expansions are evaluated in bits. The expansion constants that are only known
up to O(1)/O(log n) are omitted, not estimated; acceptance-style checks use
one-sided comparisons with documented generous slack instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DegenerateVarianceError, NumericDomainError
from .hermitian import DensityOperator
from .nsmap import MomentTriple, dh_classical, moments, ns_map
from .tradeoff import TradeoffSession, dh_from_beta

SQRT2 = math.sqrt(2.0)
INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

MAX_DENSE_DIM = 4096


def norm_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-x / SQRT2)


# Acklam's rational approximation for the normal quantile (|error| < 1.2e-9),
# polished below by one Newton step against the erfc-based CDF.
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def _acklam(p: float) -> float:
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        return (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    if p > 1.0 - _P_LOW:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        return -(((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    q = p - 0.5
    r = q * q
    return (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / \
        (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0)


def inv_norm_cdf(p: float) -> float:
    """Standard normal quantile: rational initial guess plus one Newton step
    against the erfc-based CDF, giving |Phi(Phi^-1(p)) - p| <= 1e-12.

    The Newton residual is computed through whichever tail keeps it free of
    cancellation (Phi(x) - p == (1-p) - Q(x) exactly for p >= 1/2)."""
    if not (0.0 < p < 1.0):
        raise NumericDomainError(f"quantile argument {p!r} outside (0, 1)")
    x = _acklam(p)
    pdf = INV_SQRT_2PI * math.exp(-0.5 * x * x)
    if pdf > 0.0:
        if p < 0.5:
            resid = 0.5 * math.erfc(-x / SQRT2) - p
        else:
            resid = (1.0 - p) - 0.5 * math.erfc(x / SQRT2)
        x -= resid / pdf
    return x


def second_order_rhs(m: MomentTriple, n: int, eps: float,
                     include_logn: bool = False) -> float:
    """n D + sqrt(n V) Phi^-1(eps), optionally plus the explicit log2 n term
    (the remaining O(1) is unknown and omitted)."""
    if not math.isfinite(m.rel_entropy):
        raise NumericDomainError("relative entropy is infinite")
    if m.variance is None or m.variance <= 0.0:
        raise DegenerateVarianceError("variance must be positive")
    out = n * m.rel_entropy + math.sqrt(n * m.variance) * inv_norm_cdf(eps)
    if include_logn:
        out += math.log2(n)
    return out


class ModerateValue(NamedTuple):
    value: float
    eps_n: float


def moderate_rhs(m: MomentTriple, n: int, a_n: float) -> ModerateValue:
    """n D - sqrt(2 V) n a_n (the o(n a_n) term is omitted), together with the
    implied type-I level eps_n = 2^(-n a_n^2).

    The caller owns the sequence requirements a_n -> 0 and n a_n^2 -> inf;
    only positivity is validated here.
    """
    if a_n < 0.0:
        raise NumericDomainError(f"a_n={a_n!r} must be non-negative")
    if not math.isfinite(m.rel_entropy):
        raise NumericDomainError("relative entropy is infinite")
    if m.variance is None or m.variance <= 0.0:
        raise DegenerateVarianceError("variance must be positive")
    value = n * m.rel_entropy - math.sqrt(2.0 * m.variance) * n * a_n
    return ModerateValue(value=value, eps_n=2.0 ** (-(n * a_n * a_n)))


@dataclass(frozen=True)
class ExpansionReport:
    """Exact relative entropy vs the second-order RHS at one blocklength."""

    n: int
    epsilon: float
    dh_exact: float
    second_order: float
    residual: float
    source: str = "quantum"
    moderate: float | None = None
    eps_n: float | None = None


def expansion_sweep_multi(rho: DensityOperator, sigma: DensityOperator,
                          eps_list: list[float], n_list: list[int],
                          moderate_power: float | None = None,
                          ) -> dict[float, list[ExpansionReport]]:
    """Expansion reports for every epsilon in eps_list, sharing the expensive
    per-blocklength threshold-search caches across epsilon values."""
    for eps in eps_list:
        if not (0.0 < eps < 1.0):
            raise NumericDomainError(f"eps {eps!r} outside (0, 1)")
    ns = ns_map(rho, sigma)
    m = moments(ns)
    out: dict[float, list[ExpansionReport]] = {eps: [] for eps in eps_list}
    for n in n_list:
        if rho.dim ** n <= MAX_DENSE_DIM:
            session = TradeoffSession(rho.tensor_power(n), sigma.tensor_power(n))
            exacts = [(dh_from_beta(session.beta_alpha(eps).beta), "quantum")
                      for eps in eps_list]
        else:
            exacts = [(dh_classical(ns, n, eps), "classical")
                      for eps in eps_list]
        for eps, (dh_exact, source) in zip(eps_list, exacts):
            if m.variance is None or m.variance == 0.0:
                # Degenerate pair: the sqrt(nV) term vanishes by convention.
                second = n * (m.rel_entropy if math.isfinite(m.rel_entropy) else 0.0)
            else:
                second = second_order_rhs(m, n, eps)
            residual = dh_exact - second if math.isfinite(dh_exact) else math.inf
            moderate = eps_n = None
            if moderate_power is not None:
                mv = moderate_rhs(m, n, n ** (-moderate_power)) \
                    if (m.variance or 0.0) > 0.0 else ModerateValue(second, 1.0)
                moderate, eps_n = mv.value, mv.eps_n
            out[eps].append(ExpansionReport(
                n=n, epsilon=eps, dh_exact=dh_exact, second_order=second,
                residual=residual, source=source, moderate=moderate,
                eps_n=eps_n))
    return out


def expansion_sweep(rho: DensityOperator, sigma: DensityOperator, eps: float,
                    n_list: list[int],
                    moderate_power: float | None = None) -> list[ExpansionReport]:
    """Per blocklength: exact relative entropy (dense quantum path when the
    dimension allows, else the classical type-class surrogate, labeled),
    the second-order RHS, and their residual."""
    return expansion_sweep_multi(rho, sigma, [eps], n_list,
                                 moderate_power=moderate_power)[eps]
