"""Classical side of the toolkit: the eigenbasis-overlap mapping from a state
pair to a pair of joint distributions, exact randomized Neyman-Pearson tests,
type-class aggregation of i.i.d. products, and log-likelihood-ratio moments.

All log-likelihood ratios, entropies and moments are in base-2 (bits).

The mapping tables depend on the eigenbasis chosen under spectral degeneracy;
derived *bounds* are basis-invariant, the tables themselves are not. No
canonicalization is attempted.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionOverflowError
from .hermitian import DensityOperator, stable_sum

OVERLAP_CUTOFF = 1e-14           # squared-overlap cells below this are dropped
LLR_MERGE_TOL = 1e-12            # relative tolerance for merging equal llrs
MASS_ATOL = 1e-10
MAX_BASE_CELLS = 64
MAX_TYPE_CLASSES = 10_000_000


@dataclass(frozen=True, eq=False)
class NSPair:
    """Joint tables p[i, j] = lam_i |<x_i|y_j>|^2 and q[i, j] = mu_j |<x_i|y_j>|^2
    built from the eigendecompositions of a state pair."""

    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        sp = stable_sum(self.p.ravel())
        sq = stable_sum(self.q.ravel())
        if abs(sp - 1.0) > MASS_ATOL or abs(sq - 1.0) > MASS_ATOL:
            raise ValueError(
                f"table masses {sp!r}, {sq!r} are not 1 within {MASS_ATOL}"
            )

    @property
    def dim(self) -> int:
        return self.p.shape[0]


@dataclass(frozen=True)
class LLRAtom:
    """Aggregated outcome mass at one log2-likelihood-ratio value.

    llr may be +inf only when q_mass is zero and -inf only when p_mass is
    zero; atoms with both masses zero are never stored. multiplicity counts
    the underlying outcome sequences (exact integer).
    """

    llr: float
    p_mass: float
    q_mass: float
    multiplicity: int = 1


@dataclass(frozen=True)
class MomentTriple:
    """Relative entropy (bits), its variance (bits^2) and the absolute third
    central moment (bits^3) of the log-likelihood ratio under the first table.
    variance/third_abs are None when the relative entropy is infinite."""

    rel_entropy: float
    variance: float | None
    third_abs: float | None


def ns_map(rho: DensityOperator, sigma: DensityOperator) -> NSPair:
    """Map a state pair to classical joint tables over eigenvector index pairs."""
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    sr, ss = rho.spectral, sigma.spectral
    overlap = np.abs(sr.eigenvectors.conj().T @ ss.eigenvectors) ** 2
    overlap[overlap < OVERLAP_CUTOFF] = 0.0
    lam = np.clip(sr.eigenvalues, 0.0, None)
    mu = np.clip(ss.eigenvalues, 0.0, None)
    return NSPair(p=lam[:, None] * overlap, q=overlap * mu[None, :])


def _llr(p: float, q: float) -> float:
    if p == 0.0:
        return -math.inf
    if q == 0.0:
        return math.inf
    return math.log2(p) - math.log2(q)


def _positive_cells(ns: NSPair) -> list[tuple[float, float]]:
    cells = []
    d = ns.dim
    for i in range(d):
        for j in range(d):
            p, q = float(ns.p[i, j]), float(ns.q[i, j])
            if p > 0.0 or q > 0.0:
                cells.append((p, q))
    return cells


def _merge_atoms(atoms: list[LLRAtom]) -> list[LLRAtom]:
    """Merge atoms whose llr values agree within LLR_MERGE_TOL (relative)."""
    atoms = sorted(atoms, key=lambda a: a.llr)
    merged: list[LLRAtom] = []
    for a in atoms:
        if merged:
            last = merged[-1]
            if last.llr == a.llr:
                same = True
            elif math.isfinite(last.llr) and math.isfinite(a.llr):
                tol = LLR_MERGE_TOL * max(1.0, abs(last.llr), abs(a.llr))
                same = abs(a.llr - last.llr) <= tol
            else:
                same = False
            if same:
                merged[-1] = LLRAtom(
                    llr=last.llr,
                    p_mass=last.p_mass + a.p_mass,
                    q_mass=last.q_mass + a.q_mass,
                    multiplicity=last.multiplicity + a.multiplicity,
                )
                continue
        merged.append(a)
    return merged


def _compositions(total: int, parts: int):
    """All length-`parts` tuples of non-negative ints summing to `total`."""
    for dividers in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for d in dividers:
            out.append(d - prev - 1)
            prev = d
        out.append(total + parts - 2 - prev)
        yield tuple(out)


def atoms_product(ns: NSPair, n: int) -> list[LLRAtom]:
    """Log-likelihood-ratio atoms of the n-fold product pair, aggregated over
    type classes of outcome sequences and merged at equal llr."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cells = _positive_cells(ns)
    m = len(cells)
    if m == 0:
        raise ValueError("mapping tables carry no mass")
    if m > MAX_BASE_CELLS:
        raise DimensionOverflowError(
            f"{m} base cells exceed the supported {MAX_BASE_CELLS}"
        )
    n_classes = math.comb(n + m - 1, m - 1)
    if n_classes > MAX_TYPE_CLASSES:
        raise DimensionOverflowError(
            f"{n_classes} type classes exceed the supported {MAX_TYPE_CLASSES}"
        )
    log_p = [math.log(p) if p > 0.0 else None for p, _ in cells]
    log_q = [math.log(q) if q > 0.0 else None for _, q in cells]
    llr_cell = [_llr(p, q) for p, q in cells]

    atoms = []
    lgn = math.lgamma(n + 1)
    for counts in _compositions(n, m):
        log_mult = lgn - sum(math.lgamma(k + 1) for k in counts if k > 1)
        p_ok = all(log_p[i] is not None for i, k in enumerate(counts) if k > 0)
        q_ok = all(log_q[i] is not None for i, k in enumerate(counts) if k > 0)
        if not p_ok and not q_ok:
            continue
        p_mass = q_mass = 0.0
        if p_ok:
            p_mass = math.exp(log_mult + math.fsum(
                k * log_p[i] for i, k in enumerate(counts) if k > 0))
        if q_ok:
            q_mass = math.exp(log_mult + math.fsum(
                k * log_q[i] for i, k in enumerate(counts) if k > 0))
        if not p_ok:
            llr = -math.inf
        elif not q_ok:
            llr = math.inf
        else:
            llr = math.fsum(k * llr_cell[i] for i, k in enumerate(counts) if k > 0)
        mult = 1
        rem = n
        for k in counts:
            if k:
                mult *= math.comb(rem, k)
                rem -= k
        atoms.append(LLRAtom(llr=llr, p_mass=p_mass, q_mass=q_mass,
                             multiplicity=mult))
    return _merge_atoms(atoms)


def beta_alpha_classical(atoms: list[LLRAtom], alpha: float) -> float:
    """Exact randomized Neyman-Pearson type-II error at type-I budget alpha.

    The alternative is accepted on atoms of smallest llr first (largest q/p),
    spending p-mass until the budget is exhausted; the boundary atom is split
    fractionally. Returns the q-mass left unaccepted.
    """
    if alpha < 0.0 or alpha > 1.0 + 1e-12:
        raise ValueError(f"alpha {alpha!r} outside [0, 1]")
    ordered = sorted(atoms, key=lambda a: a.llr)
    budget = min(alpha, 1.0)
    remaining = []
    for idx, atom in enumerate(ordered):
        if atom.p_mass <= budget:
            budget -= atom.p_mass
            continue
        frac = min(max(budget / atom.p_mass, 0.0), 1.0)
        remaining.append((1.0 - frac) * atom.q_mass)
        remaining.extend(a.q_mass for a in ordered[idx + 1:])
        break
    beta = stable_sum(remaining)
    return min(max(beta, 0.0), 1.0)


def beta_alpha_classical_variational(atoms: list[LLRAtom], alpha: float) -> float:
    """Same trade-off through the sup-over-thresholds form: the maximum over t
    of  sum q 1{t p >= q} + t (sum p 1{t p < q} - alpha),  on a geometric grid
    through all finite llr values plus the exact breakpoints t = q/p."""
    if alpha < 0.0 or alpha > 1.0 + 1e-12:
        raise ValueError(f"alpha {alpha!r} outside [0, 1]")
    p = np.array([a.p_mass for a in atoms])
    q = np.array([a.q_mass for a in atoms])
    ratios = sorted({a.q_mass / a.p_mass for a in atoms if a.p_mass > 0.0})
    finite = [r for r in ratios if r > 0.0]
    ts = [0.0] + ratios
    if len(finite) >= 2:
        ts.extend(np.geomspace(finite[0], finite[-1], 2048).tolist())
    elif finite:
        ts.append(finite[0])
    best = 0.0
    for t in ts:
        accept_null = t * p >= q
        value = float(q[accept_null].sum()) + t * (float(p[~accept_null].sum()) - alpha)
        if value > best:
            best = value
    return min(best, 1.0)


def moments(ns: NSPair) -> MomentTriple:
    """Relative entropy, variance and absolute third central moment of the
    log-likelihood ratio under the first table, straight from the cells."""
    cells = [(p, q) for p, q in _positive_cells(ns) if p > 0.0]
    if any(q == 0.0 for _, q in cells):
        return MomentTriple(rel_entropy=math.inf, variance=None, third_abs=None)
    llrs = [_llr(p, q) for p, q in cells]
    d = stable_sum(p * l for (p, _), l in zip(cells, llrs))
    v = stable_sum(p * (l - d) ** 2 for (p, _), l in zip(cells, llrs))
    t = stable_sum(p * abs(l - d) ** 3 for (p, _), l in zip(cells, llrs))
    return MomentTriple(rel_entropy=d, variance=v, third_abs=t)


def renyi_overlap(ns: NSPair, s: float) -> float:
    """sum p^s q^(1-s) over cells carrying mass, with 0^0 taken as 0 on
    zero-mass factors, so cells outside the common support never contribute
    (at s = 1 this leaves the p-mass of q's support, and symmetrically)."""
    terms = [p ** s * q ** (1.0 - s)
             for p, q in _positive_cells(ns) if p > 0.0 and q > 0.0]
    return stable_sum(terms)


def dh_classical(ns: NSPair, n: int, eps: float) -> float:
    """-log2 of the optimal classical type-II error for n-fold products, in
    bits; +inf for disjoint supports."""
    beta = beta_alpha_classical(atoms_product(ns, n), eps)
    if beta <= 0.0:
        return math.inf
    return -math.log2(beta)
