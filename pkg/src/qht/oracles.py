"""Brute-force reference implementations used to cross-check the fast paths.

Everything here is deliberately naive: exhaustive outcome enumeration, all
2^k deterministic tests, dense test grids on the Bloch sphere. These stay
independent of the production algorithms they validate.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .hermitian import DensityOperator
from .nsmap import LLRAtom, NSPair, _llr, _positive_cells


def lower_convex_envelope(points: np.ndarray, alphas) -> np.ndarray:
    """Evaluate the lower boundary of the convex hull of (alpha, beta) points
    at the query alphas (randomized mixing of tests = convex combinations)."""
    lowest: dict[float, float] = {}
    for x, y in points:
        x, y = float(x), float(y)
        if x not in lowest or y < lowest[x]:
            lowest[x] = y
    pts = sorted(lowest.items())
    hull: list[tuple[float, float]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (p[0] - x1) * (y2 - y1) <= 0.0:
                hull.pop()
            else:
                break
        hull.append(p)
    xs = np.array([p[0] for p in hull])
    ys = np.array([p[1] for p in hull])
    out = []
    for a in np.atleast_1d(alphas):
        if a <= xs[0]:
            out.append(ys[0])
        elif a >= xs[-1]:
            out.append(ys[-1])
        else:
            k = int(np.searchsorted(xs, a, side="right")) - 1
            if xs[k + 1] == xs[k]:
                out.append(min(ys[k], ys[k + 1]))
            else:
                w = (a - xs[k]) / (xs[k + 1] - xs[k])
                out.append((1.0 - w) * ys[k] + w * ys[k + 1])
    return np.array(out)


def brute_force_beta_classical(p: np.ndarray, q: np.ndarray,
                               alphas) -> np.ndarray:
    """Optimal randomized type-II error from all 2^k deterministic tests plus
    convex mixing, for distributions on at most ~12 outcomes."""
    k = len(p)
    masks = np.arange(1 << k)[:, None]
    bits = (masks >> np.arange(k)) & 1
    pa = bits @ np.asarray(p, dtype=float)
    qa = bits @ np.asarray(q, dtype=float)
    return lower_convex_envelope(np.column_stack([pa, 1.0 - qa]), alphas)


def exhaustive_product_atoms(ns: NSPair, n: int) -> list[LLRAtom]:
    """One atom per outcome sequence of the n-fold product (no type-class
    aggregation, no merging)."""
    cells = _positive_cells(ns)
    atoms = []
    for seq in itertools.product(range(len(cells)), repeat=n):
        p_mass = math.prod(cells[i][0] for i in seq)
        q_mass = math.prod(cells[i][1] for i in seq)
        if p_mass == 0.0 and q_mass == 0.0:
            continue
        llr = _llr(p_mass, q_mass)
        atoms.append(LLRAtom(llr=llr, p_mass=p_mass, q_mass=q_mass))
    return atoms


def bloch_grid_envelope(rho: DensityOperator, sigma: DensityOperator,
                        alphas, grid: int = 400) -> np.ndarray:
    """Qubit trade-off from rank-1 projectors on a (grid x grid) Bloch-angle
    mesh, mixed with the trivial tests (every qubit test is such a mixture)."""
    if rho.dim != 2 or sigma.dim != 2:
        raise ValueError("Bloch-grid oracle is qubit-only")
    theta = np.linspace(0.0, math.pi, grid)
    phi = np.linspace(0.0, 2.0 * math.pi, grid, endpoint=False)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    v = np.stack([np.cos(tt / 2.0).ravel().astype(np.complex128),
                  np.exp(1j * pp.ravel()) * np.sin(tt / 2.0).ravel()])
    r = np.asarray(rho.mat, dtype=np.complex128)
    s = np.asarray(sigma.mat, dtype=np.complex128)
    a = np.sum(v.conj() * (r @ v), axis=0).real
    b = 1.0 - np.sum(v.conj() * (s @ v), axis=0).real
    points = np.column_stack([np.concatenate([a, [0.0, 1.0]]),
                              np.concatenate([b, [1.0, 0.0]])])
    return lower_convex_envelope(points, alphas)
