"""Dense Hermitian linear algebra: eigendecomposition, tensor powers, matrix
functions, fidelity and positive-part traces.

Matrices are plain numpy arrays (float64 or complex128). Real-valued inputs
stay on the real LAPACK path, which is roughly 3x faster at large dimension.
Scalar reductions go through ``math.fsum`` so results are bit-stable and
independent of any evaluation schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionOverflowError,
    EigenConvergenceError,
    SingularSupportError,
)

# Construction / reconstruction tolerances.
HERMITICITY_RTOL = 1e-12
RECONSTRUCTION_RTOL = 1e-11
TRACE_ATOL = 1e-10
PSD_ATOL = 1e-10

# Eigenvalues below SUPPORT_CUTOFF count as zero for support projectors;
# log2 and negative powers refuse eigenvalues at or below LOG_CUTOFF.
SUPPORT_CUTOFF = 1e-12
LOG_CUTOFF = 1e-14
CLAMP_ATOL = 1e-12

MAX_DENSE_DIM = 4096


def stable_sum(values) -> float:
    """Exactly-rounded sum of a float iterable (order independent)."""
    return math.fsum(values)


def frobenius(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, "fro"))


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return (a + a.conj().T) / 2


def _as_square(a) -> np.ndarray:
    m = np.asarray(a)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if np.iscomplexobj(m):
        return m.astype(np.complex128, copy=False)
    return m.astype(np.float64, copy=False)


def as_hermitian(a, rtol: float = HERMITICITY_RTOL) -> np.ndarray:
    """Validate near-Hermiticity and return the exactly Hermitianized matrix."""
    m = _as_square(a)
    dev = frobenius(m - m.conj().T)
    if dev > rtol * max(1.0, frobenius(m)):
        raise ValueError(
            f"matrix is not Hermitian: ||A - A^dag||_F = {dev:.3e} exceeds tolerance"
        )
    return hermitian_part(m)


def _real_if_possible(m: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(m) and not m.imag.any():
        return np.ascontiguousarray(m.real)
    return m


def _eigvals(h: np.ndarray) -> np.ndarray:
    """Eigenvalues (ascending) of a Hermitianized matrix; internal hot path."""
    try:
        return np.linalg.eigvalsh(_real_if_possible(h))
    except np.linalg.LinAlgError as exc:
        off = frobenius(h - np.diag(np.diagonal(h)))
        raise EigenConvergenceError(f"eigenvalue iteration failed: {exc}", off) from exc


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues sorted descending, with matching orthonormal eigenvector
    columns. Ties keep the LAPACK output order so results are deterministic."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def eigh(h) -> SpectralDecomposition:
    """Full spectral decomposition of a Hermitian matrix, sorted descending."""
    m = as_hermitian(h)
    if m.shape[0] > MAX_DENSE_DIM:
        raise DimensionOverflowError(
            f"dimension {m.shape[0]} exceeds the dense limit {MAX_DENSE_DIM}"
        )
    try:
        w, u = np.linalg.eigh(_real_if_possible(m))
    except np.linalg.LinAlgError as exc:
        off = frobenius(m - np.diag(np.diagonal(m)))
        raise EigenConvergenceError(f"eigenvalue iteration failed: {exc}", off) from exc
    order = np.argsort(-w, kind="stable")
    return SpectralDecomposition(w[order].copy(), np.ascontiguousarray(u[:, order]))


class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace matrix.

    Negative eigenvalues within PSD_ATOL of zero are clamped to zero at
    construction; anything more negative is rejected.
    """

    __slots__ = ("mat", "dim", "_spectral")

    def __init__(self, mat, *, _trusted: bool = False):
        if _trusted:
            self.mat = mat
        else:
            m = as_hermitian(mat)
            tr = float(np.trace(m).real)
            if abs(tr - 1.0) > TRACE_ATOL:
                raise ValueError(f"trace {tr!r} is not 1 within {TRACE_ATOL}")
            w = _eigvals(m)
            if w[0] < -PSD_ATOL:
                raise ValueError(
                    f"matrix is not positive semidefinite: min eigenvalue {w[0]:.3e}"
                )
            if w[0] < 0.0:
                sd = eigh(m)
                m = hermitian_part(sd.eigenvectors
                                   * np.clip(sd.eigenvalues, 0.0, None)
                                   @ sd.eigenvectors.conj().T)
            self.mat = m
        self.dim = self.mat.shape[0]
        self._spectral = None

    @property
    def spectral(self) -> SpectralDecomposition:
        """Spectral decomposition, computed lazily and cached."""
        if self._spectral is None:
            sd = eigh(self.mat)
            sd = SpectralDecomposition(np.clip(sd.eigenvalues, 0.0, None),
                                       sd.eigenvectors)
            self._spectral = sd
        return self._spectral

    def tensor_power(self, n: int) -> "DensityOperator":
        """n-fold tensor power; skips revalidation (PSD/trace are preserved)."""
        return DensityOperator(tensor_power(self.mat, n), _trusted=True)

    def __repr__(self):
        return f"DensityOperator(dim={self.dim})"


def density(mat) -> DensityOperator:
    return DensityOperator(mat)


def tensor_power(a, n: int) -> np.ndarray:
    """n-fold Kronecker power with big-endian index composition: entry
    ((i1..in),(j1..jn)) = prod_k A(i_k, j_k), i1 most significant."""
    m = _as_square(a)
    if n < 1:
        raise ValueError("tensor power requires n >= 1")
    if m.shape[0] ** n > MAX_DENSE_DIM:
        raise DimensionOverflowError(
            f"dense dimension {m.shape[0]}^{n} exceeds {MAX_DENSE_DIM}; "
            "use the classical product-distribution (type-class) path instead"
        )
    out = m
    for _ in range(n - 1):
        out = np.kron(out, m)
    return out


def matrix_function(h, kind: str, exponent: float | None = None) -> np.ndarray:
    """Apply f to the eigenvalues of a Hermitian matrix in its eigenbasis.

    kind is one of "power" (requires ``exponent``), "log2" or "sqrt".
    ``power`` with exponent 0 returns the support projector (eigenvalues
    within SUPPORT_CUTOFF of zero map to 0, not 1).
    """
    sd = eigh(h)
    w = sd.eigenvalues
    if kind == "sqrt":
        kind, exponent = "power", 0.5
    if kind == "log2":
        if w[-1] <= LOG_CUTOFF:
            raise SingularSupportError(
                f"log2 undefined: eigenvalue {w[-1]:.3e} at or below {LOG_CUTOFF}",
                eigenvalue=float(w[-1]),
            )
        fw = np.log2(w)
    elif kind == "power":
        if exponent is None:
            raise ValueError('kind "power" requires an exponent')
        s = float(exponent)
        if s == 0.0:
            fw = (np.abs(w) > SUPPORT_CUTOFF).astype(np.float64)
        elif s < 0.0:
            if w[-1] <= LOG_CUTOFF:
                raise SingularSupportError(
                    f"negative power undefined: eigenvalue {w[-1]:.3e} at or "
                    f"below {LOG_CUTOFF}",
                    eigenvalue=float(w[-1]),
                )
            fw = w ** s
        elif s.is_integer():
            fw = w ** s
        else:
            if w[-1] < -CLAMP_ATOL:
                raise SingularSupportError(
                    f"fractional power undefined: eigenvalue {w[-1]:.3e} below "
                    f"-{CLAMP_ATOL}",
                    eigenvalue=float(w[-1]),
                )
            fw = np.clip(w, 0.0, None) ** s
    else:
        raise ValueError(f"unknown matrix function kind {kind!r}")
    u = sd.eigenvectors
    return hermitian_part((u * fw) @ u.conj().T)


def fidelity(rho: DensityOperator, sigma: DensityOperator) -> float:
    """Trace norm of sqrt(rho) sqrt(sigma), clamped to [0, 1]."""
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    sd = rho.spectral
    u = sd.eigenvectors
    root = (u * np.sqrt(sd.eigenvalues)) @ u.conj().T
    m = hermitian_part(root @ sigma.mat @ root)
    w = np.clip(_eigvals(m), 0.0, None)
    f = stable_sum(np.sqrt(w))
    return min(max(f, 0.0), 1.0)


def positive_part_trace(h) -> float:
    """Sum of the positive eigenvalues of a Hermitian matrix."""
    w = _eigvals(as_hermitian(h))
    return stable_sum(np.clip(w, 0.0, None))
