"""State-file I/O and built-in state-pair presets.

State files are JSON objects ``{"name": str, "dim": int, "matrix": [[[re, im],
...], ...]}`` (row-major, IEEE-754 doubles). Preset matrices are built from
exact expressions (1/sqrt(2), 3*sqrt(3)/20, ...) rather than decimal
transcriptions so emitted numbers cannot drift.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import StateFileError
from .hermitian import DensityOperator

PRESETS = ("fig1", "fig2", "identical", "commuting", "random")


@dataclass(frozen=True)
class StatePair:
    name: str
    rho: DensityOperator
    sigma: DensityOperator
    copies: int
    epsilon_grid: tuple[float, float, int]


def load_state(path: str) -> tuple[str, DensityOperator]:
    """Read a JSON state file and validate it into a density operator."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise StateFileError(f"{path}: cannot parse state file: {exc}") from exc
    try:
        name = str(payload["name"])
        dim = int(payload["dim"])
        rows = payload["matrix"]
        mat = np.array(
            [[complex(entry[0], entry[1]) for entry in row] for row in rows],
            dtype=np.complex128,
        )
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise StateFileError(f"{path}: malformed state payload: {exc}") from exc
    if mat.shape != (dim, dim):
        raise StateFileError(
            f"{path}: matrix shape {mat.shape} does not match dim {dim}"
        )
    if not mat.imag.any():
        mat = mat.real.copy()
    try:
        return name, DensityOperator(mat)
    except ValueError as exc:
        raise StateFileError(f"{path}: not a density operator: {exc}") from exc


def save_state(path: str, name: str, state: DensityOperator) -> None:
    mat = np.asarray(state.mat, dtype=np.complex128)
    payload = {
        "name": name,
        "dim": state.dim,
        "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in mat],
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def _pure(vec: np.ndarray) -> np.ndarray:
    v = vec / np.linalg.norm(vec)
    return np.outer(v, v.conj())


def zero_ket_state() -> DensityOperator:
    return DensityOperator(_pure(np.array([1.0, 0.0])))


def plus_ket_state() -> DensityOperator:
    return DensityOperator(_pure(np.array([1.0, 1.0]) / math.sqrt(2.0)))


def mixed_pair() -> tuple[DensityOperator, DensityOperator]:
    """The benchmark mixed qubit pair: diag(0.8, 0.2) against the rotated
    state with off-diagonal 3*sqrt(3)/20."""
    rho = DensityOperator(np.array([[0.8, 0.0], [0.0, 0.2]]))
    c = 3.0 * math.sqrt(3.0) / 20.0
    sigma = DensityOperator(np.array([[0.35, c], [c, 0.65]]))
    return rho, sigma


def random_pair(seed: int, dim: int = 2) -> tuple[DensityOperator, DensityOperator]:
    """Deterministic random full-rank pair from a seeded generator."""
    rng = np.random.default_rng(seed)

    def sample() -> DensityOperator:
        a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        m = a @ a.conj().T + 1e-6 * np.eye(dim)
        return DensityOperator(m / np.trace(m).real)

    return sample(), sample()


def preset_pair(name: str, seed: int = 0) -> StatePair:
    if name == "fig1":
        return StatePair(name="fig1", rho=zero_ket_state(),
                         sigma=plus_ket_state(), copies=5,
                         epsilon_grid=(0.0005, 0.0305, 101))
    if name == "fig2":
        rho, sigma = mixed_pair()
        return StatePair(name="fig2", rho=rho, sigma=sigma, copies=5,
                         epsilon_grid=(0.05, 0.95, 19))
    if name == "identical":
        rho, _ = mixed_pair()
        sigma, _ = mixed_pair()
        return StatePair(name="identical", rho=rho, sigma=sigma, copies=5,
                         epsilon_grid=(0.05, 0.95, 19))
    if name == "commuting":
        rho = DensityOperator(np.diag([0.8, 0.2]))
        sigma = DensityOperator(np.diag([0.2, 0.8]))
        return StatePair(name="commuting", rho=rho, sigma=sigma, copies=5,
                         epsilon_grid=(0.05, 0.95, 19))
    if name == "random":
        rho, sigma = random_pair(seed)
        return StatePair(name=f"random-seed{seed}", rho=rho, sigma=sigma,
                         copies=3, epsilon_grid=(0.05, 0.95, 19))
    raise StateFileError(f"unknown preset {name!r}; choose from {PRESETS}")
