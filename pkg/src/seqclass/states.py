"""Haar-averaged classification states and a Monte Carlo sampling oracle."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .linalg import STRUCT_TOL, as_hermitian, max_norm, min_eigenvalue, trace
from .schur import path_operator, schur_transform, spin_three_halves_identity

MC_CHUNK = 200_000


class Basis(str, Enum):
    COMPUTATIONAL = "computational"
    SCHUR = "schur"


TWO_QUBIT_PATTERNS = ("00", "01")
THREE_QUBIT_PATTERNS = ("000", "001", "010", "011")


@dataclass(frozen=True)
class HypothesisLabel:
    """Which of the two unknown qubits sits in each slot, e.g. ``"010"``."""

    pattern: str

    def __post_init__(self):
        if self.pattern not in TWO_QUBIT_PATTERNS + THREE_QUBIT_PATTERNS:
            raise ValueError(
                f"unknown hypothesis {self.pattern!r}; expected one of "
                f"{', '.join(TWO_QUBIT_PATTERNS + THREE_QUBIT_PATTERNS)}"
            )

    @property
    def n_qubits(self) -> int:
        return len(self.pattern)

    def __str__(self):
        return self.pattern


def as_label(label) -> HypothesisLabel:
    return label if isinstance(label, HypothesisLabel) else HypothesisLabel(str(label))


@dataclass(frozen=True)
class DensityOperator:
    matrix: np.ndarray
    basis: Basis
    label: HypothesisLabel | None = None

    def __post_init__(self):
        m = as_hermitian(self.matrix)
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "basis", Basis(self.basis))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_qubits(self) -> int:
        return int(round(np.log2(self.dim)))

    def in_basis(self, basis) -> "DensityOperator":
        basis = Basis(basis)
        if basis == self.basis:
            return self
        t = schur_transform(self.n_qubits)
        if basis == Basis.SCHUR:
            m = t.to_schur(self.matrix)
        else:
            m = t.to_computational(self.matrix)
        return DensityOperator(m, basis, self.label)

    def check(self, tol: float = STRUCT_TOL) -> None:
        tr = trace(self.matrix)
        if abs(tr - 1) > tol:
            raise ValueError(f"trace {tr} differs from 1")
        lam = min_eigenvalue(self.matrix)
        if lam < -tol:
            raise ValueError(f"negative eigenvalue {lam:.3e}")

    def allclose(self, other: "DensityOperator", tol: float = STRUCT_TOL) -> bool:
        return max_norm(self.matrix - other.in_basis(self.basis).matrix) <= tol


@dataclass(frozen=True)
class PureQubit:
    theta: float
    phi: float

    def amplitudes(self) -> np.ndarray:
        return np.array(
            [np.cos(self.theta / 2), np.exp(1j * self.phi) * np.sin(self.theta / 2)]
        )


def analytic_state(label) -> DensityOperator:
    """Exact Haar-averaged state in the Schur basis."""
    label = as_label(label)
    p = label.pattern
    if p == "00":
        m = np.diag([1, 1, 1, 0]) / 3
    elif p == "01":
        m = np.eye(4) / 4
    else:
        sym = spin_three_halves_identity()
        r3 = np.sqrt(3.0)
        if p == "000":
            m = sym / 4
        elif p == "001":
            m = sym / 6 + path_operator([[0, 0], [0, 1]]) / 6
        else:
            sign = -1.0 if p == "010" else 1.0
            v = np.array([sign * r3, 1.0])  # (|0>, |1>) components
            m = sym / 6 + path_operator(np.outer(v, v)) / 24
    return DensityOperator(np.asarray(m, dtype=complex), Basis.SCHUR, label)


def scenario_priors(n_qubits: int) -> dict[str, float]:
    patterns = TWO_QUBIT_PATTERNS if n_qubits == 2 else THREE_QUBIT_PATTERNS
    return {p: 1.0 / len(patterns) for p in patterns}


def make_rng(seed=None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def haar_qubit_amplitudes(rng: np.random.Generator, size: int) -> np.ndarray:
    """``size`` Haar-random qubits as an array of shape (size, 2)."""
    cos_t = 1.0 - 2.0 * rng.random(size)
    phi = 2.0 * np.pi * rng.random(size)
    # cos(t/2), sin(t/2) from cos t; clip guards the sqrt at the poles
    c = np.sqrt(np.clip((1.0 + cos_t) / 2.0, 0.0, 1.0))
    s = np.sqrt(np.clip((1.0 - cos_t) / 2.0, 0.0, 1.0))
    return np.stack([c + 0j, np.exp(1j * phi) * s], axis=1)


def haar_sample_qubit(rng) -> PureQubit:
    rng = make_rng(rng)
    cos_t = 1.0 - 2.0 * rng.random()
    phi = 2.0 * np.pi * rng.random()
    return PureQubit(float(np.arccos(cos_t)), float(phi))


def product_states(pattern: str, phis: np.ndarray) -> np.ndarray:
    """Batch of product states ``|phi_{p1}>|phi_{p2}>...``.

    ``phis`` has shape (2, batch, 2): the two unknown qubits for each sample.
    """
    out = phis[int(pattern[0])]
    for ch in pattern[1:]:
        q = phis[int(ch)]
        out = np.einsum("ni,nj->nij", out, q).reshape(out.shape[0], -1)
    return out


def monte_carlo_state(label, n_samples: int, rng=None) -> DensityOperator:
    """Empirical average of sampled pure product states (computational basis)."""
    label = as_label(label)
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    rng = make_rng(rng)
    dim = 2**label.n_qubits
    acc = np.zeros((dim, dim), dtype=complex)
    done = 0
    while done < n_samples:
        batch = min(MC_CHUNK, n_samples - done)
        phis = np.stack([haar_qubit_amplitudes(rng, batch) for _ in range(2)])
        psi = product_states(label.pattern, phis)
        acc += psi.T @ np.conj(psi)
        done += batch
    rho = acc / n_samples
    rho = 0.5 * (rho + np.conj(rho).T)
    rho /= np.trace(rho).real
    return DensityOperator(rho, Basis.COMPUTATIONAL, label)
