"""Labelled Schur bases for two and three qubits.

Rows of ``SchurTransform.unitary`` are the Schur basis vectors written in the
computational basis, so ``unitary @ v`` gives Schur coordinates of a
computational column vector and ``unitary @ A @ unitary^dagger`` re-expresses
an operator.

Three-qubit row order::

    |3/2, 3/2>, |3/2, 1/2>, |3/2,-1/2>, |3/2,-3/2>,
    |1/2, 1/2>|1>, |1/2,-1/2>|1>, |1/2, 1/2>|0>, |1/2,-1/2>|0>

The ``|3/2,-1/2>`` row is the symmetric combination of |011>, |101>, |110>.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .linalg import DimensionError, dagger

HALF = Fraction(1, 2)

# sigma given as 0-based images: sigma[k] is where qubit k is sent.
IDENTITY_3 = (0, 1, 2)
CYCLE_123 = (1, 2, 0)
CYCLE_132 = (2, 0, 1)


class UnsupportedDimension(DimensionError):
    pass


@dataclass(frozen=True)
class SchurLabel:
    s: Fraction
    m: Fraction
    path: int = 0

    def __post_init__(self):
        s, m = Fraction(self.s), Fraction(self.m)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "m", m)
        if s < 0 or (2 * s).denominator != 1:
            raise ValueError(f"invalid total spin {s}")
        if abs(m) > s or (s - m).denominator != 1:
            raise ValueError(f"m_s={m} inconsistent with s={s}")
        if self.path not in (0, 1):
            raise ValueError(f"path index must be 0 or 1, got {self.path}")

    def __str__(self):
        tail = f",p={self.path}" if self.s == HALF else ""
        return f"|{self.s},{self.m}{tail}>"


@dataclass(frozen=True)
class SchurTransform:
    n_qubits: int
    unitary: np.ndarray
    labels: tuple[SchurLabel, ...]

    def to_schur(self, op: np.ndarray) -> np.ndarray:
        return self.unitary @ op @ dagger(self.unitary)

    def to_computational(self, op: np.ndarray) -> np.ndarray:
        return dagger(self.unitary) @ op @ self.unitary

    def index(self, label: SchurLabel) -> int:
        return self.labels.index(label)


def basis_ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def _rows(n: int):
    k = basis_ket
    L = SchurLabel
    if n == 2:
        r2 = np.sqrt(2.0)
        return [
            (L(1, 1), k("00")),
            (L(1, 0), (k("01") + k("10")) / r2),
            (L(1, -1), k("11")),
            (L(0, 0), (k("01") - k("10")) / r2),
        ]
    if n == 3:
        r2, r3, r6 = np.sqrt(2.0), np.sqrt(3.0), np.sqrt(6.0)
        h = HALF
        return [
            (L(3 * h, 3 * h), k("000")),
            (L(3 * h, h), (k("100") + k("010") + k("001")) / r3),
            (L(3 * h, -h), (k("011") + k("101") + k("110")) / r3),
            (L(3 * h, -3 * h), k("111")),
            (L(h, h, 1), (k("100") + k("010") - 2 * k("001")) / r6),
            (L(h, -h, 1), (-k("011") - k("101") + 2 * k("110")) / r6),
            (L(h, h, 0), (k("100") - k("010")) / r2),
            (L(h, -h, 0), (k("101") - k("011")) / r2),
        ]
    raise UnsupportedDimension(f"Schur transform only for 2 or 3 qubits, got {n}")


@lru_cache(maxsize=None)
def schur_transform(n: int) -> SchurTransform:
    rows = _rows(n)
    unitary = np.array([v for _, v in rows])
    unitary.setflags(write=False)
    return SchurTransform(n, unitary, tuple(lab for lab, _ in rows))


def clebsch_lift(label: SchurLabel, added_spin_z: Fraction):
    """Couple a two-qubit Schur state to one more spin-1/2.

    Returns ``[(label, coefficient), (label, coefficient)]`` for the
    ``s + 1/2`` branch (path 0) and the ``s - 1/2`` branch (path 1).
    A branch whose spin or projection is out of range carries coefficient
    0; its label is ``None`` when no valid label exists.
    """
    s, m = label.s, label.m
    if s < HALF:
        if s != 0:
            raise ValueError(f"parent spin {s} not a two-qubit spin")
    dm = Fraction(added_spin_z)
    if dm not in (HALF, -HALF):
        raise ValueError(f"added spin projection must be +-1/2, got {dm}")
    sign = 1 if dm > 0 else -1
    new_m = m + dm
    up = float(s + sign * m + 1) / float(2 * s + 1)
    down = float(s - sign * m) / float(2 * s + 1)

    def branch(new_s, path, coeff):
        if new_s < 0 or abs(new_m) > new_s:
            return (None, 0.0)
        return (SchurLabel(new_s, new_m, path if new_s == HALF else 0), coeff)

    return [
        branch(s + HALF, 0, np.sqrt(up)),
        branch(s - HALF, 1, -sign * np.sqrt(down)),
    ]


def lift_vector(label: SchurLabel, added_spin_z: Fraction) -> np.ndarray:
    """Three-qubit Schur coordinates of ``|s,m> (x) |1/2, added_spin_z>``."""
    t3 = schur_transform(3)
    out = np.zeros(8, dtype=complex)
    for lab, c in clebsch_lift(label, added_spin_z):
        if lab is not None and c != 0.0:
            out[t3.index(lab)] += c
    return out


def permutation_operator(sigma, n: int = 3) -> np.ndarray:
    """Matrix of ``P(sigma)|i_1..i_n> = |i_{sigma^-1(1)} .. i_{sigma^-1(n)}>``.

    ``sigma[k]`` is the (0-based) position that qubit ``k`` is moved to, so
    ``CYCLE_123`` sends |i1 i2 i3> to |i3 i1 i2>.
    """
    sigma = tuple(int(x) for x in sigma)
    if sorted(sigma) != list(range(n)):
        raise ValueError(f"{sigma} is not a permutation of {n} elements")
    P = np.zeros((2**n, 2**n), dtype=complex)
    for bits in itertools.product((0, 1), repeat=n):
        out = [0] * n
        for k, b in enumerate(bits):
            out[sigma[k]] = b
        src = int("".join(map(str, bits)), 2)
        dst = int("".join(map(str, out)), 2)
        P[dst, src] = 1.0
    return P


def compose(sigma, tau):
    """``sigma * tau``: apply tau first, then sigma."""
    return tuple(sigma[t] for t in tau)


# --- subspace operators in the three-qubit Schur basis -------------------

# Schur rows of the spin-1/2 sector, keyed by (m = +1/2 ?, path)
_HALF_ROWS = {(True, 1): 4, (False, 1): 5, (True, 0): 6, (False, 0): 7}


def spin_three_halves_identity() -> np.ndarray:
    return np.diag([1, 1, 1, 1, 0, 0, 0, 0]).astype(complex)


def spin_half_identity() -> np.ndarray:
    return np.diag([0, 0, 0, 0, 1, 1, 1, 1]).astype(complex)


def path_operator(path_matrix) -> np.ndarray:
    """Embed ``I_{1/2} (x) M`` with ``M`` a 2x2 matrix on the path basis (|0>, |1>)."""
    M = np.asarray(path_matrix, dtype=complex)
    out = np.zeros((8, 8), dtype=complex)
    for up in (True, False):
        for p in (0, 1):
            for q in (0, 1):
                out[_HALF_ROWS[(up, p)], _HALF_ROWS[(up, q)]] = M[p, q]
    return out


def path_block(op: np.ndarray, up: bool = True) -> np.ndarray:
    """2x2 path-space block of a Schur-basis operator at fixed m = +-1/2."""
    idx = [_HALF_ROWS[(up, 0)], _HALF_ROWS[(up, 1)]]
    return np.asarray(op)[np.ix_(idx, idx)]


def two_qubit_projectors():
    """(P_+, P_-): symmetric and singlet projectors in the computational basis."""
    t2 = schur_transform(2)
    p_plus = t2.to_computational(np.diag([1, 1, 1, 0]).astype(complex))
    p_minus = t2.to_computational(np.diag([0, 0, 0, 1]).astype(complex))
    return p_plus, p_minus
