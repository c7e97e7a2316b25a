"""Trajectory-level Monte Carlo of the sequential classification protocol.

Each trajectory samples a hypothesis and two Haar-random qubits, prepares the
pure three-qubit product state and runs both measurements with Born-rule
sampling. Averaged states are never used, which keeps this an independent
check of the analytic success rates.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .linalg import psd_sqrt
from .measure import (
    DegenerateGeometry,
    ImpossibleOutcome,
    Outcome,
    WeakParams,
    first_element,
    second_povm,
)
from .states import THREE_QUBIT_PATTERNS, Basis, PureQubit, haar_qubit_amplitudes, product_states
from .tradeoff import alpha_for_p_first, optimize_beta

CHUNK = 100_000
OUTCOMES = (Outcome.PLUS, Outcome.MINUS)


@dataclass(frozen=True)
class Trajectory:
    hypothesis: str
    qubits: tuple[PureQubit, PureQubit, PureQubit]
    first_outcome: Outcome
    second_outcome: str
    first_correct: bool
    second_correct: bool


@dataclass
class RunSummary:
    n_trajectories: int
    p1_hat: float
    p1_se: float
    p2_hat: float
    p2_se: float
    alpha: float
    beta: float
    seed: int
    stream: int = 0
    # counts[hypothesis, first outcome (+, -), second outcome]
    counts: np.ndarray = field(default=None, repr=False)

    @property
    def params(self) -> WeakParams:
        return WeakParams(self.alpha, self.beta)

    def to_json(self) -> str:
        d = asdict(self)
        d["counts"] = None if self.counts is None else self.counts.tolist()
        return json.dumps(d)


def _binomial(k: int, n: int) -> tuple[float, float]:
    p = k / n
    return p, float(np.sqrt(p * (1 - p) / n))


class _Protocol:
    """Precomputed operators for one (alpha, beta)."""

    def __init__(self, params: WeakParams):
        self.params = params
        self.kraus = []
        self.second = []
        for outcome in OUTCOMES:
            self.kraus.append(psd_sqrt(first_element(params, outcome)))
            try:
                povm = second_povm(params, outcome).in_basis(Basis.COMPUTATIONAL)
                self.second.append(np.stack(povm.elements))
            except (DegenerateGeometry, ImpossibleOutcome):
                self.second.append(None)

    def run(self, rng: np.random.Generator, n: int, keep: bool = False):
        hyp = rng.integers(0, 4, size=n)
        phis = np.stack([haar_qubit_amplitudes(rng, n) for _ in range(2)])
        candidates = np.stack([product_states(p, phis) for p in THREE_QUBIT_PATTERNS])
        psi = candidates[hyp, np.arange(n)]

        branches = [psi @ k.T for k in self.kraus]
        weights = np.stack([np.sum(np.abs(b) ** 2, axis=1) for b in branches], axis=1)
        for j, sec in enumerate(self.second):
            if sec is None:
                weights[:, j] = 0.0
        u = rng.random(n)
        first = (u * weights.sum(axis=1) >= weights[:, 0]).astype(int)  # 0 -> +, 1 -> -

        second = np.empty(n, dtype=int)
        u2 = rng.random(n)
        for j, sec in enumerate(self.second):
            sel = first == j
            if not sel.any():
                continue
            post = branches[j][sel] / np.sqrt(weights[sel, j])[:, None]
            probs = np.einsum("ni,lij,nj->nl", np.conj(post), sec, post).real
            probs = np.clip(probs, 0.0, None)
            cdf = np.cumsum(probs, axis=1)
            second[sel] = np.minimum(
                np.sum(u2[sel, None] * cdf[:, -1:] >= cdf, axis=1), 3
            )

        counts = np.zeros((4, 2, 4), dtype=np.int64)
        np.add.at(counts, (hyp, first, second), 1)
        if not keep:
            return counts, None
        return counts, (hyp, phis, first, second)


def _first_correct(counts: np.ndarray) -> int:
    # '+' is the "first two agree" guess (hypotheses 000, 001)
    return int(counts[:2, 0].sum() + counts[2:, 1].sum())


def _second_correct(counts: np.ndarray) -> int:
    return int(sum(counts[h, :, h].sum() for h in range(4)))


def run_trajectories(params: WeakParams, n: int, seed: int, stream: int = 0) -> RunSummary:
    """Simulate ``n`` trajectories and report both empirical success rates.

    Chunks draw from independent child streams of ``SeedSequence([seed, stream])``,
    so results are bit-identical for fixed arguments.
    """
    if n < 1:
        raise ValueError("n must be positive")
    proto = _Protocol(params)
    n_chunks = -(-n // CHUNK)
    children = np.random.SeedSequence([int(seed), int(stream)]).spawn(n_chunks)
    counts = np.zeros((4, 2, 4), dtype=np.int64)
    for i, ss in enumerate(children):
        size = min(CHUNK, n - i * CHUNK)
        c, _ = proto.run(np.random.default_rng(ss), size)
        counts += c
    p1, se1 = _binomial(_first_correct(counts), n)
    p2, se2 = _binomial(_second_correct(counts), n)
    return RunSummary(n, p1, se1, p2, se2, params.alpha, params.beta, int(seed), int(stream), counts)


def sample_trajectories(params: WeakParams, n: int, seed: int) -> list[Trajectory]:
    """Individual trajectories, for inspection (small ``n``)."""
    proto = _Protocol(params)
    _, (hyp, phis, first, second) = proto.run(
        np.random.default_rng(np.random.SeedSequence([int(seed), 0])), n, keep=True
    )
    out = []
    for t in range(n):
        pattern = THREE_QUBIT_PATTERNS[hyp[t]]
        qubits = tuple(_as_pure(phis[int(ch), t]) for ch in pattern)
        f = OUTCOMES[first[t]]
        s = THREE_QUBIT_PATTERNS[second[t]]
        first_ok = (f == Outcome.PLUS) == pattern.startswith("00")
        out.append(Trajectory(pattern, qubits, f, s, first_ok, s == pattern))
    return out


def _as_pure(amp: np.ndarray) -> PureQubit:
    theta = 2 * np.arctan2(abs(amp[1]), abs(amp[0]))
    phi = float(np.angle(amp[1]) - np.angle(amp[0])) % (2 * np.pi)
    return PureQubit(float(theta), phi)


def estimate_curve(n_points: int, n_per_point: int, seed: int) -> list[RunSummary]:
    """Empirical rates along the optimal (alpha, beta*) locus, uniform in p_first."""
    if n_points < 2:
        raise ValueError("n_points must be at least 2")
    out = []
    for i, p1 in enumerate(np.linspace(0.5, 0.625, n_points)):
        alpha = min(max(alpha_for_p_first(p1), 0.0), 1.0)
        beta, _ = optimize_beta(alpha)
        out.append(run_trajectories(WeakParams(alpha, beta), n_per_point, seed, stream=i))
    return out
