"""Success rates of the two classifications and their tradeoff curve."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .measure import (
    DegenerateGeometry,
    ImpossibleOutcome,
    Outcome,
    WeakParams,
    first_element,
    mirror_geometry,
    second_povm,
)
from .linalg import dagger, psd_sqrt, trace
from .schur import schur_transform
from .states import Basis, analytic_state

OPTIMAL_SECOND = 5 / 12
BRANCH_POINT = 7 / 12
MAX_FIRST = 5 / 8
_SLACK = 1e-12


class Case(str, Enum):
    CASE1 = "case1"  # second measurement fully compensates the disturbance
    CASE2 = "case2"


def case_region(params: WeakParams) -> Case:
    return Case.CASE1 if params.alpha <= 2 * params.beta else Case.CASE2


@dataclass(frozen=True)
class TradeoffPoint:
    p_first: float
    p_second: float
    alpha: float
    beta: float
    p_second_general: float | None = None


def p_first(alpha: float) -> float:
    if not -_SLACK <= alpha <= 1 + _SLACK:
        raise ValueError(f"alpha={alpha} outside [0, 1]")
    return 0.5 * (1 + alpha / 4)


def alpha_for_p_first(p1: float) -> float:
    return 8 * p1 - 4


def p_second_general(params: WeakParams) -> float:
    """Direct double sum over first outcomes and hypotheses (priors 1/4).

    Outcomes that cannot occur are skipped; they contribute nothing.
    """
    t3 = schur_transform(3)
    total = 0.0
    for outcome in Outcome:
        root = psd_sqrt(first_element(params, outcome))
        try:
            povm = second_povm(params, outcome).in_basis(Basis.COMPUTATIONAL)
        except (DegenerateGeometry, ImpossibleOutcome):
            if max(abs(np.linalg.eigvalsh(root))) > 0:
                raise
            continue
        for pat, element in povm:
            rho = t3.to_computational(analytic_state(pat).matrix)
            total += 0.25 * trace(element @ root @ rho @ dagger(root)).real
    return float(total)


def p_second_closed_ab(alpha, beta):
    """Closed form, vectorised over arrays of (alpha, beta)."""
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    case2 = (
        OPTIMAL_SECOND
        - beta / 12
        - alpha / 48
        + np.sqrt(np.clip(3 * beta * (alpha + beta), 0.0, None)) / 24
    )
    out = np.where(alpha <= 2 * beta, OPTIMAL_SECOND, case2)
    return out if out.ndim else float(out)


def p_second_closed(params: WeakParams) -> float:
    return float(p_second_closed_ab(params.alpha, params.beta))


def optimize_beta(alpha: float) -> tuple[float, float]:
    """Best beta for a fixed first-measurement strength, and the resulting rate.

    Below alpha = 2/3 a whole interval of beta is optimal; the representative
    ``max(alpha/2, min(1 - alpha, 1/3))`` is returned.
    """
    p1 = p_first(alpha)
    alpha = min(max(alpha, 0.0), 1.0)
    if alpha <= 2 / 3 + _SLACK:
        return max(alpha / 2, min(1 - alpha, 1 / 3)), OPTIMAL_SECOND
    return 1 - alpha, _case2_frontier(p1)


def _case2_frontier(p1: float) -> float:
    return 1 / 12 + p1 / 2 + np.sqrt(max(3 * (5 - 8 * p1), 0.0)) / 24


def tradeoff_curve(p1: float) -> float:
    """Best achievable second success rate given the first one.

    Only [1/2, 5/8] is reachable by the weak-measurement family; values in
    [0, 1/2) are accepted and map onto the constant branch.
    """
    if p1 > MAX_FIRST + _SLACK or p1 < -_SLACK:
        raise ValueError(f"first success rate {p1} outside [0, 5/8]")
    if p1 <= BRANCH_POINT:
        return OPTIMAL_SECOND
    return float(_case2_frontier(min(p1, MAX_FIRST)))


def sweep(grid_n: int, general: bool = True) -> list[TradeoffPoint]:
    """Points uniform in the first success rate over [1/2, 5/8]."""
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    points = []
    for p1 in np.linspace(0.5, MAX_FIRST, grid_n):
        alpha = min(max(alpha_for_p_first(p1), 0.0), 1.0)
        beta, p2 = optimize_beta(alpha)
        g = p_second_general(WeakParams(alpha, beta)) if general else None
        points.append(TradeoffPoint(float(p1), float(p2), alpha, float(beta), g))
    return points


@dataclass(frozen=True)
class PathComponent:
    kind: str  # "state" or "measurement"
    label: str
    vector: tuple[float, float] | None  # (<0|v>, <1|v>), unit norm
    weight: float
    present: bool


def path_components(params: WeakParams, outcome) -> list[PathComponent]:
    """Spin-1/2 path-space directions of the three informative states and elements.

    State weights are the priors restricted to the spin-1/2 sector; element
    weights are the path-space traces. Zero-weight entries keep their label
    with ``present=False`` and no vector.
    """
    g = mirror_geometry(params, Outcome.parse(outcome))
    c, s, a = g.cos_theta, g.sin_theta, g.a
    norm = np.sqrt(1 + a * a)
    rows = [
        ("state", "001", (0.0, 1.0), 1 - 2 * g.p),
        ("state", "010", (-s, c), g.p),
        ("state", "011", (s, c), g.p),
        ("measurement", "001", (0.0, 1.0), 1 - a * a),
        ("measurement", "010", (-1 / norm, a / norm), (1 + a * a) / 2),
        ("measurement", "011", (1 / norm, a / norm), (1 + a * a) / 2),
    ]
    out = []
    for kind, label, vec, w in rows:
        present = w > _SLACK
        out.append(
            PathComponent(kind, label, tuple(float(x) for x in vec) if present else None,
                          float(max(w, 0.0)), present)
        )
    return out
