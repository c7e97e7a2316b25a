"""Fast self-check of the headline numbers and structural properties."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .linalg import max_norm
from .measure import (
    Outcome,
    WeakParams,
    optimal_three_qubit_povm,
    optimal_two_qubit_povm,
    second_povm,
    success_probability,
    validate_povm,
)
from .schur import CYCLE_123, permutation_operator, schur_transform
from .simulate import run_trajectories
from .states import THREE_QUBIT_PATTERNS, Basis, analytic_state
from .tradeoff import p_first, p_second_closed, p_second_general, tradeoff_curve

# Exact values the computed numbers are compared with.
CHECKPOINTS = {
    "two_qubit_optimum": Fraction(5, 8),
    "three_qubit_optimum": Fraction(5, 12),
    "second_after_projective_first": Fraction(19, 48),
    "branch_point_first": Fraction(7, 12),
    "branch_point_second": Fraction(5, 12),
}
EXACT_TOL = 1e-12


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float | None = None
    expected: str | None = None
    deviation: float | None = None
    detail: str = ""

    def as_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


def fmt_exact(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator} = {float(q):.15g}"


def _exact(name: str, value: float) -> CheckResult:
    q = CHECKPOINTS[name]
    dev = abs(value - float(q))
    return CheckResult(name, dev <= EXACT_TOL, float(value), fmt_exact(q), dev)


def _grid(n: int):
    for beta in np.linspace(0, 1, n):
        for alpha in np.linspace(0, 1, n):
            if alpha <= 1 - beta + 1e-12:
                yield WeakParams(alpha, beta)


def exact_checks() -> list[CheckResult]:
    uniform2 = [(analytic_state(p), 0.5) for p in ("00", "01")]
    uniform3 = [(analytic_state(p), 0.25) for p in THREE_QUBIT_PATTERNS]
    return [
        _exact("two_qubit_optimum",
               success_probability(optimal_two_qubit_povm().in_basis(Basis.SCHUR), uniform2)),
        _exact("three_qubit_optimum", success_probability(optimal_three_qubit_povm(), uniform3)),
        _exact("second_after_projective_first", p_second_general(WeakParams(1, 0))),
        _exact("branch_point_first", p_first(2 / 3)),
        _exact("branch_point_second", p_second_general(WeakParams(2 / 3, 1 / 3))),
    ]


def structural_checks(grid_n: int = 11) -> list[CheckResult]:
    out = []
    worst_u = max(
        max_norm(t.unitary @ np.conj(t.unitary).T - np.eye(2**n))
        for n in (2, 3) for t in [schur_transform(n)]
    )
    out.append(CheckResult("schur_unitary", worst_u <= EXACT_TOL, deviation=worst_u))

    povms = [optimal_two_qubit_povm(), optimal_three_qubit_povm()]
    for w in _grid(grid_n):
        for k in Outcome:
            try:
                povms.append(second_povm(w, k))
            except ValueError:
                pass
    bad = [r for r in map(validate_povm, povms) if not r.passed]
    out.append(CheckResult("povm_validity", not bad, detail=f"{len(povms)} POVMs, {len(bad)} failing"))

    worst = max(abs(p_second_closed(w) - p_second_general(w)) for w in _grid(grid_n))
    out.append(CheckResult("closed_vs_general", worst <= EXACT_TOL, deviation=worst))

    # the relabelling |i1 i2 i3> -> |i2 i3 i1> is conjugation by P((123))^dagger
    P = permutation_operator(CYCLE_123)
    dev = 0.0
    for src, dst in (("001", "010"), ("010", "011"), ("011", "001")):
        a = analytic_state(src).in_basis(Basis.COMPUTATIONAL).matrix
        b = analytic_state(dst).in_basis(Basis.COMPUTATIONAL).matrix
        dev = max(dev, max_norm(np.conj(P).T @ a @ P - b))
    out.append(CheckResult("permutation_cycle", dev <= EXACT_TOL, deviation=dev))

    curve_dev = max(
        abs(tradeoff_curve(5 / 8) - 19 / 48), abs(tradeoff_curve(7 / 12) - 5 / 12)
    )
    out.append(CheckResult("tradeoff_endpoints", curve_dev <= EXACT_TOL, deviation=curve_dev))
    return out


MC_POINTS = ((1.0, 0.0), (2 / 3, 1 / 3), (0.0, 0.5))


def mc_checks(n: int, seed: int, sigmas: float = 4.0) -> list[CheckResult]:
    out = []
    for alpha, beta in MC_POINTS:
        w = WeakParams(alpha, beta)
        r = run_trajectories(w, n, seed)
        for name, hat, se, exact in (
            ("p1", r.p1_hat, r.p1_se, p_first(alpha)),
            ("p2", r.p2_hat, r.p2_se, p_second_general(w)),
        ):
            sigma = np.sqrt(exact * (1 - exact) / n)
            z = abs(hat - exact) / sigma
            out.append(CheckResult(
                f"mc_{name}(alpha={alpha:.4g},beta={beta:.4g})", bool(z <= sigmas),
                hat, f"{exact:.15g}", float(z), f"z={z:.2f}, se={se:.2e}",
            ))
    return out


def run_checks(with_mc: bool = False, n: int = 100_000, seed: int = 42) -> list[CheckResult]:
    checks = exact_checks() + structural_checks()
    if with_mc:
        checks += mc_checks(n, seed)
    return checks
