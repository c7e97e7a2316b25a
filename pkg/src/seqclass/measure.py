"""POVMs, Lueders updates and the sequential two-measurement construction.

The intermediate measurement acts on the first two qubits with elements

    pi_-  = alpha P_- + beta I
    pi_+  = alpha P_+ + (1 - alpha - beta) I

and the follow-up three-qubit measurement is the mirror-symmetric family
parameterised by ``a``. Every ``+`` outcome formula is obtained from the
``-`` one by the substitution ``alpha -> -alpha, beta -> 1 - beta``.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .linalg import (
    STRUCT_TOL,
    as_hermitian,
    dagger,
    hermitian_eigendecomposition,
    max_norm,
    psd_sqrt,
    tensor,
    trace,
)
from .schur import (
    path_operator,
    schur_transform,
    spin_half_identity,
    spin_three_halves_identity,
    two_qubit_projectors,
)
from .states import (
    THREE_QUBIT_PATTERNS,
    Basis,
    DensityOperator,
    HypothesisLabel,
    analytic_state,
)

ZERO_PROBABILITY = 1e-15
# slack for float round-off when parameters sit on the constraint boundary
PARAM_SLACK = 1e-12


class MeasurementError(ValueError):
    pass


class InvalidWeakParams(MeasurementError):
    pass


class ImpossibleOutcome(MeasurementError):
    pass


class DegenerateGeometry(MeasurementError):
    pass


class ConsistencyError(RuntimeError):
    """Two independent routes to the same quantity disagree."""


class Outcome(str, Enum):
    PLUS = "+"
    MINUS = "-"

    @classmethod
    def parse(cls, value) -> "Outcome":
        if isinstance(value, Outcome):
            return value
        v = str(value).strip().lower()
        if v in ("+", "plus", "p"):
            return cls.PLUS
        if v in ("-", "minus", "m"):
            return cls.MINUS
        raise ValueError(f"unknown outcome {value!r}")


@dataclass(frozen=True)
class WeakParams:
    alpha: float
    beta: float

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (np.isfinite(a) and np.isfinite(b)):
            raise InvalidWeakParams("alpha and beta must be finite")
        if b < -PARAM_SLACK or b > 1 + PARAM_SLACK:
            raise InvalidWeakParams(f"beta={b} outside [0, 1]")
        if a < -PARAM_SLACK:
            raise InvalidWeakParams(f"alpha={a} below 0")
        if a > 1 - b + PARAM_SLACK:
            raise InvalidWeakParams(f"alpha={a} above 1 - beta = {1 - b}")
        b = min(max(b, 0.0), 1.0)
        a = min(max(a, 0.0), 1.0 - b)
        # pin alpha onto the boundary so 1 - alpha - beta evaluates to exactly 0
        if abs(a - (1.0 - b)) <= PARAM_SLACK:
            a = 1.0 - b
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    def raw(self, outcome: Outcome) -> tuple[float, float]:
        """Coefficients (a, b) with pi_outcome = a P_- + b I."""
        if Outcome.parse(outcome) == Outcome.MINUS:
            return self.alpha, self.beta
        return -self.alpha, 1.0 - self.beta


@dataclass(frozen=True)
class Povm:
    labels: tuple[str, ...]
    elements: tuple[np.ndarray, ...]
    basis: Basis = Basis.COMPUTATIONAL

    def __post_init__(self):
        if len(self.labels) != len(self.elements):
            raise ValueError("labels and elements differ in length")
        els = []
        for e in self.elements:
            e = as_hermitian(e).copy()
            e.setflags(write=False)
            els.append(e)
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        object.__setattr__(self, "elements", tuple(els))
        object.__setattr__(self, "basis", Basis(self.basis))

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def __getitem__(self, label: str) -> np.ndarray:
        return self.elements[self.labels.index(str(label))]

    def __iter__(self):
        return iter(zip(self.labels, self.elements))

    def in_basis(self, basis) -> "Povm":
        basis = Basis(basis)
        if basis == self.basis:
            return self
        t = schur_transform(int(round(np.log2(self.dim))))
        conv = t.to_schur if basis == Basis.SCHUR else t.to_computational
        return Povm(self.labels, tuple(conv(e) for e in self.elements), basis)


@dataclass(frozen=True)
class PovmReport:
    min_eigenvalues: dict
    completeness_residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return (
            all(v >= -self.tol for v in self.min_eigenvalues.values())
            and self.completeness_residual <= self.tol
        )


def validate_povm(povm: Povm, tol: float = STRUCT_TOL) -> PovmReport:
    mins = {
        lab: float(hermitian_eigendecomposition(e)[0][0]) for lab, e in povm
    }
    resid = max_norm(sum(povm.elements) - np.eye(povm.dim))
    return PovmReport(mins, resid, tol)


# --- generic rules --------------------------------------------------------


def luders_update(rho: DensityOperator, element, basis=None):
    """Minimally disturbing update ``sqrt(E) rho sqrt(E) / Tr(E rho)``.

    ``element`` is taken to be in ``basis`` (default: the state's own). A
    branch of probability <= 1e-15 returns ``(None, 0.0)``.
    """
    basis = Basis(basis) if basis is not None else rho.basis
    r = rho.in_basis(basis).matrix
    root = psd_sqrt(element)
    unnorm = root @ r @ dagger(root)
    prob = float(trace(unnorm).real)
    if prob <= ZERO_PROBABILITY:
        return None, 0.0
    return DensityOperator(unnorm / prob, basis, rho.label), prob


def success_probability(povm: Povm, ensemble) -> float:
    """``sum_i p_i Tr(pi_i rho_i)``; ``None`` states contribute nothing."""
    ensemble = list(ensemble)
    if len(ensemble) != len(povm.elements):
        raise MeasurementError(
            f"{len(povm.elements)} POVM elements but {len(ensemble)} states"
        )
    total = 0.0
    for element, (rho, prior) in zip(povm.elements, ensemble):
        if rho is None or prior == 0:
            continue
        total += prior * trace(element @ rho.in_basis(povm.basis).matrix).real
    return float(total)


# --- undisturbed optimal measurements -------------------------------------


def optimal_two_qubit_povm() -> Povm:
    p_plus, p_minus = two_qubit_projectors()
    return Povm(("+", "-"), (p_plus, p_minus), Basis.COMPUTATIONAL)


def mirror_povm(a: float) -> Povm:
    """Three-qubit mirror-symmetric POVM (Schur basis), ``a`` in [0, 1]."""
    if not -PARAM_SLACK <= a <= 1 + PARAM_SLACK:
        raise ConsistencyError(f"mirror parameter a={a} outside [0, 1]")
    a = min(max(a, 0.0), 1.0)
    return Povm(THREE_QUBIT_PATTERNS, _mirror_elements(a), Basis.SCHUR)


def _mirror_elements(a: float):
    # path vectors in (|0>, |1>) order; no range check, used for polynomial fits
    minus = np.array([-1.0, a])
    plus = np.array([1.0, a])
    return (
        spin_three_halves_identity(),
        (1 - a * a) * path_operator([[0, 0], [0, 1]]),
        0.5 * path_operator(np.outer(minus, minus)),
        0.5 * path_operator(np.outer(plus, plus)),
    )


def optimal_three_qubit_povm() -> Povm:
    r3 = np.sqrt(3.0)
    e010 = np.array([-r3, 1.0])
    e011 = np.array([r3, 1.0])
    return Povm(
        THREE_QUBIT_PATTERNS,
        (
            spin_three_halves_identity(),
            (2 / 3) * path_operator([[0, 0], [0, 1]]),
            path_operator(np.outer(e010, e010)) / 6,
            path_operator(np.outer(e011, e011)) / 6,
        ),
        Basis.SCHUR,
    )


def projective_second_povm(outcome) -> Povm:
    """Second measurement after the projective first measurement (alpha=1, beta=0)."""
    outcome = Outcome.parse(outcome)
    half = spin_half_identity()
    zero = np.zeros((8, 8))
    if outcome == Outcome.PLUS:
        els = (spin_three_halves_identity(), half, zero, zero)
    else:
        els = (spin_three_halves_identity(), zero, half / 2, half / 2)
    return Povm(THREE_QUBIT_PATTERNS, els, Basis.SCHUR)


# --- weak intermediate measurement ----------------------------------------


def _weak_element(a: float, b: float) -> np.ndarray:
    """``a P_- + b I`` on two qubits (computational basis)."""
    _, p_minus = two_qubit_projectors()
    return a * p_minus + b * np.eye(4)


def weak_two_qubit_povm(params: WeakParams) -> Povm:
    return Povm(
        ("+", "-"),
        (
            _weak_element(*params.raw(Outcome.PLUS)),
            _weak_element(*params.raw(Outcome.MINUS)),
        ),
        Basis.COMPUTATIONAL,
    )


def first_element(params: WeakParams, outcome) -> np.ndarray:
    """``pi_outcome (x) 1`` on three qubits, computational basis."""
    return tensor(_weak_element(*params.raw(outcome)), np.eye(2))


# --- disturbed ensembles --------------------------------------------------


@dataclass(frozen=True)
class DisturbedEnsemble:
    outcome: Outcome
    params: WeakParams
    entries: tuple  # (HypothesisLabel, DensityOperator | None, prior)

    @property
    def priors(self) -> dict[str, float]:
        return {str(lab): p for lab, _, p in self.entries}

    @property
    def states(self) -> dict:
        return {str(lab): rho for lab, rho, _ in self.entries}

    def pairs(self):
        return [(rho, p) for _, rho, p in self.entries]


def luders_disturbed_states(params: WeakParams, outcome):
    """Generic route: Lueders update of each undisturbed state, Bayes priors.

    Returns ``(states, priors, outcome_probability)`` with states in the
    Schur basis (``None`` for annihilated hypotheses).
    """
    element = first_element(params, outcome)
    states, likelihood = {}, {}
    for pat in THREE_QUBIT_PATTERNS:
        rho, prob = luders_update(analytic_state(pat), element, Basis.COMPUTATIONAL)
        states[pat] = None if rho is None else rho.in_basis(Basis.SCHUR)
        likelihood[pat] = prob
    total = sum(likelihood.values()) / 4
    if total <= ZERO_PROBABILITY:
        raise ImpossibleOutcome(
            f"outcome {Outcome.parse(outcome).value} has zero probability at {params}"
        )
    priors = {pat: likelihood[pat] / 4 / total for pat in THREE_QUBIT_PATTERNS}
    return states, priors, total


def _closed_minus(a: float, b: float):
    """Closed-form '-' branch states (Schur basis) and priors for raw (a, b)."""
    if a + 8 * b <= 0:
        raise ImpossibleOutcome(f"no weight in outcome for raw coefficients ({a}, {b})")
    sym = spin_three_halves_identity()
    sq_b = np.sqrt(max(b, 0.0))
    sq_t = np.sqrt(max(3 * (a + b), 0.0))
    states = {}
    if b > 0:
        states["000"] = sym / 4
        states["001"] = sym / 6 + path_operator([[0, 0], [0, 1]]) / 6
    else:
        states["000"] = states["001"] = None
    for pat, sign in (("010", -1.0), ("011", 1.0)):
        v = np.array([sign * sq_t, sq_b])
        states[pat] = (4 * b * sym + path_operator(np.outer(v, v))) / (6 * (a + 4 * b))
    p_sym = 2 * b / (a + 8 * b)
    p_tilt = (a + 4 * b) / (2 * (a + 8 * b))
    priors = {"000": p_sym, "001": p_sym, "010": p_tilt, "011": p_tilt}
    return states, priors


def closed_form_disturbed_states(params: WeakParams, outcome):
    """Closed-form route; the '+' branch comes from the swap substitution."""
    return _closed_minus(*params.raw(outcome))


def disturbed_ensemble(params: WeakParams, outcome, tol: float = STRUCT_TOL):
    """Post-measurement three-qubit ensemble, cross-checked against closed forms."""
    outcome = Outcome.parse(outcome)
    states, priors, _ = luders_disturbed_states(params, outcome)
    c_states, c_priors = closed_form_disturbed_states(params, outcome)
    for pat in THREE_QUBIT_PATTERNS:
        if abs(priors[pat] - c_priors[pat]) > tol:
            raise ConsistencyError(
                f"prior of {pat}: Bayes {priors[pat]!r} vs closed form {c_priors[pat]!r}"
            )
        g, c = states[pat], c_states[pat]
        if (g is None) != (c is None):
            raise ConsistencyError(f"state {pat}: zero-branch mismatch")
        if g is not None and max_norm(g.matrix - c) > tol:
            raise ConsistencyError(
                f"state {pat}: closed form deviates by {max_norm(g.matrix - c):.2e}"
            )
    entries = tuple(
        (HypothesisLabel(pat), states[pat], priors[pat]) for pat in THREE_QUBIT_PATTERNS
    )
    return DisturbedEnsemble(outcome, params, entries)


# --- mirror-symmetric second measurement ----------------------------------


@dataclass(frozen=True)
class MirrorGeometry:
    """Spin-1/2 path-space picture: |1>, cos|1> -+ sin|0> with priors 1-2p, p, p."""

    p: float
    cos_theta: float
    sin_theta: float
    a: float


def _mirror_minus(a: float, b: float) -> MirrorGeometry:
    den = 4 * b + 3 * a
    if den <= 0 or a + 2 * b <= 0:
        raise DegenerateGeometry(
            "spin-1/2 path subspace Q_1/2 (x) P_1/2 receives no weight for this outcome"
        )
    cos_t = np.sqrt(max(b, 0.0) / den)
    sin_t = np.sqrt(max(3 * (a + b), 0.0) / den)
    p = (3 * a + 4 * b) / (6 * (a + 2 * b))
    opt = 1.0 if a >= 2 * b else np.sqrt(max(a + b, 0.0) / (3 * b))
    return MirrorGeometry(float(p), float(cos_t), float(sin_t), float(opt))


def mirror_geometry(params: WeakParams, outcome) -> MirrorGeometry:
    return _mirror_minus(*params.raw(outcome))


def mirror_optimal_a(p: float, cos_theta: float, sin_theta: float) -> float:
    """Optimal ``a`` for mirror-symmetric three-state discrimination, from (p, theta)."""
    c, s = cos_theta, sin_theta
    if p >= 1.0 / (2.0 + c * (c + s)):
        return 1.0
    return p * c * s / (1.0 - p * (2.0 + c * c))


def second_povm(params: WeakParams, outcome) -> Povm:
    return mirror_povm(mirror_geometry(params, outcome).a)


def _success_polynomial(ensemble: DisturbedEnsemble):
    """Coefficients (c0, c1, c2) with success(a) = c0 + c1 a + c2 a^2."""
    at = {x: _mirror_elements(x) for x in (-1.0, 0.0, 1.0)}

    def value(els):
        return sum(
            p * trace(e @ rho.matrix).real
            for e, (_, rho, p) in zip(els, ensemble.entries)
            if rho is not None and p > 0
        )

    f_m, f_0, f_p = value(at[-1.0]), value(at[0.0]), value(at[1.0])
    return f_0, (f_p - f_m) / 2, (f_p + f_m) / 2 - f_0


def conditional_success(params: WeakParams, outcome, a) -> np.ndarray:
    """Second-measurement success given the first outcome, as a function of ``a``."""
    c0, c1, c2 = _success_polynomial(disturbed_ensemble(params, outcome))
    a = np.asarray(a, dtype=float)
    return c0 + c1 * a + c2 * a * a


def grid_search_a(params: WeakParams, outcome, grid_n: int = 100_000,
                  tie_tol: float = 1e-15) -> float:
    """Brute-force argmax of the conditional success over a uniform grid on [0, 1].

    Values within ``tie_tol`` of the maximum count as ties; the smallest such
    ``a`` wins.
    """
    if grid_n < 1000:
        raise ValueError("grid_n must be at least 1000")
    grid = np.linspace(0.0, 1.0, grid_n + 1)
    f = conditional_success(params, outcome, grid)
    best = f.max()
    return float(grid[np.argmax(f >= best - tie_tol)])


def is_flat_in_a(params: WeakParams, outcome, tol: float = 1e-13) -> bool:
    """True when the conditional success does not depend on ``a`` at all."""
    _, c1, c2 = _success_polynomial(disturbed_ensemble(params, outcome))
    return abs(c1) <= tol and abs(c2) <= tol
