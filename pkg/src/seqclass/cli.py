"""Command-line entry point: ``seqclass <command> [flags]``.

Exit codes: 0 success, 1 a verification check failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .measure import (
    MeasurementError,
    Outcome,
    WeakParams,
    optimal_three_qubit_povm,
    optimal_two_qubit_povm,
    projective_second_povm,
    second_povm,
    weak_two_qubit_povm,
)
from .schur import schur_transform
from .serialize import encode_matrix, povm_to_dict, state_to_dict
from .simulate import estimate_curve, run_trajectories
from .states import analytic_state
from .tradeoff import path_components, sweep, tradeoff_curve
from .verify import CHECKPOINTS, fmt_exact, run_checks

SCHEMA = "# schema=1"
SEED_ENV = "SEQCLASS_SEED"
FIGURE1_PANELS = (("a", 0.0, 1 / 3), ("b", 1 / 3, 1 / 3), ("c", 2 / 3, 1 / 3), ("d", 1.0, 0.0))


class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer")


def _csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    buf.write(SCHEMA + "\n")
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow({k: (f"{v:.15g}" if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()


def _matrix_rows(label, basis, m) -> list[dict]:
    return [
        {"label": label, "basis": basis, "row": i, "col": j,
         "re": float(z.real), "im": float(z.imag)}
        for i, row in enumerate(m) for j, z in enumerate(row)
    ]


MATRIX_COLUMNS = ["label", "basis", "row", "col", "re", "im"]


def _params(args) -> WeakParams:
    try:
        return WeakParams(args.alpha, args.beta)
    except MeasurementError as exc:
        raise UsageError(str(exc))


def cmd_states(args) -> int:
    try:
        rho = analytic_state(args.label).in_basis(args.basis)
    except ValueError as exc:
        raise UsageError(str(exc))
    if args.format == "json":
        print(json.dumps(state_to_dict(rho)))
    else:
        sys.stdout.write(_csv(_matrix_rows(args.label, args.basis, rho.matrix), MATRIX_COLUMNS))
    return 0


def cmd_povm(args) -> int:
    which = args.which
    if which == "two":
        povm = optimal_two_qubit_povm()
    elif which == "three":
        povm = optimal_three_qubit_povm()
    elif which == "weak":
        povm = weak_two_qubit_povm(_params(args))
    elif which == "projective-second":
        povm = projective_second_povm(args.outcome)
    else:
        try:
            povm = second_povm(_params(args), args.outcome)
        except MeasurementError as exc:
            raise UsageError(str(exc))
    povm = povm.in_basis(args.basis)
    if args.format == "json":
        print(json.dumps(povm_to_dict(povm)))
    else:
        rows = [r for lab, e in povm for r in _matrix_rows(lab, args.basis, e)]
        sys.stdout.write(_csv(rows, MATRIX_COLUMNS))
    return 0


TRADEOFF_COLUMNS = ["p_first", "p_second", "alpha", "beta"]


def _tradeoff_rows(n_points: int, general: bool = False) -> list[dict]:
    rows = []
    for pt in sweep(n_points, general=general):
        row = {"p_first": pt.p_first, "p_second": pt.p_second,
               "alpha": pt.alpha, "beta": pt.beta}
        # the explicit curve and the parametric optimum must agree
        if abs(tradeoff_curve(pt.p_first) - pt.p_second) > 1e-12:
            raise RuntimeError(f"curve mismatch at p_first={pt.p_first}")
        if general:
            row["p_second_general"] = pt.p_second_general
        rows.append(row)
    return rows


def _emit_rows(rows, columns, fmt):
    if fmt == "json":
        print(json.dumps({"schema": 1, "columns": columns, "rows": rows}))
    else:
        sys.stdout.write(_csv(rows, columns))


def cmd_tradeoff(args) -> int:
    if args.n_points < 2:
        raise UsageError("--n-points must be at least 2")
    _emit_rows(_tradeoff_rows(args.n_points), TRADEOFF_COLUMNS, args.format)
    return 0


FIGURE1_COLUMNS = ["panel", "alpha", "beta", "outcome", "kind", "label",
                   "c0", "c1", "weight", "present"]


def _figure1_rows(panel, params: WeakParams, outcome: Outcome) -> list[dict]:
    rows = []
    for comp in path_components(params, outcome):
        c0, c1 = comp.vector if comp.present else ("", "")
        rows.append({
            "panel": panel, "alpha": params.alpha, "beta": params.beta,
            "outcome": outcome.value, "kind": comp.kind, "label": comp.label,
            "c0": c0, "c1": c1, "weight": comp.weight, "present": int(comp.present),
        })
    return rows


def cmd_figure1(args) -> int:
    outcome = Outcome.parse(args.outcome)
    if args.alpha is None and args.beta is None:
        panels = [(p, WeakParams(a, b)) for p, a, b in FIGURE1_PANELS]
    elif args.alpha is None or args.beta is None:
        raise UsageError("give both --alpha and --beta, or neither for all four panels")
    else:
        panels = [("custom", _params(args))]
    rows = []
    try:
        for name, w in panels:
            rows += _figure1_rows(name, w, outcome)
    except MeasurementError as exc:
        raise UsageError(str(exc))
    _emit_rows(rows, FIGURE1_COLUMNS, args.format)
    return 0


def cmd_figure2(args) -> int:
    if args.n_points < 2:
        raise UsageError("--n-points must be at least 2")
    rows = _tradeoff_rows(args.n_points, general=True)
    columns = TRADEOFF_COLUMNS + ["p_second_general"]
    if args.with_mc:
        seed = args.seed if args.seed is not None else _default_seed()
        for row, s in zip(rows, estimate_curve(args.n_points, args.n, seed)):
            row.update(p1_hat=s.p1_hat, p1_se=s.p1_se, p2_hat=s.p2_hat, p2_se=s.p2_se)
        columns += ["p1_hat", "p1_se", "p2_hat", "p2_se"]
    _emit_rows(rows, columns, args.format)
    return 0


def cmd_simulate(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.n < 1:
        raise UsageError("--n must be positive")
    summary = run_trajectories(_params(args), args.n, seed)
    print(summary.to_json())
    return 0


def cmd_verify(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    checks = run_checks(with_mc=args.with_mc, n=args.n, seed=seed)
    failed = [c.name for c in checks if not c.passed]
    report = {
        "passed": not failed,
        "failures": failed,
        "checkpoints": {k: fmt_exact(v) for k, v in CHECKPOINTS.items()},
        "checks": [c.as_dict() for c in checks],
    }
    print(json.dumps(report, indent=2))
    return 1 if failed else 0


def cmd_schur(args) -> int:
    t = schur_transform(args.n)
    print(json.dumps({
        "n_qubits": t.n_qubits,
        "labels": [str(lab) for lab in t.labels],
        "entries": encode_matrix(t.unitary),
    }))
    return 0


def _add_params(p, required=True):
    p.add_argument("--alpha", type=float, required=required, default=None)
    p.add_argument("--beta", type=float, required=required, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqclass",
        description="Sequential unsupervised qubit classification: states, POVMs, tradeoff data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("states", help="analytic Haar-averaged state")
    p.add_argument("--label", required=True)
    p.add_argument("--basis", choices=["schur", "computational"], default="schur")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_states)

    p = sub.add_parser("povm", help="one of the measurements")
    p.add_argument("--which", choices=["two", "three", "weak", "second", "projective-second"],
                   default="second")
    _add_params(p, required=False)
    p.add_argument("--outcome", default="-")
    p.add_argument("--basis", choices=["schur", "computational"], default="schur")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_povm)

    p = sub.add_parser("tradeoff", help="analytic tradeoff curve")
    p.add_argument("--n-points", type=int, default=101)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_tradeoff)

    p = sub.add_parser("figure1", help="path-space directions of states and measurements")
    _add_params(p, required=False)
    p.add_argument("--outcome", default="-")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_figure1)

    p = sub.add_parser("figure2", help="tradeoff data with optional Monte Carlo overlay")
    p.add_argument("--n-points", type=int, default=101)
    p.add_argument("--with-mc", action="store_true")
    p.add_argument("--n", type=int, default=100_000, help="trajectories per point")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_figure2)

    p = sub.add_parser("simulate", help="Monte Carlo trajectories, one JSON line")
    _add_params(p)
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the self-check suite")
    p.add_argument("--with-mc", action="store_true")
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("schur", help="dump a Schur transform")
    p.add_argument("--n", type=int, choices=[2, 3], default=3)
    p.set_defaults(func=cmd_schur)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    if not argv:
        parser.print_usage(sys.stderr)
        return 2
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"seqclass {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
