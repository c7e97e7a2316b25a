"""JSON encoding shared by states and POVMs: entries as [re, im] pairs."""
from __future__ import annotations

import numpy as np

from .states import Basis, DensityOperator, HypothesisLabel


def encode_matrix(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(entries) -> np.ndarray:
    a = np.asarray(entries, dtype=float)
    return a[..., 0] + 1j * a[..., 1]


def state_to_dict(rho: DensityOperator) -> dict:
    return {
        "label": None if rho.label is None else str(rho.label),
        "basis": rho.basis.value,
        "dim": rho.dim,
        "entries": encode_matrix(rho.matrix),
    }


def state_from_dict(d: dict) -> DensityOperator:
    m = decode_matrix(d["entries"])
    if m.shape != (d["dim"], d["dim"]):
        raise ValueError(f"entries shape {m.shape} does not match dim {d['dim']}")
    label = HypothesisLabel(d["label"]) if d.get("label") else None
    return DensityOperator(m, Basis(d["basis"]), label)


def povm_to_dict(povm) -> dict:
    return {
        "basis": povm.basis.value,
        "dim": povm.dim,
        "elements": [
            {"label": lab, "basis": povm.basis.value, "dim": povm.dim,
             "entries": encode_matrix(e)}
            for lab, e in povm
        ],
    }


def povm_from_dict(d: dict):
    from .measure import Povm

    labels = [e["label"] for e in d["elements"]]
    mats = [decode_matrix(e["entries"]) for e in d["elements"]]
    return Povm(tuple(labels), tuple(mats), Basis(d["basis"]))
