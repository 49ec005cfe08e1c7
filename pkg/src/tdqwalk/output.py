"""Machine-readable artifacts: wave-function tables, PMF tables, summaries.

Floats are printed with 17 significant digits so every double survives a
write/read round trip unchanged.
"""

from __future__ import annotations

import csv
import json
import os
from typing import Iterable, Sequence

import numpy as np

from .engine import WalkState
from .observables import SiteSeries

WAVEFUNCTION_COLUMNS = (
    "n", "re_psi_plus", "im_psi_plus", "re_psi_minus", "im_psi_minus", "rho", "magnetization",
)


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def wavefunction_rows(state: WalkState, parity_filter: bool = True) -> list[list]:
    step = 2 if parity_filter else 1
    sites = state.sites[::step]
    p = state.psi_plus[::step]
    m = state.psi_minus[::step]
    pp = np.abs(p) ** 2
    mm = np.abs(m) ** 2
    return [
        [int(n), p[k].real, p[k].imag, m[k].real, m[k].imag, pp[k] + mm[k], pp[k] - mm[k]]
        for k, n in enumerate(sites)
    ]


def write_wavefunction_csv(path: str, state: WalkState, parity_filter: bool = True) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(WAVEFUNCTION_COLUMNS)
        for row in wavefunction_rows(state, parity_filter):
            w.writerow([row[0]] + [fmt(x) for x in row[1:]])


def write_wavefunction_json(path: str, state: WalkState, parity_filter: bool = True) -> None:
    rows = wavefunction_rows(state, parity_filter)
    doc = {"t": state.t, "columns": list(WAVEFUNCTION_COLUMNS),
           "rows": [[r[0]] + [float(x) for x in r[1:]] for r in rows]}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def _state_from_rows(t: int, rows: Iterable[Sequence]) -> WalkState:
    plus = np.zeros(2 * t + 1, dtype=np.complex128)
    minus = np.zeros(2 * t + 1, dtype=np.complex128)
    for row in rows:
        i = int(row[0]) + t
        plus[i] = complex(float(row[1]), float(row[2]))
        minus[i] = complex(float(row[3]), float(row[4]))
    return WalkState(t, plus, minus)


def read_wavefunction_csv(path: str, t: int | None = None) -> WalkState:
    """Rebuild a state from a wave-function table.

    ``t`` defaults to the largest ``|n|`` listed; tables always include the
    outermost reachable sites, so this recovers the step exactly.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != WAVEFUNCTION_COLUMNS:
            raise ValueError(f"{path}: unexpected columns {header}")
        rows = list(reader)
    if t is None:
        t = max(abs(int(r[0])) for r in rows)
    return _state_from_rows(t, rows)


def read_wavefunction_json(path: str) -> WalkState:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return _state_from_rows(int(doc["t"]), doc["rows"])


def write_pmf_csv(path: str, rho: SiteSeries, gaussian: SiteSeries | None = None) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "rho"] + (["gaussian_ref"] if gaussian is not None else []))
        for n, r in zip(rho.sites, rho.values):
            row = [int(n), fmt(r)]
            if gaussian is not None:
                row.append(fmt(gaussian[int(n)]))
            w.writerow(row)


def write_table_csv(path: str, columns: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(x) if isinstance(x, (float, np.floating)) else x for x in row])


def write_json(path: str, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def ensure_dir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path
