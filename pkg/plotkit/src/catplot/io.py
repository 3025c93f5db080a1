"""Readers for the floquet-cat CSV schemas. The renderer never recomputes
physics; everything it draws comes from these files verbatim."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np


class SchemaError(ValueError):
    """Input file does not match the expected floquet-cat schema."""


@dataclass
class WignerData:
    re_axis: np.ndarray
    im_axis: np.ndarray
    values: np.ndarray   # (n_im, n_re), row-major as exported


def _read_rows(path: str, required: list) -> list:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [c.strip() for c in reader.fieldnames] != required:
            raise SchemaError(
                f"{path}: expected columns {required}, got {reader.fieldnames}")
        return list(reader)


def load_wigner(path: str) -> WignerData:
    rows = _read_rows(path, ["re", "im", "w"])
    if not rows:
        raise SchemaError(f"{path}: empty grid")
    re = np.array([float(r["re"]) for r in rows])
    im = np.array([float(r["im"]) for r in rows])
    w = np.array([float(r["w"]) for r in rows])
    re_axis = np.unique(re)
    im_axis = np.unique(im)
    if re_axis.size * im_axis.size != len(rows):
        raise SchemaError(f"{path}: rows do not form a complete rectangular grid")
    values = np.full((im_axis.size, re_axis.size), np.nan)
    ii = np.searchsorted(im_axis, im)
    jj = np.searchsorted(re_axis, re)
    values[ii, jj] = w
    if np.any(np.isnan(values)):
        raise SchemaError(f"{path}: grid has holes")
    return WignerData(re_axis=re_axis, im_axis=im_axis, values=values)


def dump_wigner(data: WignerData, path: str):
    """Inverse of load_wigner, bit-exact for %.17g-encoded floats."""
    with open(path, "w") as fh:
        fh.write("re,im,w\n")
        for i, y in enumerate(data.im_axis):
            for j, x in enumerate(data.re_axis):
                fh.write(f"{x:.17g},{y:.17g},{data.values[i, j]:.17g}\n")


def load_fidelity_trace(path: str) -> dict:
    rows = _read_rows(path, ["t_ns", "fidelity", "initial_kind"])
    out: dict = {}
    for r in rows:
        out.setdefault(r["initial_kind"], []).append(
            (float(r["t_ns"]), float(r["fidelity"])))
    return {k: np.array(v) for k, v in out.items()}


def load_dissipation_scan(path: str) -> list:
    rows = _read_rows(path, ["scan_var", "scan_val_mhz", "curve_var",
                             "curve_val_mhz", "fixed_val_mhz", "branch", "fidelity"])
    return [{"scan_var": r["scan_var"], "scan_val": float(r["scan_val_mhz"]),
             "curve_var": r["curve_var"], "curve_val": float(r["curve_val_mhz"]),
             "fixed_val": float(r["fixed_val_mhz"]), "branch": r["branch"],
             "fidelity": float(r["fidelity"])} for r in rows]
