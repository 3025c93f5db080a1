"""Batch renderer for floquet-cat output files."""

__version__ = "0.1.0"

from .io import SchemaError, WignerData, dump_wigner, load_dissipation_scan, \
    load_fidelity_trace, load_wigner
from .render import render_fidelity, render_scan_panels, render_wigner

__all__ = ["__version__", "SchemaError", "WignerData", "dump_wigner",
           "load_dissipation_scan", "load_fidelity_trace", "load_wigner",
           "render_fidelity", "render_scan_panels", "render_wigner"]
