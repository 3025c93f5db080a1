"""Figure renderers. Diverging colormap centered on W = 0 so negativity is
visually unambiguous; axes labelled Re(alpha)/Im(alpha); equal aspect."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import (SchemaError, load_dissipation_scan, load_fidelity_trace,
                 load_wigner)


def render_wigner(paths, out: str, titles=None, dpi: int = 150):
    """One heatmap per input grid, shared symmetric color scale."""
    grids = [load_wigner(p) for p in paths]
    vmax = max(float(np.abs(g.values).max()) for g in grids) or 1.0
    n = len(grids)
    ncols = min(n, 2)
    nrows = (n + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, figsize=(4.6 * ncols, 4.0 * nrows),
                             squeeze=False)
    im = None
    for k, g in enumerate(grids):
        ax = axes[k // ncols][k % ncols]
        im = ax.pcolormesh(g.re_axis, g.im_axis, g.values, cmap="RdBu_r",
                           vmin=-vmax, vmax=vmax, shading="nearest")
        ax.set_aspect("equal")
        ax.set_xlabel(r"Re($\alpha$)")
        ax.set_ylabel(r"Im($\alpha$)")
        if titles and k < len(titles):
            ax.set_title(titles[k])
    for k in range(n, nrows * ncols):
        axes[k // ncols][k % ncols].axis("off")
    fig.colorbar(im, ax=[a for row in axes for a in row], label=r"$W(\alpha)$",
                 shrink=0.85)
    fig.savefig(out, dpi=dpi)
    plt.close(fig)
    return out


def render_fidelity(path: str, out: str, dpi: int = 150):
    """Fidelity-vs-time curves keyed by the initial-state column."""
    traces = load_fidelity_trace(path)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for kind in sorted(traces):
        tr = traces[kind]
        order = np.argsort(tr[:, 0])
        ax.plot(tr[order, 0], tr[order, 1], lw=1.4, label=kind)
    ax.set_xlabel("t [ns]")
    ax.set_ylabel("Fidelity")
    ax.set_ylim(0.0, 1.0)
    ax.legend(frameon=False)
    ax.grid(alpha=0.2)
    fig.tight_layout()
    fig.savefig(out, dpi=dpi)
    plt.close(fig)
    return out


_SCAN_LABEL = {"gamma_q": r"$\gamma_q$ [MHz]", "kappa_m": r"$\kappa_m$ [MHz]",
               "kappa_c": r"$\kappa_c$ [MHz]"}


def render_scan_panels(path: str, out: str, dpi: int = 150):
    """All (scan_var, curve_var, branch) panels of the long-format scan."""
    rows = load_dissipation_scan(path)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    panels = {}
    for r in rows:
        key = (r["scan_var"], r["curve_var"], r["branch"])
        panels.setdefault(key, {}).setdefault(r["curve_val"], []).append(
            (r["scan_val"], r["fidelity"]))
    keys = sorted(panels)
    ncols = 4
    nrows = (len(keys) + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, figsize=(3.6 * ncols, 3.0 * nrows),
                             squeeze=False)
    for k, key in enumerate(keys):
        ax = axes[k // ncols][k % ncols]
        for cval in sorted(panels[key]):
            pts = np.array(sorted(panels[key][cval]))
            ax.plot(pts[:, 0], pts[:, 1], marker="o", ms=3, lw=1.2,
                    label=f"{cval:g} MHz")
        scan_var, curve_var, branch = key
        ax.set_xlabel(_SCAN_LABEL.get(scan_var, scan_var))
        ax.set_ylabel("Fidelity")
        ax.set_ylim(0.0, 1.0)
        ax.set_title(f"{branch}; curves: {curve_var}", fontsize=9)
        ax.legend(frameon=False, fontsize=6)
        ax.grid(alpha=0.2)
    for k in range(len(keys), nrows * ncols):
        axes[k // ncols][k % ncols].axis("off")
    fig.tight_layout()
    fig.savefig(out, dpi=dpi)
    plt.close(fig)
    return out
