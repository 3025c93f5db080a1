"""Renderer tests: drive the primary CLI for real inputs, check schemas,
round-trips, idempotence, and error codes."""

import os
import subprocess
import sys

import numpy as np
import pytest

from catplot.cli import main as catplot_main
from catplot.io import SchemaError, dump_wigner, load_fidelity_trace, load_wigner


@pytest.fixture(scope="module")
def primary_outputs(tmp_path_factory):
    """Small fig2 + fig4 runs through the floquet-cat pipeline."""
    fc = pytest.importorskip("floquet_cat")
    from floquet_cat import scenarios as sc
    out = tmp_path_factory.mktemp("primary")
    fig2 = out / "fig2"
    sc.run_fig2(fc.paper_set_1(n_magnon=14), t_final=12.0, grid_extent=1.8,
                grid_points=31, outdir=str(fig2))
    fig4 = out / "fig4"
    sc.run_fig4(fc.paper_set_1(n_cavity=3, n_magnon=8), t_final=4.0, dt_out=0.5,
                outdir=str(fig4))
    fig3 = out / "fig3"
    sc.run_fig3(fc.paper_set_1(n_magnon=8), t_final=4.0, rates_mhz=(0.0, 1.0),
                fixed_rate_mhz=0.5, outdir=str(fig3))
    return {"fig2": fig2, "fig4": fig4, "fig3": fig3}


def test_wigner_vacuumish_grid_renders(tmp_path):
    # synthetic vacuum grid through the documented schema
    ax = np.linspace(-2, 2, 21)
    with open(tmp_path / "w.csv", "w") as fh:
        fh.write("re,im,w\n")
        for y in ax:
            for x in ax:
                fh.write(f"{x:.17g},{y:.17g},{(2/np.pi)*np.exp(-2*(x*x+y*y)):.17g}\n")
    out = tmp_path / "w.png"
    assert catplot_main(["wigner-heatmap", "--in", str(tmp_path / "w.csv"),
                         "--out", str(out)]) == 0
    assert out.exists() and out.stat().st_size > 0


def test_wigner_schema_round_trip(primary_outputs, tmp_path):
    src = primary_outputs["fig2"] / "wigner_pp.csv"
    data = load_wigner(str(src))
    copy = tmp_path / "copy.csv"
    dump_wigner(data, str(copy))
    again = load_wigner(str(copy))
    assert np.array_equal(data.re_axis, again.re_axis)
    assert np.array_equal(data.im_axis, again.im_axis)
    assert np.array_equal(data.values, again.values)
    assert src.read_bytes() == copy.read_bytes()


def test_fig2_grids_render(primary_outputs, tmp_path):
    paths = [str(primary_outputs["fig2"] / f"wigner_{b}.csv")
             for b in ("pp", "pm", "mp", "mm")]
    out = tmp_path / "fig2.png"
    assert catplot_main(["wigner-heatmap", "--in", *paths, "--out", str(out),
                         "--title", "pp", "pm", "mp", "mm"]) == 0
    assert out.stat().st_size > 0


def test_fidelity_trace_renders(primary_outputs, tmp_path):
    src = primary_outputs["fig4"] / "fidelity_trace.csv"
    traces = load_fidelity_trace(str(src))
    assert set(traces) == {"coherent", "vacuum"}
    for tr in traces.values():
        assert np.all(np.diff(np.sort(tr[:, 0])) >= 0)
        assert np.all((tr[:, 1] >= 0) & (tr[:, 1] <= 1 + 1e-9))
    out = tmp_path / "fig4.png"
    assert catplot_main(["fidelity-curves", "--in", str(src),
                         "--out", str(out)]) == 0
    assert out.stat().st_size > 0


def test_scan_panels_render(primary_outputs, tmp_path):
    src = primary_outputs["fig3"] / "dissipation_scan.csv"
    out = tmp_path / "fig3.png"
    assert catplot_main(["scan-panels", "--in", str(src), "--out", str(out)]) == 0
    assert out.stat().st_size > 0


def test_single_row_fidelity_no_crash(tmp_path):
    src = tmp_path / "one.csv"
    src.write_text("t_ns,fidelity,initial_kind\n0,1,vacuum\n")
    out = tmp_path / "one.png"
    assert catplot_main(["fidelity-curves", "--in", str(src), "--out", str(out)]) == 0
    assert out.stat().st_size > 0


def test_missing_column_exit_code(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("re,w\n0,0\n")
    assert catplot_main(["wigner-heatmap", "--in", str(bad),
                         "--out", str(tmp_path / "x.png")]) == 2


def test_incomplete_grid_rejected(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("re,im,w\n0,0,1\n1,0,1\n0,1,1\n")
    with pytest.raises(SchemaError):
        load_wigner(str(bad))


def test_rerender_idempotent(primary_outputs, tmp_path):
    src = str(primary_outputs["fig2"] / "wigner_pp.csv")
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    catplot_main(["wigner-heatmap", "--in", src, "--out", str(a)])
    catplot_main(["wigner-heatmap", "--in", src, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_cli_module_invocation(tmp_path):
    res = subprocess.run([sys.executable, "-m", "catplot.cli", "fidelity-curves",
                          "--in", "/missing.csv", "--out", str(tmp_path / "x.png")],
                         capture_output=True, text=True)
    assert res.returncode == 2
