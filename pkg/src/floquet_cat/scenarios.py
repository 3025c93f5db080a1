"""Scenario pipelines reproducing the datasets behind the four figures.

All heavy lifting happens here: effective-frame cat generation (fig2),
the dissipation fidelity scan (fig3), full-vs-effective fidelity traces
(fig4), full-model Wigner tomography (fig5), and the convention-resolution
oracle that pins the (Delta_cm-sign, alpha-scaling) pair against the full
model.

Frame bookkeeping for full-model runs: states are propagated in the
interaction picture of omega_c a^dag a + omega_m m^dag m (exact unitary
relation to the lab frame, removes the GHz free rotations from the state),
then mapped into the effective frame via
psi_eff = e^{S} U_aux(t) U1(t)^dag psi_U2(t), which equals U_tot(t)^dag
psi_lab(t).
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.ndimage import maximum_filter

from . import __version__
from .channels import effective_collapse_channels, lab_collapse_channels
from .errors import InvalidDimensionError
from .hamiltonians import (HamiltonianSpec, frame_unitary, generator_s, h_eff,
                           h_eff_rotating, h_total_u2, make_spec)
from .hilbert import QuantumState, matrix_exponential, partial_trace
from .magnus import analytic_propagator
from .params import TWO_PI, DerivedParams, SystemParams, derive_params, regime_report
from .propagate import evolve_lindblad, evolve_schrodinger
from .states import cat4, fidelity, plus_plus_fock, project_qubits
from .wigner import WignerGrid, square_axes, wigner

OUTCOME_BRANCH = {("+", "+"): "pp", ("+", "-"): "pm",
                  ("-", "+"): "mp", ("-", "-"): "mm"}

DRIVE_SAMPLES_PER_PERIOD = 256


# ---------------------------------------------------------------------------
# full-model propagation and frame mapping


def full_model_state(spec: HamiltonianSpec, t_final: float,
                     initial: str = "vacuum") -> QuantumState:
    """Lab-frame evolution mapped into the effective frame at t_final."""
    traj = full_model_trajectory(spec, [0.0, t_final], initial)
    return traj[-1]


def full_model_trajectory(spec: HamiltonianSpec, times: Sequence[float],
                          initial: str = "vacuum") -> List[QuantumState]:
    """Effective-frame snapshots U_tot(t)^dag psi_lab(t) at the given times."""
    p = spec.params
    times = np.asarray(times, dtype=float)
    mh = h_total_u2(spec)
    psi0 = plus_plus_fock(mh.layout, 0)
    if initial == "coherent":
        # matched start: psi_lab(0) = U_tot(0)|+,+,0,0>, i.e. psi_U2(0) since
        # U2(0) = 1; the magnon/cavity begin in the small coherent states
        # induced by e^{-S} and the t=0 Floquet kick.
        u_tot0 = frame_unitary("Utot", spec, 0.0).mat
        psi0 = QuantumState(mh.layout, u_tot0 @ psi0.data)
    elif initial != "vacuum":
        raise InvalidDimensionError(f"unknown initial kind {initial!r}")
    dt = (TWO_PI / max(p.omega_f1, p.omega_f2)) / DRIVE_SAMPLES_PER_PERIOD
    traj = evolve_schrodinger(mh, psi0, times, method="fixed", dt_max=dt)

    e_s = matrix_exponential(generator_s(spec)).mat
    out = []
    for t, st in zip(traj.times, traj.states):
        u1 = frame_unitary("U1", spec, t).mat
        uaux = frame_unitary("Uaux", spec, t).mat
        psi = e_s @ (uaux @ (u1.conj().T @ st.data))
        out.append(QuantumState(mh.layout, psi / np.linalg.norm(psi)))
    full_model_trajectory.last_metadata = dict(traj.metadata)  # inspection hook
    return out


full_model_trajectory.last_metadata = {}


def conditioned_magnon(state: QuantumState, q1: str, q2: str,
                       dp: DerivedParams, t: float):
    """Project the qubits, discard the cavity if present, undo the xi rotation.

    Returns the magnon state in the rotating (Eq.-10) frame plus the outcome
    probability.
    """
    cond, prob = project_qubits(state, q1, q2)
    if len(cond.layout) == 2:
        cond = partial_trace(cond, [1])
    nm = cond.layout.dim
    rot = np.exp(1j * dp.xi * np.arange(nm) * t)
    if cond.is_pure:
        rotated = QuantumState(cond.layout, rot * cond.data)
    else:
        rotated = QuantumState(cond.layout, rot[:, None] * cond.data * rot.conj()[None, :])
    return rotated, prob


# ---------------------------------------------------------------------------
# Wigner lobe-amplitude extraction


@dataclass
class LobeExtraction:
    amplitude: float          # constellation radius |alpha| of the fitted cat
    peak_radius: float        # raw mean peak distance from the centroid
    peaks: list
    center: Tuple[float, float]
    calibration: float        # residual grid mismatch at the fitted amplitude


def remove_mean_displacement(state: QuantumState):
    """Center the constellation: ideal branch states have <m> = 0 exactly
    (mod-4 Fock supports), so <m> of a measured state is the common offset.
    Returns (displaced state, offset)."""
    from .hilbert import annihilation, displacement_operator

    dim = state.layout.dim
    rho = state.to_density_matrix()
    off = complex(np.trace(rho @ annihilation(dim).mat))
    d = displacement_operator(-off, dim).mat
    return QuantumState(state.layout, d @ rho @ d.conj().T), off


def _peak_candidates(wg: WignerGrid, threshold: float = 0.2, max_cand: int = 12):
    v = wg.values
    mask = (v == maximum_filter(v, size=5)) & (v > threshold * v.max())
    iy, ix = np.nonzero(mask)
    cand = sorted(((v[i, j], float(wg.re_axis[j]), float(wg.im_axis[i]))
                   for i, j in zip(iy, ix)), reverse=True)
    return cand[:max_cand]


def _refine_peak(wg: WignerGrid, px: float, py: float):
    v = wg.values
    dre, dimg = wg.step
    j = int(round((px - wg.re_axis[0]) / dre))
    i = int(round((py - wg.im_axis[0]) / dimg))
    if 0 < j < len(wg.re_axis) - 1:
        den = v[i, j - 1] - 2 * v[i, j] + v[i, j + 1]
        if den != 0:
            px += dre * 0.5 * (v[i, j - 1] - v[i, j + 1]) / den
    if 0 < i < len(wg.im_axis) - 1:
        den = v[i - 1, j] - 2 * v[i, j] + v[i + 1, j]
        if den != 0:
            py += dimg * 0.5 * (v[i - 1, j] - v[i + 1, j]) / den
    return px, py


def _peak_radius(wg: WignerGrid, n_lobes: int = 4, threshold: float = 0.2):
    """Mean quadratic-refined peak distance from the constellation centroid.

    The central interference fringe of even-parity cats is itself a maximum;
    candidates close to the candidate-cloud median are dropped before the
    four lobes are selected.
    """
    cand = _peak_candidates(wg, threshold=threshold)
    if not cand:
        raise InvalidDimensionError("no Wigner maxima found")
    cx = float(np.median([c[1] for c in cand]))
    cy = float(np.median([c[2] for c in cand]))
    r = [math.hypot(c[1] - cx, c[2] - cy) for c in cand]
    rmax = max(r)
    outer = [c for c, ri in zip(cand, r) if ri > 0.45 * rmax][:n_lobes]
    if len(outer) < 3:
        raise InvalidDimensionError("fewer than three outer Wigner lobes found")
    refined = [_refine_peak(wg, c[1], c[2]) for c in outer]
    cx = float(np.mean([p[0] for p in refined]))
    cy = float(np.mean([p[1] for p in refined]))
    radii = [math.hypot(p[0] - cx, p[1] - cy) for p in refined]
    return float(np.mean(radii)), refined, (cx, cy)


def extract_lobe_amplitude(wg: WignerGrid, dim: int = 40,
                           branch: str = "pp") -> LobeExtraction:
    """Extract the constellation radius via the known lobe geometry.

    At the amplitudes of interest the four coherent components overlap, so
    the raw Wigner maxima sit well inside the true constellation radius. The
    quadratic-interpolated 2-d maxima fix the center, lobe orientation and a
    radius bracket; the amplitude itself minimizes the grid-wise mismatch
    with the Wigner function of an ideal cat of the same branch, i.e. the raw
    peak geometry is corrected through the exactly computable overlap pull of
    ideal cats (validated on synthetic impure cats in the test suite). `dim`
    sets the calibration-cat truncation and is raised automatically to cover
    the grid corners.
    """
    import scipy.optimize

    try:
        r0, peaks, center = _peak_radius(wg)
    except InvalidDimensionError:
        # heavily merged constellations leave fewer distinct maxima; retry
        # once with a permissive threshold before giving up
        r0, peaks, center = _peak_radius(wg, threshold=0.08)
    ang = float(np.mean([math.atan2(p[1] - center[1], p[0] - center[0]) % (math.pi / 2)
                         for p in peaks]))
    lo, hi = max(0.3, 0.6 * r0), max(2.0, 3.0 * r0)
    # the Laguerre evaluation is exact for any truncated state, so the
    # calibration cats only need to hold their own support
    dim = max(dim, int(hi * hi + 6.0 * hi + 10.0))
    xg, yg = np.meshgrid(wg.re_axis, wg.im_axis)

    def mismatch(a: float) -> float:
        # two-component model: incoherent four-blob mixture (fixes the lobe
        # geometry, closed Gaussian form) plus the interference pattern with
        # a free contrast, so impurity-reduced fringes cannot drag the
        # radius estimate
        a = max(a, 1e-3)
        betas = [c * a * np.exp(1j * ang) for c in (1.0, 1.0j, -1.0j, -1.0)]
        g1 = sum((2.0 / np.pi) * np.exp(-2.0 * ((xg - b.real) ** 2
                                                + (yg - b.imag) ** 2))
                 for b in betas) / 4.0
        cat = cat4(a * np.exp(1j * ang), branch, dim)
        g2 = wigner(cat.state, wg.re_axis, wg.im_axis).values - g1
        a11 = np.sum(g1 * g1)
        a12 = np.sum(g1 * g2)
        a22 = np.sum(g2 * g2)
        b1 = np.sum(g1 * wg.values)
        b2 = np.sum(g2 * wg.values)
        det = a11 * a22 - a12 * a12
        if det <= 0:
            u, v = b1 / max(a11, 1e-300), 0.0
        else:
            u = (b1 * a22 - b2 * a12) / det
            v = (b2 * a11 - b1 * a12) / det
        return float(np.sum((wg.values - u * g1 - v * g2) ** 2))

    # coarse scan guards against secondary minima of the mismatch landscape,
    # then a bounded 1-d refinement sharpens the argmin
    coarse = np.linspace(lo, hi, 28)
    vals = [mismatch(a) for a in coarse]
    k = int(np.argmin(vals))
    res = scipy.optimize.minimize_scalar(
        mismatch, bounds=(coarse[max(k - 1, 0)], coarse[min(k + 1, len(coarse) - 1)]),
        method="bounded", options={"xatol": 1e-4})
    amp = float(res.x)
    return LobeExtraction(amp, r0, peaks, center, float(mismatch(amp)))


# ---------------------------------------------------------------------------
# convention resolution (the full-model oracle)


@dataclass
class ConventionResolution:
    measured_lobe_radius: float
    claimed_amplitude: float
    passing: list
    table: list
    frozen_dcm_sign: Optional[str]
    frozen_alpha_scaling: Optional[str]


def resolve_conventions(params: SystemParams, t_final: float,
                        claimed_amplitude: float, grid_extent: float = 2.8,
                        grid_points: int = 101,
                        tol: float = 0.05) -> ConventionResolution:
    """Run the full model once and test the four (Delta_cm-sign, alpha-scaling)
    candidate conventions against the claimed amplitude.

    Candidates keep the positive sideband detuning delta = (2n0-1)w_f - w_c;
    "literal" takes Delta_cm = w_c - w_m as is (nearly cancelling Gamma1),
    "flipped" negates it (jointly equivalent to the paper-literal signs up to
    conjugation). Scaling "eta1" reads the reported amplitude as |eta1| =
    lobe_radius/sqrt(2); "full" reads it as the lobe radius |(1-i)eta1|.
    """
    spec = make_spec(params, convention="paper")
    state = full_model_state(spec, t_final, initial="vacuum")
    rot, _ = conditioned_magnon(state, "+", "+", spec.derived, t_final)
    centered, offset = remove_mean_displacement(rot)
    ax = square_axes(grid_extent, grid_points)
    wg = wigner(centered, ax, ax, label="convention-oracle")
    ext = extract_lobe_amplitude(wg)
    r_true = ext.amplitude

    table = []
    passing = []
    for dcm_sign, conv in (("literal", "naive"), ("flipped", "flipped")):
        dp = derive_params(params, conv)
        pred_lobe = math.sqrt(2.0) * abs(analytic_propagator(dp, t_final).eta1)
        for scaling, factor in (("full", 1.0), ("eta1", 1.0 / math.sqrt(2.0))):
            extracted = r_true * factor
            ok_claim = abs(extracted - claimed_amplitude) <= tol * claimed_amplitude
            ok_theory = (pred_lobe > 0
                         and abs(pred_lobe - r_true) <= tol * max(r_true, 1e-12))
            row = {"dcm_sign": dcm_sign, "alpha_scaling": scaling,
                   "extracted": extracted, "theory_lobe_radius": pred_lobe,
                   "passes": bool(ok_claim and ok_theory)}
            table.append(row)
            if row["passes"]:
                passing.append((dcm_sign, scaling))
    frozen = passing[0] if len(passing) == 1 else (None, None)
    return ConventionResolution(
        measured_lobe_radius=r_true, claimed_amplitude=claimed_amplitude,
        passing=passing, table=table,
        frozen_dcm_sign=frozen[0], frozen_alpha_scaling=frozen[1])


# ---------------------------------------------------------------------------
# output helpers


def _fmt(x) -> str:
    return f"{x:.17g}"


def write_wigner_csv(path: str, wg: WignerGrid):
    with open(path, "w") as fh:
        fh.write("re,im,w\n")
        for i, y in enumerate(wg.im_axis):
            for j, x in enumerate(wg.re_axis):
                fh.write(f"{_fmt(x)},{_fmt(y)},{_fmt(wg.values[i, j])}\n")


def write_fock_csv(path: str, state: QuantumState):
    rho = state.to_density_matrix()
    amps = np.sqrt(np.clip(np.diag(rho).real, 0.0, None))
    with open(path, "w") as fh:
        fh.write("n,population,abs_amplitude\n")
        for n in range(rho.shape[0]):
            fh.write(f"{n},{_fmt(rho[n, n].real)},{_fmt(amps[n])}\n")


def config_hash(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def build_metadata(params: SystemParams, dp: DerivedParams, raw_config: dict,
                   extra: Optional[dict] = None) -> dict:
    import scipy

    meta = {
        "tool": "floquet-cat",
        "version": __version__,
        "numpy_version": np.__version__,
        "scipy_version": scipy.__version__,
        "config_hash": config_hash(raw_config),
        "raw_config": raw_config,
        "units": {"angular_frequency": "rad/ns", "time": "ns",
                  "ghz_to_rad_ns": TWO_PI, "mhz_to_rad_ns": TWO_PI * 1e-3},
        "system_params_rad_ns": asdict(params),
        "derived_params": {k: (v if not isinstance(v, complex)
                               else {"re": v.real, "im": v.imag})
                           for k, v in asdict(dp).items()},
        "conventions": {
            "delta_definition": "omega_c - (2 n0 - 1) omega_f (paper-literal)",
            "dcm_definition": "omega_c - omega_m (paper-literal)",
            "resolved_pair_spec_axes": {"dcm_sign": "flipped", "alpha_scaling": "eta1"},
            "note": ("spec-axis pair (delta = (2n0-1)w_f - w_c, Delta_cm flipped) is the "
                     "global conjugate of the paper-literal signs; identical magnitudes "
                     "and observables, conjugate phases. Reported |alpha| = |eta1| = "
                     "lobe_radius/sqrt(2)."),
        },
        "regime_report": regime_report(params, dp),
    }
    if extra:
        meta.update(extra)
    return meta


def write_metadata(outdir: str, meta: dict):
    """Hash every data file in outdir into the metadata manifest, then write
    metadata.json; grids/rows are bound to their run via this manifest."""
    manifest = {}
    for name in sorted(os.listdir(outdir)):
        if name == "metadata.json":
            continue
        path = os.path.join(outdir, name)
        if os.path.isfile(path):
            with open(path, "rb") as fh:
                manifest[name] = hashlib.sha256(fh.read()).hexdigest()[:16]
    meta["output_files"] = manifest
    with open(os.path.join(outdir, "metadata.json"), "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True, default=float)
        fh.write("\n")


# ---------------------------------------------------------------------------
# fig2: effective-frame 4C states and Wigner snapshots


def run_fig2(params: SystemParams, t_final: float = 40.0, grid_extent: float = 2.8,
             grid_points: int = 101, outdir: str = ".", raw_config: dict = None,
             rtol: float = 1e-9, atol: float = 1e-12) -> dict:
    os.makedirs(outdir, exist_ok=True)
    spec = make_spec(params)
    dp = spec.derived
    lay = h_eff_rotating(spec).layout
    psi0 = plus_plus_fock(lay, 0)
    traj = evolve_schrodinger(h_eff_rotating(spec), psi0, [0.0, t_final],
                              rtol=rtol, atol=atol)
    final = traj.final()
    pp = analytic_propagator(dp, t_final)
    ax = square_axes(grid_extent, grid_points)

    results = {"alpha_analytic": {"re": pp.alpha.real, "im": pp.alpha.imag,
                                  "abs": abs(pp.alpha)},
               "eta1_abs": abs(pp.eta1),
               "branches": {}}
    prob_total = 0.0
    for (q1, q2), branch in OUTCOME_BRANCH.items():
        # rotating-frame magnon state; xi rotation is not undone because the
        # trajectory already lives in the Eq.-(7) frame.
        cond, prob = project_qubits(final, q1, q2)
        wg = wigner(cond, ax, ax, label=f"fig2-{branch}")
        write_wigner_csv(os.path.join(outdir, f"wigner_{branch}.csv"), wg)
        write_fock_csv(os.path.join(outdir, f"fock_{branch}.csv"), cond)
        target = cat4(pp.alpha, branch, params.n_magnon)
        fid = fidelity(cond, target.state)
        prob_total += prob
        results["branches"][branch] = {
            "outcome": q1 + q2, "probability": prob, "fidelity_vs_cat4": fid,
            "min_wigner": float(wg.values.min()),
            "wigner_integral": wg.integral()}
    results["probability_sum"] = prob_total
    results["integrator"] = traj.metadata
    meta = build_metadata(params, dp, raw_config or {}, {"scenario": "fig2_wigner",
                                                         "t_final_ns": t_final,
                                                         "results": results})
    write_metadata(outdir, meta)
    return results


# ---------------------------------------------------------------------------
# fig3: dissipation scan


RATE_VARS = ("gamma_q", "kappa_m", "kappa_c")


def _rates_to_params(base: SystemParams, gamma_q_mhz: float, kappa_m_mhz: float,
                     kappa_c_mhz: float) -> SystemParams:
    mhz = TWO_PI * 1e-3
    return base.with_rates(gamma_q1=gamma_q_mhz * mhz, gamma_q2=gamma_q_mhz * mhz,
                           kappa_m=kappa_m_mhz * mhz, kappa_a=kappa_c_mhz * mhz)


def dissipative_branch_fidelities(params: SystemParams, t_final: float,
                                  rtol: float = 1e-9, atol: float = 1e-12,
                                  branches: Sequence[str] = ("pp", "mm"),
                                  frame: str = "rotating") -> dict:
    """Evolve the effective master equation and return branch fidelities.

    frame "rotating" integrates in the Eq.-(7) picture (the xi m^dag m term
    is removed analytically; the hybrid channel picks up an e^{-i xi t}
    phase on its magnon part). frame "auxiliary" integrates Eq.-(6) plus
    static channels literally and undoes the xi rotation afterwards; both
    must agree, the rotating path is the default because its step sizes are
    set by Gamma rather than xi.
    """
    spec = make_spec(params)
    dp = spec.derived
    if frame == "rotating":
        h = h_eff_rotating(spec)
        chans = effective_collapse_channels(params, dp, rotating_xi=True)
    elif frame == "auxiliary":
        h = h_eff(spec)
        chans = effective_collapse_channels(params, dp, rotating_xi=False)
    else:
        raise InvalidDimensionError(f"unknown frame {frame!r}")
    lay = h.layout
    psi0 = plus_plus_fock(lay, 0)
    rho0 = QuantumState(lay, np.outer(psi0.data, psi0.data.conj()))
    traj = evolve_lindblad(h, chans, rho0, [0.0, t_final], rtol=rtol, atol=atol)
    final = traj.final()
    pp = analytic_propagator(dp, t_final)
    out = {"trace_drift": traj.metadata["trace_drift"],
           "min_eigenvalue": traj.metadata["min_eigenvalue"],
           "branches": {}}
    inv = {v: k for k, v in OUTCOME_BRANCH.items()}
    for branch in branches:
        q1, q2 = inv[branch]
        if frame == "rotating":
            cond, prob = project_qubits(final, q1, q2)
        else:
            cond, prob = conditioned_magnon(final, q1, q2, dp, t_final)
        target = cat4(pp.alpha, branch, params.n_magnon)
        out["branches"][branch] = {"probability": prob,
                                   "fidelity": fidelity(cond, target.state)}
    return out


def _limit_blas_threads():
    try:
        import threadpoolctl
        threadpoolctl.threadpool_limits(1)
    except Exception:
        pass


def _fig3_worker(args):
    base, t_final, rates, rtol, atol = args
    res = dissipative_branch_fidelities(_rates_to_params(base, *rates), t_final,
                                        rtol=rtol, atol=atol)
    return rates, res


def run_fig3(params: SystemParams, t_final: float = 40.0,
             rates_mhz: Sequence[float] = (0.0, 0.25, 0.5, 0.75, 1.0),
             fixed_rate_mhz: float = 0.5, outdir: str = ".", workers: int = 1,
             raw_config: dict = None, rtol: float = 1e-9, atol: float = 1e-12,
             oracle_lab_frame: bool = False) -> dict:
    """Long-format dissipation scan over the three rate planes."""
    os.makedirs(outdir, exist_ok=True)
    rates_mhz = list(rates_mhz)
    grid = {(0.0, 0.0, 0.0)}  # all-zero run pins the unitary limit
    for x in rates_mhz:
        for y in rates_mhz:
            grid.add((x, y, fixed_rate_mhz))   # (gamma_q, kappa_m) plane
            grid.add((x, fixed_rate_mhz, y))   # (gamma_q, kappa_c) plane
            grid.add((fixed_rate_mhz, x, y))   # (kappa_m, kappa_c) plane
    grid = sorted(grid)
    jobs = [(params, t_final, r, rtol, atol) for r in grid]
    results = {}
    if workers > 1:
        # one BLAS thread per worker: the scan parallelizes across processes
        with ProcessPoolExecutor(max_workers=workers,
                                 initializer=_limit_blas_threads) as ex:
            for rates, res in ex.map(_fig3_worker, jobs):
                results[rates] = res
    else:
        # multithreaded BLAS is counterproductive for the small per-run
        # matrices; scoped single-thread limits speed the scan up severalfold
        try:
            import threadpoolctl
            ctx = threadpoolctl.threadpool_limits(1)
        except Exception:
            ctx = None
        try:
            for job in jobs:
                rates, res = _fig3_worker(job)
                results[rates] = res
        finally:
            if ctx is not None:
                ctx.unregister()

    axis_index = {"gamma_q": 0, "kappa_m": 1, "kappa_c": 2}
    rows = []
    for scan_var in RATE_VARS:
        for curve_var in RATE_VARS:
            if curve_var == scan_var:
                continue
            fixed_var = next(v for v in RATE_VARS if v not in (scan_var, curve_var))
            for curve_val in rates_mhz:
                for scan_val in rates_mhz:
                    key = [None, None, None]
                    key[axis_index[scan_var]] = scan_val
                    key[axis_index[curve_var]] = curve_val
                    key[axis_index[fixed_var]] = fixed_rate_mhz
                    res = results[tuple(key)]
                    for branch in ("pp", "mm"):
                        rows.append((scan_var, scan_val, curve_var, curve_val,
                                     fixed_rate_mhz, branch,
                                     res["branches"][branch]["fidelity"]))
    path = os.path.join(outdir, "dissipation_scan.csv")
    with open(path, "w") as fh:
        fh.write("scan_var,scan_val_mhz,curve_var,curve_val_mhz,fixed_val_mhz,branch,fidelity\n")
        for r in rows:
            fh.write(",".join([r[0], _fmt(r[1]), r[2], _fmt(r[3]), _fmt(r[4]),
                               r[5], _fmt(r[6])]) + "\n")

    spec = make_spec(params)
    pp = analytic_propagator(spec.derived, t_final)
    zero = results[(0.0, 0.0, 0.0)]
    unitary_traj = evolve_schrodinger(h_eff_rotating(spec),
                                      plus_plus_fock(h_eff_rotating(spec).layout, 0),
                                      [0.0, t_final], rtol=rtol, atol=atol)
    inv = {v: k for k, v in OUTCOME_BRANCH.items()}
    zero_gap = {}
    for branch in ("pp", "mm"):
        cond, _ = project_qubits(unitary_traj.final(), *inv[branch])
        f_unitary = fidelity(cond, cat4(pp.alpha, branch, params.n_magnon).state)
        zero_gap[branch] = abs(zero["branches"][branch]["fidelity"] - f_unitary)
    integrity = {
        "runs": len(grid),
        "max_trace_drift": max(r["trace_drift"] for r in results.values()),
        "min_eigenvalue": min(r["min_eigenvalue"] for r in results.values()),
        "zero_rate_vs_unitary_gap": zero_gap,
    }
    extra = {"scenario": "fig3_dissipation_scan", "t_final_ns": t_final,
             "rates_mhz": rates_mhz, "fixed_rate_mhz": fixed_rate_mhz,
             "integrity": integrity}
    if oracle_lab_frame:
        extra["lab_frame_oracle"] = lab_frame_dissipation_oracle(params)
    dp = derive_params(params)
    meta = build_metadata(params, dp, raw_config or {}, extra)
    write_metadata(outdir, meta)
    return {"rows": rows, "results": results, "integrity": integrity, "meta": meta}


def lab_frame_dissipation_oracle(params: SystemParams, t_final: float = 4.0,
                                 n_cavity: int = 4, n_magnon: int = 8,
                                 rate_scale: float = 1.0) -> dict:
    """Reduced-truncation Eq.-(13) cross-check (oracle-grade, expensive).

    Integrates the lab-frame master equation with fixed steps in the U2
    picture (the channel set is invariant there) and compares the conditioned
    magnon against the effective pipeline at the same settings.
    """
    import dataclasses
    small = dataclasses.replace(params, n_cavity=n_cavity, n_magnon=n_magnon,
                                gamma_q1=params.gamma_q1 * rate_scale,
                                gamma_q2=params.gamma_q2 * rate_scale,
                                kappa_m=params.kappa_m * rate_scale,
                                kappa_a=params.kappa_a * rate_scale)
    spec = make_spec(small)
    dp = spec.derived
    mh = h_total_u2(spec)
    chans = lab_collapse_channels(small)
    psi0 = plus_plus_fock(mh.layout, 0)
    rho0 = QuantumState(mh.layout, np.outer(psi0.data, psi0.data.conj()))
    dt = (TWO_PI / max(small.omega_f1, small.omega_f2)) / DRIVE_SAMPLES_PER_PERIOD
    traj = evolve_lindblad(mh, chans, rho0, [0.0, t_final], method="fixed", dt_max=dt)
    rho_u2 = traj.final().data
    # map into the effective frame: rho_eff = M rho M^dag, M = e^S Uaux U1^dag
    u1 = frame_unitary("U1", spec, t_final).mat
    uaux = frame_unitary("Uaux", spec, t_final).mat
    e_s = matrix_exponential(generator_s(spec)).mat
    m = e_s @ (uaux @ u1.conj().T)
    rho_eff = m @ rho_u2 @ m.conj().T
    st = QuantumState(mh.layout, rho_eff / np.trace(rho_eff).real)
    eff = dissipative_branch_fidelities(small, t_final)
    pp = analytic_propagator(dp, t_final)
    out = {"t_final_ns": t_final, "n_cavity": n_cavity, "n_magnon": n_magnon,
           "trace_drift": traj.metadata["trace_drift"], "branches": {}}
    for branch in ("pp", "mm"):
        q1, q2 = next(k for k, v in OUTCOME_BRANCH.items() if v == branch)
        cond, prob = conditioned_magnon(st, q1, q2, dp, t_final)
        target = cat4(pp.alpha, branch, n_magnon)
        out["branches"][branch] = {
            "lab_fidelity": fidelity(cond, target.state),
            "effective_fidelity": eff["branches"][branch]["fidelity"],
            "gap": abs(fidelity(cond, target.state)
                       - eff["branches"][branch]["fidelity"])}
    return out


# ---------------------------------------------------------------------------
# fig4: full-vs-effective fidelity traces


def run_fig4(params: SystemParams, t_final: float = 80.0, dt_out: float = 0.2,
             outdir: str = ".", raw_config: dict = None,
             initial_kinds: Sequence[str] = ("coherent", "vacuum"),
             rtol: float = 1e-9, atol: float = 1e-12) -> dict:
    os.makedirs(outdir, exist_ok=True)
    spec = make_spec(params)
    dp = spec.derived
    times = np.arange(0.0, t_final + 0.5 * dt_out, dt_out)
    lay_eff = h_eff_rotating(spec).layout
    psi0 = plus_plus_fock(lay_eff, 0)
    eff = evolve_schrodinger(h_eff_rotating(spec), psi0, times, rtol=rtol, atol=atol)
    nm = params.n_magnon

    traces = {}
    for kind in initial_kinds:
        full = full_model_trajectory(spec, times, initial=kind)
        fids = np.empty(len(times))
        for k, (t, st) in enumerate(zip(times, full)):
            rho3 = partial_trace(st, [0, 1, 3])
            # effective state mapped to the auxiliary frame for comparison
            psi_aux = (eff.states[k].data.reshape(4, nm)
                       * np.exp(-1j * dp.xi * np.arange(nm) * t)[None, :]).reshape(-1)
            fids[k] = fidelity(rho3, QuantumState(lay_eff, psi_aux))
        traces[kind] = fids

    path = os.path.join(outdir, "fidelity_trace.csv")
    with open(path, "w") as fh:
        fh.write("t_ns,fidelity,initial_kind\n")
        for kind, fids in traces.items():
            for t, f in zip(times, fids):
                fh.write(f"{_fmt(t)},{_fmt(f)},{kind}\n")

    results = {"times": times, "traces": traces,
               "fidelity_t0": {k: float(v[0]) for k, v in traces.items()}}
    meta = build_metadata(params, dp, raw_config or {},
                          {"scenario": "fig4_fidelity_trace", "t_final_ns": t_final,
                           "dt_out_ns": dt_out,
                           "results": {"fidelity_t0": results["fidelity_t0"]}})
    write_metadata(outdir, meta)
    return results


def dominant_oscillation_frequency(times: np.ndarray, trace: np.ndarray) -> float:
    """Angular frequency of the strongest non-DC Fourier component."""
    y = np.asarray(trace, dtype=float)
    y = y - y.mean()
    # remove the linear trend so the slow envelope does not mask the ripple
    coef = np.polyfit(times, y, 1)
    y = y - np.polyval(coef, times)
    spec = np.abs(np.fft.rfft(y))
    freqs = np.fft.rfftfreq(len(times), d=times[1] - times[0])
    k = int(np.argmax(spec[1:])) + 1
    return float(TWO_PI * freqs[k])


# ---------------------------------------------------------------------------
# fig5: full-model Wigner tomography


def run_fig5(params: SystemParams, t_final: float = 50.0, grid_extent: float = 3.2,
             grid_points: int = 101, outdir: str = ".", raw_config: dict = None) -> dict:
    os.makedirs(outdir, exist_ok=True)
    spec = make_spec(params)
    dp = spec.derived
    state = full_model_state(spec, t_final, initial="vacuum")
    ax = square_axes(grid_extent, grid_points)
    results = {"branches": {}}
    norm_drift = full_model_trajectory.last_metadata.get("norm_drift")
    extraction = None
    for (q1, q2), branch in OUTCOME_BRANCH.items():
        cond, prob = conditioned_magnon(state, q1, q2, dp, t_final)
        wg = wigner(cond, ax, ax, label=f"fig5-{branch}")
        write_wigner_csv(os.path.join(outdir, f"wigner_{branch}.csv"), wg)
        entry = {"outcome": q1 + q2, "probability": prob,
                 "min_wigner": float(wg.values.min())}
        if branch == "pp":
            centered, offset = remove_mean_displacement(cond)
            wg_c = wigner(centered, ax, ax, label="fig5-pp-centered")
            extraction = extract_lobe_amplitude(wg_c)
            entry["lobe_amplitude"] = extraction.amplitude
            entry["reported_alpha"] = extraction.amplitude / math.sqrt(2.0)
            entry["peak_radius"] = extraction.peak_radius
            entry["offset"] = {"re": offset.real, "im": offset.imag}
        results["branches"][branch] = entry
    results["norm_drift"] = norm_drift
    results["extraction"] = {
        "lobe_amplitude": extraction.amplitude,
        "reported_alpha_eta1_scaling": extraction.amplitude / math.sqrt(2.0),
        "analytic_eta1_abs": abs(analytic_propagator(dp, t_final).eta1)}
    meta = build_metadata(params, dp, raw_config or {},
                          {"scenario": "fig5_fullmodel_wigner",
                           "t_final_ns": t_final, "results": results["extraction"],
                           "norm_drift": norm_drift})
    write_metadata(outdir, meta)
    return results
