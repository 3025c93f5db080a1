"""Benchmark: compiled (_core) vs pure-numpy kernels.

Times the two hot loops on production-shaped problems:
  * fixed-step RK4 propagation of the full lab-frame model (state vector),
  * the Lindblad right-hand side of the effective master equation.

Run:  python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

import numpy as np

import floquet_cat as fc
from floquet_cat import channels, hamiltonians as hams, kernels
from floquet_cat.params import TWO_PI
from floquet_cat.propagate import _channel_triples
from floquet_cat.states import plus_plus_fock


def bench(fn, repeat=3):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    args = ap.parse_args()

    if kernels.BACKEND != "compiled":
        print("compiled extension not available; benchmarking numpy only")

    nsteps = 2000 if args.quick else 10000
    p = fc.paper_set_1(n_cavity=8, n_magnon=20)
    spec = hams.make_spec(p)
    mh = hams.h_total_u2(spec)
    psi0 = plus_plus_fock(mh.layout, 0).data
    dt = (TWO_PI / p.omega_f1) / 256

    rows = []
    for backend in ("compiled", "numpy"):
        if backend == "compiled" and kernels.BACKEND != "compiled":
            continue
        comp = kernels.compile_hamiltonian(mh, backend)
        t = bench(lambda: comp.rk4_fixed(psi0, 0.0, dt, nsteps))
        rows.append((f"rk4 lab-frame dim={mh.layout.dim} x{nsteps}", backend, t))

    mhz = TWO_PI * 1e-3
    pd = p.with_rates(gamma_q1=0.5 * mhz, gamma_q2=0.5 * mhz,
                      kappa_m=0.5 * mhz, kappa_a=0.5 * mhz)
    specd = hams.make_spec(pd)
    h = hams.h_eff_rotating(specd)
    chans = channels.effective_collapse_channels(pd, specd.derived, rotating_xi=True)
    dim = h.layout.dim
    rho = np.outer(plus_plus_fock(h.layout, 0).data,
                   plus_plus_fock(h.layout, 0).data.conj())
    nrhs = 200 if args.quick else 1000
    for backend in ("compiled", "numpy"):
        if backend == "compiled" and kernels.BACKEND != "compiled":
            continue
        gen = kernels.compile_lindblad(h, _channel_triples(chans, dim), backend)

        def loop():
            for k in range(nrhs):
                gen.rhs(0.01 * k, rho)
        t = bench(loop)
        rows.append((f"lindblad rhs dim={dim} x{nrhs}", backend, t))

    print(f"{'kernel':44s} {'backend':9s} {'time [s]':>9s}")
    times = {}
    for name, backend, t in rows:
        times.setdefault(name, {})[backend] = t
        print(f"{name:44s} {backend:9s} {t:9.3f}")
    for name, by in times.items():
        if "compiled" in by and "numpy" in by:
            print(f"speedup {name}: {by['numpy'] / by['compiled']:.2f}x")

    # consistency spot-check between the two paths
    if kernels.BACKEND == "compiled":
        g_c = kernels.compile_lindblad(h, _channel_triples(chans, dim), "compiled")
        g_n = kernels.compile_lindblad(h, _channel_triples(chans, dim), "numpy")
        d = np.max(np.abs(g_c.rhs(0.37, rho) - g_n.rhs(0.37, rho)))
        print(f"\nbackend agreement (lindblad rhs, max abs diff): {d:.3e}")


if __name__ == "__main__":
    main()
