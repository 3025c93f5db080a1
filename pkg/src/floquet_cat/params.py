"""Physical parameters and Floquet-renormalized derived quantities.

Internal unit system: angular frequencies in rad/ns, time in ns, so a mode
at f GHz has omega = 2*pi*f. Dissipation rates are angular too (rate_MHz
converts as 2*pi*1e-3 rad/ns).

Sign conventions. The sideband rule 2*n0 - 1 = Round[(omega_c - delta)/omega_f]
inverts exactly to delta = omega_c - (2*n0-1)*omega_f, which is negative for
both bundled parameter sets, as is Delta_cm = omega_c - omega_m. Taking both
literally ("paper" convention) makes the two 1/delta and 1/Delta_cm terms of
Gamma1 add constructively and tunes xi to ~2*pi*12 kHz, i.e. a resonant
conditional displacement growing as |Gamma1|*t -- the only reading that
reproduces the quoted amplitudes (|alpha| = 1.007 at 40 ns). The "flipped"
convention negates both (delta = (2*n0-1)*omega_f - omega_c and
Delta_cm -> |Delta_cm|); it has identical magnitudes and conjugate phases.
The "naive" mix (delta positive, Delta_cm literal) nearly cancels Gamma1 and
is kept only so the convention-resolution oracle can reject it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .bessel import bessel_j
from .errors import AsymmetricCouplingError, InvalidDimensionError, NoValidSidebandError

TWO_PI = 2.0 * math.pi

CONVENTIONS = ("paper", "flipped", "naive")


@dataclass(frozen=True)
class SystemParams:
    """Lab-frame constants, all angular (rad/ns) except the truncations."""

    omega_q1: float
    omega_q2: float
    omega_c: float
    omega_m: float
    g1: float
    g2: float
    g3: float
    Omega_f1: float
    Omega_f2: float
    omega_f1: float
    omega_f2: float
    phi: float
    gamma_q1: float = 0.0
    gamma_q2: float = 0.0
    kappa_m: float = 0.0
    kappa_a: float = 0.0
    n_cavity: int = 8
    n_magnon: int = 25

    def __post_init__(self):
        for name in ("omega_q1", "omega_q2", "omega_c", "omega_m", "g1", "g2", "g3",
                     "Omega_f1", "Omega_f2", "omega_f1", "omega_f2",
                     "gamma_q1", "gamma_q2", "kappa_m", "kappa_a"):
            if getattr(self, name) < 0:
                raise InvalidDimensionError(f"{name} must be >= 0")
        if self.n_cavity < 2 or self.n_magnon < 2:
            raise InvalidDimensionError("Fock truncations must be >= 2")

    def with_rates(self, gamma_q1=None, gamma_q2=None, kappa_m=None, kappa_a=None):
        kw = {}
        if gamma_q1 is not None:
            kw["gamma_q1"] = gamma_q1
        if gamma_q2 is not None:
            kw["gamma_q2"] = gamma_q2
        if kappa_m is not None:
            kw["kappa_m"] = kappa_m
        if kappa_a is not None:
            kw["kappa_a"] = kappa_a
        return replace(self, **kw)


@dataclass(frozen=True)
class DerivedParams:
    """Floquet-renormalized quantities feeding every effective model."""

    mu1: float
    mu2: float
    n0: int
    delta: float
    delta_cm: float
    G: float
    Phi: float
    Gamma1: float
    Gamma2: complex
    Gamma3: float
    xi: float
    convention: str


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def select_sideband(params: SystemParams, delta_guess: float = 0.0) -> int:
    """Smallest-detuning sideband order n0 from the rounding rule."""
    if params.omega_f1 <= 0:
        raise NoValidSidebandError("omega_f must be positive")
    ratio = (params.omega_c - delta_guess) / params.omega_f1
    n0 = _round_half_up((ratio + 1.0) / 2.0)
    if n0 < 1:
        raise NoValidSidebandError(
            f"rounding rule gives 2*n0-1 = {2 * n0 - 1} for ratio {ratio:.4g}")
    return n0


def derive_params(params: SystemParams, convention: str = "paper",
                  delta_guess: float = 0.0) -> DerivedParams:
    """Compute mu_j, n0, delta, Delta_cm, G, Phi, Gamma1..3 and xi."""
    if convention not in CONVENTIONS:
        raise InvalidDimensionError(f"unknown convention {convention!r}")
    mu1 = 2.0 * params.Omega_f1 / params.omega_f1
    mu2 = 2.0 * params.Omega_f2 / params.omega_f2
    n0 = select_sideband(params, delta_guess)
    k = 2 * n0 - 1

    if abs(params.omega_f1 - params.omega_f2) > 1e-9 * params.omega_f1:
        raise AsymmetricCouplingError("drive frequencies differ; a single sideband "
                                      "detuning delta is undefined")

    G1 = params.g1 * bessel_j(k, mu1) / 2.0
    G2 = params.g2 * bessel_j(k, mu2) / 2.0
    scale = max(abs(G1), abs(G2), 1e-300)
    if abs(G1 - G2) > 1e-9 * scale:
        raise AsymmetricCouplingError(
            f"G1 = {G1:.6g} and G2 = {G2:.6g} differ; the reduction assumes G1 = G2")
    G = G1

    delta_lit = params.omega_c - k * params.omega_f1
    dcm_lit = params.omega_c - params.omega_m
    if convention == "paper":
        delta, dcm = delta_lit, dcm_lit
    elif convention == "flipped":
        delta, dcm = -delta_lit, -dcm_lit
    else:  # naive: spec-pinned positive delta with literal Delta_cm
        delta, dcm = -delta_lit, dcm_lit

    if delta == 0.0 or dcm == 0.0:
        raise NoValidSidebandError("degenerate detuning: delta or Delta_cm is zero")

    Phi = k * params.phi
    Gamma1 = 0.5 * (params.g3 * G / dcm + params.g3 * G / delta)
    Gamma2 = Gamma1 * complex(math.cos(Phi), math.sin(Phi))
    Gamma3 = -2.0 * G**2 * math.cos(Phi) / delta
    xi = delta - dcm - params.g3**2 / dcm
    return DerivedParams(mu1=mu1, mu2=mu2, n0=n0, delta=delta, delta_cm=dcm,
                         G=G, Phi=Phi, Gamma1=Gamma1, Gamma2=Gamma2,
                         Gamma3=Gamma3, xi=xi, convention=convention)


def regime_report(params: SystemParams, dp: DerivedParams,
                  strong_factor: float = 5.0) -> dict:
    """Diagnostics for the separation-of-scales assumptions (">>" = factor >= 5).

    Returned dict is emitted in run metadata; nothing here raises.
    """
    k = 2 * dp.n0 - 1
    checks = []

    def check(name, num, den):
        ratio = math.inf if den == 0 else abs(num) / abs(den)
        checks.append({"name": name, "ratio": ratio, "threshold": strong_factor,
                       "ok": ratio >= strong_factor})

    check("omega_c >> g1", params.omega_c, params.g1)
    check("omega_c >> g1*J0(mu1)/2", params.omega_c,
          params.g1 * bessel_j(0, dp.mu1) / 2.0)
    for n in range(1, 4):
        if 2 * n - 1 == k:
            continue
        detune = (2 * n - 1) * params.omega_f1 - params.omega_c
        check(f"|({2*n-1})w_f - w_c| >> g1*J{2*n-1}(mu1)/2", detune,
              params.g1 * bessel_j(2 * n - 1, dp.mu1) / 2.0)
        detune_even = 2 * n * params.omega_f1 - params.omega_c
        check(f"|({2*n})w_f - w_c| >> g1*J{2*n}(mu1)/2", detune_even,
              params.g1 * bessel_j(2 * n, dp.mu1) / 2.0)
    if params.omega_q1 > 0:
        check("omega_f >> omega_q1*J1(mu1)/2", params.omega_f1,
              params.omega_q1 * bessel_j(1, dp.mu1) / 2.0)
    check("delta >> G (SW expansion)", dp.delta, dp.G)
    check("Delta_cm >> g3 (SW expansion)", dp.delta_cm, params.g3)

    gj = params.g1 * bessel_j(k, dp.mu1)
    return {
        "checks": checks,
        # The large-detuning statement is ambiguous by a factor of two between
        # delta ~ 5*g*J and delta ~ 5*G = 5*g*J/2; both ratios are reported.
        "delta_over_gJ": abs(dp.delta) / gj if gj else math.inf,
        "delta_over_G": abs(dp.delta) / abs(dp.G) if dp.G else math.inf,
        "all_ok": all(c["ok"] for c in checks),
    }


def _ghz(f):
    return TWO_PI * f


def _mhz(f):
    return TWO_PI * 1e-3 * f


def paper_set_1(phi: float = math.pi / 2.0, n_cavity: int = 8,
                n_magnon: int = 25, **rates) -> SystemParams:
    """Fig. 2 parameters: omega_f/2pi = 5.0023 GHz, Omega_f/omega_f = 0.92, ..."""
    omega_f = _ghz(5.0023)
    return SystemParams(
        omega_q1=0.0, omega_q2=0.0,
        omega_c=_ghz(4.827), omega_m=_ghz(5.0),
        g1=_mhz(120.0), g2=_mhz(120.0), g3=_mhz(20.0),
        Omega_f1=0.92 * omega_f, Omega_f2=0.92 * omega_f,
        omega_f1=omega_f, omega_f2=omega_f,
        phi=phi, n_cavity=n_cavity, n_magnon=n_magnon, **rates)


def paper_set_2(phi: float = math.pi / 2.0, n_cavity: int = 8,
                n_magnon: int = 25, **rates) -> SystemParams:
    """Fig. 4(c)(d)/Fig. 5 parameters: omega_f/2pi = 8.0023 GHz, ..."""
    omega_f = _ghz(8.0023)
    return SystemParams(
        omega_q1=0.0, omega_q2=0.0,
        omega_c=_ghz(7.827), omega_m=_ghz(8.0),
        g1=_mhz(120.0), g2=_mhz(120.0), g3=_mhz(20.0),
        Omega_f1=0.92 * omega_f, Omega_f2=0.92 * omega_f,
        omega_f1=omega_f, omega_f2=omega_f,
        phi=phi, n_cavity=n_cavity, n_magnon=n_magnon, **rates)
