"""Sharp Sobolev constants and stability on the cylinder Sigma_T = S^(d-1) x R/TZ.

For omega-independent profiles the problem is one dimensional: the
Euler-Lagrange equation

    -u'' + ((d-2)/2)^2 u = (d(d-2)/4) u^(q-1),    q = 2d/(d-2),

has the constant solution u0 = ((d-2)/d)^((d-2)/4) and, at energy levels
between the well minimum and the homoclinic level, a family of positive
periodic orbits u_alpha indexed by the amplitude alpha in (u0, 1). The
period map tau(alpha) increases from T_* = 2 pi / sqrt(d-2) to infinity and
selects the optimizer branch: constants for T <= T_*, the orbit with
tau(alpha) = T above. Hessian blocks per spherical-harmonic degree, the
quadratic stability constant c_T, and the quartic (degenerate) constants at
T = T_* are all computed from Fourier-Galerkin discretizations of the
corresponding 1D operators, with closed forms cross-checking the numerics.

Normalization: the mechanical potential is V(u) = -(d-2)^2 u^2/8
+ d(d-2) u^q /(4q), so the ODE reads u'' = -V'(u) and the first integral is
H = u'^2/2 + V(u); V(1) = 0 is the homoclinic level. |Sigma_T| means
T |S^(d-1)| throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eigh, null_space
from scipy.optimize import brentq, minimize, minimize_scalar

from .errors import (
    ComputationError,
    DomainError,
    InconsistencyError,
    PreconditionError,
)
from .specialfn import gauss_rule, sphere_area
from .zonal import SphereParams, SpectrumReport, make_spectrum_report
from .zonal import sharp_constant as sphere_sharp_constant

__all__ = [
    "CylinderParams",
    "PeriodicProfile",
    "Orbit",
    "QuarticConstants",
    "DegenerateCurve",
    "SplitReport",
    "u0",
    "t_star",
    "potential",
    "ode_residual",
    "u_min_turning",
    "period",
    "orbit_integrals",
    "solve_orbit",
    "energy_drift",
    "inverse_period",
    "profile_from_samples",
    "profile_from_fourier",
    "synthesize_profile",
    "profile_norm2_parseval",
    "profile_norm2_grid",
    "energy_profile",
    "energy_bilinear_profile",
    "lq_norm_profile",
    "quotient_profile",
    "ustar_profile",
    "sobolev_constant_cylinder",
    "orbit_branch_value",
    "cosh_trial_bound",
    "minimize_quotient",
    "l1_factorization_residual",
    "hessian_block_spectrum",
    "zero_mode_pairing",
    "c_T",
    "c_T_formula",
    "c_T_numeric",
    "quartic_constants",
    "degenerate_quotient_curve",
    "split_stability_terms",
    "split_stability_check",
    "distance_to_branch",
]


def t_star(d: int) -> float:
    """Bifurcation period 2 pi / sqrt(d-2)."""
    if d < 3:
        raise DomainError("need d >= 3")
    return 2.0 * math.pi / math.sqrt(d - 2.0)


@dataclass(frozen=True)
class CylinderParams:
    """Cylinder S^(d-1) x R/TZ with the critical exponent q = 2d/(d-2)."""

    d: int
    T: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 3:
            raise DomainError("dimension d must be an integer >= 3")
        if not self.T > 0.0:
            raise DomainError("period T must be positive")

    @property
    def q(self) -> float:
        frac = Fraction(2 * self.d, self.d - 2)
        return float(frac.numerator) / float(frac.denominator)

    @property
    def t_star(self) -> float:
        return t_star(self.d)


def u0(d: int) -> float:
    """Value of the constant solution: ((d-2)/d)^((d-2)/4)."""
    if d < 3:
        raise DomainError("need d >= 3")
    return ((d - 2.0) / d) ** ((d - 2.0) / 4.0)


def _q_of(d: int) -> float:
    return 2.0 * d / (d - 2.0)


def potential(u, d: int):
    """Mechanical potential V(u) = -(d-2)^2 u^2/8 + d(d-2) u^q/(4q)."""
    q = _q_of(d)
    u = np.asarray(u, dtype=float)
    out = -((d - 2.0) ** 2) * u * u / 8.0 + d * (d - 2.0) / (4.0 * q) * u**q
    return float(out) if out.ndim == 0 else out


def _dv(u, d: int):
    q = _q_of(d)
    u = np.asarray(u, dtype=float)
    return -((d - 2.0) ** 2) * u / 4.0 + d * (d - 2.0) / 4.0 * u ** (q - 1.0)


def _d2v(u, d: int):
    q = _q_of(d)
    u = np.asarray(u, dtype=float)
    return -((d - 2.0) ** 2) / 4.0 + d * (d - 2.0) * (q - 1.0) / 4.0 * u ** (
        q - 2.0
    )


def _d3v(u, d: int):
    q = _q_of(d)
    u = np.asarray(u, dtype=float)
    return d * (d - 2.0) * (q - 1.0) * (q - 2.0) / 4.0 * u ** (q - 3.0)


def ode_residual(d: int, u: float) -> float:
    """Residual of the stationary equation at a constant value u."""
    return float(_dv(u, d))


def _check_alpha(d: int, alpha: float) -> None:
    lo = u0(d)
    if not lo < alpha < 1.0:
        raise DomainError(
            "amplitude must lie in (u0, 1) = (%.6f, 1), got %r" % (lo, alpha)
        )


_SMALL_AMP = 3e-4


def _v_derivs_at_u0(d: int) -> tuple:
    """(V'', V''', V'''', V''''') at the well minimum; V''(u0) = d-2 exactly."""
    q = _q_of(d)
    c = d * (d - 2.0) / 4.0
    u = u0(d)
    v3 = c * (q - 1.0) * (q - 2.0) * u ** (q - 3.0)
    v4 = c * (q - 1.0) * (q - 2.0) * (q - 3.0) * u ** (q - 4.0)
    v5 = c * (q - 1.0) * (q - 2.0) * (q - 3.0) * (q - 4.0) * u ** (q - 5.0)
    return d - 2.0, v3, v4, v5


def _series_gap(d: int, a: float, y) -> np.ndarray:
    """V(u0 + y) - V(u0 + a) by the Taylor series of V about u0."""
    v2, v3, v4, v5 = _v_derivs_at_u0(d)
    y = np.asarray(y, dtype=float)
    return (
        v2 / 2.0 * (y * y - a * a)
        + v3 / 6.0 * (y**3 - a**3)
        + v4 / 24.0 * (y**4 - a**4)
        + v5 / 120.0 * (y**5 - a**5)
    )


def _series_bracket(d: int, a: float, x) -> np.ndarray:
    """(V(u0+a) - V(u0+x)) / (a - x) without forming the difference.

    Uses (a^k - x^k)/(a - x) = sum a^(k-1-i) x^i on the Taylor series, so
    every term is a product of small quantities; valid for |a| small.
    """
    v2, v3, v4, v5 = _v_derivs_at_u0(d)
    x = np.asarray(x, dtype=float)
    h2 = a + x
    h3 = a * a + a * x + x * x
    h4 = a**3 + a * a * x + a * x * x + x**3
    h5 = a**4 + a**3 * x + a * a * x * x + a * x**3 + x**4
    return v2 / 2.0 * h2 + v3 / 6.0 * h3 + v4 / 24.0 * h4 + v5 / 120.0 * h5


def _turning_offset(d: int, amp: float) -> float:
    """Root of V(u0 + y) = V(u0 + amp) below zero, in offset coordinates."""
    return float(
        brentq(
            lambda y: float(_series_gap(d, amp, y)),
            -2.0 * amp,
            -amp * (1.0 - 1e-12),
            xtol=amp * 1e-12,
            rtol=8.9e-16,
        )
    )


def u_min_turning(d: int, alpha: float) -> float:
    """Lower turning point: the root of V(u) = V(alpha) below u0.

    Near the well minimum the two potential values agree to within roundoff
    of V(u0), so the root find switches to the Taylor series of V about u0,
    where the equation is built from well-scaled small terms.
    """
    _check_alpha(d, alpha)
    base = u0(d)
    amp = alpha - base
    if amp < _SMALL_AMP:
        return base + _turning_offset(d, amp)
    level = potential(alpha, d)

    def g(u):
        return potential(u, d) - level

    return float(brentq(g, 1e-14, base, xtol=1e-15, rtol=8.9e-16))


def _theta_rule(n: int):
    """Gauss-Legendre rule mapped to (0, pi/2)."""
    base = gauss_rule(n, 0.0)
    theta = (base.nodes + 1.0) * (math.pi / 4.0)
    wts = base.weights * (math.pi / 4.0)
    return theta, wts


def _w_values(d: int, alpha: float, umin: float, theta: np.ndarray) -> tuple:
    """Regularized integrand factor W on the turning-point substitution.

    With u = umin + (alpha-umin) sin^2(theta) the first-integral difference
    factorizes as V(alpha) - V(u) = (alpha-u)(u-umin) W(u) with W smooth and
    positive. Direct evaluation of the difference cancels catastrophically
    within a relative band of 1e-3 at either endpoint, so there W is replaced
    by a three-term Taylor expansion of V about the endpoint. For small
    amplitudes the whole difference drowns in roundoff of V(u0), so the
    computation moves entirely to offset coordinates about u0, where the
    factored Taylor series keeps every term well scaled.
    """
    st2 = np.sin(theta) ** 2
    base = u0(d)
    amp = alpha - base

    if amp < _SMALL_AMP:
        # all arithmetic in offsets from u0; umin = u0 + off would round off
        off = _turning_offset(d, amp)
        span = amp - off
        x = off + span * st2
        u = base + x
        au = span * (1.0 - st2)
        ub = span * st2
        w = _series_bracket(d, amp, x) / ub
    else:
        span = alpha - umin
        u = umin + span * st2
        au = span * (1.0 - st2)
        ub = span * st2
        level = potential(alpha, d)
        w = np.empty_like(u)
        near_min = ub < 1e-3 * span
        near_max = au < 1e-3 * span
        bulk = ~(near_min | near_max)
        w[bulk] = (level - potential(u[bulk], d)) / (au[bulk] * ub[bulk])
        if np.any(near_min):
            xs = ub[near_min]
            w[near_min] = -(
                _dv(umin, d) + 0.5 * _d2v(umin, d) * xs + _d3v(umin, d) * xs * xs / 6.0
            ) / au[near_min]
        if np.any(near_max):
            xs = au[near_max]
            w[near_max] = (
                _dv(alpha, d) - 0.5 * _d2v(alpha, d) * xs + _d3v(alpha, d) * xs * xs / 6.0
            ) / ub[near_max]
    if np.any(w <= 0.0):
        raise ComputationError("turning-point factor lost positivity")
    return u, au, ub, w


def period(d: int, alpha: float, n_theta: int = 240) -> float:
    """Minimal period tau(alpha) by regularized turning-point quadrature."""
    _check_alpha(d, alpha)
    umin = u_min_turning(d, alpha)
    theta, wts = _theta_rule(n_theta)
    _, _, _, w = _w_values(d, alpha, umin, theta)
    return float(2.0 * math.sqrt(2.0) * np.dot(wts, 1.0 / np.sqrt(w)))


def orbit_integrals(d: int, alpha: float, n_theta: int = 240) -> dict:
    """Period integrals of the orbit: tau, int u^q, int u^2, int u'^2.

    All integrals run over one full period and use the same regularized
    quadrature as the period itself (the kinetic integral carries the
    vanishing factor explicitly, so it needs no regularization).
    """
    _check_alpha(d, alpha)
    q = _q_of(d)
    umin = u_min_turning(d, alpha)
    theta, wts = _theta_rule(n_theta)
    u, au, ub, w = _w_values(d, alpha, umin, theta)
    root = 1.0 / np.sqrt(w)
    fac = 2.0 * math.sqrt(2.0)
    tau = fac * np.dot(wts, root)
    i_q = fac * np.dot(wts, u**q * root)
    i_2 = fac * np.dot(wts, u * u * root)
    i_kin = fac * np.dot(wts, 2.0 * au * ub * np.sqrt(w))
    i_energy = i_kin + (d - 2.0) ** 2 / 4.0 * i_2
    return {
        "tau": float(tau),
        "i_q": float(i_q),
        "i_2": float(i_2),
        "i_kin": float(i_kin),
        "i_energy": float(i_energy),
    }


@dataclass(frozen=True)
class Orbit:
    """One period of the orbit with amplitude alpha."""

    d: int
    alpha: float
    period: float
    t: np.ndarray
    u: np.ndarray
    up: np.ndarray
    energy_constant: float

    def __post_init__(self):
        for arr in (self.t, self.u, self.up):
            arr.setflags(write=False)


def _rhs(t, y, d, q):
    u, up = y
    force = (d - 2.0) ** 2 / 4.0 * u - d * (d - 2.0) / 4.0 * np.abs(u) ** (
        q - 2.0
    ) * u
    return (up, force)


def _integrate(d: int, alpha: float, t_end: float, rtol=1e-12, atol=1e-14, events=None):
    q = _q_of(d)
    sol = solve_ivp(
        _rhs,
        (0.0, t_end),
        (alpha, 0.0),
        args=(d, q),
        method="DOP853",
        rtol=rtol,
        atol=atol,
        dense_output=True,
        events=events,
    )
    if not sol.success:
        raise ComputationError("orbit integration failed: %s" % sol.message)
    return sol


def solve_orbit(
    d: int,
    alpha: float,
    n_samples: int = 1024,
    rtol: float = 1e-12,
    atol: float = 1e-14,
) -> Orbit:
    """Integrate one period adaptively; the period comes from event detection.

    The profile starts at its maximum (u(0) = alpha, u'(0) = 0), descends to
    the turning point at half period, detected as the rising zero of u', and
    returns symmetrically. The independent quadrature period brackets the
    integration window.
    """
    _check_alpha(d, alpha)
    tau_quad = period(d, alpha)

    def turning(t, y, *args):
        return y[1]

    turning.direction = 1.0
    sol = _integrate(d, alpha, 0.75 * tau_quad, rtol, atol, events=turning)
    if len(sol.t_events[0]) == 0:
        raise ComputationError("no turning point detected within the window")
    tau = 2.0 * float(sol.t_events[0][0])
    sol_full = _integrate(d, alpha, tau, rtol, atol)
    tgrid = np.linspace(0.0, tau, n_samples)
    vals = sol_full.sol(tgrid)
    return Orbit(
        d=d,
        alpha=alpha,
        period=tau,
        t=tgrid,
        u=vals[0],
        up=vals[1],
        energy_constant=float(potential(alpha, d)),
    )


def energy_drift(d: int, alpha: float, n_periods: int = 10) -> float:
    """Max drift of the first integral over several periods."""
    _check_alpha(d, alpha)
    tau = period(d, alpha)
    sol = _integrate(d, alpha, n_periods * tau)
    tgrid = np.linspace(0.0, n_periods * tau, 2048)
    u, up = sol.sol(tgrid)
    h = 0.5 * up * up + potential(u, d)
    return float(np.max(np.abs(h - potential(alpha, d))))


def inverse_period(d: int, T: float) -> float:
    """Amplitude with tau(alpha) = T, using monotonicity of the period map."""
    ts = t_star(d)
    if not T > ts:
        raise DomainError("inverse period needs T > T_* = %.12g" % ts)
    base = u0(d)
    lo = base * (1.0 + 1e-9)
    if period(d, lo) >= T:
        raise ComputationError("period at the lower bracket already exceeds T")
    hi = None
    for j in range(2, 15):
        cand = 1.0 - 10.0 ** (-j)
        if cand <= lo:
            continue
        if period(d, cand) > T:
            hi = cand
            break
    if hi is None:
        raise ComputationError("could not bracket the amplitude below 1")
    return float(brentq(lambda a: period(d, a) - T, lo, hi, xtol=1e-14, rtol=8.9e-16))


# ---------------------------------------------------------------------------
# periodic profiles


@dataclass(frozen=True)
class PeriodicProfile:
    """omega-independent function on the cylinder.

    fourier holds plain trigonometric coefficients [a0, a1..aK, b1..bK] for
    u(t) = a0 + sum a_k cos(2 pi k t / T) + b_k sin(2 pi k t / T); samples
    sit on the uniform grid t_j = j T / M.
    """

    params: CylinderParams
    fourier: np.ndarray
    samples: np.ndarray

    def __post_init__(self):
        if len(self.fourier) % 2 != 1:
            raise PreconditionError("fourier vector must have odd length 2K+1")
        for arr in (self.fourier, self.samples):
            arr.setflags(write=False)

    @property
    def n_modes(self) -> int:
        return (len(self.fourier) - 1) // 2


def profile_from_samples(
    params: CylinderParams, samples: np.ndarray, n_modes: int | None = None
) -> PeriodicProfile:
    """Analyze uniform-grid samples into trigonometric coefficients."""
    samples = np.ascontiguousarray(samples, dtype=float)
    m = len(samples)
    kmax = (m - 1) // 2
    if n_modes is None:
        n_modes = kmax
    if n_modes > kmax:
        raise PreconditionError(
            "%d modes need at least %d samples" % (n_modes, 2 * n_modes + 1)
        )
    spec = np.fft.rfft(samples)
    four = np.empty(2 * n_modes + 1)
    four[0] = spec[0].real / m
    four[1 : n_modes + 1] = 2.0 * spec[1 : n_modes + 1].real / m
    four[n_modes + 1 :] = -2.0 * spec[1 : n_modes + 1].imag / m
    return PeriodicProfile(params=params, fourier=four, samples=samples)


def synthesize_profile(profile: PeriodicProfile, t) -> np.ndarray:
    """Evaluate the trigonometric sum at arbitrary times."""
    t = np.asarray(t, dtype=float)
    k = np.arange(1, profile.n_modes + 1)
    ang = 2.0 * math.pi / profile.params.T * np.outer(t, k)
    out = (
        profile.fourier[0]
        + np.cos(ang) @ profile.fourier[1 : profile.n_modes + 1]
        + np.sin(ang) @ profile.fourier[profile.n_modes + 1 :]
    )
    return out


def profile_from_fourier(
    params: CylinderParams, fourier: np.ndarray, n_grid: int = 1024
) -> PeriodicProfile:
    fourier = np.ascontiguousarray(fourier, dtype=float)
    stub = PeriodicProfile.__new__(PeriodicProfile)
    object.__setattr__(stub, "params", params)
    object.__setattr__(stub, "fourier", fourier)
    tgrid = np.arange(n_grid) * (params.T / n_grid)
    samples = synthesize_profile(stub, tgrid)
    return PeriodicProfile(params=params, fourier=fourier, samples=samples)


def profile_norm2_parseval(profile: PeriodicProfile) -> float:
    """L^2(dt) norm over one period from the coefficients."""
    f = profile.fourier
    val = profile.params.T * (f[0] ** 2 + 0.5 * float(np.dot(f[1:], f[1:])))
    return math.sqrt(val)


def profile_norm2_grid(profile: PeriodicProfile) -> float:
    m = len(profile.samples)
    return math.sqrt(profile.params.T / m * float(np.dot(profile.samples, profile.samples)))


def _rfft_mult(m: int) -> np.ndarray:
    n = m // 2 + 1
    mult = np.full(n, 2.0)
    mult[0] = 1.0
    if m % 2 == 0:
        mult[-1] = 1.0
    return mult


def energy_profile(profile: PeriodicProfile) -> float:
    """E_T[u] = |S^(d-1)| int (u'^2 + ((d-2)/2)^2 u^2) dt, spectrally exact."""
    p = profile.params
    m = len(profile.samples)
    spec = np.fft.rfft(profile.samples)
    omega = 2.0 * math.pi / p.T * np.arange(len(spec))
    beta2 = (p.d - 2.0) ** 2 / 4.0
    mult = _rfft_mult(m)
    val = p.T / (m * m) * float(np.dot(mult * (omega**2 + beta2), np.abs(spec) ** 2))
    return sphere_area(p.d - 1) * val


def energy_bilinear_profile(p1: PeriodicProfile, p2: PeriodicProfile) -> float:
    if p1.params != p2.params or len(p1.samples) != len(p2.samples):
        raise PreconditionError("profiles must share cylinder and grid")
    p = p1.params
    m = len(p1.samples)
    s1 = np.fft.rfft(p1.samples)
    s2 = np.fft.rfft(p2.samples)
    omega = 2.0 * math.pi / p.T * np.arange(len(s1))
    beta2 = (p.d - 2.0) ** 2 / 4.0
    mult = _rfft_mult(m)
    val = (
        p.T
        / (m * m)
        * float(np.dot(mult * (omega**2 + beta2), (s1 * np.conj(s2)).real))
    )
    return sphere_area(p.d - 1) * val


def lq_norm_profile(profile: PeriodicProfile, p_exp: float | None = None) -> float:
    p = profile.params
    if p_exp is None:
        p_exp = p.q
    m = len(profile.samples)
    val = (
        sphere_area(p.d - 1)
        * p.T
        / m
        * float(np.sum(np.abs(profile.samples) ** p_exp))
    )
    return val ** (1.0 / p_exp)


def quotient_profile(profile: PeriodicProfile) -> float:
    nq = lq_norm_profile(profile)
    if nq == 0.0:
        raise DomainError("quotient undefined for the zero profile")
    return energy_profile(profile) / nq**2


def ustar_profile(d: int, T: float, n_grid: int = 4096) -> PeriodicProfile:
    """The optimizer branch as a profile: constant below T_*, orbit above."""
    params = CylinderParams(d=d, T=T)
    if T <= params.t_star:
        samples = np.full(n_grid, u0(d))
        return profile_from_samples(params, samples, n_modes=1)
    alpha = inverse_period(d, T)
    sol = _integrate(d, alpha, T)
    tgrid = np.arange(n_grid) * (T / n_grid)
    u, _ = sol.sol(tgrid)
    return profile_from_samples(params, u, n_modes=min(128, (n_grid - 1) // 2))


def sobolev_constant_cylinder(
    d: int,
    T: float,
    cross_validate: bool = False,
    seed: int = 0,
    n_theta: int = 240,
) -> float:
    """Sharp constant S_d(T) on the cylinder.

    Constant branch ((d-2)^2/4) |Sigma_T|^(1-2/q) for T <= T_*; the
    single-bump orbit branch quotient for T > T_*. With ``cross_validate``
    a spectral gradient descent from generic starts must agree to 1e-4
    relative, otherwise an inconsistency is raised.
    """
    params = CylinderParams(d=d, T=T)
    q = params.q
    area = sphere_area(d - 1)
    if T <= params.t_star:
        value = (d - 2.0) ** 2 / 4.0 * (T * area) ** (1.0 - 2.0 / q)
    else:
        alpha = inverse_period(d, T)
        ints = orbit_integrals(d, alpha, n_theta=n_theta)
        value = area ** (1.0 - 2.0 / q) * ints["i_energy"] / ints["i_q"] ** (2.0 / q)
    if cross_validate:
        descent, _ = minimize_quotient(d, T, seed=seed)
        if abs(descent - value) > 1e-4 * abs(value):
            raise InconsistencyError(
                "descent value %.10g vs branch value %.10g for T=%g"
                % (descent, value, T)
            )
    return float(value)


def orbit_branch_value(d: int, T: float, k: int = 1, n_theta: int = 240) -> float:
    """Quotient of the k-bump orbit branch on the period-T cylinder.

    Diagnostics only for k >= 2: tiling the period-T/k orbit k times gives a
    critical point whose quotient exceeds the single-bump value, so these
    branches never realize S_d(T).
    """
    if k < 1:
        raise DomainError("bump count must be a positive integer")
    params = CylinderParams(d=d, T=T)
    q = params.q
    if T / k <= params.t_star:
        raise DomainError("no k-bump branch: T/k must exceed T_*")
    alpha = inverse_period(d, T / k)
    ints = orbit_integrals(d, alpha, n_theta=n_theta)
    area = sphere_area(d - 1)
    return float(
        area ** (1.0 - 2.0 / q)
        * (k * ints["i_energy"])
        / (k * ints["i_q"]) ** (2.0 / q)
    )


def l1_factorization_residual(orbit: Orbit) -> float:
    """Residual of the degree-1 annihilation identity along the orbit.

    v = e^(sigma t)(u' + sigma (d-2)/2 u), sigma = +-1, solves the degree-1
    Hessian ODE -v'' + ((d-1) + ((d-2)/2)^2) v = (d(d+2)/4) u^(q-2) v exactly;
    returns the max grid residual relative to the max of |v|, worst sigma.
    """
    d = orbit.d
    q = _q_of(d)
    beta = (d - 2.0) / 2.0
    u, up, t = orbit.u, orbit.up, orbit.t
    upp = beta**2 * u - d * (d - 2.0) / 4.0 * u ** (q - 1.0)
    uppp = beta**2 * up - d * (d - 2.0) / 4.0 * (q - 1.0) * u ** (q - 2.0) * up
    worst = 0.0
    for sigma in (1.0, -1.0):
        expf = np.exp(sigma * t)
        v = expf * (up + sigma * beta * u)
        vpp = expf * (
            uppp + sigma * beta * upp + 2.0 * sigma * upp + 2.0 * beta * up
            + up + sigma * beta * u
        )
        res = -vpp + (d - 1.0 + beta**2) * v - d * (d + 2.0) / 4.0 * u ** (
            q - 2.0
        ) * v
        worst = max(worst, float(np.max(np.abs(res)) / np.max(np.abs(v))))
    return worst


def cosh_trial_bound(d: int, T: float, n_nodes: int = 400) -> float:
    """Upper bound on S_d(T) from the truncated homoclinic trial profile.

    Places cosh^(-(d-2)/2) centered in the period window and evaluates its
    quotient by Gauss quadrature on (0, T/2); always strictly between
    S_d(T) and the sphere constant S_d.
    """
    CylinderParams(d=d, T=T)
    q = _q_of(d)
    base = gauss_rule(n_nodes, 0.0)
    tt = (base.nodes + 1.0) * (T / 4.0)
    wt = base.weights * (T / 4.0)
    qq = np.cosh(tt) ** (-(d - 2.0) / 2.0)
    qp2 = (d - 2.0) ** 2 / 4.0 * qq * qq * np.tanh(tt) ** 2
    area = sphere_area(d - 1)
    e_half = float(np.dot(wt, qp2 + (d - 2.0) ** 2 / 4.0 * qq * qq))
    q_half = float(np.dot(wt, qq**q))
    return 2.0 * area * e_half / (2.0 * area * q_half) ** (2.0 / q)


def minimize_quotient(
    d: int,
    T: float,
    n_grid: int = 512,
    seed: int = 0,
    n_starts: int = 3,
    maxiter: int = 4000,
) -> tuple:
    """Direct minimization of the quotient over gridded profiles.

    Works on the sample values with FFT-differentiation energies; returns
    (value, PeriodicProfile of the best minimizer found). Serves as the
    independent route validating the branch formula.
    """
    params = CylinderParams(d=d, T=T)
    q = params.q
    area = sphere_area(d - 1)
    m = n_grid
    h = T / m
    omega = 2.0 * math.pi / T * np.arange(m // 2 + 1)
    beta2 = (d - 2.0) ** 2 / 4.0

    def split(x):
        spec = np.fft.rfft(x)
        lap = np.fft.irfft(omega**2 * spec, n=m)
        kin = float(np.dot(x, lap)) * h
        mass = float(np.dot(x, x)) * h
        e_val = area * (kin + beta2 * mass)
        grad_e = area * h * (2.0 * lap + 2.0 * beta2 * x)
        iq = float(np.sum(np.abs(x) ** q)) * h
        nq2 = (area * iq) ** (2.0 / q)
        grad_n = (
            2.0
            * (area * iq) ** (2.0 / q - 1.0)
            * area
            * h
            * np.abs(x) ** (q - 2.0)
            * x
        )
        return e_val, grad_e, nq2, grad_n

    def objective(x):
        e_val, grad_e, nq2, grad_n = split(x)
        f = e_val / nq2
        g = (grad_e - f * grad_n) / nq2
        return f, g

    tgrid = np.arange(m) * h
    base = u0(d)
    rng = np.random.default_rng(seed)
    starts = [
        base + 0.3 * base * np.cos(2.0 * math.pi * tgrid / T),
        base - 0.3 * base * np.cos(2.0 * math.pi * tgrid / T),
    ]
    for _ in range(max(0, n_starts - 2)):
        bump = rng.standard_normal(5)
        pert = sum(
            bump[j] * np.cos(2.0 * math.pi * (j + 1) * tgrid / T + bump[j] ** 2)
            for j in range(5)
        )
        starts.append(base * (1.0 + 0.1 * pert))

    best_val, best_x = math.inf, None
    for x0 in starts:
        res = minimize(
            objective,
            x0,
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": maxiter, "ftol": 1e-15, "gtol": 1e-11},
        )
        if res.fun < best_val:
            best_val, best_x = float(res.fun), res.x
    if best_x is None:
        raise ComputationError("quotient descent failed from every start")
    profile = profile_from_samples(params, best_x, n_modes=min(128, (m - 1) // 2))
    return best_val, profile


# ---------------------------------------------------------------------------
# Hessian blocks (Hill discretization)


def _trig_basis(T: float, n_modes: int, n_grid: int) -> tuple:
    """Orthonormal trig basis on the uniform grid and its -d^2/dt^2 symbols.

    Row order: constant, cos_1, sin_1, cos_2, sin_2, ... so the low modes
    appearing in kernel statements sit at fixed indices.
    """
    if n_grid < 2 * (2 * n_modes + 1):
        raise PreconditionError("grid too coarse for the requested modes")
    t = np.arange(n_grid) * (T / n_grid)
    n = 2 * n_modes + 1
    phi = np.empty((n, n_grid))
    phi[0] = 1.0 / math.sqrt(T)
    ksq = np.zeros(n)
    for k in range(1, n_modes + 1):
        ang = 2.0 * math.pi * k / T * t
        phi[2 * k - 1] = math.sqrt(2.0 / T) * np.cos(ang)
        phi[2 * k] = math.sqrt(2.0 / T) * np.sin(ang)
        ksq[2 * k - 1] = ksq[2 * k] = (2.0 * math.pi * k / T) ** 2
    return phi, ksq, t


def _branch_grid(d: int, T: float, n_grid: int) -> tuple:
    """Samples of the optimizer branch and its derivative on the grid."""
    ts = t_star(d)
    tgrid = np.arange(n_grid) * (T / n_grid)
    if T <= ts:
        return np.full(n_grid, u0(d)), np.zeros(n_grid), tgrid
    alpha = inverse_period(d, T)
    sol = _integrate(d, alpha, T)
    u, up = sol.sol(tgrid)
    return u, up, tgrid


def _assemble_block(
    d: int,
    T: float,
    ell: int,
    n_modes: int,
    n_grid: int,
    corrected: bool,
    ustar: np.ndarray | None = None,
) -> tuple:
    """Galerkin matrices (L, B) of the degree-ell Hessian block.

    L is the second-variation operator -d^2/dt^2 + ell(ell+d-2) + ((d-2)/2)^2
    - (d(d+2)/4) u_*^(q-2), plus the rank-one term d <u^(q-1), .> u^(q-1) /
    int u^q when ``corrected`` (only meaningful at ell = 0); B is the
    E_T-form -d^2/dt^2 + ell(ell+d-2) + ((d-2)/2)^2.
    """
    q = _q_of(d)
    phi, ksq, _ = _trig_basis(T, n_modes, n_grid)
    if ustar is None:
        ustar, _, _ = _branch_grid(d, T, n_grid)
    h = T / n_grid
    mell = ell * (ell + d - 2.0) + (d - 2.0) ** 2 / 4.0
    wgrid = d * (d + 2.0) / 4.0 * ustar ** (q - 2.0)
    lmat = np.diag(ksq + mell) - (phi * wgrid[None, :]) @ phi.T * h
    if corrected:
        v = phi @ (ustar ** (q - 1.0)) * h
        iq = float(np.sum(ustar**q)) * h
        lmat = lmat + (d / iq) * np.outer(v, v)
    bmat = np.diag(ksq + mell)
    return lmat, bmat, phi


def hessian_block_spectrum(
    d: int,
    T: float,
    ell: int,
    n_modes: int = 128,
    n_grid: int = 4096,
    corrected: bool | None = None,
) -> SpectrumReport:
    """Spectrum of the degree-ell Hessian block at the optimizer branch.

    ``corrected`` defaults to True exactly for ell = 0, where the
    second variation carries the rank-one q-norm term; other degrees never
    see it. Kernel dimensions: 1 below T_* (the scaling direction), 3 at T_*
    (scaling plus the incipient cos/sin pair), 2 above (scaling and
    translation).
    """
    CylinderParams(d=d, T=T)
    if ell < 0:
        raise DomainError("degree must be nonnegative")
    if corrected is None:
        corrected = ell == 0
    lmat, _, _ = _assemble_block(d, T, ell, n_modes, n_grid, corrected)
    vals = np.linalg.eigvalsh(lmat)
    return make_spectrum_report(vals, (2 * n_modes + 1, n_grid))


def zero_mode_pairing(d: int, T: float, n_modes: int = 128, n_grid: int = 4096) -> float:
    """<du_*, L_0 du_*> for the translation mode (zero above T_*)."""
    u, up, _ = _branch_grid(d, T, n_grid)
    lmat, _, phi = _assemble_block(d, T, 0, n_modes, n_grid, corrected=True, ustar=u)
    coords = phi @ up * (T / n_grid)
    return float(coords @ lmat @ coords)


def c_T_formula(d: int, T: float) -> float:
    """Closed form of the quadratic stability constant, valid for T <= T_*."""
    ts = t_star(d)
    if T > ts * (1.0 + 1e-12):
        raise DomainError("closed form only holds up to T_*")
    mu = min((2.0 * math.pi / T) ** 2, d - 1.0)
    return (mu - (d - 2.0)) / (mu + ((d - 2.0) / 2.0) ** 2)


def c_T_numeric(
    d: int,
    T: float,
    n_modes: int = 128,
    n_grid: int = 4096,
    ell_max: int = 6,
) -> float:
    """Constrained Rayleigh minimum of <v, L v> / E_T[v] over degrees.

    In the degree-0 block the minimization runs orthogonally (in the E_T
    inner product) to the optimizer and its translation mode; higher degrees
    are unconstrained. The overall constant is the minimum over degrees,
    which is attained among the low ones since the blocks grow with ell.
    """
    u, up, _ = _branch_grid(d, T, n_grid)
    h = T / n_grid
    mins = []
    for ell in range(ell_max + 1):
        lmat, bmat, phi = _assemble_block(
            d, T, ell, n_modes, n_grid, corrected=(ell == 0), ustar=u
        )
        if ell == 0:
            cu = bmat @ (phi @ u * h)
            cdu = bmat @ (phi @ up * h)
            cons = np.vstack([cu, cdu])
            keep = [row for row in cons if np.linalg.norm(row) > 1e-12]
            z = null_space(np.vstack(keep))
            vals = eigh(
                z.T @ lmat @ z, z.T @ bmat @ z, eigvals_only=True, subset_by_index=(0, 0)
            )
        else:
            vals = eigh(lmat, bmat, eigvals_only=True, subset_by_index=(0, 0))
        mins.append(float(vals[0]))
    best = min(mins)
    if mins.index(best) >= ell_max:
        raise ComputationError("stability minimum not attained among low degrees")
    return best


def c_T(d: int, T: float, n_modes: int = 128, n_grid: int = 4096) -> float:
    """Quadratic stability constant: closed form below T_*, numeric above."""
    ts = t_star(d)
    if T <= ts * (1.0 + 1e-12):
        return c_T_formula(d, min(T, ts))
    return c_T_numeric(d, T, n_modes=n_modes, n_grid=n_grid)


# ---------------------------------------------------------------------------
# quartic constants at the bifurcation period


@dataclass(frozen=True)
class QuarticConstants:
    """Degenerate-stability data at T = T_*."""

    d: int
    c_star: float
    resolvent_profile: PeriodicProfile
    resolvent_coefficient: float
    inner_product: float
    gap: float
    limit_constant: float
    diagnostics: dict


def quartic_constants(
    d: int, n_modes: int = 128, n_grid: int = 4096, rel_tol: float = 1e-6
) -> QuarticConstants:
    """Quartic coefficient, resolvent correction, and their gap at T_*.

    The numeric route solves the degree-0 Hessian block for the resolvent of
    the projected quartic source and forms the inner product; every quantity
    is compared against its closed form and any mismatch beyond ``rel_tol``
    relative raises an inconsistency.
    """
    ts = t_star(d)
    params = CylinderParams(d=d, T=ts)
    q = params.q
    base = u0(d)
    area = sphere_area(d - 1)
    sigma = ts * area

    lmat, _, phi = _assemble_block(d, ts, 0, n_modes, n_grid, corrected=True)
    h = ts / n_grid
    tgrid = np.arange(n_grid) * h
    r_star = np.cos(2.0 * math.pi * tgrid / ts)
    f_star = (d - 2.0) ** 2 / 8.0 * (q - 1.0) * (q - 2.0) / base * r_star**2

    evals, evecs = np.linalg.eigh(lmat)
    scale = float(np.max(np.abs(evals)))
    ker = np.abs(evals) < 1e-6 * scale
    if int(np.sum(ker)) != 3:
        raise ComputationError(
            "expected a 3-dimensional kernel at T_*, found %d" % int(np.sum(ker))
        )
    fcoords = phi @ f_star * h
    fperp = fcoords - evecs[:, ker] @ (evecs[:, ker].T @ fcoords)
    inv = np.zeros_like(evals)
    inv[~ker] = 1.0 / evals[~ker]
    scoords = evecs @ (inv * (evecs.T @ fcoords))

    idx_cos2 = 3
    coeff_num = float(scoords[idx_cos2] * math.sqrt(2.0 / ts))
    coeff_closed = (d - 2.0) / 48.0 * (q - 1.0) * (q - 2.0) / base
    stray = np.abs(np.delete(scoords, idx_cos2))
    if np.max(stray) > 1e-8 * abs(scoords[idx_cos2]):
        raise InconsistencyError("resolvent is not a pure second-harmonic mode")
    if abs(coeff_num - coeff_closed) > rel_tol * abs(coeff_closed):
        raise InconsistencyError(
            "resolvent coefficient %.12g vs closed form %.12g"
            % (coeff_num, coeff_closed)
        )

    ip_num = area * float(fperp @ scoords)
    ip_closed = (
        (d - 2.0) ** 2 / 4.0 / 96.0 * (q - 1.0) ** 2 * (q - 2.0) * sigma / base**2
    )
    if abs(ip_num - ip_closed) > rel_tol * abs(ip_closed):
        raise InconsistencyError(
            "resolvent inner product %.12g vs closed form %.12g" % (ip_num, ip_closed)
        )

    mean_r2 = float(np.mean(r_star**2))
    mean_r4 = float(np.mean(r_star**4))
    bracket = -(q - 3.0) / 3.0 * mean_r4 + (q - 1.0) * mean_r2**2
    c_num = (
        (d - 2.0) ** 2 / 4.0 * (q - 1.0) * (q - 2.0) / 4.0 / base**2 * sigma * bracket
    )
    c_closed = (
        (d - 2.0) ** 2 / 4.0 / 32.0 * (q - 1.0) * (q - 2.0) * (q + 1.0) * sigma
        / base**2
    )
    if abs(c_num - c_closed) > rel_tol * abs(c_closed):
        raise InconsistencyError(
            "quartic coefficient %.12g vs closed form %.12g" % (c_num, c_closed)
        )

    gap = c_closed - ip_closed
    limit = (q + 2.0) * (q - 2.0) / (12.0 * (q - 1.0))
    e_u = (d - 2.0) ** 2 / 4.0 * base**2 * sigma
    e_r = sigma * (d - 2.0) * (d + 2.0) / 8.0
    limit_check = e_u * gap / e_r**2
    if abs(limit_check - limit) > rel_tol * abs(limit):
        raise InconsistencyError(
            "limit identity %.12g vs closed form %.12g" % (limit_check, limit)
        )

    res_samples = synthesize_profile(
        profile_from_fourier(
            params,
            np.array([0.0, 0.0, coeff_num, 0.0, 0.0]),
            n_grid=8,
        ),
        tgrid,
    )
    resolvent = profile_from_samples(params, res_samples, n_modes=4)
    return QuarticConstants(
        d=d,
        c_star=c_closed,
        resolvent_profile=resolvent,
        resolvent_coefficient=coeff_closed,
        inner_product=ip_closed,
        gap=gap,
        limit_constant=limit,
        diagnostics={
            "c_star_numeric": c_num,
            "inner_product_numeric": ip_num,
            "resolvent_coefficient_numeric": coeff_num,
            "limit_identity": limit_check,
            "kernel_eigenvalues": evals[ker].tolist(),
        },
    )


@dataclass(frozen=True)
class DegenerateCurve:
    """Quartic stability quotient along the degenerate trial ray."""

    eps: np.ndarray
    quotient: np.ndarray
    extrapolated_limit: float
    error_estimate: float
    limit_constant: float


def degenerate_quotient_curve(
    d: int,
    eps_grid=(0.02, 0.01, 0.005),
    with_resolvent: bool = True,
    n_grid: int = 4096,
) -> DegenerateCurve:
    """Quotient E (E - S ||u||_q^2) / delta^4 along u = u_* + eps r + eps^2 s.

    r is the incipient cosine mode and s the resolvent correction (dropped
    when ``with_resolvent`` is false). The orthogonality of s to the kernel
    directions makes delta^2 = eps^2 E[r] + eps^4 E[s] exact, so the curve
    extrapolates to the closed-form quartic limit (or to the larger s = 0
    value C_* E[u_*]/E[r]^2).
    """
    qc = quartic_constants(d, n_grid=n_grid)
    ts = t_star(d)
    params = CylinderParams(d=d, T=ts)
    q = params.q
    base = u0(d)
    area = sphere_area(d - 1)
    sigma = ts * area
    h = ts / n_grid
    tgrid = np.arange(n_grid) * h
    r_samples = np.cos(2.0 * math.pi * tgrid / ts)
    if with_resolvent:
        s_samples = synthesize_profile(qc.resolvent_profile, tgrid)
    else:
        s_samples = np.zeros(n_grid)

    r_prof = profile_from_samples(params, r_samples, n_modes=4)
    s_prof = profile_from_samples(params, s_samples, n_modes=4)
    scale_s = max(float(np.max(np.abs(s_samples))), 1.0)
    if abs(float(np.sum(s_samples)) * h) > 1e-10 * ts * scale_s:
        raise PreconditionError("resolvent correction must have zero mean")
    if abs(energy_bilinear_profile(r_prof, s_prof)) > 1e-10 * scale_s:
        raise PreconditionError("correction must be energy-orthogonal to the mode")
    dr_samples = -np.sin(2.0 * math.pi * tgrid / ts)
    dr_prof = profile_from_samples(params, dr_samples, n_modes=4)
    if abs(energy_bilinear_profile(dr_prof, s_prof)) > 1e-10 * scale_s:
        raise PreconditionError(
            "correction must be energy-orthogonal to the translation mode"
        )

    e_u = (d - 2.0) ** 2 / 4.0 * base**2 * sigma
    e_r = energy_profile(r_prof)
    e_s = energy_profile(s_prof)
    s_const = sobolev_constant_cylinder(d, ts)

    eps = np.asarray(sorted(eps_grid, reverse=True), dtype=float)
    if np.any(eps <= 0.0):
        raise DomainError("eps grid must be positive")
    quot = np.empty(len(eps))
    for i, e in enumerate(eps):
        u = base + e * r_samples + e * e * s_samples
        energy_val = e_u + e * e * e_r + e**4 * e_s
        nq2 = (area * h * float(np.sum(np.abs(u) ** q))) ** (2.0 / q)
        delta4 = (e * e * e_r + e**4 * e_s) ** 2
        quot[i] = energy_val * (energy_val - s_const * nq2) / delta4

    from .stability import _extrapolate

    limit, err = _extrapolate(eps, quot)
    target = qc.limit_constant if with_resolvent else qc.c_star * e_u / e_r**2
    return DegenerateCurve(
        eps=eps,
        quotient=quot,
        extrapolated_limit=float(limit),
        error_estimate=float(err),
        limit_constant=float(target),
    )


# ---------------------------------------------------------------------------
# split stability at T_*


@dataclass(frozen=True)
class SplitReport:
    """Two-sided comparison of the deficit against the split remainder."""

    family: str
    eps: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    slope_lhs: float
    slope_rhs: float
    signs: dict


def split_stability_terms(profile: PeriodicProfile) -> tuple:
    """(deficit, split remainder) at T_* for a profile near the constant.

    The remainder reads E[pi_1 v]^2 / E[u] + E[pi_perp v] where v is the
    deviation from the constant optimizer, pi_1 projects onto the incipient
    cos/sin pair and pi_perp onto the complement of span{1, cos, sin}. Both
    sides vanish at the optimizer itself.
    """
    p = profile.params
    if abs(p.T - p.t_star) > 1e-12 * p.t_star:
        raise PreconditionError("split comparison is defined at T = T_*")
    d = p.d
    base = u0(d)
    m = len(profile.samples)
    v = profile.samples - base
    vprof = profile_from_samples(p, v)
    k1 = vprof.n_modes
    four = np.array(vprof.fourier)
    pi1 = np.zeros_like(four)
    pi1[1] = four[1]
    pi1[k1 + 1] = four[k1 + 1]
    perp = np.array(four)
    perp[0] = 0.0
    perp[1] = 0.0
    perp[k1 + 1] = 0.0
    pi1_prof = profile_from_fourier(p, pi1, n_grid=m)
    perp_prof = profile_from_fourier(p, perp, n_grid=m)
    e_u = energy_profile(profile)
    lhs = e_u - sobolev_constant_cylinder(d, p.T) * lq_norm_profile(profile) ** 2
    rhs = energy_profile(pi1_prof) ** 2 / e_u + energy_profile(perp_prof)
    return lhs, rhs


def split_stability_check(
    d: int,
    family: str = "pi",
    eps_grid=None,
    scan_c=(0.1, 0.5, 1.0),
    n_grid: int = 2048,
) -> SplitReport:
    """Scaling of deficit vs split remainder along a perturbation family.

    family "pi" perturbs by the incipient cosine (quartic deficit), family
    "pi_perp" by the second harmonic (quadratic deficit). Log-log slopes are
    fitted over the eps grid and the sign of (deficit - c * remainder) is
    reported for each scan constant.
    """
    if family not in ("pi", "pi_perp"):
        raise DomainError("family must be 'pi' or 'pi_perp'")
    ts = t_star(d)
    params = CylinderParams(d=d, T=ts)
    base = u0(d)
    if eps_grid is None:
        eps_grid = np.geomspace(0.005, 0.05, 7)
    eps = np.asarray(eps_grid, dtype=float)
    tgrid = np.arange(n_grid) * (ts / n_grid)
    mode = 1 if family == "pi" else 2
    r = np.cos(2.0 * math.pi * mode * tgrid / ts)
    lhs = np.empty(len(eps))
    rhs = np.empty(len(eps))
    for i, e in enumerate(eps):
        prof = profile_from_samples(params, base + e * r)
        lhs[i], rhs[i] = split_stability_terms(prof)
    slope_lhs = float(np.polyfit(np.log(eps), np.log(np.maximum(lhs, 1e-300)), 1)[0])
    slope_rhs = float(np.polyfit(np.log(eps), np.log(np.maximum(rhs, 1e-300)), 1)[0])
    signs = {
        float(c): bool(np.all(lhs - c * rhs >= -1e-12 * np.abs(lhs).max()))
        for c in scan_c
    }
    return SplitReport(
        family=family,
        eps=eps,
        lhs=lhs,
        rhs=rhs,
        slope_lhs=slope_lhs,
        slope_rhs=slope_rhs,
        signs=signs,
    )


def distance_to_branch(profile: PeriodicProfile) -> tuple:
    """Energy distance from a profile to the optimizer set of its cylinder.

    Returns (delta, c, shift): below T_* the optimizer set is the constants
    (shift meaningless, returned 0); above it is the orbit circle of
    multiples c u_*(. - shift), scanned over all grid shifts and refined.
    """
    p = profile.params
    d = p.d
    e_u = energy_profile(profile)
    if p.T <= p.t_star:
        area = sphere_area(d - 1)
        beta2 = (d - 2.0) ** 2 / 4.0
        m = len(profile.samples)
        mean_int = p.T / m * float(np.sum(profile.samples))
        e_one = beta2 * area * p.T
        cross = beta2 * area * mean_int
        c_best = cross / e_one
        delta_sq = e_u - cross**2 / e_one
        return math.sqrt(max(delta_sq, 0.0)), c_best, 0.0

    m = len(profile.samples)
    ustar, _, _ = _branch_grid(d, p.T, m)
    e_star = energy_profile(profile_from_samples(p, ustar))
    spec_u = np.fft.rfft(profile.samples)
    spec_s = np.fft.rfft(ustar)
    omega = 2.0 * math.pi / p.T * np.arange(len(spec_u))
    beta2 = (d - 2.0) ** 2 / 4.0
    mult = _rfft_mult(m)
    weight = mult * (omega**2 + beta2) * p.T / (m * m) * sphere_area(d - 1)

    def cross_at(sigma: float) -> float:
        phase = np.exp(-1j * omega * sigma)
        return float(np.dot(weight, (spec_u * np.conj(spec_s * phase)).real))

    subs = np.arange(m) * (p.T / m)
    subs = subs[:: max(1, m // 256)]
    vals = np.array([cross_at(sg) for sg in subs])
    i0 = int(np.argmax(np.abs(vals)))
    span = p.T / len(subs)
    res = minimize_scalar(
        lambda sg: -abs(cross_at(sg)),
        bracket=(subs[i0] - span, subs[i0], subs[i0] + span),
        options={"xtol": 1e-12},
    )
    sigma_best = float(res.x) % p.T
    cr = cross_at(sigma_best)
    c_best = cr / e_star
    delta_sq = e_u - cr * cr / e_star
    return math.sqrt(max(delta_sq, 0.0)), c_best, sigma_best
