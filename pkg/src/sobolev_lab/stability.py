"""Deficit, distance to the optimizer manifold, and stability quotients.

The distance from a zonal U to the manifold of optimizers reduces, by
conformal symmetry, to maximizing the moment

    G(zeta) = integral of Q_zeta^(q-1) U over the sphere

over the unit ball. For zonal U the moment only depends on the component a
of zeta along the axis and the orthogonal radius rho, so the search runs
over a 2-parameter disc; the integral itself is a tensor-product Gauss
quadrature evaluated by a dedicated kernel. The squared distance is then

    delta^2 = E_s[U] - multiplier(0) G(zeta*)^2 / |S^d|,

attained by the multiple c* Q_(zeta*) with c* = G(zeta*)/|S^d|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from . import _kernels
from .conformal import ConformalParam
from .errors import (
    ComputationError,
    DegenerateInputError,
    DomainError,
    PreconditionError,
)
from .specialfn import gauss_rule, sphere_area
from .zonal import (
    ZonalFn,
    analyze,
    energy,
    gamma_multiplier,
    hessian_form,
    lq_norm,
    norm2,
)

__all__ = [
    "DistanceResult",
    "QuotientCurve",
    "deficit",
    "zeta_moment_integral",
    "distance",
    "be_quotient",
    "upper_bound_constant",
    "quotient_curve",
]

MANIFOLD_TOL = 1e-6


def deficit(fn: ZonalFn) -> float:
    """Sobolev deficit E_s[U] - S ||U||_q^2; nonnegative up to quadrature."""
    from .zonal import sharp_constant

    nq = lq_norm(fn, fn.params.q)
    if nq == 0.0:
        raise DomainError("deficit undefined for the zero function")
    return energy(fn) - sharp_constant(fn.params) * nq * nq


@dataclass(frozen=True)
class DistanceResult:
    """Distance from U to the optimizer manifold and the attaining multiple."""

    delta: float
    c_star: float
    zeta_star: ConformalParam
    tau: float
    diagnostics: dict


def zeta_moment_integral(
    fn: ZonalFn, a: float, rho: float, n_azimuthal: int = 64
) -> float:
    """G(zeta) for zeta = a axis + rho axis_perp, by 2D Gauss quadrature."""
    d, s = fn.params.d, fn.params.s
    r2 = a * a + rho * rho
    if r2 >= 1.0:
        raise DomainError("zeta must stay in the open unit ball")
    basis = fn.basis
    crule = gauss_rule(n_azimuthal, (d - 3) / 2.0)
    val = _kernels.zeta_moment(
        float(a),
        float(rho),
        math.sqrt(1.0 - r2),
        (d + 2.0 * s) / 2.0,
        np.ascontiguousarray(basis.rule.nodes),
        np.ascontiguousarray(basis.rule.weights),
        np.ascontiguousarray(fn.samples),
        np.ascontiguousarray(crule.nodes),
        np.ascontiguousarray(crule.weights),
    )
    return float(sphere_area(d - 2) * val) if d >= 2 else float(val)


def _perp_axis(axis: np.ndarray) -> np.ndarray:
    """Deterministic unit vector orthogonal to the given axis."""
    n = len(axis)
    for k in range(n):
        e = np.zeros(n)
        e[k] = 1.0
        v = e - np.dot(e, axis) * axis
        nv = np.linalg.norm(v)
        if nv > 0.5:
            return v / nv
    raise ComputationError("could not build an orthogonal direction")


_SEED_ZETAS = ((0.0, 0.0), (0.6, 0.0), (-0.6, 0.0), (0.3, 0.3), (-0.3, 0.3))


def distance(
    fn: ZonalFn, n_azimuthal: int = 64, gtol: float = 1e-12
) -> DistanceResult:
    """Distance to the optimizer manifold by multi-start maximization of G.

    Runs a 1D maximization along the axis first, then quasi-Newton descents
    from five deterministic seeds in the (a, rho) disc mapped to the plane by
    zeta = z / sqrt(1 + |z|^2). Ties are broken by the larger G^2, then the
    smaller |zeta|, then lexicographically.
    """
    e_total = energy(fn)
    if e_total <= 0.0:
        raise DomainError("distance needs a nonzero function")
    d = fn.params.d
    area = sphere_area(d)
    mult0 = gamma_multiplier(fn.params, 0)

    def gval(a: float, rho: float) -> float:
        return zeta_moment_integral(fn, a, rho, n_azimuthal)

    def unpack(z: np.ndarray) -> tuple:
        nz = 1.0 / math.sqrt(1.0 + float(z[0]) ** 2 + float(z[1]) ** 2)
        return float(z[0]) * nz, float(z[1]) * nz

    def objective(z: np.ndarray) -> float:
        a, rho = unpack(z)
        g = gval(a, rho)
        return -g * g

    candidates = []
    converged = []

    axis_obj = lambda v: -gval(math.tanh(v), 0.0) ** 2
    vgrid = np.linspace(-3.0, 3.0, 25)
    k = int(np.argmin([axis_obj(v) for v in vgrid]))
    axis_res = minimize_scalar(
        axis_obj,
        bounds=(vgrid[max(k - 1, 0)], vgrid[min(k + 1, len(vgrid) - 1)]),
        method="bounded",
        options={"xatol": 1e-12},
    )
    a_axis = math.tanh(float(axis_res.x))
    z_axis = np.array([a_axis / math.sqrt(1.0 - a_axis * a_axis), 0.0])
    starts = [z_axis]
    for a0, r0 in _SEED_ZETAS:
        nz = 1.0 / math.sqrt(1.0 - a0 * a0 - r0 * r0)
        starts.append(np.array([a0 * nz, r0 * nz]))

    for z0 in starts:
        res = minimize(
            objective,
            z0,
            method="L-BFGS-B",
            options={"gtol": gtol, "ftol": 1e-15, "maxiter": 500},
        )
        a, rho = unpack(res.x)
        rho = abs(rho)
        g = gval(a, rho)
        candidates.append((g * g, a, rho, g))
        converged.append(bool(res.success))

    if not any(converged) and not candidates:
        raise ComputationError("no distance start converged")

    ranked = sorted(
        candidates,
        key=lambda c: (
            -round(c[0], 12),
            round(c[1] ** 2 + c[2] ** 2, 12),
            round(c[1], 12),
            round(c[2], 12),
        ),
    )
    g2_best, a_best, rho_best, g_best = ranked[0]

    raw = e_total - mult0 * g2_best / area
    delta_sq = max(raw, 0.0)
    rest = e_total - delta_sq
    if rest <= 0.0:
        raise ComputationError(
            "maximized moment vanished; tau undefined (best G^2 = %g)" % g2_best
        )
    axis = np.asarray(fn.axis)
    zeta_vec = a_best * axis + rho_best * _perp_axis(axis)
    result = DistanceResult(
        delta=math.sqrt(delta_sq),
        c_star=g_best / area,
        zeta_star=ConformalParam(zeta=zeta_vec),
        tau=math.sqrt(delta_sq / rest),
        diagnostics={
            "candidates": candidates,
            "converged": converged,
            "raw_delta_sq": raw,
            "axis_seed": a_axis,
        },
    )
    return result


def be_quotient(fn: ZonalFn, n_azimuthal: int = 64) -> float:
    """Stability quotient deficit / delta^2.

    Raises DegenerateInputError on (numerical) optimizers, where the
    quotient is a 0/0 expression.
    """
    dist = distance(fn, n_azimuthal=n_azimuthal)
    e_total = energy(fn)
    if dist.delta / math.sqrt(e_total) < MANIFOLD_TOL:
        raise DegenerateInputError(
            "manifold point: delta/sqrt(E) = %.3g below %.0e"
            % (dist.delta / math.sqrt(e_total), MANIFOLD_TOL)
        )
    return deficit(fn) / dist.delta**2


def upper_bound_constant(d: int, s: float) -> float:
    """Sharp small-perturbation value of the quotient: 4s/(d+2s+2)."""
    from .zonal import SphereParams

    SphereParams(d, s)
    return 4.0 * s / (d + 2.0 * s + 2.0)


@dataclass(frozen=True)
class QuotientCurve:
    """Stability quotient along a perturbation ray with its extrapolation."""

    eps: np.ndarray
    quotient: np.ndarray
    extrapolated_limit: float
    error_estimate: float


def _extrapolate(eps: np.ndarray, vals: np.ndarray) -> tuple:
    """Limit at eps = 0 assuming an O(eps) leading error term.

    Halving grids get the 3-point Richardson scheme; anything else falls
    back to polynomial fitting, with the error gauged against a lower-order
    fit.
    """
    if len(eps) >= 3 and np.allclose(eps[:-1] / eps[1:], 2.0, rtol=1e-10):
        f0, f1, f2 = vals[-3], vals[-2], vals[-1]
        a1 = 2.0 * f1 - f0
        a2 = 2.0 * f2 - f1
        limit = (4.0 * a2 - a1) / 3.0
        return float(limit), float(abs(limit - a2))
    deg = min(2, len(eps) - 1)
    p_hi = np.polynomial.Polynomial.fit(eps, vals, deg)
    limit = float(p_hi(0.0))
    if deg >= 1:
        p_lo = np.polynomial.Polynomial.fit(eps, vals, deg - 1)
        err = abs(limit - float(p_lo(0.0)))
    else:
        err = float("nan")
    return limit, float(err)


def quotient_curve(
    fn: ZonalFn,
    eps_grid=(0.02, 0.01, 0.005),
    n_azimuthal: int = 64,
) -> QuotientCurve:
    """Quotient along U = 1 + eps R for an orthogonal perturbation R.

    R must carry no degree-0 or degree-1 component (checked to 1e-10 of its
    norm); the extrapolated limit then matches the Hessian Rayleigh quotient
    hessian_form(R)/energy(R) up to the reported error.
    """
    scale = max(norm2(fn), 1e-300)
    if abs(fn.coeffs[0]) > 1e-10 * scale or (
        fn.bandlimit >= 1 and abs(fn.coeffs[1]) > 1e-10 * scale
    ):
        raise PreconditionError(
            "perturbation must be orthogonal to degrees 0 and 1 "
            "(coefficients %.2e, %.2e)"
            % (fn.coeffs[0], fn.coeffs[1] if fn.bandlimit >= 1 else 0.0)
        )
    eps = np.asarray(sorted(eps_grid, reverse=True), dtype=float)
    if np.any(eps <= 0.0):
        raise DomainError("eps grid must be positive")
    vals = np.empty(len(eps))
    for i, e in enumerate(eps):
        u = analyze(
            1.0 + e * fn.samples, fn.params, fn.bandlimit, axis=np.asarray(fn.axis)
        )
        vals[i] = be_quotient(u, n_azimuthal=n_azimuthal)
    limit, err = _extrapolate(eps, vals)
    return QuotientCurve(
        eps=eps, quotient=vals, extrapolated_limit=limit, error_estimate=err
    )
