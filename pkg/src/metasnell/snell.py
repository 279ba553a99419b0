"""Refraction and reflection across a phase-shifting interface.

The direction law: n1*k_i - n_out*k_out - grad(lambda0*phi/2pi) is parallel
to the raw graph normal nu at the hit point, with the multiplier lambda free.
Eliminating lambda against |k_out| = 1 leaves a quadratic; branch selection
(forward for transmission, backward for reflection) is by the sign of
k_out . n_hat.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (BadParams, GrazingIncidence, MetasnellError, NoBackwardRoot,
                     NoForwardRoot, TotalInternalReflection)
from .fields import Medium
from .geometry import Region, Surface, classify, normals
from .phase import PhaseDiscontinuity


@dataclass(frozen=True)
class RefractionResult:
    """Outgoing direction, the chosen multiplier, and both quadratic roots."""

    k_out: np.ndarray
    lam: float
    branch: str
    lam_roots: tuple


def _unit(v, what):
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise BadParams(f"{what} must be a 3-vector")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > 1e-9:
        raise BadParams(f"{what} must be unit length, got norm {norm}")
    return v / norm


def _grad_term(phi: Optional[PhaseDiscontinuity], P, lambda0: float):
    if phi is None:
        return np.zeros(3)
    return lambda0 / (2 * np.pi) * phi.gradient(P)


def _solve_family(k_i, p_12, surface, phi, n_in, n_out, omega, c, want_forward, branch):
    """Shared quadratic solve; want_forward picks the sign of k_out . n_hat."""
    k_i = _unit(k_i, "k_i")
    if omega <= 0:
        raise BadParams("omega must be positive")
    p_12 = np.asarray(p_12, dtype=float)
    pair = normals(p_12, surface)
    nu, n_hat = pair.nu, pair.n_hat
    ki_dot_n = float(k_i @ n_hat)
    if abs(ki_dot_n) < 1e-12:
        raise GrazingIncidence(f"k_i . n_hat = {ki_dot_n} is below 1e-12")
    if ki_dot_n < 0:
        raise BadParams("incident direction must point toward the upper region")
    P = surface.point(p_12)
    lambda0 = 2 * np.pi * c / omega
    w = n_in * k_i - _grad_term(phi, P, lambda0)
    nu2 = float(nu @ nu)
    w_nu = float(w @ nu)
    disc = w_nu * w_nu - nu2 * (float(w @ w) - n_out * n_out)
    if disc < 0:
        raise TotalInternalReflection(f"discriminant {disc} < 0: no real outgoing direction")
    sq = np.sqrt(disc)
    roots = ((w_nu - sq) / nu2, (w_nu + sq) / nu2)
    picks = []
    for lam in roots:
        k_out = (w - lam * nu) / n_out
        sign = float(k_out @ n_hat)
        if (sign > 0) if want_forward else (sign < 0):
            picks.append((lam, k_out))
    if not picks:
        err = NoForwardRoot if want_forward else NoBackwardRoot
        raise err(f"no root with k_out . n_hat {'>' if want_forward else '<'} 0")
    if len(picks) > 1:
        # geometrically the two roots lie on opposite sides of the tangent
        # plane; hitting this path means the discriminant is at roundoff scale
        warnings.warn("both quadratic roots on the requested side; "
                      "choosing the one closest to k_i")
        picks.sort(key=lambda item: float(np.linalg.norm(item[1] - k_i)))
    lam, k_out = picks[0]
    return RefractionResult(k_out=k_out, lam=float(lam), branch=branch,
                            lam_roots=(float(roots[0]), float(roots[1])))


def refract(k_i, p_12, s: Surface, phi: Optional[PhaseDiscontinuity],
            m1: Medium, m2: Medium, omega: float) -> RefractionResult:
    """Transmitted direction for an incident ray hitting the surface from below."""
    if m1.c != m2.c:
        raise BadParams("media must share the same vacuum speed c")
    return _solve_family(k_i, p_12, s, phi, m1.n, m2.n, omega, m1.c,
                         want_forward=True, branch="transmitted")


def reflect(k_i, p_12, s: Surface, phi: Optional[PhaseDiscontinuity],
            m1: Medium, omega: float) -> RefractionResult:
    """Reflected direction, back into the lower medium."""
    return _solve_family(k_i, p_12, s, phi, m1.n, m1.n, omega, m1.c,
                         want_forward=False, branch="reflected")


def law_residual(result: RefractionResult, k_i, p_12, s: Surface,
                 phi: Optional[PhaseDiscontinuity], m1: Medium, m_out: Medium,
                 omega: float):
    """Defect diagnostics for a solved direction.

    Returns (d, d x nu, (d.t1, d.t2)) with d = n1*k_i - n_out*k_out - g; the
    law holds when d is parallel to nu, i.e. the cross and both tangential
    projections vanish.
    """
    k_i = _unit(k_i, "k_i")
    p_12 = np.asarray(p_12, dtype=float)
    P = s.point(p_12)
    lambda0 = 2 * np.pi * m1.c / omega
    d = m1.n * k_i - m_out.n * result.k_out - _grad_term(phi, P, lambda0)
    nu = normals(p_12, s).nu
    g = s.gradient(p_12)
    t1 = np.array([1.0, 0.0, g[0]])
    t2 = np.array([0.0, 1.0, g[1]])
    return d, np.cross(d, nu), (float(d @ t1), float(d @ t2))


@dataclass(frozen=True)
class TracedRay:
    """Outcome for one ray of a bundle; errors are captured, not raised."""

    origin: np.ndarray
    k_i: np.ndarray
    status: str
    t_hit: Optional[float] = None
    hit_point: Optional[np.ndarray] = None
    transmitted: Optional[RefractionResult] = None
    reflected: Optional[RefractionResult] = None
    error: Optional[str] = None


def _intersect(origin, k, surface: Surface, step: float, max_steps: int):
    """First crossing of t -> origin + t*k with the graph, or None if it escapes.

    March to bracket the sign change, bisect, then Newton-polish to 1e-12.
    """

    def height_gap(t):
        p = origin + t * k
        return p[2] - float(surface.height(p[:2]))

    def footprint_ok(t):
        p12 = (origin + t * k)[:2]
        return bool(np.all(surface.contains(p12)))

    t_lo, f_lo = 0.0, height_gap(0.0)
    t_hi = None
    for i in range(1, max_steps + 1):
        t = i * step
        if not footprint_ok(t):
            return None
        f = height_gap(t)
        if f >= 0:
            t_hi, f_hi = t, f
            break
        t_lo, f_lo = t, f
    if t_hi is None:
        return None
    for _ in range(80):
        if t_hi - t_lo <= 1e-13:
            break
        t_mid = (t_lo + t_hi) / 2
        f_mid = height_gap(t_mid)
        if f_mid >= 0:
            t_hi, f_hi = t_mid, f_mid
        else:
            t_lo, f_lo = t_mid, f_mid
    t = (t_lo + t_hi) / 2
    for _ in range(8):
        p12 = (origin + t * k)[:2]
        slope = k[2] - float(surface.gradient(p12) @ k[:2])
        if slope == 0.0:
            break
        dt = height_gap(t) / slope
        t -= dt
        t = min(max(t, t_lo - step), t_hi + step)
        if abs(dt) < 1e-12:
            break
    return t


def trace_bundle(rays, s: Surface, phi: Optional[PhaseDiscontinuity],
                 m1: Medium, m2: Medium, omega: float,
                 step: Optional[float] = None, max_steps: int = 10000):
    """Trace straight rays from the lower region onto the surface.

    ``rays`` is an iterable of (origin, k_i) pairs.  Each ray is intersected
    with the surface, then refracted and reflected at the hit point.  Per-ray
    failures are recorded in the result instead of aborting the bundle.
    """
    if m1.c != m2.c:
        raise BadParams("media must share the same vacuum speed c")
    if step is None:
        step = s.diameter / 256
    out = []
    for origin, k_i in rays:
        origin = np.asarray(origin, dtype=float)
        try:
            k = _unit(k_i, "k_i")
            if classify(origin, s) != Region.BELOW:
                raise BadParams("ray origin must lie strictly below the surface")
            t_hit = _intersect(origin, k, s, step, max_steps)
        except MetasnellError as e:
            out.append(TracedRay(origin=origin, k_i=np.asarray(k_i, dtype=float),
                                 status="error", error=f"{type(e).__name__}: {e}"))
            continue
        if t_hit is None:
            out.append(TracedRay(origin=origin, k_i=k, status="escaped"))
            continue
        hit = origin + t_hit * k
        p_12 = hit[:2]
        transmitted = reflected = None
        errs = []
        try:
            transmitted = refract(k, p_12=p_12, s=s, phi=phi, m1=m1, m2=m2, omega=omega)
        except MetasnellError as e:
            errs.append(f"refract {type(e).__name__}: {e}")
        try:
            reflected = reflect(k, p_12=p_12, s=s, phi=phi, m1=m1, omega=omega)
        except MetasnellError as e:
            errs.append(f"reflect {type(e).__name__}: {e}")
        out.append(TracedRay(origin=origin, k_i=k, status="hit", t_hit=float(t_hit),
                             hit_point=hit, transmitted=transmitted, reflected=reflected,
                             error="; ".join(errs) if errs else None))
    return out
