"""Graph interfaces x3 = u(x1, x2): regions, normals, tangent frames.

The interface splits space into a lower region (x3 < u) and an upper region
(x3 > u).  Throughout the library ``nu = (u_x1, u_x2, -1)`` is the raw graph
normal and ``n_hat = -nu/|nu|`` the unit normal pointing into the upper
region.  Surfaces are graphs over a rectangle by construction; smoothness of
``u`` is assumed, not verified.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import RectBivariateSpline, RegularGridInterpolator

from .errors import BadParams, OutOfDomain, UnknownCatalogEntry
from .gridio import read_grid_csv


class Region(IntEnum):
    BELOW = -1
    ON = 0
    ABOVE = 1


@dataclass(frozen=True)
class Surface:
    """Interface graph x3 = u(x1, x2) over a rectangle in the (x1, x2) plane.

    ``u`` maps footprint arrays of shape (..., 2) to heights of shape (...).
    ``grad_u`` may be omitted, in which case central differences with step
    1e-5 x diameter are used (one-sided at the rectangle edge).
    """

    u: Callable
    domain: tuple[tuple[float, float], tuple[float, float]]
    grad_u: Optional[Callable] = None

    def __post_init__(self):
        (a1, b1), (a2, b2) = self.domain
        if not (np.isfinite([a1, b1, a2, b2]).all() and a1 < b1 and a2 < b2):
            raise BadParams(f"degenerate surface domain {self.domain}")
        probe = np.array([(a1 + b1) / 2, (a2 + b2) / 2])
        if not np.isfinite(self.height(probe)):
            raise BadParams("surface height is not evaluable at the domain center")

    @property
    def diameter(self) -> float:
        (a1, b1), (a2, b2) = self.domain
        return float(np.hypot(b1 - a1, b2 - a2))

    def height(self, p12):
        p12 = np.asarray(p12, dtype=float)
        return np.asarray(self.u(p12), dtype=float)

    def gradient(self, p12):
        p12 = np.asarray(p12, dtype=float)
        if self.grad_u is not None:
            return np.asarray(self.grad_u(p12), dtype=float)
        return self._fd_gradient(p12)

    def _fd_gradient(self, p12):
        (a1, b1), (a2, b2) = self.domain
        h = 1e-5 * self.diameter
        out = np.empty(p12.shape)
        for axis, (lo, hi) in enumerate(((a1, b1), (a2, b2))):
            # clip the stencil into the rectangle; degrades to one-sided at the edge
            up = p12.copy()
            dn = p12.copy()
            up[..., axis] = np.minimum(p12[..., axis] + h, hi)
            dn[..., axis] = np.maximum(p12[..., axis] - h, lo)
            span = up[..., axis] - dn[..., axis]
            out[..., axis] = (self.height(up) - self.height(dn)) / span
        return out

    def contains(self, p12) -> np.ndarray:
        p12 = np.asarray(p12, dtype=float)
        (a1, b1), (a2, b2) = self.domain
        slack = 1e-12 * self.diameter
        return ((p12[..., 0] >= a1 - slack) & (p12[..., 0] <= b1 + slack)
                & (p12[..., 1] >= a2 - slack) & (p12[..., 1] <= b2 + slack))

    def require_inside(self, p12) -> None:
        ok = self.contains(p12)
        if not np.all(ok):
            bad = np.asarray(p12, dtype=float).reshape(-1, 2)[~np.asarray(ok).reshape(-1)][0]
            raise OutOfDomain(f"footprint point {tuple(bad)} outside domain {self.domain}")

    def point(self, p12):
        """Lift a footprint point (..., 2) onto the surface, as (..., 3)."""
        p12 = np.asarray(p12, dtype=float)
        return np.concatenate([p12, self.height(p12)[..., None]], axis=-1)


@dataclass(frozen=True)
class NormalPair:
    """Raw graph normal nu = (u_x1, u_x2, -1) and unit upward normal n_hat."""

    nu: np.ndarray
    n_hat: np.ndarray


def classify(p, surface: Surface, tol_on: Optional[float] = None):
    """Locate a 3-point relative to the interface: BELOW, ON, or ABOVE.

    ``tol_on`` is the half-width of the ON band; default 1e-10 x diameter.
    Accepts (..., 3) arrays and returns matching int8 codes (scalar input
    returns a Region).
    """
    p = np.asarray(p, dtype=float)
    surface.require_inside(p[..., :2])
    if tol_on is None:
        tol_on = 1e-10 * surface.diameter
    d = p[..., 2] - surface.height(p[..., :2])
    code = np.where(d > tol_on, 1, np.where(d < -tol_on, -1, 0)).astype(np.int8)
    if code.ndim == 0:
        return Region(int(code))
    return code


def normals(p12, surface: Surface) -> NormalPair:
    """Raw and unit normals at footprint points (..., 2)."""
    p12 = np.asarray(p12, dtype=float)
    surface.require_inside(p12)
    g = surface.gradient(p12)
    nu = np.concatenate([g, -np.ones(g.shape[:-1] + (1,))], axis=-1)
    n_hat = -nu / np.linalg.norm(nu, axis=-1, keepdims=True)
    return NormalPair(nu=nu, n_hat=n_hat)


def tangent_frame(p12, surface: Surface):
    """Coordinate tangents t1 = (1, 0, u_x1) and t2 = (0, 1, u_x2)."""
    p12 = np.asarray(p12, dtype=float)
    surface.require_inside(p12)
    g = surface.gradient(p12)
    shape = g.shape[:-1]
    t1 = np.zeros(shape + (3,))
    t2 = np.zeros(shape + (3,))
    t1[..., 0] = 1.0
    t1[..., 2] = g[..., 0]
    t2[..., 1] = 1.0
    t2[..., 2] = g[..., 1]
    return t1, t2


def area_element(p12, surface: Surface):
    """Graph-surface measure factor sqrt(1 + |grad u|^2)."""
    g = surface.gradient(np.asarray(p12, dtype=float))
    return np.sqrt(1.0 + np.sum(g * g, axis=-1))


def _require(params: dict, allowed: set[str], name: str) -> None:
    extra = set(params) - allowed
    if extra:
        raise BadParams(f"{name}: unknown parameter(s) {sorted(extra)}")


def make_surface(name: str, params: Optional[dict] = None,
                 domain=((-1.0, 1.0), (-1.0, 1.0))) -> Surface:
    """Build a catalog surface: flat, plane, paraboloid, or gaussian-bump."""
    params = dict(params or {})
    domain = tuple((float(lo), float(hi)) for lo, hi in domain)
    if name == "flat":
        _require(params, {"height"}, name)
        h0 = float(params.get("height", 0.0))
        return Surface(u=lambda p: np.full(p.shape[:-1], h0),
                       grad_u=lambda p: np.zeros(p.shape),
                       domain=domain)
    if name == "plane":
        _require(params, {"slope", "offset"}, name)
        s = np.asarray(params.get("slope", (0.0, 0.0)), dtype=float)
        if s.shape != (2,):
            raise BadParams("plane: slope must be a 2-vector")
        off = float(params.get("offset", 0.0))
        return Surface(u=lambda p: p[..., 0] * s[0] + p[..., 1] * s[1] + off,
                       grad_u=lambda p: np.broadcast_to(s, p.shape).copy(),
                       domain=domain)
    if name == "paraboloid":
        _require(params, {"radius", "center", "offset"}, name)
        R = float(params.get("radius", 1.0))
        if R == 0.0:
            raise BadParams("paraboloid: radius must be nonzero")
        c = np.asarray(params.get("center", (0.0, 0.0)), dtype=float)
        off = float(params.get("offset", 0.0))
        return Surface(
            u=lambda p: off + ((p[..., 0] - c[0]) ** 2 + (p[..., 1] - c[1]) ** 2) / (2 * R),
            grad_u=lambda p: (p - c) / R,
            domain=domain)
    if name == "gaussian-bump":
        _require(params, {"height", "sigma", "center", "offset"}, name)
        A = float(params.get("height", 0.5))
        sig = float(params.get("sigma", 0.5))
        if sig <= 0:
            raise BadParams("gaussian-bump: sigma must be positive")
        c = np.asarray(params.get("center", (0.0, 0.0)), dtype=float)
        off = float(params.get("offset", 0.0))

        def u(p):
            r2 = (p[..., 0] - c[0]) ** 2 + (p[..., 1] - c[1]) ** 2
            return off + A * np.exp(-r2 / (2 * sig ** 2))

        def grad(p):
            r2 = (p[..., 0] - c[0]) ** 2 + (p[..., 1] - c[1]) ** 2
            f = A * np.exp(-r2 / (2 * sig ** 2))
            return -(p - c) / sig ** 2 * f[..., None]

        return Surface(u=u, grad_u=grad, domain=domain)
    raise UnknownCatalogEntry(f"unknown surface catalog entry {name!r}")


def surface_from_csv(path) -> Surface:
    """Surface from a sampled grid CSV (columns x1,x2,u); derivatives by FD."""
    x1, x2, vals = read_grid_csv(path, "u")
    if min(x1.size, x2.size) >= 4:
        spl = RectBivariateSpline(x1, x2, vals, kx=3, ky=3, s=0)
        u = lambda p: spl.ev(p[..., 0], p[..., 1])
    else:
        interp = RegularGridInterpolator((x1, x2), vals, method="linear",
                                         bounds_error=False, fill_value=None)
        u = lambda p: interp(p)
    domain = ((float(x1[0]), float(x1[-1])), (float(x2[0]), float(x2[-1])))
    return Surface(u=u, domain=domain)


SURFACE_CATALOG = ("flat", "plane", "paraboloid", "gaussian-bump")
