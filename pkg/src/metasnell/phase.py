"""Phase discontinuities: catalog, derivatives, and design from ray targets.

The interface phase is a real scalar field (radians) defined near the
surface.  Only its tangential gradient steers rays, so design routines
produce a tangent vector field first and integrate it afterwards, reporting
a discrete-curl residual so that a non-integrable target is flagged instead
of silently biased by an integration path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import RectBivariateSpline, RegularGridInterpolator
from scipy.sparse import coo_matrix
from scipy.sparse.linalg import lsqr

from .errors import BadParams, NonTransmittedTarget, SingularSystem, UnknownCatalogEntry
from .geometry import Surface, normals, tangent_frame
from .gridio import read_grid_csv


@dataclass(frozen=True)
class PhaseDiscontinuity:
    """Scalar phase with first and second derivatives.

    All callables are vectorized over (..., 3) points: phi -> (...),
    grad -> (..., 3), laplacian -> (...), hessian -> (..., 3, 3).
    """

    phi: Callable
    grad: Callable
    laplacian: Callable
    hessian: Callable

    def value(self, x):
        return np.asarray(self.phi(np.asarray(x, dtype=float)), dtype=float)

    def gradient(self, x):
        return np.asarray(self.grad(np.asarray(x, dtype=float)), dtype=float)

    def lap(self, x):
        return np.asarray(self.laplacian(np.asarray(x, dtype=float)), dtype=float)

    def hess(self, x):
        return np.asarray(self.hessian(np.asarray(x, dtype=float)), dtype=float)


@dataclass(frozen=True)
class SampledPhase(PhaseDiscontinuity):
    """Grid-backed phase, constant along x3; derivatives by finite differences."""

    x1_nodes: Optional[np.ndarray] = None
    x2_nodes: Optional[np.ndarray] = None
    values: Optional[np.ndarray] = None


@dataclass(frozen=True)
class TangentialGradientField:
    """Tangent vector field on a surface, sampled by footprint point.

    Carries the wavenumber-normalized quantity: the tangential part of
    grad(lambda0 * phi / 2pi).  ``g`` maps footprint arrays (..., 2) to
    3-vectors (..., 3) lying in the tangent plane.
    """

    g: Callable
    surface: Surface

    def __call__(self, p12):
        return np.asarray(self.g(np.asarray(p12, dtype=float)), dtype=float)


def _unit(v, what="direction"):
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > 1e-9:
        raise BadParams(f"{what} must be unit length, got |v|={norm}")
    return v / norm


def _check_params(params: dict, allowed: set[str], name: str) -> None:
    extra = set(params) - allowed
    if extra:
        raise BadParams(f"{name}: unknown parameter(s) {sorted(extra)}")


def _shift(x12, axis, delta):
    out = np.array(x12, dtype=float)
    out[..., axis] += delta
    return out


def _clip_axis(x12, axis, lo, hi):
    out = np.array(x12, dtype=float)
    out[..., axis] = np.clip(out[..., axis], lo, hi)
    return out


def _d2(interp, x12, axis, h, lo, hi):
    # fourth-order 5-point second derivative along one axis; near the
    # footprint edge the stencil shifts inward and a third-derivative
    # correction recenters the estimate
    base = _clip_axis(x12, axis, lo + 2 * h, hi - 2 * h)
    d = x12[..., axis] - base[..., axis]
    fm2 = interp(_shift(base, axis, -2 * h))
    fm1 = interp(_shift(base, axis, -h))
    f0 = interp(base)
    fp1 = interp(_shift(base, axis, h))
    fp2 = interp(_shift(base, axis, 2 * h))
    d2 = (-(fm2 + fp2) + 16 * (fm1 + fp1) - 30 * f0) / (12 * h * h)
    d3 = (fp2 - 2 * fp1 + 2 * fm1 - fm2) / (2 * h ** 3)
    return d2 + d * d3


def sampled_phase(x1_nodes, x2_nodes, values) -> SampledPhase:
    """Phase from node values on a rectangular footprint grid.

    The field is extended off the grid plane as constant in x3; the gradient
    uses central differences with step equal to the grid spacing.  Within one
    spacing of the footprint edge the stencil shifts inward and is recentred,
    keeping second-order accuracy up to the boundary.
    """
    x1_nodes = np.asarray(x1_nodes, dtype=float)
    x2_nodes = np.asarray(x2_nodes, dtype=float)
    values = np.asarray(values, dtype=float)
    if x1_nodes.size < 2 or x2_nodes.size < 2:
        raise BadParams("sampled phase needs at least a 2x2 grid")
    if values.shape != (x1_nodes.size, x2_nodes.size):
        raise BadParams(f"value grid shape {values.shape} does not match nodes")
    if min(x1_nodes.size, x2_nodes.size) >= 4:
        spl = RectBivariateSpline(x1_nodes, x2_nodes, values, kx=3, ky=3, s=0)
        interp = lambda p: spl.ev(p[..., 0], p[..., 1])
    else:
        rgi = RegularGridInterpolator((x1_nodes, x2_nodes), values,
                                      method="linear", bounds_error=False,
                                      fill_value=None)
        interp = lambda p: rgi(p)
    h1 = float(np.min(np.diff(x1_nodes)))
    h2 = float(np.min(np.diff(x2_nodes)))
    spans = ((float(x1_nodes[0]), float(x1_nodes[-1])),
             (float(x2_nodes[0]), float(x2_nodes[-1])))

    def val(x):
        return interp(x[..., :2])

    def grad(x):
        out = np.zeros(x.shape)
        for axis, h in ((0, h1), (1, h2)):
            lo, hi = spans[axis]
            base = _clip_axis(x[..., :2], axis, lo + h, hi - h)
            d = x[..., axis] - base[..., axis]
            fp = interp(_shift(base, axis, h))
            fm = interp(_shift(base, axis, -h))
            f0 = interp(base)
            # recentred parabola slope; reduces to the plain central
            # difference away from the footprint edge
            out[..., axis] = (fp - fm) / (2 * h) + d * (fp - 2 * f0 + fm) / h ** 2
        return out

    def lap(x):
        x12 = x[..., :2]
        return (_d2(interp, x12, 0, h1, *spans[0])
                + _d2(interp, x12, 1, h2, *spans[1]))

    def hess(x):
        x12 = x[..., :2]
        H = np.zeros(x.shape[:-1] + (3, 3))
        H[..., 0, 0] = _d2(interp, x12, 0, h1, *spans[0])
        H[..., 1, 1] = _d2(interp, x12, 1, h2, *spans[1])
        base = _clip_axis(_clip_axis(x12, 0, spans[0][0] + h1, spans[0][1] - h1),
                          1, spans[1][0] + h2, spans[1][1] - h2)
        pp = interp(_shift(_shift(base, 0, h1), 1, h2))
        pm = interp(_shift(_shift(base, 0, h1), 1, -h2))
        mp = interp(_shift(_shift(base, 0, -h1), 1, h2))
        mm = interp(_shift(_shift(base, 0, -h1), 1, -h2))
        H[..., 0, 1] = H[..., 1, 0] = (pp - pm - mp + mm) / (4 * h1 * h2)
        return H

    return SampledPhase(phi=val, grad=grad, laplacian=lap, hessian=hess,
                        x1_nodes=x1_nodes, x2_nodes=x2_nodes, values=values)


def make_phase(name: str, params: Optional[dict] = None) -> PhaseDiscontinuity:
    """Build a catalog phase: zero, linear, quadratic, radial-focusing, sampled."""
    params = dict(params or {})
    if name == "zero":
        _check_params(params, set(), name)
        return PhaseDiscontinuity(
            phi=lambda x: np.zeros(x.shape[:-1]),
            grad=lambda x: np.zeros(x.shape),
            laplacian=lambda x: np.zeros(x.shape[:-1]),
            hessian=lambda x: np.zeros(x.shape[:-1] + (3, 3)))
    if name == "linear":
        _check_params(params, {"a", "offset"}, name)
        a = np.asarray(params.get("a", (0.0, 0.0, 0.0)), dtype=float)
        if a.shape != (3,):
            raise BadParams("linear: a must be a 3-vector")
        off = float(params.get("offset", 0.0))
        return PhaseDiscontinuity(
            phi=lambda x: off + x @ a,
            grad=lambda x: np.broadcast_to(a, x.shape).copy(),
            laplacian=lambda x: np.zeros(x.shape[:-1]),
            hessian=lambda x: np.zeros(x.shape[:-1] + (3, 3)))
    if name == "quadratic":
        _check_params(params, {"Q", "a", "offset"}, name)
        Q = np.asarray(params.get("Q", np.eye(3)), dtype=float)
        if Q.shape != (3, 3):
            raise BadParams("quadratic: Q must be a 3x3 matrix")
        S = (Q + Q.T) / 2
        a = np.asarray(params.get("a", (0.0, 0.0, 0.0)), dtype=float)
        off = float(params.get("offset", 0.0))
        return PhaseDiscontinuity(
            phi=lambda x: off + x @ a + 0.5 * np.sum((x @ S) * x, axis=-1),
            grad=lambda x: a + x @ S,
            laplacian=lambda x: np.full(x.shape[:-1], np.trace(S)),
            hessian=lambda x: np.broadcast_to(S, x.shape[:-1] + (3, 3)).copy())
    if name == "radial-focusing":
        _check_params(params, {"focal_length", "strength"}, name)
        f = float(params.get("focal_length", 1.0))
        s = float(params.get("strength", 1.0))
        if f <= 0:
            raise BadParams("radial-focusing: focal_length must be positive")

        def val(x):
            r2 = x[..., 0] ** 2 + x[..., 1] ** 2
            return s * (np.sqrt(r2 + f * f) - f)

        def grad(x):
            R = np.sqrt(x[..., 0] ** 2 + x[..., 1] ** 2 + f * f)
            out = np.zeros(x.shape)
            out[..., 0] = s * x[..., 0] / R
            out[..., 1] = s * x[..., 1] / R
            return out

        def lap(x):
            r2 = x[..., 0] ** 2 + x[..., 1] ** 2
            return s * (r2 + 2 * f * f) / (r2 + f * f) ** 1.5

        def hess(x):
            R = np.sqrt(x[..., 0] ** 2 + x[..., 1] ** 2 + f * f)
            H = np.zeros(x.shape[:-1] + (3, 3))
            H[..., 0, 0] = s * (1 / R - x[..., 0] ** 2 / R ** 3)
            H[..., 1, 1] = s * (1 / R - x[..., 1] ** 2 / R ** 3)
            H[..., 0, 1] = H[..., 1, 0] = -s * x[..., 0] * x[..., 1] / R ** 3
            return H

        return PhaseDiscontinuity(phi=val, grad=grad, laplacian=lap, hessian=hess)
    if name == "sampled":
        _check_params(params, {"path", "x1", "x2", "values"}, name)
        if "path" in params:
            x1, x2, vals = read_grid_csv(params["path"], "phi")
        else:
            try:
                x1, x2, vals = params["x1"], params["x2"], params["values"]
            except KeyError as e:
                raise BadParams("sampled: need path or x1/x2/values") from e
        return sampled_phase(x1, x2, vals)
    raise UnknownCatalogEntry(f"unknown phase catalog entry {name!r}")


def required_tangential_gradient(k_i, target_k_r, p_12, media, surface: Surface):
    """Tangential value n1*k_i - n2*k_r must leave to the phase gradient.

    Returns the projection of n1*k_i - n2*target_k_r onto the tangent plane
    at the surface point over ``p_12``; this is the value the tangential part
    of grad(lambda0 * phi / 2pi) must take for the refraction law to send
    k_i to target_k_r with some multiplier.
    """
    k_i = _unit(k_i, "k_i")
    target = _unit(target_k_r, "target_k_r")
    m1, m2 = media
    n_hat = normals(p_12, surface).n_hat
    if float(np.dot(target, n_hat)) <= 0:
        raise NonTransmittedTarget("target direction does not point into the upper region")
    w = m1.n * k_i - m2.n * target
    return w - np.dot(w, n_hat) * n_hat


def focus_gradient_field(focus, k_i, media, surface: Surface) -> TangentialGradientField:
    """Design tangent field sending incident direction k_i to a point focus."""
    focus = np.asarray(focus, dtype=float)
    k_i = _unit(k_i, "k_i")
    m1, m2 = media

    def g(p12):
        P = surface.point(p12)
        n_hat = normals(p12, surface).n_hat
        d = focus - P
        d = d / np.linalg.norm(d, axis=-1, keepdims=True)
        if np.any(np.sum(d * n_hat, axis=-1) <= 0):
            raise NonTransmittedTarget("focus is not on the transmission side of the surface")
        w = m1.n * k_i - m2.n * d
        return w - np.sum(w * n_hat, axis=-1, keepdims=True) * n_hat

    return TangentialGradientField(g=g, surface=surface)


def integrate_phase(g: TangentialGradientField, surface: Optional[Surface] = None,
                    grid=64, lambda0: float = 1.0):
    """Least-squares potential of a tangent field over a footprint grid.

    Integrates the chart components of ``g`` (trapezoid edge equations, value
    pinned to 0 at the grid center) and rescales by 2pi/lambda0 so the result
    is a phase in radians.  Returns (phase, curl_residual) where the residual
    is the largest cell circulation of ``g`` divided by the cell area; an
    exact gradient field gives a residual at discretization level, a
    rotational field gives O(1).
    """
    surface = surface if surface is not None else g.surface
    n1g, n2g = (grid, grid) if isinstance(grid, (int, np.integer)) else tuple(grid)
    if n1g < 2 or n2g < 2:
        raise SingularSystem(f"integration grid {n1g}x{n2g} is degenerate")
    if lambda0 <= 0:
        raise BadParams("lambda0 must be positive")
    (a1, b1), (a2, b2) = surface.domain
    x1 = np.linspace(a1, b1, n1g)
    x2 = np.linspace(a2, b2, n2g)
    h1 = x1[1] - x1[0]
    h2 = x2[1] - x2[0]
    P12 = np.stack(np.meshgrid(x1, x2, indexing="ij"), axis=-1)
    G = g(P12)
    t1, t2 = tangent_frame(P12, surface)
    s1 = np.sum(G * t1, axis=-1)
    s2 = np.sum(G * t2, axis=-1)

    # edge equations psi[to] - psi[from] = trapezoid edge integral of g
    def node_id(i, j):
        return i * n2g + j

    ii, jj = np.meshgrid(np.arange(n1g - 1), np.arange(n2g), indexing="ij")
    from1 = node_id(ii, jj).ravel()
    to1 = node_id(ii + 1, jj).ravel()
    b_1 = (h1 * (s1[:-1, :] + s1[1:, :]) / 2).ravel()
    ii, jj = np.meshgrid(np.arange(n1g), np.arange(n2g - 1), indexing="ij")
    from2 = node_id(ii, jj).ravel()
    to2 = node_id(ii, jj + 1).ravel()
    b_2 = (h2 * (s2[:, :-1] + s2[:, 1:]) / 2).ravel()

    n_nodes = n1g * n2g
    n_edges = from1.size + from2.size
    rows = np.repeat(np.arange(n_edges), 2)
    cols = np.empty(2 * n_edges, dtype=int)
    vals = np.empty(2 * n_edges)
    cols[0::2] = np.concatenate([to1, to2])
    cols[1::2] = np.concatenate([from1, from2])
    vals[0::2] = 1.0
    vals[1::2] = -1.0
    pin = node_id(n1g // 2, n2g // 2)
    rows = np.concatenate([rows, [n_edges]])
    cols = np.concatenate([cols, [pin]])
    vals = np.concatenate([vals, [1.0]])
    A = coo_matrix((vals, (rows, cols)), shape=(n_edges + 1, n_nodes)).tocsr()
    b = np.concatenate([b_1, b_2, [0.0]])
    psi = lsqr(A, b, atol=1e-14, btol=1e-14, iter_lim=max(2000, 20 * n_nodes))[0]
    psi = psi.reshape(n1g, n2g)
    psi -= psi[n1g // 2, n2g // 2]

    circ = (h1 * (s1[:-1, :-1] + s1[1:, :-1]) / 2
            + h2 * (s2[1:, :-1] + s2[1:, 1:]) / 2
            - h1 * (s1[:-1, 1:] + s1[1:, 1:]) / 2
            - h2 * (s2[:-1, :-1] + s2[:-1, 1:]) / 2)
    curl_residual = float(np.max(np.abs(circ)) / (h1 * h2)) if circ.size else 0.0

    phase = sampled_phase(x1, x2, 2 * np.pi / lambda0 * psi)
    return phase, curl_residual


PHASE_CATALOG = ("zero", "linear", "quadratic", "radial-focusing", "sampled")
