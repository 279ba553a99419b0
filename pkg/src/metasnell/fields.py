"""Media, modulated plane waves, and pointwise Maxwell residuals.

Gaussian units throughout: D = eps*E, B = mu*H, and the curl equations carry
4pi/c and eps/c (mu/c) factors.  Fields are complex; the measurable field is
the real part.  Away from the interface the fields are classical, so the
residuals here are plain central differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import BadParams, StencilCrossesInterface
from .geometry import Surface, classify
from .phase import PhaseDiscontinuity


@dataclass(frozen=True)
class Medium:
    """Homogeneous dielectric: permittivity, permeability, vacuum speed."""

    eps: float
    mu: float
    c: float = 1.0

    def __post_init__(self):
        if self.eps <= 0 or self.mu <= 0 or self.c <= 0:
            raise BadParams(f"medium parameters must be positive: {self}")

    @property
    def n(self) -> float:
        return float(np.sqrt(self.eps * self.mu))

    @property
    def v(self) -> float:
        return self.c / self.n


@dataclass(frozen=True)
class ModulatedWave:
    """Plane wave with an optional position-dependent extra phase.

    E(x, t) = A exp(i omega (k_dir.x / v - t)) exp(i phi(x)); with phi absent
    this is the usual plane wave in the owning medium.
    """

    A: np.ndarray
    k_dir: np.ndarray
    omega: float
    medium: Medium
    phi: Optional[PhaseDiscontinuity] = None

    def __post_init__(self):
        A = np.asarray(self.A, dtype=complex)
        k = np.asarray(self.k_dir, dtype=float)
        if A.shape != (3,) or k.shape != (3,):
            raise BadParams("A and k_dir must be 3-vectors")
        norm = np.linalg.norm(k)
        if abs(norm - 1.0) > 1e-9:
            raise BadParams(f"k_dir must be unit length, got |k_dir|={norm}")
        if self.omega <= 0:
            raise BadParams("omega must be positive")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "k_dir", k / norm)

    @property
    def v(self) -> float:
        return self.medium.v

    @property
    def lambda0(self) -> float:
        """Vacuum wavelength 2 pi c / omega."""
        return 2 * np.pi * self.medium.c / self.omega

    @property
    def k_scaled(self) -> np.ndarray:
        """Wave vector k_dir / v, so that omega * k_scaled has |.| = omega/v."""
        return self.k_dir / self.v


class FieldSample(NamedTuple):
    E: np.ndarray
    H: np.ndarray
    D: np.ndarray
    B: np.ndarray


def eval_E(w: ModulatedWave, x, t):
    """Electric field of the wave at (x, t); x may be (..., 3)."""
    x = np.asarray(x, dtype=float)
    theta = w.omega * ((x @ w.k_dir) / w.v - t)
    if w.phi is not None:
        theta = theta + w.phi.value(x)
    return w.A * np.exp(1j * theta)[..., None]


def eval_H_constructed(w: ModulatedWave, x, t, C: Optional[Callable] = None):
    """Magnetic field -(c/(mu omega)) E x (omega k + grad phi) + C(x).

    With C absent it is taken as 0, making H orthogonal to E pointwise.
    """
    x = np.asarray(x, dtype=float)
    kvec = np.broadcast_to(w.omega * w.k_scaled, x.shape).astype(complex).copy()
    if w.phi is not None:
        kvec += w.phi.gradient(x)
    E = eval_E(w, x, t)
    H = -(w.medium.c / (w.medium.mu * w.omega)) * np.cross(E, kvec)
    if C is not None:
        H = H + np.asarray(C(x), dtype=complex)
    return H


def field_sample(E, H, medium: Medium) -> FieldSample:
    """Bundle E, H with the material fields D = eps E, B = mu H."""
    E = np.asarray(E, dtype=complex)
    H = np.asarray(H, dtype=complex)
    return FieldSample(E=E, H=H, D=medium.eps * E, B=medium.mu * H)


def wave_E_field(w: ModulatedWave) -> Callable:
    return lambda x, t: eval_E(w, x, t)


def wave_H_field(w: ModulatedWave, C: Optional[Callable] = None) -> Callable:
    return lambda x, t: eval_H_constructed(w, x, t, C=C)


def fd_divergence(F: Callable, x, t, h: float):
    """Central-difference divergence of a vector field (x, t) -> 3-vector."""
    x = np.asarray(x, dtype=float)
    acc = 0.0 + 0.0j
    for j in range(3):
        e = np.zeros(3)
        e[j] = h
        acc += (F(x + e, t)[j] - F(x - e, t)[j]) / (2 * h)
    return acc


def fd_curl(F: Callable, x, t, h: float):
    """Central-difference curl of a vector field (x, t) -> 3-vector."""
    x = np.asarray(x, dtype=float)
    D = np.empty((3, 3), dtype=complex)
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        D[k] = (np.asarray(F(x + e, t)) - np.asarray(F(x - e, t))) / (2 * h)
    return np.array([D[1, 2] - D[2, 1], D[2, 0] - D[0, 2], D[0, 1] - D[1, 0]])


def fd_time(F: Callable, x, t, h_t: float):
    """Central-difference time derivative of a field (x, t) -> value."""
    return (np.asarray(F(x, t + h_t)) - np.asarray(F(x, t - h_t))) / (2 * h_t)


class MaxwellResidual(NamedTuple):
    div_e: float
    div_h: float
    curl_e: float
    curl_h: float


def _check_stencil(x, h: float, surface: Surface) -> None:
    pts = [x]
    for j in range(3):
        e = np.zeros(3)
        e[j] = h
        pts += [x + e, x - e]
    codes = [int(classify(p, surface)) for p in pts]
    if len(set(codes)) != 1:
        raise StencilCrossesInterface(
            f"finite-difference stencil at {tuple(x)} with h={h} straddles the interface")


def maxwell_residual(E: Callable, H: Callable, J: Callable, rho: Callable,
                     medium: Medium, x, t: float, h: float = 1e-3,
                     h_t: Optional[float] = None,
                     surface: Optional[Surface] = None) -> MaxwellResidual:
    """Norms of the four classical Maxwell equation defects at one point.

    E, H, J map (x, t) to complex 3-vectors and rho to a complex scalar.
    Space and time derivatives are central differences of step h and h_t.
    When a surface is given, the spatial stencil must stay on one side.
    """
    x = np.asarray(x, dtype=float)
    if h_t is None:
        h_t = h
    if surface is not None:
        _check_stencil(x, h, surface)
    eps, mu, c = medium.eps, medium.mu, medium.c
    r_div_e = abs(fd_divergence(E, x, t, h) - 4 * np.pi * rho(x, t) / eps)
    r_div_h = abs(fd_divergence(H, x, t, h))
    r_curl_e = np.linalg.norm(fd_curl(E, x, t, h) + (mu / c) * fd_time(H, x, t, h_t))
    r_curl_h = np.linalg.norm(fd_curl(H, x, t, h) - (4 * np.pi / c) * np.asarray(J(x, t))
                              - (eps / c) * fd_time(E, x, t, h_t))
    return MaxwellResidual(div_e=float(r_div_e), div_h=float(r_div_h),
                           curl_e=float(r_curl_e), curl_h=float(r_curl_h))


def zero_field(x, t=0.0):
    """Vector field that is identically zero (J or C placeholder)."""
    x = np.asarray(x, dtype=float)
    return np.zeros(x.shape, dtype=complex)


def zero_scalar(x, t=0.0):
    """Scalar field that is identically zero (rho placeholder)."""
    x = np.asarray(x, dtype=float)
    return np.zeros(x.shape[:-1], dtype=complex)
