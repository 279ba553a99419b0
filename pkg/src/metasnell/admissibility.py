"""Admissibility of a modulated wave: orthogonality, required current, ohmic test.

A modulated wave solves the source-free Gauss law only if its amplitude is
orthogonal to omega*k + grad(phi); it then solves the full system once the
magnetic field is built by time integration and the current density is chosen
as a position-dependent scalar multiple of E.  An ohmic current (J = sigma E)
is only consistent when that multiplier is constant, which pins the phase to
an affine function with a matched gradient modulus.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import BadParams
from .fields import (MaxwellResidual, Medium, ModulatedWave, eval_E, fd_divergence,
                     maxwell_residual, wave_E_field, wave_H_field, zero_scalar)


def _sample_array(samples):
    x = np.asarray(samples, dtype=float)
    if x.ndim == 1:
        x = x[None, :]
    if x.shape[-1] != 3:
        raise BadParams("samples must be 3-points")
    return x.reshape(-1, 3)


def _wave_kvec(w: ModulatedWave, x):
    kvec = np.broadcast_to(w.omega * w.k_scaled, x.shape).astype(complex).copy()
    if w.phi is not None:
        kvec += w.phi.gradient(x)
    return kvec


def check_orthogonality(w: ModulatedWave, samples) -> float:
    """sup over samples of |A . (omega k + grad phi)|; 0 means admissible."""
    x = _sample_array(samples)
    kvec = _wave_kvec(w, x)
    return float(np.max(np.abs(kvec @ w.A)))


def required_current_multiplier(w: ModulatedWave, x):
    """Scalar m with J = m(x) E making the curl-H equation hold (C = 0)."""
    x = np.asarray(x, dtype=float)
    eps, mu, c = w.medium.eps, w.medium.mu, w.medium.c
    omega = w.omega
    if w.phi is None:
        lap = np.zeros(x.shape[:-1])
    else:
        lap = w.phi.lap(x)
    kvec = _wave_kvec(w, x)
    mod2 = np.sum(kvec * kvec, axis=-1)
    return c / (4 * np.pi) * (1j * omega * eps / c - c / (mu * omega) * (lap + 1j * mod2))


def required_current_field(w: ModulatedWave, curl_C: Optional[Callable] = None) -> Callable:
    """Current density closure (x, t) -> J for use in the residual checks.

    J = m(x) E(x, t), plus (c/4pi) curl C when the gauge field C is not zero;
    the caller supplies curl C analytically.
    """

    def J(x, t):
        x = np.asarray(x, dtype=float)
        val = required_current_multiplier(w, x)[..., None] * eval_E(w, x, t)
        if curl_C is not None:
            val = val + w.medium.c / (4 * np.pi) * np.asarray(curl_C(x), dtype=complex)
        return val

    return J


class OhmicResult(NamedTuple):
    compatible: bool
    max_laplacian: float
    max_modulus_dev: float
    linear_fit_residual: Optional[float]


def ohmic_compatibility(w: ModulatedWave, samples, tol: float = 1e-8) -> OhmicResult:
    """Can the required current be ohmic (constant multiplier) for this wave?

    Requires both a vanishing phase Laplacian and |omega k + grad phi| equal
    to omega/v over the samples.  When either deviation exceeds ``tol`` the
    phase cannot be affine with the matched modulus and the verdict is no.
    An affine least-squares fit residual of phi is reported as a witness.
    """
    x = _sample_array(samples)
    if w.phi is None:
        lap = np.zeros(x.shape[0])
        grad = np.zeros((x.shape[0], 3))
        vals = np.zeros(x.shape[0])
    else:
        lap = w.phi.lap(x)
        grad = w.phi.gradient(x)
        vals = w.phi.value(x)
    kvec = w.omega * w.k_scaled + grad
    mod = np.linalg.norm(kvec, axis=-1)
    max_lap = float(np.max(np.abs(lap)))
    max_dev = float(np.max(np.abs(mod - w.omega / w.v)))
    fit_residual = None
    if x.shape[0] >= 4:
        design = np.concatenate([np.ones((x.shape[0], 1)), x], axis=1)
        coef, *_ = np.linalg.lstsq(design, vals, rcond=None)
        fit_residual = float(np.max(np.abs(design @ coef - vals)))
    return OhmicResult(compatible=(max_lap < tol and max_dev < tol),
                       max_laplacian=max_lap, max_modulus_dev=max_dev,
                       linear_fit_residual=fit_residual)


@dataclass(frozen=True)
class AdmissibilityReport:
    """Everything the construction yields at the sample points."""

    points: np.ndarray
    orthogonality_sup: float
    div_h_sup: float
    residual_sup: MaxwellResidual
    multiplier_samples: np.ndarray
    ohmic: OhmicResult


def admissibility_report(w: ModulatedWave, samples, t: float = 0.0,
                         h: float = 1e-3) -> AdmissibilityReport:
    """Run the whole construction at the samples and report sup quantities.

    The current is taken from the required multiplier and the charge density
    as zero, so the four residuals measure how well the constructed triple
    (E, H, J) satisfies the field equations at step ``h``.
    """
    x = _sample_array(samples)
    E = wave_E_field(w)
    H = wave_H_field(w)
    J = required_current_field(w)
    div_h = max(abs(fd_divergence(H, p, t, h)) for p in x)
    res = [maxwell_residual(E, H, J, zero_scalar, w.medium, p, t, h=h) for p in x]
    res_sup = MaxwellResidual(*(max(r[i] for r in res) for i in range(4)))
    return AdmissibilityReport(points=x,
                               orthogonality_sup=check_orthogonality(w, x),
                               div_h_sup=float(div_h),
                               residual_sup=res_sup,
                               multiplier_samples=required_current_multiplier(w, x),
                               ohmic=ohmic_compatibility(w, x))
