"""Refraction and reflection across phase-shifting interfaces.

Core objects: graph surfaces with normals and tangent frames, homogeneous
media, modulated plane waves, and scalar phase discontinuities.  On top of
those: the direction law solver and ray tracer, weak-form pairings with
interface jump decompositions, the wave admissibility construction, and a
batch CLI.
"""

from .errors import (BadParams, ConfigError, GrazingIncidence, MetasnellError,
                     NoBackwardRoot, NoForwardRoot, NonTransmittedTarget,
                     OutOfDomain, QuadratureBudgetExceeded, SingularSystem,
                     StencilCrossesInterface, TotalInternalReflection,
                     UnknownCatalogEntry)
from .geometry import (NormalPair, Region, Surface, area_element, classify,
                       make_surface, normals, surface_from_csv, tangent_frame)
from .gridio import read_grid_csv, write_grid_csv
from .fields import (FieldSample, MaxwellResidual, Medium, ModulatedWave, eval_E,
                     eval_H_constructed, field_sample, maxwell_residual,
                     wave_E_field, wave_H_field)
from .phase import (PhaseDiscontinuity, SampledPhase, TangentialGradientField,
                    focus_gradient_field, integrate_phase, make_phase,
                    required_tangential_gradient, sampled_phase)
from .snell import (RefractionResult, TracedRay, law_residual, reflect, refract,
                    trace_bundle)
from .weakform import (DecompositionCheck, JumpReport, PiecewiseField, QuadSpec,
                       TestFunction, boundary_audit, continuity_residual,
                       decomposition_suite, dist_curl, dist_divergence,
                       div_of_curl_residual, jump_decomposition_check,
                       surface_integral, tangential_match)
from .admissibility import (AdmissibilityReport, OhmicResult, admissibility_report,
                            check_orthogonality, ohmic_compatibility,
                            required_current_field, required_current_multiplier)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityReport", "BadParams", "ConfigError", "DecompositionCheck",
    "FieldSample", "GrazingIncidence", "JumpReport", "MaxwellResidual",
    "Medium", "MetasnellError", "ModulatedWave", "NoBackwardRoot",
    "NoForwardRoot", "NonTransmittedTarget", "NormalPair", "OhmicResult",
    "OutOfDomain", "PhaseDiscontinuity", "PiecewiseField", "QuadSpec",
    "QuadratureBudgetExceeded", "RefractionResult", "Region", "SampledPhase",
    "SingularSystem", "StencilCrossesInterface", "Surface",
    "TangentialGradientField", "TestFunction", "TotalInternalReflection",
    "TracedRay", "UnknownCatalogEntry", "admissibility_report", "area_element",
    "boundary_audit", "check_orthogonality", "classify", "continuity_residual",
    "decomposition_suite", "dist_curl", "dist_divergence",
    "div_of_curl_residual", "eval_E", "eval_H_constructed", "field_sample",
    "focus_gradient_field", "integrate_phase", "jump_decomposition_check",
    "law_residual", "make_phase", "make_surface", "maxwell_residual", "normals",
    "ohmic_compatibility", "read_grid_csv", "reflect", "refract",
    "required_current_field",
    "required_current_multiplier", "required_tangential_gradient",
    "sampled_phase", "surface_from_csv", "surface_integral", "tangent_frame",
    "tangential_match", "trace_bundle", "wave_E_field", "wave_H_field",
    "write_grid_csv",
]
