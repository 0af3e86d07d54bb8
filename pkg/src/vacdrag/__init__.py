"""Vacuum excitation of a stationary detector near a moving dissipative
half-space: susceptibility models, moving-medium response tensors, dyadic
Green functions, excitation rates, and a scenario-driven CLI.

Natural units throughout: c = hbar = eps0 = mu0 = 1.
"""

__version__ = "0.1.0"

from .kinematics import (CouplingTensors, MotionFrame, coupling_tensors,
                         doppler, lorentz_gamma, moving_susceptibility_tensors)
from .medium import (IdentityReport, LorentzOscillator, SusceptibilityModel,
                     chi, coupling_amplitude, kk_reconstruct, load_model,
                     model_from_dict, model_to_dict, verify_identity_1)
from .quadrature import (IntegralResult, NonConvergenceError, QuadratureSpec,
                         integrate_adaptive, integrate_semi_infinite,
                         principal_value)
from .tensors import ComplexTensor3
from .greens import (DissipationReport, ReciprocityReport,
                     ReflectionCoefficients, SurfaceGeometry, free_green_k,
                     green_dissipation_identity, im_free_green_coincident,
                     reciprocity_check, reflection_coefficients,
                     surface_green_coincident)
from .rates import (DetectorSpec, RateResult, finite_time_probability,
                    rate_free_space, rate_surface, rate_vs_distance)

__all__ = [
    "ComplexTensor3",
    "CouplingTensors",
    "DetectorSpec",
    "DissipationReport",
    "IdentityReport",
    "IntegralResult",
    "LorentzOscillator",
    "MotionFrame",
    "NonConvergenceError",
    "QuadratureSpec",
    "RateResult",
    "ReciprocityReport",
    "ReflectionCoefficients",
    "SurfaceGeometry",
    "SusceptibilityModel",
    "__version__",
    "chi",
    "coupling_amplitude",
    "coupling_tensors",
    "doppler",
    "finite_time_probability",
    "free_green_k",
    "green_dissipation_identity",
    "im_free_green_coincident",
    "integrate_adaptive",
    "integrate_semi_infinite",
    "kk_reconstruct",
    "load_model",
    "lorentz_gamma",
    "model_from_dict",
    "model_to_dict",
    "moving_susceptibility_tensors",
    "principal_value",
    "rate_free_space",
    "rate_surface",
    "rate_vs_distance",
    "reciprocity_check",
    "reflection_coefficients",
    "surface_green_coincident",
    "verify_identity_1",
]
