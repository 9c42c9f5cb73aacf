"""Determinantal point processes on the sphere S^d.

Exact sampling of isotropic projection DPPs (the harmonic ensemble and its
relatives), closed-form and quadrature expectations of Riesz and
logarithmic energies, and Monte Carlo statistics of the resulting point sets.
"""
from .errors import (AccuracyError, ComparisonError, ConvergenceError, DegeneracyError, DivergentEnergyError,
                     DomainError, NumericalError, PoleError, SamplerStallError, SingularConfigurationError,
                     SphereDPPError)
from .kernels import (HarmonicEnsemble, IsotropicProjectionKernel, dim_harmonic, dim_pi,
                      enumerate_projection_kernels, kernel_eval)
from .sampling import PointConfiguration, RngStream, sample_dpp, sample_uniform

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "ComparisonError", "ConvergenceError", "DegeneracyError", "DivergentEnergyError",
    "DomainError", "NumericalError", "PoleError", "SamplerStallError", "SingularConfigurationError",
    "SphereDPPError", "HarmonicEnsemble", "IsotropicProjectionKernel", "dim_harmonic", "dim_pi",
    "enumerate_projection_kernels", "kernel_eval", "PointConfiguration", "RngStream", "sample_dpp",
    "sample_uniform",
]
