"""Singular Bohr-Sommerfeld spectra near hyperbolic singularities."""

from . import graphbs, linalg, model_reso12, model_sphere, specfun

__all__ = ["graphbs", "linalg", "model_reso12", "model_sphere", "specfun"]
__version__ = "0.1.0"
