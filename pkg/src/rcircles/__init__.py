"""Circles and diametrical geodesics in self-dual symmetric R-spaces, on concrete matrix models."""

from .scalars import DEFAULT_TOL, DomainError, Field, InconsistencyError, PreconditionError, Tolerance
from .sphere import SphereModel
from .grassmann import GrassmannModel
from .isotropic import IsotropicModel
from .classical import ClassicalModel
from .quadric import QuadricModel
from .suites import SUITES, build_model, run_suite

__all__ = [
    "DEFAULT_TOL", "DomainError", "Field", "InconsistencyError", "PreconditionError", "Tolerance",
    "SphereModel", "GrassmannModel", "IsotropicModel", "ClassicalModel", "QuadricModel",
    "SUITES", "build_model", "run_suite",
]
