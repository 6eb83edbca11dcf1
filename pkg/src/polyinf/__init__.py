"""Numerics for polyanalytic functions of infinite order.

Submodules
----------
polycore      truncated coefficient tables and their calculus
spaces        weighted coefficient spaces and kernel sections
kernels       closed-form reproducing kernels and special functions
gaussmoments  Gaussian moment and quadrature oracles
operators     shift, Gleason and multiplication operators
transforms    Segal-Bargmann and Berezin transforms
pick          Pick interpolation and the Blaschke-type factor
suite         registry of identity checks
"""

from .errors import DegreeOverflow, DomainViolation, PolyInfError, Singularity, TailNotConverged
from .polycore import PolyFun, SparseCoeffs, monomial, phi_basis
from .spaces import DA, SF, SH, SpaceWeight, inner, kernel_section, norm

__version__ = "0.1.0"

__all__ = [
    "DegreeOverflow", "DomainViolation", "PolyInfError", "Singularity", "TailNotConverged",
    "PolyFun", "SparseCoeffs", "monomial", "phi_basis",
    "DA", "SF", "SH", "SpaceWeight", "inner", "kernel_section", "norm",
]
