"""Leaf functions of integer basis and the Duffing solutions built from them.

Subpackages
-----------
numerics
    tanh-sinh quadrature, monotone inversion, adaptive Runge-Kutta.
leaf
    the four leaf-function families, their constants and branch tables.
duffing
    the catalogue of exact cubic and cubic-quintic Duffing solutions and
    their damped extensions.
verify
    the verification battery (residuals, identities, periods, bounds,
    kinks, exact-vs-numeric agreement).
cli
    command-line interface (``leaffun`` entry point).
"""

from .leaf import Basis, BranchInfo, DomainError, LeafKind, get_basis, make_basis
from .duffing import Damping, DuffingCoefficients, SolutionSpec

__all__ = [
    "Basis",
    "BranchInfo",
    "DomainError",
    "LeafKind",
    "get_basis",
    "make_basis",
    "Damping",
    "DuffingCoefficients",
    "SolutionSpec",
]

__version__ = "0.1.0"
