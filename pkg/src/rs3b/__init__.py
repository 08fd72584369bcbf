"""Numerical workbench for the compactified trigonometric Ruijsenaars-Schneider system.

Realizes the system by quasi-Hamiltonian reduction of the internally fused
double of SU(n) and exposes its self-duality map as the mapping-class
generator S, together with randomized verification campaigns for every
identity the construction satisfies.
"""

from .system import Coupling, LocalPoint, ProjectivePoint

__all__ = ["Coupling", "LocalPoint", "ProjectivePoint"]
__version__ = "0.1.0"
