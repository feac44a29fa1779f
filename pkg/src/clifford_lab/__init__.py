"""Numerical and exact checks for minimal hypersurfaces in round spheres.

Curvature algebra from the Gauss equation, Clifford product models, the
Otsuki profile ODE with its leaf measure, pinching constants and the
low-dimensional Gauss-Bonnet bookkeeping.
"""

__version__ = "0.1.0"
