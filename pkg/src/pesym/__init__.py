"""Point symmetries of the hydrostatic primitive equations in pressure coordinates.

Submodules:

- ``fields``: state fields, physical constants, closed-form reference solutions
- ``residual``: equation residuals, vector fields and infinitesimal defects
- ``generators``: vector fields of the symmetry generators
- ``transforms``: finite point transformations and their action on solutions
- ``liealg``: exact truncated Lie algebra and the megaideal chain
- ``reduction``: group-invariant solutions of a two-dimensional subalgebra
- ``cli``: the ``pesym`` command-line front end
"""
from .errors import DomainError, VerificationError
from .fields import DEFAULT_BOX, Box, PhysConsts, StateField, field_from_config, sample_points
from .residual import pe_residual, residual_norms

__version__ = "0.1.0"

__all__ = [
    "DomainError", "VerificationError", "DEFAULT_BOX", "Box", "PhysConsts", "StateField",
    "field_from_config", "sample_points", "pe_residual", "residual_norms",
]
