"""Exact jet-space, blow-up and Jacobian-multiplicity computations for
polynomial maps of affine varieties over the rationals."""

__version__ = "0.1.0"

from .errors import ArityError, DomainError, JetcalcError, ParseError, ResourceLimitError, SamplingError

__all__ = [
    "ArityError",
    "DomainError",
    "JetcalcError",
    "ParseError",
    "ResourceLimitError",
    "SamplingError",
    "__version__",
]
