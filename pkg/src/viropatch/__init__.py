"""Signed supports of exponential sums: Gale duals, separating hyperplanes,
signed reduced discriminants, chambers, tropical patchworking and the
five-point classifier."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    BoundaryCase,
    InputError,
    ResolutionTooCoarse,
    ViroPatchError,
)
from .support import SignedSupport, gale_dual, gale_dual_of, load_support  # noqa: F401
