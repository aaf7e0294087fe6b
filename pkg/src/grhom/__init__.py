"""Ext groups and derived global sections of complexes of coherent sheaves.

Everything is computed over GF(p) from graded modules over a polynomial ring
or a quotient of one.
"""
from .linalg import NotAComplexError, field_inverse
from .polyring import Polynomial, Ring, RingMismatchError
from .gradedmod import (
    BettiTable,
    DegreeError,
    FreeModule,
    ModuleMap,
    PresentedModule,
    cokernel,
    image,
    kernel,
    minimal_free_resolution,
    truncate_module,
)
from .complexes import (
    ChainMap,
    Complex,
    cone,
    hom_complex,
    koszul,
    minimize,
    resolve_complex,
    shift,
    strand,
    twist,
)
from .globalext import (
    BoundRequest,
    graded_ext,
    rhom_sheaf,
    sheaf_cohomology,
    truncation_bound,
    vanishing_check,
)
from .dercat import (
    DerivedObject,
    ext_table,
    is_exceptional,
    mutate_left,
    mutate_right,
    spherical_ext_check,
    spherical_twist,
)

__version__ = "0.1.0"

__all__ = [
    "BettiTable",
    "BoundRequest",
    "ChainMap",
    "Complex",
    "DegreeError",
    "DerivedObject",
    "FreeModule",
    "ModuleMap",
    "NotAComplexError",
    "Polynomial",
    "PresentedModule",
    "Ring",
    "RingMismatchError",
    "cokernel",
    "cone",
    "ext_table",
    "field_inverse",
    "graded_ext",
    "hom_complex",
    "image",
    "is_exceptional",
    "kernel",
    "koszul",
    "minimal_free_resolution",
    "minimize",
    "mutate_left",
    "mutate_right",
    "resolve_complex",
    "rhom_sheaf",
    "sheaf_cohomology",
    "shift",
    "spherical_ext_check",
    "spherical_twist",
    "strand",
    "truncate_module",
    "truncation_bound",
    "twist",
    "vanishing_check",
]
