"""Jets, linear differential operators, the Laguerre-Forsyth normal form and
the classification of regular germs under projective changes of variable."""

from .config import DEFAULT, Config
from .diffop import (
    GaugeTransform,
    LinearOperator,
    apply_operator,
    change_variable,
    compose_transforms,
    conjugate,
    is_lf_form,
)
from .errors import LodeError, NumericError
from .germs import (
    GermSignature,
    LFSection,
    ParityCase,
    classify_pipeline,
    ell,
    equivalent,
    germ_class,
    normalize_germ,
    signature,
)
from .jet import Jet, compose, divide, reverse
from .normalform import gauge_normalize, lf_reduce, reduce_full, schwarzian, solve_schwarzian
from .projective import (
    ProjectiveMap,
    SymmetryResult,
    act_on_lf,
    infinitesimal_action,
    lift,
    symmetry_dimension,
)

__all__ = [
    "DEFAULT",
    "Config",
    "GaugeTransform",
    "GermSignature",
    "Jet",
    "LFSection",
    "LinearOperator",
    "LodeError",
    "NumericError",
    "ParityCase",
    "ProjectiveMap",
    "SymmetryResult",
    "act_on_lf",
    "apply_operator",
    "change_variable",
    "classify_pipeline",
    "compose",
    "compose_transforms",
    "conjugate",
    "divide",
    "ell",
    "equivalent",
    "gauge_normalize",
    "germ_class",
    "infinitesimal_action",
    "is_lf_form",
    "lf_reduce",
    "lift",
    "normalize_germ",
    "reduce_full",
    "reverse",
    "schwarzian",
    "signature",
    "solve_schwarzian",
    "symmetry_dimension",
]

__version__ = "0.1.0"
