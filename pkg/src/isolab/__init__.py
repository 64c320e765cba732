"""Partial Horn theories, finite models, one-indeterminate normal forms and isotropy groups."""

from .dsl import DSLError, format_theory, parse_term, parse_theory
from .groups import GroupTable, describe, group_isomorphic, group_isomorphism
from .isotropy import (
    ClosureEscape,
    IsotropyElement,
    brute_force_isotropy,
    center_auts,
    check_definable_inner,
    closed_form_isotropy,
    inv_elements,
    picard,
    setting_for,
    sigma,
    theta,
)
from .models import HomKind, Homomorphism, PartialStructure, check_homomorphism, check_model, eval_term, holds
from .phl import App, Equation, Horn, OpSymbol, Sequent, Signature, SortError, Theory, Var, infer_sort, substitute
from .theories import (
    CrossedModule,
    FiniteCategory,
    FiniteGroup,
    FiniteMonoid,
    FiniteStrictMonCat,
    InvariantError,
    Presheaf,
    SymmetricStrictMonCat,
    build_theory,
    decode_model,
    delta_nabla,
    encode_model,
    ob_arr,
)

__version__ = "0.1.0"
