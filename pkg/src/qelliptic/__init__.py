"""Exact quasi-elliptic cohomology of finite group actions on finite sets,
with a character map into an exact model of the Devoto-style elliptic target
and machine checks for the identities the construction rests on.
"""

from .cyclotomic import Cyclotomic
from .groups import (
    FiniteGroup,
    GroupHom,
    SL2Matrix,
    SL2_I,
    SL2_S,
    SL2_T,
    build_group,
    builtin,
    centralizer,
    commuting_pairs,
    conjugacy_classes,
    element_order,
    pair_orbits,
    sl2_act_pair,
)
from .cochains import (
    Cochain2,
    Cochain3,
    check_cocycle2,
    check_cocycle3,
    check_normalized,
    coboundary3,
    cup_product_cocycle,
    cyclic_cocycle,
    gro_character,
    pullback_cochain,
    transgress,
    value_order,
)
from .reps import (
    CentralExtension,
    CharacterTable,
    GradedRepModule,
    central_extension,
    character_table,
    extension_element_order,
    lambda_basis,
    projective_irreps,
)
from .qell import (
    GSet,
    QEllBasisElement,
    QEllClass,
    build_structure,
    fixed_points,
    point,
    q_multiply,
    qell_basis,
    qell_rank_report,
    restrict_class,
)
from .devoto import (
    EllClass,
    EllFunction,
    class_group_act,
    class_sl2_act,
    ell_equal,
    ell_eval,
    ell_normalize,
    ell_sl2_act,
    invariant_rank_pt,
)
from .chern import (
    atiyah_segal,
    chern_character,
    check_image_preservation,
    kernel_c,
    restrict_c,
    verify_willerton_line,
)

__version__ = "0.1.0"
