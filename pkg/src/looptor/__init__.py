"""Simplicial loop groups, Adams' cobar construction and twisted tensor products."""

from .chains import Chain
from .cobar import cobar_basis, cobar_diff, cobar_homology, cobar_to_rgx
from .homology import GradedComplex, HomologyGroup, homology, homology_all, smith_normal_form
from .loop_group import Convention, GroupWord, LoopGroup, g_degeneracy, g_face, is_degenerate_word, loop_group, tau
from .prisms import PrismCalculus, verify_pseudosection
from .simplicial import (
    IncreasingMap,
    SimplexRef,
    SimplicialError,
    SimplicialSet,
    builtin,
    load,
    loads,
    reduced_simplex,
    resolve_space,
    sphere,
    standard_simplex,
    wedge_of_spheres,
)
from .twisted import (
    ConstantGroup,
    FiniteFiber,
    GroupAction,
    PrincipalFiber,
    TwistingFunction,
    check_twisting,
    compare_homology,
    cyclic_group,
    derive,
    induce_gx_morphism,
    psi,
    psi_unit,
    tcp_diff,
    tt_diff,
)
from .twisting import dot, phi, shuffles, tc, tcx_perm

__version__ = "0.1.0"
