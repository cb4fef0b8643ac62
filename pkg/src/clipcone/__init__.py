"""Exact computations with clipped symmetric cones, their reflection groups
and their descent to invariant subspaces of finite groups."""
from __future__ import annotations

__version__ = "0.1.0"

from .chamber import (
    DirichletDomain,
    ReductionTrace,
    crossing_count,
    dirichlet_domain,
    reduce,
    reflection_ball,
    translate_disjointness,
    word_ball,
)
from .clipping import (
    ClippedCone,
    Root,
    canonicalize_roots,
    check_integrality,
    check_pairwise,
    direct_sum_clipped,
    member_clipped,
    reflection_matrix,
    validate_clipped,
)
from .descent import DescentReport, centralizer_lift, descend, descend_walls, orbit_sum
from .estimators import ChamberReducer, InvariantDescent, InvariantProjector, check_rational_array
from .jordan import (
    JordanAlgebra,
    check_axioms,
    from_symcone,
    invariant_subalgebra,
    jmul,
    quadratic_rep,
    spin_factor,
    sym_matrices,
    transporter,
)
from .lattice import (
    FiniteAction,
    QuadLattice,
    group_closure,
    invariant_form,
    invariant_sublattice,
    maschke_projection,
    reynolds,
    signature,
)
from .polycone import PolyCone, dd_convert, direct_sum, rules
from .qfield import QuadraticScalar
from .symcone import Factor, SymCone, invariant_hyperbolic_type, member, validate

