"""Exact computation of the c2 invariant of Feynman graphs at prime powers.

Three independent routes compute c2: direct point counting of the Kirchhoff
polynomial, point counting of two Dodgson polynomials at a 3-valent vertex,
and coefficient extraction modulo p.  The package also checks the relation
c2 at p^s = (-1)^(s+1) (c2 at p)^s mod p on small graphs.
"""

from .gf import Field, FieldElement, FieldMatrix, PrimePower, determinant, enumerate_field, make_field
from .graph import (
    Graph,
    ThreeValentCorner,
    VertexPartition,
    compatible_forests,
    decompletion,
    find_three_valent,
    is_primitive_divergent,
    minor,
    parse_edge_list,
    spanning_trees,
)
from .polys import MultilinearPoly, build_incidence, degree, dodgson_eval, forest_poly, kirchhoff, psi_eval
from .counting import (
    PointCount,
    ResidueReport,
    c2_via_definition,
    c2_via_dodgson,
    check_3valent_identity,
    point_count,
)
from .coeff import (
    base_p_digits,
    c2_via_coefficient,
    capped_coeff,
    chevalley_coeff_check,
    count_edge_partitions,
    lucas_binom,
    prop_both_sides,
    prop_counterexample_nonmultilinear,
)
from .theorem import compute_c2, theorem1_verify

__version__ = "0.1.0"
