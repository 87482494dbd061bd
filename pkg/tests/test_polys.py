import random
from fractions import Fraction
from math import prod

import numpy as np
import pytest

from c2inv.gf import make_field
from c2inv.graph import VertexPartition, find_three_valent, three_valent_corners
from c2inv.polys import (
    DodgsonEvaluator,
    MultilinearPoly,
    build_incidence,
    degree,
    dodgson_eval,
    forest_poly,
    kirchhoff,
    psi_eval,
)
from c2inv.verify import corner_degrees, matrix_tree_agreement

EXAMPLE_FOREST = "α₁α₂α₃α₅ + α₂α₃α₄α₅ + α₂α₃α₄α₆ + α₂α₃α₅α₆"


def fraction_det(rows):
    A = [[Fraction(x) for x in r] for r in rows]
    n, det = len(A), Fraction(1)
    for k in range(n):
        piv = next((r for r in range(k, n) if A[r][k]), None)
        if piv is None:
            return 0
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = -det
        det *= A[k][k]
        for r in range(k + 1, n):
            f = A[r][k] / A[k][k]
            for c in range(k, n):
                A[r][c] -= f * A[k][c]
    return int(det)


def integer_matrix(system, alphas):
    N, E = system.graph.num_edges, system.E
    n = system.size
    M = [[0] * n for _ in range(n)]
    for e in range(N):
        M[e][e] = alphas[e]
        for r in range(len(system.rows)):
            M[e][N + r] = int(E[r, e])
            M[N + r][e] = -int(E[r, e])
    return M


def tree_sum(G, alphas):
    return sum(prod(alphas[e - 1] for e in mono) for mono in kirchhoff(G).terms())


# -- symbolic polynomials -----------------------------------------------------------


def test_example_forest_polynomial(k4):
    phi = forest_poly(k4, VertexPartition([["a", "b"], ["c"]]))
    assert phi.pretty() == EXAMPLE_FOREST
    assert str(phi) == EXAMPLE_FOREST
    assert phi.pretty(ascii=True) == "a1*a2*a3*a5 + a2*a3*a4*a5 + a2*a3*a4*a6 + a2*a3*a5*a6"


def test_triangle_kirchhoff(triangle):
    assert kirchhoff(triangle).terms() == [(1,), (2,), (3,)]


def test_kirchhoff_of_k4(k4):
    psi = kirchhoff(k4)
    assert len(psi) == 16
    assert psi.is_homogeneous() and degree(psi) == 3


def test_kirchhoff_of_disconnected_graph_warns():
    from c2inv.graph import parse_edge_list

    with pytest.warns(UserWarning):
        assert kirchhoff(parse_edge_list("a b\nc d\n")).is_zero()


def test_zero_polynomial_degree():
    zero = MultilinearPoly(3, frozenset())
    assert degree(zero) == -float("inf")
    assert zero.pretty() == "0"


def test_repeated_monomial_rejected():
    with pytest.raises(ValueError, match="repeated"):
        MultilinearPoly.from_sets(2, [[1], [1]])
    with pytest.raises(ValueError):
        MultilinearPoly.from_sets(2, [[3]])


def test_single_part_forest_poly_is_kirchhoff(oct_g):
    assert forest_poly(oct_g, VertexPartition([[oct_g.vertices[0]]])) == kirchhoff(oct_g)


def test_evaluate_single_point(triangle):
    F = make_field(3, 2)
    x = F.gen
    assert kirchhoff(triangle).evaluate(F, [x, F.one, F.zero]) == x + F.one
    assert kirchhoff(triangle).evaluate(F, {1: 1, 2: 1, 3: 1}) == F.element(3 % 3)


# -- the matrix M --------------------------------------------------------------------


def test_incidence_shape_and_default_convention(k4):
    system = build_incidence(k4)
    assert system.E.shape == (3, 6)
    assert system.removed_row == "d"
    assert system.size == 9
    # edge 1 = ab points from a to b
    assert system.E[0, 0] == 1 and system.E[1, 0] == -1


@pytest.mark.parametrize("fixture", ["k4", "oct_g", "c7"])
def test_integer_determinant_is_kirchhoff(fixture, request):
    G = request.getfixturevalue(fixture)
    rng = random.Random(7)
    system = build_incidence(G)
    for _ in range(5):
        alphas = [rng.randint(-5, 5) for _ in G.edge_ids]
        assert fraction_det(integer_matrix(system, alphas)) == tree_sum(G, alphas)


@pytest.mark.parametrize("fixture", ["k4", "oct_g", "c7"])
def test_determinant_independent_of_convention(fixture, request):
    G = request.getfixturevalue(fixture)
    rng = random.Random(11)
    F = make_field(5, 1)
    pts = np.array([[rng.randrange(5) for _ in G.edge_ids] for _ in range(50)])
    expected = kirchhoff(G).evaluate_codes(F, pts)
    for _ in range(5):
        orientation = [tuple(rng.sample(e, 2)) for e in G.edges]
        row = rng.choice(G.vertices)
        got = DodgsonEvaluator(build_incidence(G, orientation, row), F)(pts)
        assert np.array_equal(got, expected)


def test_bad_orientation_rejected(k4):
    from c2inv.graph import GraphError

    with pytest.raises(GraphError):
        build_incidence(k4, orientation=[("a", "c")] * 6)
    with pytest.raises(GraphError):
        build_incidence(k4, removed_row="z")


@pytest.mark.parametrize("fixture", ["k4", "oct_g", "c7"])
@pytest.mark.parametrize("p, s", [(2, 1), (3, 1), (2, 2), (5, 1)])
def test_matrix_tree_agreement(fixture, p, s, request):
    G = request.getfixturevalue(fixture)
    agree, total = matrix_tree_agreement(G, p, s, 500, np.random.default_rng(3))
    assert agree == total == 500


def test_psi_eval_over_extension_field(k4):
    F = make_field(2, 2)
    point = [F.gen, F.one, F.gen, F.one, F.one, F.gen + F.one]
    assert psi_eval(k4, point, F) == kirchhoff(k4).evaluate(F, point)


# -- Dodgson values at a corner ------------------------------------------------------


@pytest.mark.parametrize("fixture", ["k4", "oct_g", "c7"])
def test_corner_variables_do_not_appear(fixture, request):
    G = request.getfixturevalue(fixture)
    F = make_field(5, 1)
    system = build_incidence(G)
    rng = np.random.default_rng(5)
    for corner in three_valent_corners(G):
        e1, e2, e3 = corner.edges
        pts = rng.integers(0, 5, size=(40, G.num_edges))
        shaken = pts.copy()
        shaken[:, [e1 - 1, e2 - 1, e3 - 1]] = rng.integers(0, 5, size=(40, 3))
        for I, J, K in (([e1], [e3], [e2]), ([e1, e2], [e2, e3], [])):
            ev = DodgsonEvaluator(system, F, I, J, K)
            assert np.array_equal(ev(pts), ev(shaken))


def test_dodgson_integer_oracle(k4):
    # Psi^{1,3}_2: delete row 1 and column 3 of M, set alpha_2 = 0
    system = build_incidence(k4)
    corner = find_three_valent(k4)
    e1, e2, e3 = corner.edges
    rng = random.Random(2)
    F = make_field(7, 1)
    for _ in range(10):
        alphas = [rng.randint(0, 6) for _ in k4.edge_ids]
        a0 = list(alphas)
        a0[e2 - 1] = 0
        M = integer_matrix(system, a0)
        minor_rows = [r for i, r in enumerate(M) if i != e1 - 1]
        minor_ = [[x for j, x in enumerate(r) if j != e3 - 1] for r in minor_rows]
        expected = fraction_det(minor_) % 7
        assert dodgson_eval(k4, [e1], [e3], [e2], alphas, F).code == expected


@pytest.mark.parametrize("fixture", ["k4", "oct_g", "c7"])
def test_corner_degrees(fixture, request):
    G = request.getfixturevalue(fixture)
    N = G.num_edges
    assert corner_degrees(G) == (N // 2 - 1, N // 2 - 2)


@pytest.mark.parametrize("fixture", ["k4", "oct_g", "c7"])
def test_dodgson_homogeneity_matches_forest_degrees(fixture, request):
    # scaling the free variables by t scales each factor by t^degree
    G = request.getfixturevalue(fixture)
    N = G.num_edges
    F = make_field(7, 1)
    system = build_incidence(G)
    corner = find_three_valent(G)
    e1, e2, e3 = corner.edges
    free = [e for e in G.edge_ids if e not in corner.edges]
    rng = np.random.default_rng(9)
    pts = rng.integers(0, 7, size=(30, len(free)))
    for (I, J, K), d in ((([e1], [e3], [e2]), N // 2 - 1), (([e1, e2], [e2, e3], []), N // 2 - 2)):
        ev = DodgsonEvaluator(system, F, I, J, K, free=free)
        base = ev(pts)
        for t in (2, 3, 5):
            assert np.array_equal(ev(pts * t % 7), base * pow(t, d, 7) % 7)


def test_dodgson_rejects_unbalanced_minor(k4):
    with pytest.raises(ValueError):
        DodgsonEvaluator(build_incidence(k4), make_field(2, 1), I=[1], J=[])
