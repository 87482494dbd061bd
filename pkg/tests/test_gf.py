import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from c2inv.gf import (
    FieldError,
    FieldMatrix,
    PrimePower,
    batch_determinant,
    determinant,
    enumerate_field,
    is_prime,
    make_field,
)

FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4), (5, 2)]


def poly_mulmod(a, b, mod, p):
    """Schoolbook oracle: product of coefficient lists reduced by a monic modulus."""
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] += x * y
    s = len(mod) - 1
    for k in range(len(prod) - 1, s - 1, -1):
        c = prod[k] % p
        for i in range(s + 1):
            prod[k - s + i] -= c * mod[i]
    return tuple(c % p for c in prod[:s]) + (0,) * (s - len(prod[:s]))


def test_is_prime_against_trial_division():
    for n in range(2000):
        assert is_prime(n) == (n > 1 and all(n % d for d in range(2, int(n**0.5) + 1)))


def test_make_field_rejects_composite():
    with pytest.raises(FieldError):
        make_field(4, 1)


def test_prime_field_modulus_trivial():
    F = make_field(2, 1)
    assert F.q == 2 and F.modulus == (0, 1)


def test_gf4_modulus_and_square():
    F = make_field(2, 2)
    assert F.modulus == (1, 1, 1)  # x^2 + x + 1
    x = F.gen
    assert x * x == x + 1


def test_gf9_modulus_is_smallest_irreducible():
    # exhaustive oracle: monic quadratics over F_3 without roots, smallest first
    irreducible = [
        (c0, c1, 1)
        for c1, c0 in itertools.product(range(3), repeat=2)
        if all((r * r + c1 * r + c0) % 3 for r in range(3))
    ]
    assert make_field(3, 2).modulus == irreducible[0] == (1, 0, 1)


def test_gf8_modulus():
    assert make_field(2, 3).modulus == (1, 1, 0, 1)  # x^3 + x + 1


def test_inverse_in_f3():
    F = make_field(3)
    assert F.inv(F.element(2)) == F.element(2)


def test_inverse_of_zero_rejected():
    F = make_field(3, 2)
    with pytest.raises(ZeroDivisionError):
        F.inv(F.zero)


def test_cross_field_mixing_rejected():
    with pytest.raises(FieldError):
        make_field(2, 2).add(make_field(2, 2).one, make_field(3).one)


@pytest.mark.parametrize("p,s", FIELDS)
def test_multiplication_matches_schoolbook_oracle(p, s):
    F = make_field(p, s)
    for a, b in itertools.product(enumerate_field(F), repeat=2):
        assert (a * b).coefficients == poly_mulmod(a.coefficients, b.coefficients, F.modulus, p)


@pytest.mark.parametrize("p,s", FIELDS)
def test_lagrange(p, s):
    F = make_field(p, s)
    for a in enumerate_field(F)[1:]:
        assert a ** (F.q - 1) == F.one


@pytest.mark.parametrize("p,s", [(2, 1), (2, 2), (3, 2)])
def test_enumerate_field_distinct(p, s):
    elems = enumerate_field(make_field(p, s))
    assert len(elems) == p**s and len(set(elems)) == p**s


def test_enumerate_f2():
    assert [e.code for e in enumerate_field(make_field(2))] == [0, 1]


@pytest.mark.parametrize("p,s", [(2, 2), (2, 3), (3, 2)])
def test_frobenius(p, s):
    F = make_field(p, s)
    rng = random.Random(1)
    elems = enumerate_field(F)
    for _ in range(200):
        a, b = rng.choice(elems), rng.choice(elems)
        assert (a + b) ** p == a**p + b**p


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_wilson_analogue(q):
    pp = PrimePower.from_q(q)
    F = make_field(pp.p, pp.s)
    prod = F.one
    for a in enumerate_field(F)[1:]:
        prod = prod * a
    assert prod == -F.one


@given(st.sampled_from(FIELDS), st.data())
@settings(max_examples=60, deadline=None)
def test_field_axioms(ps, data):
    F = make_field(*ps)
    pick = st.integers(0, F.q - 1).map(F.from_code)
    a, b, c = data.draw(pick), data.draw(pick), data.draw(pick)
    assert a + (b + c) == (a + b) + c
    assert a * (b * c) == (a * b) * c
    assert a * (b + c) == a * b + a * c
    assert a - a == F.zero
    if a:
        assert a * F.inv(a) == F.one


def test_wide_extension_field_without_tables():
    F = make_field(2, 11)  # q = 2048, above the table limit
    assert "mul" not in F._tables
    rng = random.Random(3)
    for _ in range(50):
        a, b = F.from_code(rng.randrange(F.q)), F.from_code(rng.randrange(F.q))
        assert (a * b).coefficients == poly_mulmod(a.coefficients, b.coefficients, F.modulus, 2)
        if a:
            assert a * F.inv(a) == F.one


# -- determinants -------------------------------------------------------------


def leibniz_det(F, rows):
    n = len(rows)
    total = F.zero
    for perm in itertools.permutations(range(n)):
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = F.one if inversions % 2 == 0 else -F.one
        for i, j in enumerate(perm):
            term = term * rows[i][j]
        total = total + term
    return total


def test_identity_determinant():
    for ps in [(2, 1), (3, 2), (5, 1)]:
        F = make_field(*ps)
        I = FieldMatrix(F, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        assert determinant(I) == F.one


def test_repeated_row_determinant():
    F = make_field(3, 2)
    x = F.gen
    M = FieldMatrix(F, [[x, 1, 2], [0, x + 1, x], [x, 1, 2]])
    assert determinant(M) == F.zero


def test_non_square_rejected():
    F = make_field(2)
    with pytest.raises(FieldError):
        determinant(FieldMatrix(F, [[1, 0, 1], [0, 1, 1]]))


def test_2x2_against_cofactor_over_gf9():
    F = make_field(3, 2)
    rng = np.random.default_rng(7)
    for _ in range(100):
        a, b, c, d = (F.from_code(int(v)) for v in rng.integers(0, 9, 4))
        assert determinant(FieldMatrix(F, [[a, b], [c, d]])) == a * d - b * c


@pytest.mark.parametrize("p,s,n", [(2, 2, 4), (3, 2, 3), (5, 1, 5), (2, 3, 4)])
def test_batch_determinant_against_leibniz(p, s, n):
    F = make_field(p, s)
    rng = np.random.default_rng(11)
    mats = rng.integers(0, F.q, size=(40, n, n))
    # sparse entries make singular matrices and pivot swaps common
    mats[rng.random(mats.shape) < 0.4] = 0
    dets = batch_determinant(F, mats)
    for M, d in zip(mats, dets):
        rows = [[F.from_code(int(v)) for v in row] for row in M]
        assert F.from_code(int(d)) == leibniz_det(F, rows)


def test_determinant_multiplicative_gf9():
    F = make_field(3, 2)
    rng = np.random.default_rng(5)
    for _ in range(30):
        A = FieldMatrix.from_codes(F, rng.integers(0, 9, (3, 3)))
        B = FieldMatrix.from_codes(F, rng.integers(0, 9, (3, 3)))
        assert determinant(A.matmul(B)) == determinant(A) * determinant(B)
