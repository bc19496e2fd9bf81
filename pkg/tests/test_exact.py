from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qrank.exact import Cyc, NotRational, cyc_to_rat, cyclotomic_poly, kronecker, root_of_unity, zeta_pow


@pytest.mark.parametrize("a,b,want", [(1, 7, 1), (3, 5, -1), (2, 7, 1), (12, 5, -1), (12, 7, -1), (12, 11, 1),
                                      (12, 13, 1), (0, 5, 0), (10, 5, 0)])
def test_kronecker_table(a, b, want):
    assert kronecker(a, b) == want


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 23])
def test_kronecker_matches_euler_criterion(p):
    for a in range(1, p):
        euler = pow(a, (p - 1) // 2, p)
        assert kronecker(a, p) == (1 if euler == 1 else -1)


def test_roots_of_unity_basics():
    assert zeta_pow(5, 5) == 1
    assert zeta_pow(4, 2) == -1
    total = zeta_pow(5, 0)
    for j in range(1, 5):
        total = total + zeta_pow(5, j)
    assert total == 0


def test_cyc_to_rat():
    assert cyc_to_rat(zeta_pow(5, 0)) == 1
    s = zeta_pow(5, 1) + zeta_pow(5, 2) + zeta_pow(5, 3) + zeta_pow(5, 4)
    assert cyc_to_rat(s) == -1
    with pytest.raises(NotRational):
        cyc_to_rat(zeta_pow(5, 1))


def test_cyclotomic_poly_degrees():
    from math import gcd
    for n in range(1, 40):
        phi = sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)
        assert len(cyclotomic_poly(n)) - 1 == phi


def test_root_of_unity_rational_argument():
    assert root_of_unity(Fraction(1, 4)) == zeta_pow(4, 1)
    assert root_of_unity(Fraction(3, 2)) == -1


cyc5 = st.lists(st.fractions(min_value=-50, max_value=50, max_denominator=20), min_size=4, max_size=4)
conductors = st.sampled_from([1, 3, 4, 5, 8, 12, 24])


@settings(max_examples=60, deadline=None)
@given(cyc5, cyc5, cyc5)
def test_field_axioms_q_zeta5(a, b, c):
    x, y, z = Cyc(5, a), Cyc(5, b), Cyc(5, c)
    assert (x + y) * z == x * z + y * z
    assert x * y == y * x
    if not x.is_zero():
        assert x * x.inverse() == 1


@settings(max_examples=60, deadline=None)
@given(conductors, conductors, st.integers(-30, 30), st.integers(-30, 30))
def test_mixed_conductor_products(n, m, j, k):
    # zeta_n^j zeta_m^k = zeta_{nm}^{jm + kn}
    assert zeta_pow(n, j) * zeta_pow(m, k) == zeta_pow(n * m, j * m + k * n)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 30), st.integers(-50, 50))
def test_conjugate_is_inverse_on_roots(n, k):
    z = zeta_pow(n, k)
    assert z.conj() == z.inverse()
    assert abs(complex(z) - complex(z.conj()).conjugate()) < 1e-12
