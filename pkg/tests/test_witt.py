import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from scaffoldlab.errors import ConfigError
from scaffoldlab.series import LaurentSeries
from scaffoldlab.witt import (
    IntPolynomial,
    WittVector,
    addition_polynomials,
    carry_polynomial,
    coefficient,
    evaluate,
    isobaric_weight,
    monomial,
    truncated_polynomial,
    witt_add,
    witt_integer,
)

GRID = [(2, 1), (2, 2), (2, 3), (3, 2), (5, 2)]


def ghost(vec, p, i):
    return sum(p**j * vec[j] ** (p ** (i - j)) for j in range(i + 1))


def sympy_sums(p, n):
    # independent expansion of the defining recursion with sympy
    X = sympy.symbols(f"X0:{n}")
    Y = sympy.symbols(f"Y0:{n}")
    S = []
    for i in range(n):
        tot = sum(p**j * (X[j] ** (p ** (i - j)) + Y[j] ** (p ** (i - j))) for j in range(i + 1))
        tot -= sum(p**j * S[j] ** (p ** (i - j)) for j in range(i))
        S.append(sympy.expand(tot / p**i))
    return X, Y, S


def test_s0_and_s1():
    S = addition_polynomials(2, 2)
    assert S[0].dump() == ["1 X0", "1 Y0"]
    # over the integers the mixed coefficient is -1; it is 1 mod 2
    assert S[1].dump() == ["-1 X0*Y0", "1 X1", "1 Y1"]
    assert S[1].reduce_mod(2).coefficient(monomial(2, X={0: 1}, Y={0: 1})) == 1
    S3 = addition_polynomials(3, 2)
    assert S3[1].dump() == ["-1 X0^2*Y0", "-1 X0*Y0^2", "1 X1", "1 Y1"]


@pytest.mark.parametrize("p,n", [(2, 4), (3, 3), (5, 2), (7, 2)])
def test_ghost_components(p, n):
    rng = random.Random(p * 100 + n)
    S = addition_polynomials(p, n)
    for _ in range(5):
        xs = [rng.randint(-5, 5) for _ in range(n)]
        ys = [rng.randint(-5, 5) for _ in range(n)]
        s = [evaluate(S[i], xs + ys) for i in range(n)]
        for i in range(n):
            assert ghost(s, p, i) == ghost(xs, p, i) + ghost(ys, p, i)


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2)])
def test_matches_sympy_expansion(p, n):
    X, Y, ref = sympy_sums(p, n)
    ours = addition_polynomials(p, n)
    gens = list(X) + list(Y)
    for i in range(n):
        poly = sympy.Poly(ref[i], *gens)
        assert dict(poly.terms()) == {k: c for k, c in ours[i].terms.items()}


def test_cap_and_prime_checks():
    with pytest.raises(ConfigError):
        addition_polynomials(4, 2)
    with pytest.raises(ConfigError):
        addition_polynomials(2, 8)


def test_carry_polynomials():
    assert carry_polynomial(3, 0).is_zero()
    D1 = carry_polynomial(2, 1).reduce_mod(2)
    assert D1.dump() == ["1 X0*Y0"]
    for p, n in GRID:
        for i in range(n):
            D = carry_polynomial(p, i, n)
            for exps in D.terms:
                assert any(exps[:n]) and any(exps[n:]), (p, i, exps)
                assert all(e == 0 for e in exps[i:n]) and all(e == 0 for e in exps[n + i :])


def test_truncated_polynomials():
    for p, n in GRID:
        for j in range(n):
            assert truncated_polynomial(p, 0, j, n) == carry_polynomial(p, j, n)
            assert truncated_polynomial(p, j, j, n).is_zero()
    E12 = truncated_polynomial(2, 1, 2, 3)
    assert E12.support_variables() <= {1, 4}
    # with Y0 = 0 the carry into position 2 at p=2 is -X1*Y1 over Z
    assert E12.reduce_mod(2).dump() == ["1 X1*Y1"]


def alternating_monomial(p, n, i, j):
    return monomial(n, X={h: p - 1 for h in range(i, j)}, Y={i: 1})


@pytest.mark.parametrize("p,jmax", [(2, 3), (3, 2), (5, 2)])
def test_alternating_coefficient(p, jmax):
    n = jmax + 1
    S = addition_polynomials(p, n)
    for j in range(jmax + 1):
        for i in range(j + 1):
            assert coefficient(S[j], alternating_monomial(p, n, i, j)) == (-1) ** (j - i)


def test_alternating_coefficient_against_sympy():
    X, Y, ref = sympy_sums(3, 3)
    m = X[0] ** 2 * X[1] ** 2 * Y[0]
    assert sympy.Poly(ref[2], *X, *Y).coeff_monomial(m) == 1
    assert coefficient(addition_polynomials(3, 3)[2], alternating_monomial(3, 3, 0, 2)) == 1


def test_isobaric():
    assert isobaric_weight(addition_polynomials(2, 2)[1], 2) == 2
    assert isobaric_weight(addition_polynomials(5, 1)[0], 5) == 1
    assert isobaric_weight(addition_polynomials(3, 3)[2], 3) == 9
    for p, n in GRID:
        for i in range(n):
            assert isobaric_weight(addition_polynomials(p, n)[i], p) == p**i
            if i:
                assert isobaric_weight(carry_polynomial(p, i, n), p) == p**i
    bad = IntPolynomial(4, {(1, 0, 0, 0): 1, (0, 1, 0, 0): 1})
    fail = isobaric_weight(bad, 2)
    assert not fail and set(fail.weights.values()) == {1, 2}


def test_witt_integer():
    assert witt_integer(0, 3, 2).entries == (0, 0)
    assert witt_integer(3, 2, 2).entries == (1, 1)
    for p, n in GRID:
        for i in range(n):
            assert witt_integer(p**i, p, n).entries == tuple(int(h == i) for h in range(n))
        assert witt_integer(p**n, p, n).entries == (0,) * n


def test_witt_add_examples():
    one = WittVector((1, 0), 2)
    assert (one + one).entries == (0, 1)
    x = WittVector((1, 1), 2)
    assert (x + WittVector((0, 0), 2)).entries == x.entries
    with pytest.raises(ValueError):
        witt_add(one, WittVector((1, 0, 0), 2))


def random_vectors(p, n, rng, k):
    return [WittVector(tuple(rng.randrange(p) for _ in range(n)), p) for _ in range(k)]


@pytest.mark.parametrize("p,n", GRID)
def test_ring_axioms_over_fp(p, n):
    rng = random.Random(7 * p + n)
    vs = random_vectors(p, n, rng, 100)
    zero = WittVector((0,) * n, p)
    for a, b, c in zip(vs, vs[1:] + vs[:1], vs[2:] + vs[:2]):
        assert (a + b).entries == (b + a).entries
        assert ((a + b) + c).entries == (a + (b + c)).entries
        assert (a + zero).entries == a.entries


@pytest.mark.parametrize("p,n", GRID)
def test_integers_add(p, n):
    # W_n(F_p) is Z/p^n, so the k-fold sums must add like integers
    for a in range(p**n):
        for b in range(p**n):
            assert (witt_integer(a, p, n) + witt_integer(b, p, n)).entries == witt_integer(a + b, p, n).entries


@st.composite
def series_vec(draw, p, n):
    out = []
    for _ in range(n):
        terms = draw(st.dictionaries(st.integers(-4, 4), st.integers(1, p - 1), max_size=3))
        out.append(LaurentSeries.from_dict(p, terms))
    return WittVector(tuple(out), p)


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_ring_axioms_over_series(data):
    p, n = data.draw(st.sampled_from([(2, 2), (2, 3), (3, 2)]))
    a, b, c = (data.draw(series_vec(p, n)) for _ in range(3))
    assert (a + b).entries == (b + a).entries
    assert ((a + b) + c).entries == (a + (b + c)).entries
