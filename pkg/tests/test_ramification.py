import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scaffoldlab.errors import ContractViolation
from scaffoldlab.ramification import (
    BreakData,
    DecompositionError,
    break_oracle,
    check_assumptions,
    check_reduced,
    compute_breaks,
    decompose,
    find_uniformizer,
    lower_breaks,
    stable_m,
    upper_breaks,
    upper_from_lower,
)
from scaffoldlab.series import parse_series

from conftest import family


def B(p, *texts):
    return [parse_series(s, p) for s in texts]


def test_check_reduced():
    assert check_reduced(B(2, "t^-1", "t^-3"), 2)[0]
    ok, bad = check_reduced(B(2, "t^-2", "t^-3"), 2)
    assert not ok and [d["index"] for d in bad] == [0]
    assert check_reduced(B(3, "t^2", "t^-4"), 3)[0]


@pytest.mark.parametrize(
    "name,u,b,m",
    [
        ("A", (1, 3), (1, 5), (0, 1)),
        ("B", (3, 9), (3, 15), (0, 3)),
        ("C", (1, 4), (1, 10), (0, 1)),
        ("D", (1, 5, 13), (1, 9, 41), (0, 1, 3)),
    ],
)
def test_family_breaks(name, u, b, m):
    br = family(name).breaks
    assert (br.u, br.b, br.m) == (u, b, m)


def test_break_functions():
    assert upper_breaks(B(2, "t^-3", "t^-5"), 2) == [3, 6]
    assert lower_breaks([3, 6], 2) == [3, 9]
    assert upper_from_lower([1, 9, 41], 2) == [1, 5, 13]
    with pytest.raises(ValueError):
        stable_m([3, 6], 2, 2)
    with pytest.raises(ValueError):
        upper_breaks(B(2, "t^-2", "t^-3"), 2)
    with pytest.raises(ValueError):
        lower_breaks([3, 3], 2)


def test_breakdata_invariants():
    with pytest.raises(ContractViolation):
        BreakData(2, 2, (1, 3), (2, 5), None)
    with pytest.raises(ContractViolation):
        BreakData(2, 2, (1, 3), (1, 6), None)


def test_decompose_examples():
    dec = decompose(family("A").beta, 2, B(2, "1", "t^-1"))
    assert all(d.is_exact_zero() for d in dec.delta)
    dec = decompose(B(2, "t^-1", "t^-3 + t^-1"), 2)
    assert dec.omega[1] == parse_series("t^-1", 2)
    assert dec.delta[1] == parse_series("t^-1", 2)
    with pytest.raises(DecompositionError) as info:
        decompose(B(3, "t^-1", "t^-2"), 3)
    assert info.value.failures[0]["index"] == 1


def test_decompose_recompose(fam):
    assert fam.dec.recompose() == fam.beta
    for i in range(fam.n):
        assert fam.beta[i].valuation().value == -fam.breaks.u[i]


def test_explicit_omega_must_dominate():
    # omega_1 = t^-1 + 1 still gives the main term; omega_1 = 1 does not
    dec = decompose(B(2, "t^-1", "t^-3 + t^-1"), 2, B(2, "1", "t^-1 + 1"))
    assert dec.delta[1].is_exact_zero()
    with pytest.raises(DecompositionError):
        decompose(B(2, "t^-1", "t^-3"), 2, B(2, "1", "1"))


def test_assumptions_eligible(fam):
    rep = check_assumptions(fam.breaks, fam.dec, fam.beta)
    assert rep.eligible, rep.failed()


def test_assumptions_family_D_margins():
    rep = check_assumptions(family("D").breaks, family("D").dec)
    a5 = [(c.lhs, c.rhs) for c in rep.checks if c.name == "break_gap"]
    assert a5 == [(9, 8), (41, 40)]


def test_assumptions_ineligible():
    beta = B(2, "t^-3", "t^-5")
    br = compute_breaks(beta, 2)
    assert (br.u, br.b) == ((3, 6), (3, 9))
    try:
        dec = decompose(beta, 2)
    except DecompositionError:
        dec = None
    rep = check_assumptions(br, dec, beta)
    assert not rep.eligible
    failed = {c.name for c in rep.failed()}
    assert "break_gap" in failed


def test_error_gap():
    # delta_1 = t^-3: bound -2 * (-3) = 6 < b_2 = 9
    beta = B(2, "t^-1", "t^-5 + t^-3")
    rep = check_assumptions(compute_breaks(beta, 2), decompose(beta, 2), beta)
    a6 = [c for c in rep.checks if c.name == "error_gap"][0]
    assert (a6.lhs, a6.rhs, a6.ok) == (9, 6, True)
    # delta_1 = t^-8: bound 16 > b_2 = 15
    beta = B(2, "t^-3", "t^-9 + t^-8")
    rep = check_assumptions(compute_breaks(beta, 2), decompose(beta, 2), beta)
    a6 = [c for c in rep.checks if c.name == "error_gap"][0]
    assert (a6.lhs, a6.rhs, a6.ok) == (15, 16, False)
    assert not rep.eligible


def test_break_oracle(fam):
    T = fam.tower
    pi = find_uniformizer(T, [fam.builder.X(j) for j in range(1, fam.n + 1)])
    assert T.valuation(pi) == 1
    assert break_oracle(T, pi) == list(fam.breaks.b)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_lower_upper_roundtrip(data):
    p = data.draw(st.sampled_from([2, 3, 5]))
    n = data.draw(st.integers(1, 4))
    u = [data.draw(st.integers(1, 20))]
    for _ in range(n - 1):
        u.append(u[-1] + data.draw(st.integers(1, 20)))
    b = lower_breaks(u, p)
    assert upper_from_lower(b, p) == u
    for j in range(1, n + 1):
        assert b[j - 1] <= p ** (j - 1) * u[j - 1]
