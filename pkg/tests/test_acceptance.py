"""Acceptance suite: one test per primary criterion.

Each test prints a single ``[criterion N] PASS|FAIL`` line; the lines are
also collected and repeated in the pytest terminal summary.  Run directly
with ``python3 tests/test_acceptance.py`` for just the summary lines.
"""

import random
import time
from contextlib import contextmanager
from pathlib import Path

import pytest
import sympy

from scaffoldlab.ramification import break_oracle, find_uniformizer
from scaffoldlab.report import analyze, load_config, render_report
from scaffoldlab.scaffold import conjugate_rank, gms_verdict, hopf_verdict, scaffold_precision
from scaffoldlab.witt import (
    WittVector,
    addition_polynomials,
    carry_polynomial,
    coefficient,
    isobaric_weight,
    monomial,
    truncated_polynomial,
)

from conftest import family

HERE = Path(__file__).parent
GRID = [(2, 1), (2, 2), (2, 3), (3, 2), (5, 2)]
NAMES = ["A", "B", "C", "D"]
RESULTS: list[str] = []


@contextmanager
def criterion(num, title):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        line = f"[criterion {num:2d}] FAIL  {title}  ({type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''})"
        RESULTS.append(line)
        print(line)
        raise
    line = f"[criterion {num:2d}] PASS  {title}  ({time.perf_counter() - start:.2f}s)"
    RESULTS.append(line)
    print(line)


def _brute_force_sums(p, n):
    X = sympy.symbols(f"X0:{n}")
    Y = sympy.symbols(f"Y0:{n}")
    S = []
    for i in range(n):
        tot = sum(p**j * (X[j] ** (p ** (i - j)) + Y[j] ** (p ** (i - j))) for j in range(i + 1))
        tot -= sum(p**j * S[j] ** (p ** (i - j)) for j in range(i))
        S.append(sympy.Poly(sympy.expand(tot / p**i), *X, *Y))
    return X, Y, S


def test_criterion_01_witt_ring_axioms():
    with criterion(1, "Witt ring axioms on 100 random vectors per (p,n)"):
        start = time.perf_counter()
        for p, n in GRID:
            rng = random.Random(1000 * p + n)
            vecs = [WittVector(tuple(rng.randrange(p) for _ in range(n)), p) for _ in range(300)]
            zero = WittVector((0,) * n, p)
            for k in range(100):
                a, b, c = vecs[3 * k : 3 * k + 3]
                assert (a + b).entries == (b + a).entries
                assert ((a + b) + c).entries == (a + (b + c)).entries
                assert (a + zero).entries == a.entries
        assert time.perf_counter() - start < 10


def test_criterion_02_alternating_coefficient():
    with criterion(2, "coefficient (-1)^(j-i) against brute-force expansion"):
        for p, jmax in [(2, 3), (3, 2), (5, 2)]:
            n = jmax + 1
            X, Y, ref = _brute_force_sums(p, n)
            ours = addition_polynomials(p, n)
            for j in range(jmax + 1):
                for i in range(j + 1):
                    mono = monomial(n, X={h: p - 1 for h in range(i, j)}, Y={i: 1})
                    expr = Y[i]
                    for h in range(i, j):
                        expr *= X[h] ** (p - 1)
                    want = (-1) ** (j - i)
                    assert ref[j].coeff_monomial(expr) == want, (p, i, j)
                    assert coefficient(ours[j], mono) == want, (p, i, j)


def test_criterion_03_carry_truncated_isobaric():
    with criterion(3, "carry factors, truncated supports and isobaric weights"):
        for p, n in GRID:
            S = addition_polynomials(p, n)
            for i in range(n):
                D = carry_polynomial(p, i, n)
                # every monomial has an X-factor and a Y-factor
                for exps in D.terms:
                    assert any(exps[:n]) and any(exps[n:]), (p, n, i, exps)
                assert isobaric_weight(S[i], p) == p**i
                if not D.reduce_mod(p).is_zero():
                    assert isobaric_weight(D, p) == p**i
                for k in range(i + 1):
                    E = truncated_polynomial(p, k, i, n)
                    allowed = set(range(k, i)) | {n + h for h in range(k, i)}
                    assert E.support_variables() <= allowed, (p, n, k, i)
                    if k == i:
                        assert E.is_zero()
                    if k == 0:
                        assert E == D


def test_criterion_04_break_oracle():
    with criterion(4, "formula breaks equal uniformizer displacement on A-D"):
        start = time.perf_counter()
        for name in NAMES:
            f = family(name)
            pi = find_uniformizer(f.tower, [f.builder.X(j) for j in range(1, f.n + 1)])
            assert f.tower.valuation(pi) == 1
            assert break_oracle(f.tower, pi) == list(f.breaks.b), name
        assert time.perf_counter() - start < 60


def test_criterion_05_galois_action_on_roots():
    with criterion(5, "(sigma^(p^i) - 1) x_i = 1 and valuation of (sigma^(p^i) - 1) x_j on A-D"):
        for name in NAMES:
            f = family(name)
            T, p, n, u = f.tower, f.p, f.n, f.breaks.u
            R = T.R
            for i in range(n):
                assert T.apply_sigma(T.x(i), p**i) - T.x(i) == T.one()
                for j in range(i + 1, n):
                    diff = T.apply_sigma(T.x(j), p**i) - T.x(j)
                    assert T.valuation(diff) == -(R - R // p) * sum(u[i:j]), (name, i, j)


def test_criterion_06_generator_valuations():
    with criterion(6, "sigma action on Y, v_L(Y) formulas and cofactor valuations on A-D"):
        for name in NAMES:
            f = family(name)
            T, p, n = f.tower, f.p, f.n
            b, m = f.breaks.b, f.breaks.m
            gen = f.builder.generator(n)
            Y, t = gen.Y, gen.t
            assert T.apply_sigma(Y, p ** (n - 1)) - Y == T.const(t[n - 1])
            vY = T.valuation(Y)
            vt = [tk.valuation().require() for tk in t]
            assert vY == -b[0] - sum(p ** (n + k - 1) * m[k] for k in range(1, n))
            assert vY == T.R * vt[n - 1] - b[n - 1]
            assert vY % p != 0
            assert vt[0] == -sum(p ** (k - 1) * m[k] for k in range(1, n))
            for i in range(n):
                for j in range(i + 1, n):
                    assert (vt[j] - vt[i]) * T.R == b[j] - b[i]


def test_criterion_07_main_and_error_terms():
    with criterion(7, "main/error term bounds hold and eps_jj = 0 on A-D"):
        for name in NAMES:
            sb = family(name).builder
            for j in range(1, sb.n + 1):
                assert sb.epsilon(j, j).is_zero()
                for i in range(1, j + 1):
                    rec = sb.mu_epsilon(i, j)
                    assert rec["ok"], (name, rec)


def test_criterion_08_precision_and_scaffold():
    with criterion(8, "precision c, scaffold axioms (i)-(iv) and inflated-c control"):
        start = time.perf_counter()
        expected = {"A": 1, "B": 3, "D": 1}
        for name, c in expected.items():
            f = family(name)
            br = f.breaks
            assert scaffold_precision(br) == c
            if br.n == 2:
                assert c == br.b[1] - br.p**2 * br.b[0]
            R = f.tower.R
            cert = f.builder.verify((-R, 2 * R), c)
            assert cert.valid, (name, [r for r in cert.failures()][:2])
        assert not family("A").builder.verify((-4, 8), 10).valid
        assert not family("B").builder.verify((-4, 8), 10).valid
        assert time.perf_counter() - start < 300


def test_criterion_09_verdicts_and_goldens():
    with criterion(9, "freeness/Hopf verdicts and byte-exact golden reports"):
        gA = gms_verdict(family("A").breaks)
        assert gA["verdict"] == "free"
        assert hopf_verdict(family("A").breaks, gA)["verdict"] == "unknown"
        gB = gms_verdict(family("B").breaks)
        assert gB["verdict"] == "free" and gB["r_u1"] == 3 and (2**2 - 1) % 3 == 0
        assert hopf_verdict(family("B").breaks, gB)["verdict"] == "hopf"
        for name in "AB":
            report = analyze(load_config(HERE / "configs" / f"family_{name}.json"))
            assert render_report(report, "json") == (HERE / "golden" / f"family_{name}.json").read_bytes()


def test_criterion_10_normal_basis():
    with criterion(10, "conjugates of Y are K-linearly independent on A-D"):
        ranks = {}
        for name in NAMES:
            f = family(name)
            ranks[name] = (conjugate_rank(f.tower, f.builder.Y), f.tower.R)
        assert all(r == R for r, R in ranks.values()), f"conjugate ranks {ranks}"


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
