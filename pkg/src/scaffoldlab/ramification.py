"""Ramification breaks, the main-term decomposition of beta, and the
eligibility conditions for the scaffold construction."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ContractViolation, PrecisionExhausted, ScaffoldLabError
from .series import LaurentSeries

__all__ = [
    "check_reduced",
    "upper_breaks",
    "lower_breaks",
    "upper_from_lower",
    "stable_m",
    "BreakData",
    "compute_breaks",
    "Decomposition",
    "DecompositionError",
    "decompose",
    "Check",
    "AssumptionReport",
    "check_assumptions",
    "find_uniformizer",
    "break_oracle",
    "UniformizerNotFound",
]


def _val(s: LaurentSeries) -> int | float:
    return s.valuation().require()


def check_reduced(beta: Sequence[LaurentSeries], p: int) -> tuple[bool, list[dict]]:
    """Each coordinate must have valuation >= 0 or valuation prime to p."""
    detail = []
    for i, b in enumerate(beta):
        v = _val(b)
        ok = v >= 0 or v % p != 0
        detail.append({"index": i, "valuation": v if v != math.inf else None, "ok": ok})
    return all(d["ok"] for d in detail), [d for d in detail if not d["ok"]]


def upper_breaks(beta: Sequence[LaurentSeries], p: int) -> list[int]:
    """``u_i = max_k -p^(i-1-k) v(beta_k)`` over ``0 <= k < i``."""
    ok, bad = check_reduced(beta, p)
    if not ok:
        raise ValueError(f"beta is not reduced at coordinates {[d['index'] for d in bad]}")
    vals = [_val(b) for b in beta]
    if not vals[0] < 0:
        raise ValueError("v(beta_0) must be negative")
    u = []
    for i in range(1, len(beta) + 1):
        u.append(int(max(-(p ** (i - 1 - k)) * vals[k] for k in range(i))))
    return u


def lower_breaks(u: Sequence[int], p: int) -> list[int]:
    if not u or u[0] < 1 or any(a >= b for a, b in zip(u, u[1:])):
        raise ValueError("upper breaks must be positive and strictly increasing")
    b = [u[0]]
    for i in range(1, len(u)):
        b.append(b[-1] + p**i * (u[i] - u[i - 1]))
    return b


def upper_from_lower(b: Sequence[int], p: int) -> list[int]:
    u = [b[0]]
    for i in range(1, len(b)):
        step, rem = divmod(b[i] - b[i - 1], p**i)
        if rem:
            raise ContractViolation(f"b_{i + 1} - b_{i} is not divisible by p^{i}")
        u.append(u[-1] + step)
    return u


def stable_m(u: Sequence[int], p: int, n: int) -> list[int]:
    """``m_i = (u_{i+1} - u_1) / p^(n-1)``; raises ValueError if not integral."""
    m = []
    for i in range(n):
        q, r = divmod(u[i] - u[0], p ** (n - 1))
        if r:
            raise ValueError(f"m_{i} = ({u[i]} - {u[0]})/{p ** (n - 1)} is not an integer")
        m.append(q)
    return m


@dataclass(frozen=True)
class BreakData:
    p: int
    n: int
    u: tuple[int, ...]
    b: tuple[int, ...]
    m: tuple[int, ...] | None
    m_error: str | None = None

    def __post_init__(self):
        p, n, u, b = self.p, self.n, self.u, self.b
        if b[0] != u[0]:
            raise ContractViolation("b_1 != u_1")
        for i in range(1, n):
            if b[i] - b[i - 1] != p**i * (u[i] - u[i - 1]):
                raise ContractViolation(f"lower/upper break relation fails at i={i}")
        for j in range(1, n + 1):
            if b[j - 1] > p ** (j - 1) * u[j - 1]:
                raise ContractViolation(f"b_{j} > p^{j - 1} u_{j}")

    @property
    def congruent(self) -> bool:
        return all((bi - self.b[0]) % self.p**self.n == 0 for bi in self.b)

    @property
    def coprime(self) -> bool:
        return all(bi % self.p for bi in self.b)

    def to_dict(self) -> dict:
        return {"u": list(self.u), "b": list(self.b), "m": None if self.m is None else list(self.m)}


def compute_breaks(beta: Sequence[LaurentSeries], p: int) -> BreakData:
    n = len(beta)
    u = upper_breaks(beta, p)
    b = lower_breaks(u, p)
    try:
        m, err = tuple(stable_m(u, p, n)), None
    except ValueError as exc:
        m, err = None, str(exc)
    return BreakData(p, n, tuple(u), tuple(b), m, err)


@dataclass(frozen=True)
class Decomposition:
    """``beta_i = beta * omega_i^(p^(n-1)) + delta_i``."""

    beta: LaurentSeries
    omega: tuple[LaurentSeries, ...]
    delta: tuple[LaurentSeries, ...]

    def main_term(self, i: int) -> LaurentSeries:
        p = self.beta.p
        w = self.omega[i]
        for _ in range(len(self.omega) - 1):
            w = w.frobenius()
        return self.beta * w

    def recompose(self) -> list[LaurentSeries]:
        return [self.main_term(i) + self.delta[i] for i in range(len(self.omega))]


class DecompositionError(ScaffoldLabError):
    """Assumption (main term dominates) cannot be met; ``failures`` lists coordinates."""

    exit_code = 0

    def __init__(self, failures: list[dict]):
        self.failures = failures
        super().__init__("; ".join(f"coordinate {f['index']}: {f['reason']}" for f in failures))


def decompose(beta: Sequence[LaurentSeries], p: int, omega: Sequence[LaurentSeries] | None = None) -> Decomposition:
    n = len(beta)
    b0 = beta[0]
    v0 = _val(b0)
    if not v0 < 0:
        raise ValueError("v(beta_0) must be negative")
    q = p ** (n - 1)
    failures = []
    if omega is None:
        omega = [LaurentSeries.one(p)]
        for i in range(1, n):
            vi = _val(beta[i])
            if vi == math.inf:
                failures.append({"index": i, "reason": "beta_i = 0 has no main term"})
                omega.append(LaurentSeries.zero(p))
                continue
            mm, r = divmod(v0 - vi, q)
            if r:
                failures.append({"index": i, "reason": f"({v0} - ({vi}))/{q} is not an integer"})
                omega.append(LaurentSeries.zero(p))
                continue
            c = beta[i].leading_coefficient() * pow(b0.leading_coefficient(), -1, p)
            omega.append(LaurentSeries.monomial(p, c, -mm))
    else:
        omega = list(omega)
        if len(omega) != n:
            raise ValueError(f"omega must have {n} entries")
        if omega[0] != LaurentSeries.one(p):
            failures.append({"index": 0, "reason": "omega_0 must be 1"})
    dec_delta = []
    for i in range(n):
        w = omega[i]
        for _ in range(n - 1):
            w = w.frobenius()
        d = beta[i] - b0 * w
        dec_delta.append(d)
        if i == 0 or any(f["index"] == i for f in failures):
            continue
        vd, vb = d.valuation(), beta[i].valuation()
        if not vd.exact and vd.value <= vb.value:
            raise PrecisionExhausted(f"valuation of delta_{i} not determined")
        if not vd.value > vb.value:
            failures.append({"index": i, "reason": f"v(delta_{i}) = {vd} is not > v(beta_{i}) = {vb}"})
    if failures:
        raise DecompositionError(failures)
    return Decomposition(b0, tuple(omega), tuple(dec_delta))


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    index: int | None = None
    lhs: object = None
    rhs: object = None
    detail: str = ""

    def to_dict(self) -> dict:
        out = {"name": self.name, "ok": self.ok}
        if self.index is not None:
            out["index"] = self.index
        if self.lhs is not None:
            out["lhs"] = _jsonable(self.lhs)
        if self.rhs is not None:
            out["rhs"] = _jsonable(self.rhs)
        if self.detail:
            out["detail"] = self.detail
        return out


def _jsonable(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


@dataclass
class AssumptionReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def eligible(self) -> bool:
        return all(c.ok for c in self.checks)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def to_dict(self) -> dict:
        return {"eligible": self.eligible, "checks": [c.to_dict() for c in self.checks]}


def check_assumptions(breaks: BreakData, dec: Decomposition | None, beta: Sequence[LaurentSeries] | None = None) -> AssumptionReport:
    """Eligibility: the break gap ``b_(i+1) > p^n u_i``, the error gap
    ``b_(i+1) > -p^(n-1) v(delta_i)``, plus derived consistency checks.

    ``dec`` may be None when the decomposition itself failed; the remaining
    checks are still reported.
    """
    p, n, u, b = breaks.p, breaks.n, breaks.u, breaks.b
    pn = p**n
    rep = AssumptionReport()
    for i in range(1, n + 1):
        rep.checks.append(Check("p_not_dividing_b", b[i - 1] % p != 0, i, b[i - 1]))
    for i in range(1, n):
        rep.checks.append(Check("b_increasing", b[i] > b[i - 1], i, b[i], b[i - 1]))
    rep.checks.append(
        Check("m_integral", breaks.m is not None, None, detail=breaks.m_error or "")
    )
    rep.checks.append(Check("b_congruent_mod_p^n", breaks.congruent))
    for i in range(1, n):
        rep.checks.append(Check("break_gap", b[i] > pn * u[i - 1], i, b[i], pn * u[i - 1]))
        rep.checks.append(Check("weak_7", u[i] > p * u[i - 1], i, u[i], p * u[i - 1]))
    rep.checks.append(Check("decomposition", dec is not None))
    if dec is not None:
        for i in range(1, n):
            vd = dec.delta[i].valuation()
            if vd.value == math.inf:
                rep.checks.append(Check("error_gap", True, i, b[i], None, "delta vanishes"))
                continue
            bound = -(p ** (n - 1)) * vd.require()
            rep.checks.append(Check("error_gap", b[i] > bound, i, b[i], bound))
        src = beta if beta is not None else dec.recompose()
        for i in range(n):
            vb = _val(src[i])
            vm = _val(dec.main_term(i))
            rep.checks.append(
                Check("main_term_valuation", vb == -u[i] and vm == -u[i], i, vb, -u[i])
            )
    return rep


class UniformizerNotFound(ScaffoldLabError):
    exit_code = 3


def find_uniformizer(tower, candidates):
    """Search ``t^a * prod g^c`` (``0 <= c < p``) over ``candidates`` for v_L = 1."""
    import itertools

    p, R = tower.p, tower.R
    vals = [tower.valuation(g) for g in candidates]
    for cs in itertools.product(range(p), repeat=len(candidates)):
        s = sum(c * v for c, v in zip(cs, vals))
        if (1 - s) % R:
            continue
        a = (1 - s) // R
        pi = tower.one()
        for c, g in zip(cs, candidates):
            if c:
                pi = pi * g**c
        pi = pi.shift(a)
        if tower.valuation(pi) != 1:
            raise ContractViolation("candidate uniformizer does not have valuation 1")
        return pi
    raise UniformizerNotFound(f"no product of candidates has valuation 1 (valuations {vals})")


def break_oracle(tower, pi) -> list[int]:
    """Lower breaks ``b_{j+1} = v_L(sigma^(p^j)(pi) - pi) - 1`` for ``0 <= j < n``."""
    if tower.valuation(pi) != 1:
        raise ValueError("pi is not a uniformizer")
    out = []
    for j in range(tower.n):
        diff = tower.apply_sigma(pi, tower.p**j) - pi
        out.append(int(tower.valuation(diff)) - 1)
    return out
