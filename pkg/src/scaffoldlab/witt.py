"""Universal Witt addition polynomials and Witt-vector addition.

The polynomials S_0, ..., S_{n-1} are computed once over the integers from

    p^i S_i = sum_{j<=i} p^j (X_j^{p^(i-j)} + Y_j^{p^(i-j)}) - sum_{j<i} p^j S_j^{p^(i-j)}

and cached.  All evaluation happens with the mod-p reductions.

Variables are laid out as ``X_0..X_{n-1}, Y_0..Y_{n-1}``; exponent vectors
are packed into a single Python int (16 bits per variable) so that monomial
multiplication is one integer addition.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Any, Sequence

from .errors import ConfigError, ContractViolation

__all__ = [
    "IntPolynomial",
    "addition_polynomials",
    "carry_polynomial",
    "truncated_polynomial",
    "coefficient",
    "monomial",
    "isobaric_weight",
    "IsobaricFailure",
    "evaluate",
    "WittVector",
    "witt_add",
    "witt_integer",
    "MAX_WITT_DEGREE",
]

MAX_WITT_DEGREE = 128
_BITS = 16
_MASK = (1 << _BITS) - 1


def _pack(exps: Sequence[int]) -> int:
    key = 0
    for k, e in enumerate(exps):
        if e < 0 or e > _MASK:
            raise ValueError(f"exponent {e} out of range")
        key |= e << (_BITS * k)
    return key


def _unpack(key: int, nvars: int) -> tuple[int, ...]:
    return tuple((key >> (_BITS * k)) & _MASK for k in range(nvars))


class IntPolynomial:
    """Sparse polynomial with arbitrary-precision integer coefficients."""

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: dict | None = None, *, _packed: bool = False):
        self.nvars = nvars
        if not terms:
            self._terms = {}
        elif _packed:
            self._terms = {k: c for k, c in terms.items() if c}
        else:
            self._terms = {}
            for exps, c in terms.items():
                if len(exps) != nvars:
                    raise ValueError("exponent vector has wrong length")
                if c:
                    k = _pack(exps)
                    self._terms[k] = self._terms.get(k, 0) + c
            self._terms = {k: c for k, c in self._terms.items() if c}

    @classmethod
    def variable(cls, nvars: int, index: int) -> IntPolynomial:
        return cls(nvars, {1 << (_BITS * index): 1}, _packed=True)

    @classmethod
    def constant(cls, nvars: int, c: int) -> IntPolynomial:
        return cls(nvars, {0: c}, _packed=True)

    # -- access -----------------------------------------------------------

    @property
    def terms(self) -> dict[tuple[int, ...], int]:
        return {_unpack(k, self.nvars): c for k, c in self._terms.items()}

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exps: Sequence[int]) -> int:
        return self._terms.get(_pack(exps), 0)

    def support_variables(self) -> set[int]:
        used = 0
        for k in self._terms:
            used |= k
        return {v for v in range(self.nvars) if (used >> (_BITS * v)) & _MASK}

    # -- arithmetic -------------------------------------------------------

    def _same(self, other):
        if not isinstance(other, IntPolynomial) or other.nvars != self.nvars:
            raise TypeError("polynomials over different variable sets")

    def __add__(self, other):
        self._same(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return IntPolynomial(self.nvars, out, _packed=True)

    def __neg__(self):
        return IntPolynomial(self.nvars, {k: -c for k, c in self._terms.items()}, _packed=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial(self.nvars, {k: c * other for k, c in self._terms.items()}, _packed=True)
        self._same(other)
        out: dict[int, int] = {}
        get = out.get
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                k = k1 + k2
                out[k] = get(k, 0) + c1 * c2
        return IntPolynomial(self.nvars, out, _packed=True)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = IntPolynomial.constant(self.nvars, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def exact_div(self, d: int) -> IntPolynomial:
        out = {}
        for k, c in self._terms.items():
            q, r = divmod(c, d)
            if r:
                raise ContractViolation(f"coefficient {c} is not divisible by {d}")
            out[k] = q
        return IntPolynomial(self.nvars, out, _packed=True)

    def reduce_mod(self, p: int) -> IntPolynomial:
        return IntPolynomial(self.nvars, {k: c % p for k, c in self._terms.items()}, _packed=True)

    def substitute_zero(self, variables) -> IntPolynomial:
        """Set each listed variable to 0."""
        mask = 0
        for v in variables:
            mask |= _MASK << (_BITS * v)
        return IntPolynomial(self.nvars, {k: c for k, c in self._terms.items() if not k & mask}, _packed=True)

    def __eq__(self, other):
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self._terms.items())))

    # -- display ----------------------------------------------------------

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        """Terms in graded lexicographic order (highest total degree first)."""
        items = [(_unpack(k, self.nvars), c) for k, c in self._terms.items()]
        items.sort(key=lambda it: (sum(it[0]), it[0]), reverse=True)
        return items

    def variable_names(self) -> list[str]:
        n = self.nvars // 2
        return [f"X{k}" for k in range(n)] + [f"Y{k}" for k in range(n)]

    def dump(self) -> list[str]:
        """One ``coefficient monomial`` string per term, graded-lex order."""
        names = self.variable_names()
        lines = []
        for exps, c in self.sorted_terms():
            factors = [
                names[v] if e == 1 else f"{names[v]}^{e}" for v, e in enumerate(exps) if e
            ]
            lines.append(f"{c} {'*'.join(factors) if factors else '1'}")
        return lines

    def __str__(self):
        if not self._terms:
            return "0"
        return " + ".join(self.dump())

    def __repr__(self):
        return f"IntPolynomial(nvars={self.nvars}, {len(self)} terms)"


_cache: dict[tuple[int, int], list[IntPolynomial]] = {}
_lock = threading.Lock()


def _check_pn(p: int, n: int):
    from .series import is_prime

    if not is_prime(p):
        raise ConfigError(f"p must be prime, got {p}", field="p")
    if n < 1:
        raise ConfigError("n must be >= 1", field="n")
    if p**n > MAX_WITT_DEGREE:
        raise ConfigError(f"p^n = {p**n} exceeds the cap {MAX_WITT_DEGREE}", field="n")


def addition_polynomials(p: int, n: int) -> list[IntPolynomial]:
    """``[S_0, ..., S_{n-1}]`` over the integers, in ``2n`` variables."""
    _check_pn(p, n)
    key = (p, n)
    with _lock:
        cached = _cache.get(key)
        if cached is not None:
            return list(cached)
        nv = 2 * n
        X = [IntPolynomial.variable(nv, k) for k in range(n)]
        Y = [IntPolynomial.variable(nv, n + k) for k in range(n)]
        S: list[IntPolynomial] = []
        # powers[j][k] = S_j^(p^k)
        powers: list[list[IntPolynomial]] = []
        for i in range(n):
            total = IntPolynomial(nv)
            for j in range(i + 1):
                e = p ** (i - j)
                total = total + (X[j] ** e + Y[j] ** e) * p**j
            for j in range(i):
                while len(powers[j]) <= i - j:
                    powers[j].append(powers[j][-1] ** p)
                total = total - powers[j][i - j] * p**j
            s_i = total.exact_div(p**i)
            S.append(s_i)
            powers.append([s_i])
        _cache[key] = S
        return list(S)


def carry_polynomial(p: int, i: int, n: int | None = None) -> IntPolynomial:
    """``D_i = S_i - X_i - Y_i``."""
    n = i + 1 if n is None else n
    nv = 2 * n
    S = addition_polynomials(p, n)[i]
    return S - IntPolynomial.variable(nv, i) - IntPolynomial.variable(nv, n + i)


def truncated_polynomial(p: int, i: int, j: int, n: int | None = None) -> IntPolynomial:
    """``E_ij``: ``D_j`` with ``Y_0 .. Y_{i-1}`` set to zero."""
    if not 0 <= i <= j:
        raise ValueError("need 0 <= i <= j")
    n = j + 1 if n is None else n
    D = carry_polynomial(p, j, n)
    E = D.substitute_zero([n + h for h in range(i)])
    allowed = set(range(i, j)) | {n + h for h in range(i, j)}
    if not E.support_variables() <= allowed:
        raise ContractViolation(f"E_{i}{j} uses variables outside X_{i}..X_{j-1}, Y_{i}..Y_{j-1}")
    return E


def monomial(n: int, X: dict[int, int] | None = None, Y: dict[int, int] | None = None) -> tuple[int, ...]:
    """Exponent vector for ``prod X_h^X[h] * prod Y_h^Y[h]`` in ``2n`` variables."""
    exps = [0] * (2 * n)
    for h, e in (X or {}).items():
        exps[h] = e
    for h, e in (Y or {}).items():
        exps[n + h] = e
    return tuple(exps)


def coefficient(poly: IntPolynomial, mono: Sequence[int]) -> int:
    return poly.coefficient(mono)


@dataclass(frozen=True)
class IsobaricFailure:
    weights: dict[tuple[int, ...], int]

    def __bool__(self):
        return False


def isobaric_weight(poly: IntPolynomial, p: int) -> int | IsobaricFailure:
    """Common weight of every monomial of ``poly mod p`` with ``w(X_h) = w(Y_h) = p^h``.

    Returns an :class:`IsobaricFailure` listing each monomial's weight when
    the weights disagree.
    """
    red = poly.reduce_mod(p)
    if red.is_zero():
        raise ValueError("polynomial vanishes mod p")
    n = poly.nvars // 2
    w = [p**h for h in range(n)] * 2
    weights = {exps: sum(a * b for a, b in zip(exps, w)) for exps in red.terms}
    distinct = set(weights.values())
    if len(distinct) == 1:
        return distinct.pop()
    return IsobaricFailure(weights)


def evaluate(poly: IntPolynomial, values: Sequence[Any], p: int | None = None):
    """Evaluate ``poly`` at ``values`` (one per variable).

    ``values`` may be ints (taken mod ``p``), series, or tower elements; only
    ``+``, ``*``, ``** 0`` and integer scaling are used.
    """
    if len(values) != poly.nvars:
        raise ValueError("wrong number of values")
    cache: dict[tuple[int, int], Any] = {}

    def power(v, e):
        key = (v, e)
        if key not in cache:
            if e == 1:
                cache[key] = values[v]
            else:
                half = power(v, e // 2)
                sq = half * half
                cache[key] = sq * values[v] if e % 2 else sq
        return cache[key]

    acc = None
    for exps, c in poly.sorted_terms():
        if p is not None:
            c %= p
            if not c:
                continue
        term = None
        for v, e in enumerate(exps):
            if e:
                f = power(v, e)
                term = f if term is None else term * f
        if term is None:
            term = values[0] ** 0
        term = term * c
        acc = term if acc is None else acc + term
    if acc is None:
        acc = values[0] * 0
    if p is not None and isinstance(acc, int):
        acc %= p
    return acc


@dataclass(frozen=True)
class WittVector:
    """Length-n Witt vector over a ring of characteristic p."""

    entries: tuple
    p: int

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if not self.entries:
            raise ValueError("Witt vector must have length >= 1")
        kinds = {type(e) for e in self.entries}
        if len(kinds) != 1:
            raise TypeError("Witt vector entries must come from one ring")
        if isinstance(self.entries[0], int):
            object.__setattr__(self, "entries", tuple(e % self.p for e in self.entries))
        else:
            for e in self.entries:
                if getattr(e, "p", self.p) != self.p:
                    raise ValueError("entry characteristic differs from p")

    @property
    def length(self) -> int:
        return len(self.entries)

    def __add__(self, other):
        return witt_add(self, other)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)


def _reduced_sums(p: int, n: int) -> list[IntPolynomial]:
    return [s.reduce_mod(p) for s in addition_polynomials(p, n)]


def witt_add(u: WittVector, v: WittVector) -> WittVector:
    if u.p != v.p or u.length != v.length:
        raise ValueError("Witt vectors of different length or characteristic")
    if type(u.entries[0]) is not type(v.entries[0]):
        raise TypeError("Witt vectors over different rings")
    p, n = u.p, u.length
    values = list(u.entries) + list(v.entries)
    mod = p if isinstance(u.entries[0], int) else None
    out = [evaluate(s, values, mod) for s in _reduced_sums(p, n)]
    return WittVector(tuple(out), p)


_integers: dict[tuple[int, int], list[WittVector]] = {}
_int_lock = threading.Lock()


def witt_integer(k: int, p: int, n: int) -> WittVector:
    """``k * 1`` in ``W_n(F_p)``, by repeated Witt addition of ``(1, 0, ..., 0)``.

    ``W_n(F_p)`` has characteristic ``p^n``, so ``k`` is first reduced mod ``p^n``.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    k %= p**n
    one = WittVector((1,) + (0,) * (n - 1), p)
    with _int_lock:
        table = _integers.setdefault((p, n), [WittVector((0,) * n, p)])
        while len(table) <= k:
            table.append(witt_add(table[-1], one))
        return table[k]
