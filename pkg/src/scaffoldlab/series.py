"""Truncated Laurent series over a prime field, modelling K = F_p((t)).

A series is stored densely: an integer ``offset`` (the exponent of the first
stored coefficient), a trimmed int64 coefficient array with entries in
``[0, p)``, and an absolute precision ``prec``.  ``prec is None`` marks an
exact, finitely supported series; otherwise every coefficient of exponent
``< prec`` is known and nothing beyond it is.
"""

from __future__ import annotations

import math
import re
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, PrecisionExhausted, SeriesParseError

__all__ = [
    "PrimeField",
    "Valuation",
    "LaurentSeries",
    "parse_series",
    "is_prime",
]

_EMPTY = np.zeros(0, dtype=np.int64)
_EMPTY.setflags(write=False)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, math.isqrt(p) + 1))


class PrimeField:
    """The residue field F_p."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not isinstance(p, int) or isinstance(p, bool) or not is_prime(p):
            raise ConfigError(f"p must be prime, got {p!r}", field="p")
        self.p = p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return pow(a, -1, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


class Valuation(NamedTuple):
    """A valuation together with an exactness tag.

    ``value`` is ``math.inf`` for exact zero.  When ``exact`` is False the
    value is only a lower bound (the series vanished up to its precision).
    """

    value: float
    exact: bool

    def require(self) -> int | float:
        if not self.exact:
            raise PrecisionExhausted(f"valuation is only known to be >= {self.value}")
        return self.value

    def __str__(self):
        if self.value == math.inf:
            return "+inf"
        return str(self.value) if self.exact else f">={self.value}"


def _min_prec(*precs):
    vals = [q for q in precs if q is not None]
    return min(vals) if vals else None


class LaurentSeries:
    """Immutable truncated Laurent series in ``t`` over F_p."""

    __slots__ = ("p", "offset", "coeffs", "prec")

    def __init__(self, p: int, offset: int, coeffs, prec: int | None = None):
        # raw constructor: normalizes and freezes
        arr = np.asarray(coeffs, dtype=np.int64) % p
        offset = int(offset)
        if prec is not None:
            prec = int(prec)
            keep = prec - offset
            if keep <= 0:
                arr = _EMPTY
            elif keep < arr.shape[0]:
                arr = arr[:keep]
        nz = np.flatnonzero(arr)
        if nz.size == 0:
            arr = _EMPTY
            offset = 0
        else:
            lo, hi = int(nz[0]), int(nz[-1]) + 1
            arr = arr[lo:hi]
            offset += lo
            arr.setflags(write=False)
        self.p = p
        self.offset = offset
        self.coeffs = arr
        self.prec = prec

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, p: int, prec: int | None = None) -> LaurentSeries:
        return cls(p, 0, _EMPTY, prec)

    @classmethod
    def one(cls, p: int) -> LaurentSeries:
        return cls(p, 0, [1])

    @classmethod
    def monomial(cls, p: int, c: int, e: int) -> LaurentSeries:
        return cls(p, e, [c])

    @classmethod
    def from_dict(cls, p: int, terms: dict, prec: int | None = None) -> LaurentSeries:
        if not terms:
            return cls.zero(p, prec)
        lo, hi = min(terms), max(terms)
        arr = np.zeros(hi - lo + 1, dtype=np.int64)
        for e, c in terms.items():
            arr[e - lo] += c
        return cls(p, lo, arr, prec)

    # -- inspection --------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.prec is None

    def is_zero(self) -> bool:
        """True when no nonzero coefficient is known (exact or not)."""
        return self.coeffs.size == 0

    def is_exact_zero(self) -> bool:
        return self.coeffs.size == 0 and self.prec is None

    def is_monomial(self) -> bool:
        return self.coeffs.size == 1

    def valuation(self) -> Valuation:
        if self.coeffs.size:
            return Valuation(self.offset, True)
        if self.prec is None:
            return Valuation(math.inf, True)
        return Valuation(self.prec, False)

    def _vbound(self):
        # lower bound for the valuation, used in precision bookkeeping
        if self.coeffs.size:
            return self.offset
        return math.inf if self.prec is None else self.prec

    @property
    def degree(self) -> int:
        """Largest stored exponent (``offset - 1`` for zero)."""
        return self.offset + self.coeffs.size - 1

    def leading_coefficient(self) -> int:
        if not self.coeffs.size:
            raise PrecisionExhausted("leading term of a series that vanishes to its precision")
        return int(self.coeffs[0])

    def coefficient(self, e: int) -> int:
        if self.prec is not None and e >= self.prec:
            raise PrecisionExhausted(f"coefficient of t^{e} lies beyond precision {self.prec}")
        k = e - self.offset
        if 0 <= k < self.coeffs.size:
            return int(self.coeffs[k])
        return 0

    def terms(self) -> dict[int, int]:
        return {self.offset + int(k): int(self.coeffs[k]) for k in np.flatnonzero(self.coeffs)}

    def dense(self, lo: int, hi: int) -> np.ndarray:
        """Coefficients of exponents ``lo .. hi-1`` as a fresh array."""
        out = np.zeros(max(hi - lo, 0), dtype=np.int64)
        if not self.coeffs.size:
            return out
        a = max(lo, self.offset)
        b = min(hi, self.offset + self.coeffs.size)
        if a < b:
            out[a - lo : b - lo] = self.coeffs[a - self.offset : b - self.offset]
        return out

    # -- arithmetic --------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, LaurentSeries):
            if isinstance(other, int):
                return LaurentSeries(self.p, 0, [other])
            return NotImplemented
        if other.p != self.p:
            raise ValueError(f"characteristic mismatch: {self.p} vs {other.p}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        prec = _min_prec(self.prec, other.prec)
        if not self.coeffs.size:
            return LaurentSeries(self.p, other.offset, other.coeffs, prec)
        if not other.coeffs.size:
            return LaurentSeries(self.p, self.offset, self.coeffs, prec)
        lo = min(self.offset, other.offset)
        hi = max(self.offset + self.coeffs.size, other.offset + other.coeffs.size)
        arr = np.zeros(hi - lo, dtype=np.int64)
        arr[self.offset - lo : self.offset - lo + self.coeffs.size] += self.coeffs
        arr[other.offset - lo : other.offset - lo + other.coeffs.size] += other.coeffs
        return LaurentSeries(self.p, lo, arr, prec)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.p, self.offset, -self.coeffs, self.prec)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return LaurentSeries(self.p, self.offset, self.coeffs * (other % self.p), self.prec)
        other = self._check(other)
        if other is NotImplemented:
            return other
        v1, v2 = self._vbound(), other._vbound()
        if self.prec is None and other.prec is None:
            prec = None
        else:
            n1 = math.inf if self.prec is None else self.prec
            n2 = math.inf if other.prec is None else other.prec
            bound = min(n1 + v2, n2 + v1)
            prec = None if bound == math.inf else int(bound)
        if not self.coeffs.size or not other.coeffs.size:
            return LaurentSeries.zero(self.p, prec)
        arr = np.convolve(self.coeffs, other.coeffs)
        return LaurentSeries(self.p, self.offset + other.offset, arr, prec)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.invert() ** (-k)
        result = LaurentSeries.one(self.p)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, k: int) -> LaurentSeries:
        """Multiply by ``t^k``."""
        prec = None if self.prec is None else self.prec + k
        return LaurentSeries(self.p, self.offset + k, self.coeffs, prec)

    def truncate(self, prec: int) -> LaurentSeries:
        return LaurentSeries(self.p, self.offset, self.coeffs, _min_prec(self.prec, prec))

    def invert(self, target_precision: int | None = None) -> LaurentSeries:
        """Multiplicative inverse.

        Exact monomials invert exactly.  Anything else needs
        ``target_precision``: the result is known for exponents below it (or
        below the bound the input's own precision allows, if smaller).
        """
        if not self.coeffs.size:
            if self.prec is None:
                raise ZeroDivisionError("inverse of exact zero")
            raise PrecisionExhausted("cannot invert a series that vanishes to its precision")
        v = self.offset
        lead_inv = pow(int(self.coeffs[0]), -1, self.p)
        if self.coeffs.size == 1 and self.prec is None:
            return LaurentSeries(self.p, -v, [lead_inv])
        bound = None if self.prec is None else self.prec - 2 * v
        prec = _min_prec(target_precision, bound)
        if prec is None:
            raise ValueError("target_precision is required to invert a non-monomial series")
        length = prec + v  # number of coefficients of the unit part needed
        if length <= 0:
            return LaurentSeries.zero(self.p, prec)
        unit = self.dense(v, v + length)
        inv = _unit_inverse(unit, length, self.p)
        return LaurentSeries(self.p, -v, inv, prec)

    def __truediv__(self, other):
        other = self._check(other)
        if other.coeffs.size == 1 and other.prec is None:
            return self * other.invert()
        raise TypeError("series division needs a precision; use div(other, precision)")

    def div(self, other: LaurentSeries, precision: int) -> LaurentSeries:
        """``self / other`` known (at least) for exponents below ``precision``."""
        if other.coeffs.size == 1 and other.prec is None:
            return self * other.invert()
        vs = self._vbound()
        if vs == math.inf:
            return LaurentSeries.zero(self.p)
        return self * other.invert(precision - int(vs))

    def frobenius(self) -> LaurentSeries:
        """``s -> s^p``; F_p coefficients are Frobenius-fixed."""
        p = self.p
        prec = None if self.prec is None else self.prec * p
        if not self.coeffs.size:
            return LaurentSeries.zero(p, prec)
        arr = np.zeros((self.coeffs.size - 1) * p + 1, dtype=np.int64)
        arr[::p] = self.coeffs
        return LaurentSeries(p, self.offset * p, arr, prec)

    # -- comparison / display ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentSeries(self.p, 0, [other])
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.p == other.p
            and self.prec == other.prec
            and self.offset == other.offset
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def agrees_with(self, other: LaurentSeries) -> bool:
        """Equality up to the smaller of the two precisions."""
        d = self - other
        return d.is_zero()

    def __hash__(self):
        return hash((self.p, self.offset, self.prec, self.coeffs.tobytes()))

    def render(self) -> str:
        parts = []
        for e, c in sorted(self.terms().items()):
            if e == 0:
                parts.append(str(c))
                continue
            mono = "t" if e == 1 else f"t^{e}"
            parts.append(mono if c == 1 else f"{c}*{mono}")
        if self.prec is not None:
            parts.append(f"O(t^{self.prec})")
        return " + ".join(parts) if parts else "0"

    __str__ = render

    def __repr__(self):
        return f"LaurentSeries(p={self.p}, {self.render()!r})"


def _unit_inverse(unit: np.ndarray, length: int, p: int) -> np.ndarray:
    # Newton iteration b <- b (2 - a b), doubling the known length each step
    inv = np.array([pow(int(unit[0]), -1, p)], dtype=np.int64)
    known = 1
    while known < length:
        known = min(2 * known, length)
        ab = np.convolve(unit[:known], inv)[:known] % p
        corr = (-ab) % p
        corr[0] = (corr[0] + 2) % p
        inv = np.convolve(inv, corr)[:known] % p
    return inv


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<op>[-+*^()])|(?P<t>t)|(?P<O>O))")


class _Parser:
    def __init__(self, text: str, p: int):
        self.text = text
        self.p = p
        self.tokens = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _TOKEN.match(text, pos)
            if not m:
                raise SeriesParseError(f"unexpected character {text[pos]!r}", pos)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind or "token"
            got = "end of input" if tok[0] is None else repr(tok[1])
            raise SeriesParseError(f"expected {want}, got {got}", tok[2])
        self.i += 1
        return tok

    def signed_int(self):
        sign = 1
        while self.peek()[1] in ("-", "+"):
            if self.take()[1] == "-":
                sign = -sign
        return sign * int(self.take("int")[1])

    def exponent(self):
        if self.peek()[1] == "(":
            self.take("op", "(")
            e = self.signed_int()
            self.take("op", ")")
            return e
        return self.signed_int()

    def monomial(self):
        self.take("t")
        if self.peek()[1] == "^":
            self.take("op", "^")
            return self.exponent()
        return 1

    def term(self, terms, sign):
        kind, val, _ = self.peek()
        if kind == "O":
            self.take()
            self.take("op", "(")
            e = self.monomial()
            self.take("op", ")")
            return e
        if kind == "int":
            c = int(self.take()[1])
            if self.peek()[1] == "*":
                self.take()
                e = self.monomial()
            else:
                e = 0
        elif kind == "t":
            c, e = 1, self.monomial()
        else:
            got = "end of input" if kind is None else repr(val)
            raise SeriesParseError(f"expected a term, got {got}", self.peek()[2])
        terms[e] = terms.get(e, 0) + sign * c
        return None

    def parse(self) -> LaurentSeries:
        if not self.tokens:
            raise SeriesParseError("empty series", 0)
        terms: dict[int, int] = {}
        prec = None
        sign = 1
        while self.peek()[1] in ("-", "+"):
            if self.take()[1] == "-":
                sign = -sign
        while True:
            o = self.term(terms, sign)
            if o is not None:
                prec = o if prec is None else min(prec, o)
            kind, val, pos = self.peek()
            if kind is None:
                break
            if val not in ("+", "-"):
                raise SeriesParseError(f"expected '+' or '-', got {val!r}", pos)
            sign = 1
            while self.peek()[1] in ("-", "+"):
                if self.take()[1] == "-":
                    sign = -sign
        return LaurentSeries.from_dict(self.p, terms, prec)


def parse_series(text: str, field: PrimeField | int) -> LaurentSeries:
    """Parse ``"t^-3 + 2*t^2"``-style text into an exact series over F_p.

    Duplicate exponents are summed and coefficients reduced mod p.  A trailing
    ``O(t^N)`` term marks the series as known only below ``t^N``.
    """
    p = field.p if isinstance(field, PrimeField) else PrimeField(field).p
    if not isinstance(text, str):
        raise ConfigError(f"series must be a string, got {type(text).__name__}")
    return _Parser(text, p).parse()
