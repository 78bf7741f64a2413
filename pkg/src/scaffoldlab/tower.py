"""The Artin-Schreier-Witt tower L = K(x_0, ..., x_{n-1}) as an explicit ring.

Elements are kept in normal form with respect to the relations

    x_i^p = x_i + beta_i + d_i,   d_i = Dbar_i(x_0..x_{i-1}, beta_0..beta_{i-1}),

i.e. as K-linear combinations of the ``p^n`` monomials ``x^a`` with
``0 <= a_i < p``.  Row ``sum a_i p^i`` of an element's coefficient array holds
the Laurent coefficient of ``x^a``; an element of the subtower K_j therefore
uses only the first ``p^j`` rows, which makes embedding free.

The generator sigma acts by ``x -> x (+) witt_integer(k)``; norms are
products of conjugates and ``v_L = v_K o N_{L/K}``.
"""

from __future__ import annotations

import itertools
import math
import random
import threading
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import ConfigError, ContractViolation, PrecisionExhausted
from .series import LaurentSeries, Valuation
from .witt import carry_polynomial, witt_integer, addition_polynomials

__all__ = [
    "TowerConfig",
    "Tower",
    "TowerElement",
    "SparseMap",
    "build_tower",
    "MAX_TOWER_DEGREE",
]

MAX_TOWER_DEGREE = 27


def _min_prec(*precs):
    vals = [q for q in precs if q is not None]
    return min(vals) if vals else None


def _digits(k: int, base: int, length: int) -> tuple[int, ...]:
    out = []
    for _ in range(length):
        k, d = divmod(k, base)
        out.append(d)
    return tuple(out)


@dataclass(frozen=True)
class SparseMap:
    """A K-linear map given by Laurent-polynomial entries ``(src, dst, series)``."""

    src: np.ndarray
    dst: np.ndarray
    start: np.ndarray
    length: np.ndarray
    shift: np.ndarray
    data: np.ndarray
    base: int
    span: int

    @classmethod
    def from_entries(cls, entries: Iterable[tuple[int, int, LaurentSeries]]) -> SparseMap:
        items = [(s, d, c) for s, d, c in entries if not c.is_zero()]
        for _, _, c in items:
            if not c.is_exact:
                raise ContractViolation("tower structure maps must be exact")
        if not items:
            z = np.zeros(0, dtype=np.int64)
            return cls(z, z, z, z, z, z, 0, 0)
        base = min(c.offset for _, _, c in items)
        src, dst, start, length, shift, chunks = [], [], [], [], [], []
        pos = 0
        for s, d, c in items:
            src.append(s)
            dst.append(d)
            start.append(pos)
            length.append(c.coeffs.size)
            shift.append(c.offset - base)
            chunks.append(c.coeffs)
            pos += c.coeffs.size
        arr = lambda xs: np.asarray(xs, dtype=np.int64)  # noqa: E731
        span = max(sh + ln for sh, ln in zip(shift, length))
        return cls(arr(src), arr(dst), arr(start), arr(length), arr(shift), np.concatenate(chunks), base, span)


@dataclass(frozen=True)
class TowerConfig:
    p: int
    n: int
    beta: tuple
    precision: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(self.beta))


class Tower:
    """Normal-form arithmetic in ``K(x_0, ..., x_{n-1})``.

    Use :func:`build_tower` to get the ramification checks; the bare
    constructor accepts any exact ``beta`` (including ``n = 0``, which is K).
    """

    def __init__(self, p: int, beta: Sequence[LaurentSeries], precision: int | None = None):
        beta = tuple(beta)
        for b in beta:
            if b.p != p:
                raise ConfigError("beta entries must have characteristic p", field="beta")
            if not b.is_exact:
                raise ConfigError("beta entries must be exact series", field="beta")
        self.p = p
        self.n = len(beta)
        self.beta = beta
        self.R = p**self.n
        self.precision = precision
        self._lock = threading.RLock()
        self._sigma_maps: dict[int, SparseMap] = {}
        self._sigma_x: dict[int, list[TowerElement]] = {}
        self._powers: dict[tuple[int, int], TowerElement] = {}
        self._norm_cache: dict = {}

        E = 2 * p - 1
        self._E = E
        self._nE = E**self.n
        pair = np.zeros((self.R, self.R), dtype=np.int64)
        for a in range(self.R):
            da = _digits(a, p, self.n)
            for b in range(self.R):
                db = _digits(b, p, self.n)
                pair[a, b] = sum((x + y) * E**i for i, (x, y) in enumerate(zip(da, db)))
        self._pair_index = pair

        if self.n == 0:
            self.parent = None
            self.d: list[TowerElement] = []
            self._table = SparseMap.from_entries([(0, 0, LaurentSeries.one(p))])
        else:
            self.parent = Tower(p, beta[:-1], precision)
            top = self.n - 1
            d_top = self.parent._evaluate_carry(top) if top > 0 else self.parent.zero()
            self.d = [self.embed(e) for e in self.parent.d] + [self.embed(d_top)]
            self._build_table(d_top)

    # -- construction ------------------------------------------------------

    def _evaluate_carry(self, i: int) -> TowerElement:
        """``d_i = Dbar_i(x_0..x_{i-1}, beta_0..beta_{i-1})`` in this tower (which has ``i`` variables)."""
        p, n = self.p, self.n
        D = carry_polynomial(p, i, i + 1).reduce_mod(p)
        grouped: dict[tuple[int, ...], LaurentSeries] = {}
        for exps, c in D.terms.items():
            xe, ye = exps[: i + 1], exps[i + 1 :]
            if xe[i]:
                raise ContractViolation(f"D_{i} depends on X_{i}")
            coef = LaurentSeries.monomial(p, c, 0)
            for h, e in enumerate(ye):
                if e:
                    coef = coef * self.beta[h] ** e
            key = xe[:n]
            grouped[key] = grouped[key] + coef if key in grouped else coef
        out = self.zero()
        for xe, coef in grouped.items():
            out = out + self.monomial_power(xe) * coef
        return out

    def _build_table(self, d_top: TowerElement):
        p, n, P = self.p, self.n, self.parent
        block = p ** (n - 1)
        rhs = P.const(self.beta[-1]) + d_top  # x_top^p - x_top
        entries = []
        self._nf_table: list[TowerElement] = [None] * self._nE  # type: ignore[list-item]
        for e in range(self._nE):
            de = _digits(e, self._E, n)
            k = de[-1]
            sub_e = sum(x * self._E**i for i, x in enumerate(de[:-1]))
            low = P._nf_table[sub_e] if P.n else P.one()
            if k < p:
                nf = self._shift_rows(low, k * block)
            else:
                nf = self._shift_rows(low, (k - p + 1) * block) + self._shift_rows(low * rhs, (k - p) * block)
            self._nf_table[e] = nf
            for r in range(nf.coeffs.shape[0]):
                row = nf.row(r)
                if not row.is_zero():
                    entries.append((e, r, row))
        self._table = SparseMap.from_entries(entries)

    def _shift_rows(self, low: TowerElement, by: int) -> TowerElement:
        arr = np.zeros((self.R, low.coeffs.shape[1]), dtype=np.int64)
        arr[by : by + low.coeffs.shape[0]] = low.coeffs
        return TowerElement(self, arr, low.offset, low.prec)

    # -- element constructors ----------------------------------------------

    def zero(self) -> TowerElement:
        return TowerElement(self, np.zeros((self.R, 0), dtype=np.int64), 0, None)

    def one(self) -> TowerElement:
        return self.const(LaurentSeries.one(self.p))

    def const(self, c: LaurentSeries | int) -> TowerElement:
        if isinstance(c, int):
            c = LaurentSeries.monomial(self.p, c, 0)
        arr = np.zeros((self.R, c.coeffs.size), dtype=np.int64)
        arr[0] = c.coeffs
        return TowerElement(self, arr, c.offset, c.prec)

    def t(self) -> TowerElement:
        return self.const(LaurentSeries.monomial(self.p, 1, 1))

    def x(self, i: int) -> TowerElement:
        if not 0 <= i < self.n:
            raise IndexError(f"x_{i} is not a generator of this tower")
        return self.from_terms({tuple(int(h == i) for h in range(self.n)): LaurentSeries.one(self.p)})

    def index(self, exps: Sequence[int]) -> int:
        return sum(a * self.p**i for i, a in enumerate(exps))

    def exponents(self, idx: int) -> tuple[int, ...]:
        return _digits(idx, self.p, self.n)

    def from_terms(self, terms: Mapping[tuple[int, ...], LaurentSeries | int]) -> TowerElement:
        """Element from ``{exponent tuple: coefficient}`` with all exponents ``< p``."""
        items = []
        for exps, c in terms.items():
            exps = tuple(exps) + (0,) * (self.n - len(exps))
            if len(exps) != self.n or any(not 0 <= a < self.p for a in exps):
                raise ValueError(f"exponent {exps} is not in normal form; use normal_form()")
            if isinstance(c, int):
                c = LaurentSeries.monomial(self.p, c, 0)
            items.append((self.index(exps), c))
        if not items:
            return self.zero()
        nonzero = [c for _, c in items if not c.is_zero()]
        lo = min((c.offset for c in nonzero), default=0)
        hi = max((c.offset + c.coeffs.size for c in nonzero), default=0)
        prec = _min_prec(*(c.prec for _, c in items))
        arr = np.zeros((self.R, max(hi - lo, 0)), dtype=np.int64)
        for idx, c in items:
            arr[idx] += c.dense(lo, hi)
        return TowerElement(self, arr % self.p, lo, prec)

    def embed(self, e: TowerElement) -> TowerElement:
        """Image of an element of a subtower (same p, prefix of beta)."""
        if e.tower is self:
            return e
        if e.tower.p != self.p or e.tower.n > self.n or e.tower.beta != self.beta[: e.tower.n]:
            raise ValueError("element does not come from a subtower of this tower")
        arr = np.zeros((self.R, e.coeffs.shape[1]), dtype=np.int64)
        arr[: e.coeffs.shape[0]] = e.coeffs
        return TowerElement(self, arr, e.offset, e.prec)

    def restrict(self, e: TowerElement, j: int) -> TowerElement:
        """View an element lying in K_j as an element of ``subtower(j)``."""
        sub = self.subtower(j)
        e = self.embed(e)
        if np.any(e.coeffs[sub.R :]):
            raise ValueError(f"element does not lie in K_{j}")
        return TowerElement(sub, e.coeffs[: sub.R].copy(), e.offset, e.prec)

    def subtower(self, j: int) -> Tower:
        if not 0 <= j <= self.n:
            raise ValueError(f"subtower index {j} out of range 0..{self.n}")
        t = self
        while t.n > j:
            t = t.parent
        return t

    def monomial_power(self, exps: Sequence[int]) -> TowerElement:
        """Normal form of ``prod x_h^exps[h]`` for arbitrary nonnegative exponents."""
        out = None
        for h, e in enumerate(exps):
            if e:
                f = self.x_power(h, e)
                out = f if out is None else out * f
        return self.one() if out is None else out

    def x_power(self, h: int, e: int) -> TowerElement:
        key = (h, e)
        with self._lock:
            hit = self._powers.get(key)
        if hit is not None:
            return hit
        if e < self.p:
            exps = [0] * self.n
            exps[h] = e
            val = self.from_terms({tuple(exps): 1})
        else:
            half = self.x_power(h, e // 2)
            val = half * half
            if e % 2:
                val = val * self.x(h)
        with self._lock:
            self._powers[key] = val
        return val

    # -- raw rewriting -----------------------------------------------------

    def normal_form(self, raw: Mapping[tuple[int, ...], LaurentSeries | int], rng: random.Random | None = None) -> TowerElement:
        """Rewrite ``{exponents: coefficient}`` (any exponents) with ``x_h^p -> x_h + beta_h + d_h``.

        Without ``rng`` the highest variable is rewritten first; with ``rng`` a
        random reducible term and variable are picked at every step.
        """
        p, n = self.p, self.n
        rel = []
        for h in range(n):
            rhs = {tuple(int(g == h) for g in range(n)): LaurentSeries.one(p)}
            add = self.d[h] + self.const(self.beta[h])
            for idx in range(self.R):
                c = add.row(idx)
                if not c.is_zero():
                    key = self.exponents(idx)
                    rhs[key] = rhs[key] + c if key in rhs else c
            rel.append(rhs)
        work: dict[tuple[int, ...], LaurentSeries] = {}
        for exps, c in raw.items():
            exps = tuple(exps) + (0,) * (n - len(exps))
            if isinstance(c, int):
                c = LaurentSeries.monomial(p, c, 0)
            work[exps] = work[exps] + c if exps in work else c

        def rewrite(exps, h):
            c = work.pop(exps)
            base = list(exps)
            base[h] -= p
            for rexp, rc in rel[h].items():
                key = tuple(a + b for a, b in zip(base, rexp))
                val = c * rc
                work[key] = work[key] + val if key in work else val

        if rng is None:
            for h in reversed(range(n)):
                while True:
                    todo = [e for e in work if e[h] >= p]
                    if not todo:
                        break
                    for e in todo:
                        rewrite(e, h)
        else:
            while True:
                todo = [(e, h) for e in work for h in range(n) if e[h] >= p]
                if not todo:
                    break
                e, h = rng.choice(sorted(todo))
                rewrite(e, h)
        return self.from_terms(work)

    # -- Galois action -----------------------------------------------------

    def sigma_images(self, k: int) -> list[TowerElement]:
        """``[sigma^k(x_0), ..., sigma^k(x_{n-1})]`` via ``x (+) witt_integer(k)``."""
        k %= self.R
        with self._lock:
            hit = self._sigma_x.get(k)
        if hit is not None:
            return hit
        p, n = self.p, self.n
        images = []
        if n:
            w = witt_integer(k, p, n).entries
            for i, S in enumerate(addition_polynomials(p, n)):
                S = S.reduce_mod(p)
                grouped: dict[tuple[int, ...], int] = {}
                for exps, c in S.terms.items():
                    coef = c
                    for h, e in enumerate(exps[n:]):
                        if e:
                            coef *= pow(w[h], e, p)
                    coef %= p
                    if coef:
                        xe = exps[:n]
                        grouped[xe] = (grouped.get(xe, 0) + coef) % p
                img = self.zero()
                for xe, c in grouped.items():
                    if c:
                        img = img + self.monomial_power(xe) * c
                images.append(img)
        with self._lock:
            self._sigma_x[k] = images
        return images

    def sigma_map(self, k: int) -> SparseMap:
        k %= self.R
        with self._lock:
            hit = self._sigma_maps.get(k)
        if hit is not None:
            return hit
        imgs = self.sigma_images(k)
        mono: list[TowerElement] = [self.one()]
        for idx in range(1, self.R):
            exps = self.exponents(idx)
            h = next(i for i, a in enumerate(exps) if a)
            mono.append(mono[idx - p_pow(self.p, h)] * imgs[h])
        entries = []
        for a, img in enumerate(mono):
            for r in range(self.R):
                row = img.row(r)
                if not row.is_zero():
                    entries.append((a, r, row))
        smap = SparseMap.from_entries(entries)
        with self._lock:
            self._sigma_maps[k] = smap
        return smap

    def apply_sigma(self, e: TowerElement, k: int) -> TowerElement:
        if k < 0:
            raise ValueError("k must be nonnegative")
        e = self.embed(e)
        k %= self.R
        if k == 0 or e.is_zero():
            return e
        smap = self.sigma_map(k)
        C = _kernels.apply_map(e.coeffs, smap, self.R, self.p)
        prec = None if e.prec is None else e.prec + smap.base
        return TowerElement(self, C, e.offset + smap.base, prec)

    # -- norm and valuation ------------------------------------------------

    def norm(self, e: TowerElement) -> LaurentSeries:
        """``N_{L/K}(e)``, computed one degree-p layer at a time."""
        e = self.embed(e)
        cur = e
        for h in reversed(range(self.n)):
            step = p_pow(self.p, h)
            prod = cur
            for c in range(1, self.p):
                prod = prod * self.apply_sigma(cur, c * step)
            cur = prod
            if np.any(cur.coeffs[p_pow(self.p, h) :]):
                raise ContractViolation(f"partial norm does not lie in K_{h}")
        return cur.row(0)

    def valuation_info(self, e: TowerElement) -> Valuation:
        e = self.embed(e)
        if e.is_exact_zero():
            return Valuation(math.inf, True)
        nv = self.norm(e).valuation()
        return nv

    def valuation(self, e: TowerElement) -> int | float:
        """Exact ``v_L(e)``; raises :class:`PrecisionExhausted` when only a bound is known."""
        return self.valuation_info(e).require()

    def __repr__(self):
        return f"Tower(p={self.p}, n={self.n}, beta={[str(b) for b in self.beta]})"


def p_pow(p: int, h: int) -> int:
    return p**h


class TowerElement:
    """Immutable element of a :class:`Tower` in normal form."""

    __slots__ = ("tower", "coeffs", "offset", "prec")

    def __init__(self, tower: Tower, coeffs: np.ndarray, offset: int, prec: int | None):
        arr = coeffs
        if prec is not None:
            keep = prec - offset
            if keep <= 0:
                arr = arr[:, :0]
            elif keep < arr.shape[1]:
                arr = arr[:, :keep]
        cols = np.flatnonzero(arr.any(axis=0)) if arr.size else np.zeros(0, dtype=np.int64)
        if cols.size == 0:
            arr = np.zeros((tower.R, 0), dtype=np.int64)
            offset = 0
        else:
            lo, hi = int(cols[0]), int(cols[-1]) + 1
            arr = np.ascontiguousarray(arr[:, lo:hi])
            offset += lo
        arr.setflags(write=False)
        self.tower = tower
        self.coeffs = arr
        self.offset = int(offset)
        self.prec = prec

    # -- inspection --------------------------------------------------------

    @property
    def p(self) -> int:
        return self.tower.p

    def is_zero(self) -> bool:
        return self.coeffs.shape[1] == 0

    def is_exact_zero(self) -> bool:
        return self.is_zero() and self.prec is None

    def is_constant(self) -> bool:
        return not np.any(self.coeffs[1:])

    def row(self, idx: int) -> LaurentSeries:
        return LaurentSeries(self.tower.p, self.offset, self.coeffs[idx], self.prec)

    def coefficient(self, exps: Sequence[int]) -> LaurentSeries:
        return self.row(self.tower.index(exps))

    def to_series(self) -> LaurentSeries:
        if not self.is_constant():
            raise ValueError("element does not lie in K")
        return self.row(0)

    def terms(self) -> dict[tuple[int, ...], LaurentSeries]:
        out = {}
        for idx in np.flatnonzero(self.coeffs.any(axis=1)):
            out[self.tower.exponents(int(idx))] = self.row(int(idx))
        return out

    def _vbound(self):
        if self.coeffs.shape[1]:
            return self.offset
        return math.inf if self.prec is None else self.prec

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> TowerElement:
        if isinstance(other, TowerElement):
            if other.tower is self.tower:
                return other
            if other.tower.n < self.tower.n:
                return self.tower.embed(other)
            if other.tower.n > self.tower.n:
                raise _Promote(other.tower)
            raise ValueError("elements of different towers")
        if isinstance(other, (LaurentSeries, int)):
            return self.tower.const(other)
        return NotImplemented

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except _Promote as pr:
            return pr.tower.embed(self) + other
        if other is NotImplemented:
            return other
        prec = _min_prec(self.prec, other.prec)
        if other.is_zero():
            return TowerElement(self.tower, self.coeffs, self.offset, prec)
        if self.is_zero():
            return TowerElement(self.tower, other.coeffs, other.offset, prec)
        lo = min(self.offset, other.offset)
        hi = max(self.offset + self.coeffs.shape[1], other.offset + other.coeffs.shape[1])
        arr = np.zeros((self.tower.R, hi - lo), dtype=np.int64)
        arr[:, self.offset - lo : self.offset - lo + self.coeffs.shape[1]] += self.coeffs
        arr[:, other.offset - lo : other.offset - lo + other.coeffs.shape[1]] += other.coeffs
        arr %= self.tower.p
        return TowerElement(self.tower, arr, lo, prec)

    __radd__ = __add__

    def __neg__(self):
        return TowerElement(self.tower, (-self.coeffs) % self.tower.p, self.offset, self.prec)

    def __sub__(self, other):
        if isinstance(other, (TowerElement, LaurentSeries, int)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        p = self.tower.p
        if isinstance(other, int) and not isinstance(other, bool):
            return TowerElement(self.tower, (self.coeffs * (other % p)) % p, self.offset, self.prec)
        if isinstance(other, LaurentSeries):
            return self._scale(other)
        try:
            other = self._coerce(other)
        except _Promote as pr:
            return pr.tower.embed(self) * other
        if other is NotImplemented:
            return other
        T = self.tower
        v1, v2 = self._vbound(), other._vbound()
        if self.prec is None and other.prec is None:
            base_prec = None
        else:
            n1 = math.inf if self.prec is None else self.prec
            n2 = math.inf if other.prec is None else other.prec
            b = min(n1 + v2, n2 + v1)
            base_prec = None if b == math.inf else int(b)
        if self.is_zero() or other.is_zero():
            prec = None if base_prec is None else base_prec + min(T._table.base, 0)
            return TowerElement(T, np.zeros((T.R, 0), dtype=np.int64), 0, prec)
        U = _kernels.pair_products(self.coeffs, other.coeffs, T._pair_index, T._nE, p)
        C = _kernels.apply_map(U, T._table, T.R, p)
        prec = None if base_prec is None else base_prec + T._table.base
        return TowerElement(T, C, self.offset + other.offset + T._table.base, prec)

    __rmul__ = __mul__

    def _scale(self, s: LaurentSeries) -> TowerElement:
        if s.p != self.tower.p:
            raise ValueError("characteristic mismatch")
        if self.prec is None and s.prec is None:
            prec = None
        else:
            n1 = math.inf if self.prec is None else self.prec
            n2 = math.inf if s.prec is None else s.prec
            b = min(n1 + s._vbound(), n2 + self._vbound())
            prec = None if b == math.inf else int(b)
        if s.is_zero() or self.is_zero():
            return TowerElement(self.tower, np.zeros((self.tower.R, 0), dtype=np.int64), 0, prec)
        L = self.coeffs.shape[1] + s.coeffs.size - 1
        arr = np.zeros((self.tower.R, L), dtype=np.int64)
        for r in np.flatnonzero(self.coeffs.any(axis=1)):
            arr[r] = np.convolve(self.coeffs[r], s.coeffs)
        arr %= self.tower.p
        return TowerElement(self.tower, arr, self.offset + s.offset, prec)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = self.tower.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, k: int) -> TowerElement:
        """Multiply by ``t^k``."""
        prec = None if self.prec is None else self.prec + k
        return TowerElement(self.tower, self.coeffs, self.offset + k, prec)

    def truncate(self, prec: int) -> TowerElement:
        return TowerElement(self.tower, self.coeffs, self.offset, _min_prec(self.prec, prec))

    def sigma(self, k: int = 1) -> TowerElement:
        return self.tower.apply_sigma(self, k)

    def norm(self) -> LaurentSeries:
        return self.tower.norm(self)

    def valuation(self) -> int | float:
        return self.tower.valuation(self)

    # -- comparison / display ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, LaurentSeries)):
            other = self.tower.const(other)
        if not isinstance(other, TowerElement):
            return NotImplemented
        if other.tower is not self.tower:
            big = self.tower if self.tower.n >= other.tower.n else other.tower
            try:
                a, b = big.embed(self), big.embed(other)
            except ValueError:
                return False
            return a == b
        return (
            self.prec == other.prec
            and self.offset == other.offset
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((id(self.tower), self.offset, self.prec, self.coeffs.tobytes()))

    def agrees_with(self, other) -> bool:
        """Equality up to the smaller of the two precisions."""
        return (self - other).is_zero()

    def render(self) -> str:
        T = self.tower
        items = sorted(self.terms().items(), key=lambda it: (sum(it[0]), it[0]))
        parts = []
        for exps, c in items:
            mono = "*".join(
                f"x{i}" if a == 1 else f"x{i}^{a}" for i, a in enumerate(exps) if a
            )
            cs = LaurentSeries(T.p, c.offset, c.coeffs).render()
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}")
        if self.prec is not None:
            parts.append(f"O(t^{self.prec})")
        return " + ".join(parts) if parts else "0"

    __str__ = render

    def __repr__(self):
        return f"TowerElement({self.render()!r})"


class _Promote(Exception):
    def __init__(self, tower):
        self.tower = tower


def build_tower(config: TowerConfig) -> Tower:
    """Validate a configuration and build its tower.

    Requires ``v(beta_0) < 0``, ``p`` not dividing ``v(beta_0)`` and a reduced
    Witt vector, i.e. the extension is a totally ramified cyclic extension of
    degree ``p^n``.
    """
    from .ramification import check_reduced

    p, n, beta = config.p, config.n, config.beta
    if len(beta) != n:
        raise ConfigError(f"expected {n} entries, got {len(beta)}", field="beta")
    if p**n > MAX_TOWER_DEGREE:
        raise ConfigError(f"tower degree p^n = {p**n} exceeds the cap {MAX_TOWER_DEGREE}", field="n")
    ok, detail = check_reduced(beta, p)
    if not ok:
        raise ConfigError(f"beta is not reduced: {detail}", field="beta")
    v0 = beta[0].valuation()
    if not v0.exact or v0.value >= 0:
        raise ConfigError("v(beta_0) must be negative", field="beta")
    if v0.value % p == 0:
        raise ConfigError("p must not divide v(beta_0)", field="beta")
    return Tower(p, beta, config.precision)
