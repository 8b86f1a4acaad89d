"""Truncated power series over a finite field, known modulo u^prec."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InputError, NotAUnit, PrecisionExhausted
from .field import Field
from .rational import AtLeast

# precision ceiling applied by Frobenius, which would otherwise multiply it by p
PHI_CAP = 4096


@dataclass(frozen=True)
class TruncSeries:
    """Element of k[[u]] known modulo u^prec; ``coeffs`` holds raw field elements."""

    field: Field
    prec: int
    coeffs: tuple

    def __post_init__(self):
        if self.prec < 0:
            raise InputError("precision must be non-negative")
        c = tuple(self.coeffs)
        if len(c) < self.prec:
            c = c + (0,) * (self.prec - len(c))
        elif len(c) > self.prec:
            c = c[: self.prec]
        object.__setattr__(self, "coeffs", c)

    # -- constructors --
    @classmethod
    def zero(cls, field: Field, prec: int) -> "TruncSeries":
        return cls(field, prec, ())

    @classmethod
    def const(cls, field: Field, prec: int, a: int) -> "TruncSeries":
        return cls(field, prec, (a,) if prec > 0 else ())

    @classmethod
    def one(cls, field: Field, prec: int) -> "TruncSeries":
        return cls.const(field, prec, 1)

    @classmethod
    def monomial(cls, field: Field, prec: int, exp: int, a: int = 1) -> "TruncSeries":
        if exp < 0:
            raise InputError("negative exponent")
        c = [0] * prec
        if exp < prec:
            c[exp] = a
        return cls(field, prec, tuple(c))

    @classmethod
    def from_ints(cls, field: Field, prec: int, coeffs: Iterable[int]) -> "TruncSeries":
        """Coefficients given as F_p integers."""
        return cls(field, prec, tuple(field.from_int(c) for c in coeffs))

    @classmethod
    def from_coeff_vectors(cls, field: Field, prec: int, coeffs: Iterable[Sequence[int]]) -> "TruncSeries":
        """Coefficients given as vectors in the polynomial basis of the field."""
        return cls(field, prec, tuple(field.from_coeffs(v) for v in coeffs))

    @classmethod
    def random(cls, field: Field, prec: int, rng: random.Random, val: int = 0) -> "TruncSeries":
        """Random series of exact valuation ``val`` (zero if val >= prec)."""
        c = [0] * prec
        if val < prec:
            c[val] = field.random(rng, nonzero=True)
            for i in range(val + 1, prec):
                c[i] = field.random(rng)
        return cls(field, prec, tuple(c))

    # -- basic queries --
    def val(self):
        """Index of the first nonzero coefficient, or ``AtLeast(prec)``."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return AtLeast(self.prec)

    def val_int(self) -> int:
        v = self.val()
        if isinstance(v, AtLeast):
            raise PrecisionExhausted(f"valuation undetermined: series is zero mod u^{self.prec}")
        return v

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def truncate(self, n: int) -> "TruncSeries":
        if n > self.prec:
            raise PrecisionExhausted(f"cannot raise precision from {self.prec} to {n}")
        return TruncSeries(self.field, n, self.coeffs[:n])

    def agrees(self, other: "TruncSeries", n: int | None = None) -> bool:
        """Equality modulo u^n (default: the common precision)."""
        m = min(self.prec, other.prec) if n is None else n
        if m > min(self.prec, other.prec):
            raise PrecisionExhausted("comparison beyond known precision")
        return self.coeffs[:m] == other.coeffs[:m]

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i]

    def __repr__(self) -> str:
        terms = [f"{self.field.to_coeffs(c)}u^{i}" for i, c in enumerate(self.coeffs) if c]
        return f"TruncSeries({' + '.join(terms) or '0'} + O(u^{self.prec}))"

    def _check(self, other: "TruncSeries") -> None:
        if other.field != self.field:
            raise InputError("series over different fields")

    # -- ring operations --
    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        n = min(self.prec, other.prec)
        add = self.field.add
        a, b = self.coeffs, other.coeffs
        return TruncSeries(self.field, n, tuple(add(a[i], b[i]) for i in range(n)))

    def __neg__(self) -> "TruncSeries":
        neg = self.field.neg
        return TruncSeries(self.field, self.prec, tuple(neg(c) for c in self.coeffs))

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self + (-other)

    def scale(self, a: int) -> "TruncSeries":
        mul = self.field.mul
        return TruncSeries(self.field, self.prec, tuple(mul(a, c) for c in self.coeffs))

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        vs, vt = self._lead(), other._lead()
        n = min(self.prec + vt, other.prec + vs)
        return TruncSeries(self.field, n, _mul_coeffs(self.field, self.coeffs, other.coeffs, n))

    def _lead(self) -> int:
        v = self.val()
        return v.bound if isinstance(v, AtLeast) else v

    def mul_trunc(self, other: "TruncSeries", n: int) -> "TruncSeries":
        """Product truncated to u^n; n must not exceed the known precision."""
        self._check(other)
        vs, vt = self._lead(), other._lead()
        if n > min(self.prec + vt, other.prec + vs):
            raise PrecisionExhausted("product not known to the requested precision")
        return TruncSeries(self.field, n, _mul_coeffs(self.field, self.coeffs, other.coeffs, n))

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by u^k; precision grows by k."""
        if k < 0:
            raise InputError("negative shift; use div_u")
        return TruncSeries(self.field, self.prec + k, (0,) * k + self.coeffs)

    def div_u(self, k: int) -> "TruncSeries":
        """Exact division by u^k; the first k coefficients must vanish."""
        if k > self.prec:
            raise PrecisionExhausted("division by u^k beyond known precision")
        if any(self.coeffs[:k]):
            raise InputError(f"series is not divisible by u^{k}")
        return TruncSeries(self.field, self.prec - k, self.coeffs[k:])

    def phi(self, cap: int = PHI_CAP) -> "TruncSeries":
        """Frobenius: coefficients to the p-th power and u -> u^p."""
        p = self.field.p
        n = min(p * self.prec, max(cap, self.prec))
        out = [0] * n
        frob = self.field.frob
        for i, c in enumerate(self.coeffs):
            if c and p * i < n:
                out[p * i] = frob(c)
        return TruncSeries(self.field, n, tuple(out))

    def frob_coeffs(self, times: int = 1) -> "TruncSeries":
        """Apply the field Frobenius to each coefficient, keeping u fixed."""
        frob = self.field.frob
        return TruncSeries(self.field, self.prec, tuple(frob(c, times) for c in self.coeffs))

    def pow(self, n: int) -> "TruncSeries":
        if n < 0:
            raise InputError("negative power")
        result = TruncSeries.one(self.field, self.prec + n * self._lead())
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inv_unit(self) -> "TruncSeries":
        """Inverse of a unit modulo u^prec."""
        if self.prec == 0:
            return self
        a = self.coeffs
        if a[0] == 0:
            raise NotAUnit(f"series has positive valuation {self.val()}")
        F = self.field
        add, mul, neg = F.add, F.mul, F.neg
        inv0 = F.inv(a[0])
        ninv0 = neg(inv0)
        b = [0] * self.prec
        b[0] = inv0
        for k in range(1, self.prec):
            acc = 0
            for i in range(1, k + 1):
                ai = a[i]
                if ai:
                    bk = b[k - i]
                    if bk:
                        acc = add(acc, mul(ai, bk))
            b[k] = mul(ninv0, acc)
        return TruncSeries(F, self.prec, tuple(b))

    def unit_part(self) -> tuple[int, "TruncSeries", "TruncSeries"]:
        """Split s = u^m * w with w a unit; returns (m, w, w^-1)."""
        m = self.val_int()
        w = self.div_u(m)
        return m, w, w.inv_unit()

    # -- JSON --
    def to_json(self) -> dict:
        return {"prec": self.prec, "coeffs": [self.field.to_coeffs(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, field: Field, obj) -> "TruncSeries":
        if not isinstance(obj, dict) or "prec" not in obj or "coeffs" not in obj:
            raise InputError("series must be an object with 'prec' and 'coeffs'")
        prec = int(obj["prec"])
        coeffs = obj["coeffs"]
        if len(coeffs) > prec:
            raise InputError("more coefficients than the stated precision")
        out = []
        for c in coeffs:
            if isinstance(c, int):
                out.append(field.from_int(c))
            else:
                if len(c) > field.g:
                    raise InputError("field element has too many coefficients")
                out.append(field.from_coeffs(c))
        return cls(field, prec, tuple(out))


def _mul_coeffs(F: Field, a: Sequence[int], b: Sequence[int], n: int) -> tuple:
    """Coefficients 0..n-1 of the product, using the log representation directly."""
    order = F.q - 1
    zech = F._zech
    na = [(i, x - 1) for i, x in enumerate(a[:n]) if x]
    nb = [(j, y - 1) for j, y in enumerate(b[:n]) if y]
    out = [0] * n
    for i, la in na:
        lim = n - i
        for j, lb in nb:
            if j >= lim:
                break
            k = i + j
            t = (la + lb) % order + 1
            cur = out[k]
            if cur == 0:
                out[k] = t
            else:
                z = zech[(t - cur) % order]
                out[k] = 0 if z < 0 else (cur - 1 + z) % order + 1
    return tuple(out)


def series_val(s: TruncSeries):
    return s.val()


def series_phi(s: TruncSeries, cap: int = PHI_CAP) -> TruncSeries:
    return s.phi(cap)


def series_inv_unit(s: TruncSeries) -> TruncSeries:
    return s.inv_unit()
