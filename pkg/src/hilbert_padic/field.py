"""Finite fields F_{p^g} with Zech-logarithm arithmetic.

Elements are stored as small ints: 0 is zero and ``k + 1`` is ``gen**k`` for a
fixed primitive element ``gen``.  Addition goes through a Zech table, so every
operation is a table lookup plus integer arithmetic modulo ``q - 1``.
Coefficient vectors (low degree first, relative to the modulus) are only used
at the boundary for input and output.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InputError

MAX_ORDER = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---- polynomials over F_p as coefficient lists, low degree first ----

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = [x % p for x in a]
    _trim(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _poly_sub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _poly_powmod(base: Sequence[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(base, m, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), m, p)
        base = _poly_mod(_poly_mul(base, base, p), m, p)
        e >>= 1
    return result


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    f = [c % p for c in modulus]
    n = len(f) - 1
    if n < 1 or f[-1] != 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    if _poly_sub(_poly_powmod(x, p ** n, f, p), x, p):
        return False
    for r in _prime_factors(n):
        h = _poly_sub(_poly_powmod(x, p ** (n // r), f, p), x, p)
        if len(_poly_gcd(f, h, p)) != 1:
            return False
    return True


def default_modulus(p: int, g: int) -> list[int]:
    """Least monic irreducible of degree g, comparing coefficient lists low degree first."""
    for low in itertools.product(range(p), repeat=g):
        cand = list(low) + [1]
        if is_irreducible(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class Field:
    """The field F_p[x]/(modulus)."""

    def __init__(self, p: int, g: int = 1, modulus: Sequence[int] | None = None):
        if not isinstance(p, int) or not is_prime(p):
            raise InputError(f"p must be prime, got {p!r}")
        if not isinstance(g, int) or g < 1:
            raise InputError(f"g must be a positive integer, got {g!r}")
        if p ** g > MAX_ORDER:
            raise InputError(f"field of order {p}^{g} exceeds the supported size {MAX_ORDER}")
        if modulus is None:
            modulus = default_modulus(p, g)
        modulus = [int(c) % p for c in modulus]
        if len(modulus) != g + 1 or modulus[-1] != 1:
            raise InputError("modulus must be a monic polynomial of degree g")
        if not is_irreducible(modulus, p):
            raise InputError(f"modulus {modulus} is not irreducible over F_{p}")
        self.p = p
        self.g = g
        self.q = p ** g
        self.modulus = tuple(modulus)
        self._build_tables()

    # -- construction --
    def _vec_to_code(self, v: Sequence[int]) -> int:
        code = 0
        for c in reversed(list(v) + [0] * (self.g - len(v))):
            code = code * self.p + c
        return code

    def _code_to_vec(self, code: int) -> list[int]:
        out = []
        for _ in range(self.g):
            out.append(code % self.p)
            code //= self.p
        return out

    def _build_tables(self) -> None:
        p, q, m = self.p, self.q, list(self.modulus)
        order = q - 1
        factors = _prime_factors(order) if order > 1 else []
        gen_vec = None
        for code in range(1, q):
            v = _trim(self._code_to_vec(code))
            if all(_poly_powmod(v, order // r, m, p) != [1] for r in factors):
                gen_vec = v
                break
        assert gen_vec is not None
        exp_codes = [0] * order
        cur = [1]
        for k in range(order):
            exp_codes[k] = self._vec_to_code(cur)
            cur = _poly_mod(_poly_mul(cur, gen_vec, p), m, p)
        log_of_code = [-1] * q
        for k, c in enumerate(exp_codes):
            log_of_code[c] = k
        # zech[n] = log(1 + gen^n), or -1 when 1 + gen^n = 0
        zech = [-1] * order
        for n in range(order):
            v = self._code_to_vec(exp_codes[n])
            v[0] = (v[0] + 1) % p
            c = self._vec_to_code(v)
            zech[n] = log_of_code[c] if c else -1
        self._order = order
        self._exp = exp_codes
        self._log = log_of_code
        self._zech = zech
        # log(-1): 0 for p = 2, otherwise order / 2
        self._log_minus_one = 0 if p == 2 else order // 2

    # -- identity --
    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and (self.p, self.g, self.modulus) == (other.p, other.g, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.g, self.modulus))

    def __repr__(self) -> str:
        return f"Field(p={self.p}, g={self.g}, modulus={list(self.modulus)})"

    # -- raw element arithmetic (elements are ints as described above) --
    zero = 0
    one = 1

    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        order = self._order
        n = (b - a) % order
        z = self._zech[n]
        if z < 0:
            return 0
        return (a - 1 + z) % order + 1

    def neg(self, a: int) -> int:
        if a == 0:
            return 0
        return (a - 1 + self._log_minus_one) % self._order + 1

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return (a + b - 2) % self._order + 1

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return (-(a - 1)) % self._order + 1

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if n == 0 else 0
        return ((a - 1) * n) % self._order + 1

    def frob(self, a: int, times: int = 1) -> int:
        """x -> x^(p^times); negative ``times`` applies the inverse."""
        if a == 0:
            return 0
        t = times % self.g
        return ((a - 1) * pow(self.p, t, self._order)) % self._order + 1 if self._order > 1 else a

    def frob_inv(self, a: int) -> int:
        return self.frob(a, -1)

    def from_int(self, n: int) -> int:
        return self._from_code(n % self.p)

    def _from_code(self, code: int) -> int:
        if code == 0:
            return 0
        return self._log[code] + 1

    def from_coeffs(self, coeffs: Iterable[int]) -> int:
        """Element from a coefficient list in the polynomial basis, low degree first."""
        v = [int(c) % self.p for c in coeffs]
        if len(v) > self.g:
            v = _poly_mod(v, self.modulus, self.p)
        return self._from_code(self._vec_to_code(v))

    def to_coeffs(self, a: int) -> list[int]:
        if a == 0:
            return [0] * self.g
        return self._code_to_vec(self._exp[a - 1])

    def generator(self) -> int:
        return 2 if self._order > 1 else 1

    def elements(self) -> list[int]:
        """All elements, ordered by their coefficient code."""
        return [self._from_code(c) for c in range(self.q)]

    def random(self, rng: random.Random, nonzero: bool = False) -> int:
        if nonzero:
            return rng.randrange(1, self.q)
        return rng.randrange(0, self.q)

    def elem(self, a: int) -> "FieldElem":
        return FieldElem(self, a)


@dataclass(frozen=True)
class FieldElem:
    """Operator-friendly wrapper around a raw element."""

    field: Field
    ix: int

    @classmethod
    def from_coeffs(cls, field: Field, coeffs: Iterable[int]) -> "FieldElem":
        return cls(field, field.from_coeffs(coeffs))

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise InputError("elements of different fields")
            return other.ix
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElem(self.field, self.field.add(self.ix, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return FieldElem(self.field, self.field.sub(self.ix, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return FieldElem(self.field, self.field.sub(o, self.ix))

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElem(self.field, self.field.mul(self.ix, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return FieldElem(self.field, self.field.div(self.ix, o))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.ix))

    def __pow__(self, n: int):
        return FieldElem(self.field, self.field.pow(self.ix, n))

    def __bool__(self) -> bool:
        return self.ix != 0

    def frob(self, times: int = 1) -> "FieldElem":
        return FieldElem(self.field, self.field.frob(self.ix, times))

    def coeffs(self) -> list[int]:
        return self.field.to_coeffs(self.ix)

    def __repr__(self) -> str:
        return f"FieldElem({self.coeffs()})"
