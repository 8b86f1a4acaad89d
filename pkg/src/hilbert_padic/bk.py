"""Breuil-Kisin modules killed by p with real multiplication, in adapted-basis form.

Indices are labels ``1..g`` (cyclic).  The block for label i describes Frobenius
from index i-1 to index i::

    phi(delta_{i-1}, eps_{i-1}) = (delta_i, eps_i) [[a_i, b_i], [u^e c_i, u^e d_i]]

Sub-objects of rank one are given by a generator per index.  All solver
outputs are known modulo u^L for a working precision L reported on the line,
which can be smaller than the module precision when a unit part has to be
divided out.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import (
    HypothesisViolated,
    InputError,
    IterationCap,
    NonIntegralExponent,
    PrecisionExhausted,
)
from .field import Field
from .newton import newton_slopes
from .rational import AtLeast
from .series import TruncSeries

Vec = tuple[TruncSeries, TruncSeries]


@dataclass(frozen=True)
class BKModule:
    field: Field
    g: int
    e: int
    prec: int
    mats: tuple  # mats[i-1] = (a_i, b_i, c_i, d_i)

    def __post_init__(self):
        if self.g < 1 or self.e < 1:
            raise InputError("g and e must be positive")
        if self.field.g % self.g:
            raise InputError(f"residue field F_{self.field.p}^{self.field.g} does not contain F_{self.field.p}^{self.g}")
        if len(self.mats) != self.g:
            raise InputError(f"expected {self.g} blocks, got {len(self.mats)}")
        if self.prec < self.e * (self.p + 2):
            raise InputError(f"precision {self.prec} below the required e(p+2) = {self.e * (self.p + 2)}")
        mats = []
        for blk in self.mats:
            if len(blk) != 4:
                raise InputError("each block needs four series a, b, c, d")
            row = []
            for s in blk:
                if s.field != self.field:
                    raise InputError("block series over a different field")
                if s.prec < self.prec:
                    raise InputError("block series known to less than the module precision")
                row.append(s.truncate(self.prec))
            a, b, c, d = row
            F = self.field
            det0 = F.sub(F.mul(a[0], d[0]), F.mul(b[0], c[0]))
            if det0 == 0:
                raise InputError("block with the u^e factors removed is not invertible mod u")
            mats.append(tuple(row))
        object.__setattr__(self, "mats", tuple(mats))

    @property
    def p(self) -> int:
        return self.field.p

    def block(self, i: int) -> tuple:
        return self.mats[(i - 1) % self.g]

    def labels(self) -> range:
        return range(1, self.g + 1)

    def prev(self, i: int) -> int:
        return (i - 2) % self.g + 1

    def next(self, i: int) -> int:
        return i % self.g + 1

    # -- JSON --
    def to_json(self) -> dict:
        return {
            "p": self.p,
            "g": self.g,
            "e": self.e,
            "prec": self.prec,
            "field_modulus": list(self.field.modulus),
            "mats": [[s.to_json() for s in blk] for blk in self.mats],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BKModule":
        try:
            p, g, e, prec = int(obj["p"]), int(obj["g"]), int(obj["e"]), int(obj["prec"])
            mod = obj.get("field_modulus")
            fld = Field(p, len(mod) - 1, mod) if mod else Field(p, g)
            mats = tuple(tuple(TruncSeries.from_json(fld, s) for s in blk) for blk in obj["mats"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed module: {exc}") from exc
        return cls(fld, g, e, prec, mats)


@dataclass(frozen=True)
class BKLine:
    """Rank-one sub-object: generators per label and Frobenius transitions."""

    parent: BKModule
    gens: tuple  # gens[i-1] = (x, y) coordinates in (delta_i, eps_i)
    transition: tuple  # transition[i-1] = A_i with phi(eta_{i-1}) = A_i eta_i
    prec: int
    iterations: int = 0

    def degrees(self) -> list[Fraction]:
        return [Fraction(A.val_int(), self.parent.e) for A in self.transition]

    def quotient_transitions(self) -> list[TruncSeries]:
        return quotient_transitions(self.parent, self.gens, self.prec)

    def quotient_degrees(self) -> list[Fraction]:
        return [Fraction(B.val_int(), self.parent.e) for B in self.quotient_transitions()]

    def to_json(self) -> dict:
        return {
            "prec": self.prec,
            "gens": [[x.to_json(), y.to_json()] for x, y in self.gens],
            "transition": [A.to_json() for A in self.transition],
            "line_degrees": [_fmt(x) for x in self.degrees()],
            "quotient_degrees": [_fmt(x) for x in self.quotient_degrees()],
        }


def _fmt(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _int_exp(x: Fraction, what: str) -> int:
    x = Fraction(x)
    if x.denominator != 1:
        raise NonIntegralExponent(f"{what} = {x} is not an integer")
    if x < 0:
        raise HypothesisViolated(f"{what} = {x} is negative")
    return int(x)


def _is_const(s: TruncSeries, value: int, n: int) -> bool:
    return s.coeffs[0] == value and not any(s.coeffs[1:n])


# ---------------------------------------------------------------- degrees

def smith_valuations(a: TruncSeries, b: TruncSeries, c: TruncSeries, d: TruncSeries) -> tuple[int, int]:
    """Valuations of the elementary divisors of [[a, b], [c, d]] over k[[u]]."""
    vals = [s.val() for s in (a, b, c, d)]
    det = a * d - b * c
    vdet = det.val()
    if isinstance(vdet, AtLeast):
        raise PrecisionExhausted(f"determinant vanishes modulo u^{vdet.bound}")
    known = [v for v in vals if not isinstance(v, AtLeast)]
    v1 = min(known)
    if any(isinstance(v, AtLeast) and v.bound < v1 for v in vals):
        raise PrecisionExhausted("smallest entry valuation not determined")
    return v1, vdet - v1


def block_matrix(M: BKModule, i: int) -> tuple:
    """The block of label i with the u^e factors applied to the bottom row."""
    a, b, c, d = M.block(i)
    return a, b, c.shift(M.e), d.shift(M.e)


def bk_degrees(M: BKModule) -> list[Fraction]:
    """deg_i = (v(d_1) + v(d_2)) / e from the Smith form of each block."""
    out = []
    for i in M.labels():
        v1, v2 = smith_valuations(*block_matrix(M, i))
        out.append(Fraction(v1 + v2, M.e))
    return out


def bk_hodge_heights(M: BKModule) -> list[Fraction]:
    """w_i = min(e, v(a_i)) / e."""
    out = []
    for i in M.labels():
        a = M.block(i)[0]
        v = a.val()
        if isinstance(v, AtLeast):
            if v.bound < M.e:
                raise PrecisionExhausted(f"v(a_{i}) undetermined below e")
            v = M.e
        out.append(Fraction(min(M.e, v), M.e))
    return out


# ------------------------------------------------------- stability oracle

def apply_block(M: BKModule, i: int, vec: Vec, n: int) -> Vec:
    """Coordinates of phi(vec) in (delta_i, eps_i), vec given at index i-1, mod u^n."""
    a, b, c, d = M.block(i)
    x, y = vec
    xp = x.phi().truncate(n)
    yp = y.phi().truncate(n)
    X = a.truncate(n).mul_trunc(xp, n) + b.truncate(n).mul_trunc(yp, n)
    Y = (c.truncate(n).mul_trunc(xp, n) + d.truncate(n).mul_trunc(yp, n)).shift(M.e).truncate(n)
    return X, Y


def line_residuals(M: BKModule, gens: Sequence[Vec], n: int) -> tuple[list[TruncSeries], list[TruncSeries]]:
    """Cross products X*y_i - Y*x_i (zero iff phi-stable) and transitions A_i, mod u^n."""
    residuals, transitions = [], []
    for i in M.labels():
        X, Y = apply_block(M, i, gens[M.prev(i) - 1], n)
        x, y = (s.truncate(n) for s in gens[i - 1])
        residuals.append(X.mul_trunc(y, n) - Y.mul_trunc(x, n))
        if x.coeffs[0]:
            transitions.append(X.mul_trunc(x.inv_unit(), n))
        elif y.coeffs[0]:
            transitions.append(Y.mul_trunc(y.inv_unit(), n))
        else:
            raise InputError(f"generator at index {i} is not unimodular")
    return residuals, transitions


def _complement(F: Field, vec: Vec, n: int) -> Vec:
    x, _ = vec
    if x.coeffs[0]:
        return TruncSeries.zero(F, n), TruncSeries.one(F, n)
    return TruncSeries.one(F, n), TruncSeries.zero(F, n)


def quotient_transitions(M: BKModule, gens: Sequence[Vec], n: int) -> list[TruncSeries]:
    """Frobenius on the quotient by the line, using the standard complement vector."""
    F = M.field
    out = []
    for i in M.labels():
        kprev = _complement(F, gens[M.prev(i) - 1], n)
        X, Y = apply_block(M, i, kprev, n)
        x, y = (s.truncate(n) for s in gens[i - 1])
        kx, ky = _complement(F, gens[i - 1], n)
        det = x.mul_trunc(ky, n) - y.mul_trunc(kx, n)
        t = (x.mul_trunc(Y, n) - y.mul_trunc(X, n)).mul_trunc(det.inv_unit(), n)
        out.append(t)
    return out


def make_line(M: BKModule, gens: Sequence[Vec], n: int, iterations: int = 0) -> BKLine:
    gens = tuple((x.truncate(n), y.truncate(n)) for x, y in gens)
    residuals, transitions = line_residuals(M, gens, n)
    for i, r in zip(M.labels(), residuals):
        if not r.is_zero():
            raise AssertionError(f"line is not phi-stable at index {i} (residual valuation {r.val()})")
    return BKLine(M, gens, tuple(transitions), n, iterations)


# ------------------------------------------------------ canonical subgroup

@dataclass(frozen=True)
class CanonicalResult:
    line: BKLine
    c_degrees: list
    hodge: list


def canonical_subgroup(M: BKModule) -> CanonicalResult:
    """Line whose quotient is the canonical subgroup, with measured degrees 1 - w_i."""
    F, p, e, N = M.field, M.p, M.e, M.prec
    w = bk_hodge_heights(M)
    for i in M.labels():
        if w[i - 1] + p * w[M.prev(i) - 1] >= p:
            raise HypothesisViolated(f"w_{i} + p*w_{M.prev(i)} = {w[i - 1] + p * w[M.prev(i) - 1]} >= p")
    ew = [_int_exp(e * x, "e*w") for x in w]
    L = N - max(ew)
    ahat_, b_, c_, d_, sh_num, sh_den = [], [], [], [], [], []
    for i in M.labels():
        a, b, c, d = M.block(i)
        ahat = a.div_u(ew[i - 1]).truncate(L)
        ahat_.append(ahat)
        b_.append(b.truncate(L))
        c_.append(c.truncate(L))
        d_.append(d.truncate(L))
        wp = w[M.prev(i) - 1]
        sh_num.append(_int_exp(e * p * (1 - wp), "ep(1-w_{i-1})"))
        sh_den.append(_int_exp(e * (p - p * wp - w[i - 1]), "e(p-pw_{i-1}-w_i)"))

    def g_map(i: int, z: TruncSeries) -> TruncSeries:
        k = i - 1
        zp = z.phi().truncate(L)
        num = c_[k] + d_[k].mul_trunc(zp, L).shift(sh_num[k]).truncate(L)
        den = ahat_[k] + b_[k].mul_trunc(zp, L).shift(sh_den[k]).truncate(L)
        return num.mul_trunc(den.inv_unit(), L)

    z = _iterate(M, g_map, L, cap=N)
    gens = [(TruncSeries.one(F, L), z[i - 1].shift(e - ew[i - 1]).truncate(L)) for i in M.labels()]
    line = make_line(M, gens, L, iterations=z.iterations)
    for i, A in zip(M.labels(), line.transition):
        if A.val() != ew[i - 1]:
            raise AssertionError(f"transition valuation {A.val()} != e*w_{i}")
    c_deg = line.quotient_degrees()
    return CanonicalResult(line, c_deg, w)


class _Iterates(list):
    iterations = 0


def _iterate(M: BKModule, fmap, L: int, cap: int, start: Optional[list] = None) -> _Iterates:
    """Sweep x_i <- F_i(x_{i-1}) around the cycle until a full sweep changes nothing."""
    F = M.field
    x = list(start) if start is not None else [TruncSeries.zero(F, L) for _ in M.labels()]
    for sweep in range(1, cap + 1):
        old = list(x)
        for i in M.labels():
            x[i - 1] = fmap(i, x[M.prev(i) - 1])
        if all(a.coeffs == b.coeffs for a, b in zip(old, x)):
            out = _Iterates(x)
            out.iterations = sweep
            return out
    raise IterationCap(f"fixed point not reached in {cap} sweeps")


# -------------------------------------------------------- special subgroup

def _parse_index_set(M: BKModule, I: Iterable[int]) -> frozenset:
    s = frozenset(int(i) for i in I)
    if not s <= set(M.labels()):
        raise InputError(f"index set {sorted(s)} not contained in 1..{M.g}")
    return s


def special_subgroup(M: BKModule, I: Iterable[int]) -> BKLine:
    """Line whose quotient H has deg_i(H) = 1 on I and 0 off I."""
    F, p, e, N = M.field, M.p, M.e, M.prec
    I = _parse_index_set(M, I)
    Ic = frozenset(M.labels()) - I
    def sig(S):
        return frozenset(M.next(i) for i in S)

    if not sig(Ic) <= I:
        raise HypothesisViolated("sigma(I^c) is not contained in I")
    w = bk_hodge_heights(M)
    kind = {}
    for i in M.labels():
        if i in sig(I) and i in I:
            kind[i] = "II"
            if w[i - 1] != 0:
                raise HypothesisViolated(f"w_{i} must be 0 on sigma(I) & I")
        elif i in sig(I):
            kind[i] = "IIc"
            if w[i - 1] != 1:
                raise HypothesisViolated(f"w_{i} must be 1 on sigma(I) & I^c")
        else:
            kind[i] = "Ic"
            if w[i - 1] <= 0:
                raise HypothesisViolated(f"w_{i} must be positive on sigma(I^c)")
    L = N - e if any(k == "IIc" for k in kind.values()) else N
    a_, b_, c_, d_ = {}, {}, {}, {}
    for i in M.labels():
        a, b, c, d = M.block(i)
        if kind[i] == "II":
            if not (_is_const(a, 1, N) and c.is_zero()):
                raise HypothesisViolated(f"block {i} is not normalised to [[1, b], [0, u^e d]]")
        else:
            if not (_is_const(b, 1, N) and d.is_zero()):
                raise HypothesisViolated(f"block {i} is not normalised to [[a, 1], [u^e c, 0]]")
        if kind[i] == "IIc":
            a = a.div_u(e)
        a_[i], b_[i], c_[i], d_[i] = (s.truncate(L) for s in (a, b, c, d))
    one = TruncSeries.one(F, L)

    def f_map(i: int, x: TruncSeries) -> TruncSeries:
        xp = x.phi().truncate(L)
        if kind[i] == "II":
            t = xp.shift(e * p).truncate(L)
            return d_[i].mul_trunc(t, L).mul_trunc((one + b_[i].mul_trunc(t, L)).inv_unit(), L)
        if kind[i] == "IIc":
            num = a_[i] + xp.shift(e * (p - 1)).truncate(L)
            return num.mul_trunc(c_[i].inv_unit(), L)
        return c_[i].mul_trunc(xp, L).mul_trunc((one + a_[i].mul_trunc(xp, L)).inv_unit(), L)

    x = _iterate(M, f_map, L, cap=N)
    gens = []
    for i in M.labels():
        if i in I:
            gens.append((one, x[i - 1].shift(e).truncate(L)))
        else:
            gens.append((x[i - 1], one))
    line = make_line(M, gens, L, iterations=x.iterations)
    for i, deg in zip(M.labels(), line.degrees()):
        if deg != (0 if i in I else 1):
            raise AssertionError(f"special line has degree {deg} at index {i}")
    return line


# ---------------------------------------------------- companion subgroup

@dataclass(frozen=True)
class CompanionResult:
    line: BKLine
    h_degrees: list
    w: Fraction


def companion_subgroup_g2(M: BKModule, i: int) -> CompanionResult:
    """For g = 2, w_i = 1 and p/(p+1) < w_{i+1} <= 1: the subgroup disjoint from the special one."""
    if M.g != 2:
        raise HypothesisViolated("companion subgroup needs g = 2")
    F, p, e, N = M.field, M.p, M.e, M.prec
    if i not in (1, 2):
        raise InputError("index must be 1 or 2")
    j = M.next(i)
    w = bk_hodge_heights(M)
    if w[i - 1] != 1:
        raise HypothesisViolated(f"w_{i} = {w[i - 1]} must equal 1")
    wj = w[j - 1]
    if not (Fraction(p, p + 1) < wj <= 1):
        raise HypothesisViolated(f"w_{j} = {wj} outside (p/(p+1), 1]")
    ai, bi, ci, di = M.block(i)
    aj, bj, cj, dj = M.block(j)
    if not (_is_const(bj, 1, N) and dj.is_zero()):
        raise HypothesisViolated(f"block {j} is not normalised to [[a, 1], [u^e c, 0]]")
    if not (ai.is_zero() and _is_const(bi, 1, N) and di.is_zero()):
        raise HypothesisViolated(f"block {i} is not normalised to [[0, 1], [u^e c, 0]]")
    if wj == 1:
        line = special_subgroup(M, {i})
    else:
        ew = _int_exp(e * wj, "e*w")
        s1 = _int_exp(e * (1 - p * (1 - wj)), "e(1-p(1-w))")
        s2 = _int_exp(e * (1 - wj), "e(1-w)")
        E = _int_exp(e * (p * p - 1) * (wj - Fraction(p, p + 1)), "e(p^2-1)(w-p/(p+1))")
        if p * s1 - ew != E or s1 + p * s2 != e:
            raise AssertionError("exponent bookkeeping is inconsistent")
        L = N - ew
        ahat = aj.div_u(ew).truncate(L)
        ci_, cj_ = ci.truncate(L), cj.truncate(L)
        K = ci_.mul_trunc(cj_.phi().truncate(L).inv_unit(), L)
        ahat_p = ahat.phi().truncate(L)

        def y1_map(_: int, y: TruncSeries) -> TruncSeries:
            yy = y.phi().phi().truncate(L)
            return K.mul_trunc(ahat_p + yy.shift(p * E).truncate(L), L)

        # a single-index cycle: reuse the sweep driver on a one-element list
        y1 = _fixed_point(F, y1_map, L, cap=N)
        y2 = cj_.mul_trunc((ahat + y1.phi().truncate(L).shift(E).truncate(L)).inv_unit(), L)
        one = TruncSeries.one(F, L)
        gens = [None, None]
        gens[i - 1] = (one, y1.shift(s1).truncate(L))
        gens[j - 1] = (one, y2.shift(s2).truncate(L))
        line = make_line(M, gens, L)
    h = line.quotient_degrees()
    expected = {i: 1 - p * (1 - wj), j: 1 - wj}
    for k in (1, 2):
        if h[k - 1] != expected[k]:
            raise AssertionError(f"companion degree {h[k - 1]} != {expected[k]} at index {k}")
    return CompanionResult(line, h, wj)


def _fixed_point(F: Field, fmap, L: int, cap: int) -> TruncSeries:
    y = TruncSeries.zero(F, L)
    for _ in range(cap):
        nxt = fmap(0, y)
        if nxt.coeffs == y.coeffs:
            return y
        y = nxt
    raise IterationCap(f"fixed point not reached in {cap} iterations")


# ------------------------------------------------------ degree spectrum

@dataclass(frozen=True)
class DegreeSpectrum:
    alpha: Optional[Fraction]  # None when the coefficient vanishes to working precision
    alpha_bound: Fraction  # alpha is known to be >= this when alpha is None
    case: int
    roots: list  # (root valuation, multiplicity) from the Newton polygon
    entries: list  # (degree vector, multiplicity)

    def to_json(self) -> dict:
        return {
            "alpha": None if self.alpha is None else _fmt(self.alpha),
            "alpha_lower_bound": _fmt(self.alpha_bound),
            "case": self.case,
            "root_valuations": [[_fmt(v), m] for v, m in self.roots],
            "spectrum": [{"degrees": [_fmt(x) for x in vec], "multiplicity": m} for vec, m in self.entries],
        }


def spectrum_threshold(p: int) -> Fraction:
    return Fraction(p * (p - 1), p * p + 1)


def spectrum_from_alpha(p: int, e: int, alpha: Optional[Fraction], i: int = 1, g: int = 2) -> DegreeSpectrum:
    """Subgroup degrees from the Newton polygon of z^(p^2+1) + C z = D with v(C) = e*alpha."""
    vD = e * (1 - Fraction(1, p))
    pts = [(0, vD), (1, None if alpha is None else e * Fraction(alpha)), (p * p + 1, Fraction(0))]
    roots = newton_slopes(pts)
    j = i % g + 1
    counts: dict = {}
    for v, m in roots:
        deg = min(Fraction(1), Fraction(1, p) + v / e)
        vec = [Fraction(0)] * g
        vec[j - 1] = deg
        counts[tuple(vec)] = counts.get(tuple(vec), 0) + m
    entries = sorted(counts.items(), key=lambda kv: kv[0][j - 1], reverse=True)
    case = 1 if alpha is not None and alpha < spectrum_threshold(p) else 2
    return DegreeSpectrum(alpha, Fraction(0) if alpha is None else alpha, case, roots, [(v, m) for v, m in entries])


def subgroup_degree_spectrum_g2(M: BKModule, i: int) -> DegreeSpectrum:
    """All p^2 + 1 cyclic subgroup degree vectors when w_i = 1 and w_{i+1} = 0."""
    if M.g != 2:
        raise HypothesisViolated("degree spectrum needs g = 2")
    F, p, e, N = M.field, M.p, M.e, M.prec
    if i not in (1, 2):
        raise InputError("index must be 1 or 2")
    j = M.next(i)
    w = bk_hodge_heights(M)
    if w[i - 1] != 1 or w[j - 1] != 0:
        raise HypothesisViolated(f"need w_{i} = 1 and w_{j} = 0, got {w[i - 1]}, {w[j - 1]}")
    if e % p:
        raise HypothesisViolated("p must divide e")
    ai, bi, ci, di = M.block(i)
    aj, bj, cj, dj = M.block(j)
    if not (_is_const(aj, 1, N) and cj.is_zero()):
        raise HypothesisViolated(f"block {j} is not normalised to [[1, b], [0, u^e d]]")
    if not (_is_const(bi, 1, N) and di.is_zero()):
        raise HypothesisViolated(f"block {i} is not normalised to [[u^e a', 1], [u^e c, 0]]")
    a_prime = ai.div_u(e)
    La = min(N, p * a_prime.prec)
    coeff = bj.truncate(La).mul_trunc(ci.phi().truncate(La), La) + a_prime.phi().truncate(La)
    v = coeff.val()
    if isinstance(v, AtLeast):
        bound = Fraction(v.bound, e)
        if bound < spectrum_threshold(p):
            raise PrecisionExhausted(f"alpha only known to be >= {bound}, below the case threshold")
        spectrum_obj = spectrum_from_alpha(p, e, None, i, 2)
        return DegreeSpectrum(None, bound, 2, spectrum_obj.roots, spectrum_obj.entries)
    return spectrum_from_alpha(p, e, Fraction(v, e), i, 2)


def spectrum_closed_form(p: int, alpha: Optional[Fraction]) -> list:
    """The case split stated directly in terms of alpha, as (degree at i+1, multiplicity)."""
    if alpha is not None and alpha < spectrum_threshold(p):
        return [(min(Fraction(1), 1 - alpha), 1), (Fraction(1, p) + alpha / (p * p), p * p)]
    return [(Fraction(p + 1, p * p + 1), p * p + 1)]


def ss_relation_holds(p: int, deg_i: Fraction, deg_next: Fraction) -> bool:
    """The relation deg_i + p * deg_{i+1} = 1 checked as an exact equality."""
    return deg_i + p * deg_next == 1


# ------------------------------------------------------- Raynaud check

@dataclass(frozen=True)
class RaynaudReport:
    lhs: list
    rhs: list
    holds: list
    hom_possible: bool
    iso_forced: bool

    def to_json(self) -> dict:
        return {
            "lhs": [_fmt(x) for x in self.lhs],
            "rhs": [_fmt(x) for x in self.rhs],
            "holds": self.holds,
            "hom_possible": self.hom_possible,
            "iso_forced": self.iso_forced,
        }


def weighted_degree(p: int, deg: Sequence[Fraction], i: int) -> Fraction:
    """sum_{j=0}^{g-1} p^j deg_{i-j} for label i."""
    g = len(deg)
    return sum((Fraction(p) ** j * Fraction(deg[(i - 1 - j) % g]) for j in range(g)), Fraction(0))


def raynaud_degree_check(p: int, degG: Sequence, degH: Sequence) -> RaynaudReport:
    if len(degG) != len(degH) or not degG:
        raise InputError("degree vectors must have the same positive length")
    for x in list(degG) + list(degH):
        if not (0 <= Fraction(x) <= 1):
            raise InputError(f"degree {x} outside [0, 1]")
    g = len(degG)
    lhs = [weighted_degree(p, degG, i) for i in range(1, g + 1)]
    rhs = [weighted_degree(p, degH, i) for i in range(1, g + 1)]
    holds = [l >= r for l, r in zip(lhs, rhs)]
    return RaynaudReport(lhs, rhs, holds, all(holds), all(l == r for l, r in zip(lhs, rhs)))


def two_cyclic_compatible(p: int, deg1: Sequence, deg2: Sequence) -> bool:
    """Whether two distinct cyclic subgroups with these degrees can coexist."""
    g = len(deg1)
    bound = Fraction(p ** g - 1, p - 1)
    tot = [Fraction(x) + Fraction(y) for x, y in zip(deg1, deg2)]
    return all(weighted_degree(p, tot, i) <= bound for i in range(1, g + 1))


# ------------------------------------------------------ module builders

def _rand_unit(F: Field, n: int, rng) -> TruncSeries:
    return TruncSeries.random(F, n, rng, 0)


def random_adapted_module(F: Field, g: int, e: int, prec: int, ew: Sequence[int], rng) -> BKModule:
    """Random module in adapted form with v(a_i) = ew[i-1] (values >= e give w_i = 1)."""
    if len(ew) != g:
        raise InputError(f"need {g} valuations of the a_i, got {len(ew)}")
    mats = []
    for k in range(g):
        a = TruncSeries.random(F, prec, rng, ew[k]) if ew[k] < prec else TruncSeries.zero(F, prec)
        if a.coeffs[0]:
            b = TruncSeries.random(F, prec, rng, rng.choice([0, 1]))
            c = TruncSeries.random(F, prec, rng, rng.choice([0, 1]))
            d = _rand_unit(F, prec, rng)
            det0 = F.sub(F.mul(a[0], d[0]), F.mul(b[0], c[0]))
            if det0 == 0:
                d = d + TruncSeries.one(F, prec)
                if F.sub(F.mul(a[0], d[0]), F.mul(b[0], c[0])) == 0:
                    d = d + TruncSeries.one(F, prec)
        else:
            b, c = _rand_unit(F, prec, rng), _rand_unit(F, prec, rng)
            d = TruncSeries.random(F, prec, rng, rng.choice([0, 1, 2]))
        mats.append((a, b, c, d))
    return BKModule(F, g, e, prec, tuple(mats))


def normalized_special_module(F: Field, g: int, e: int, prec: int, I: Iterable[int],
                              ew: dict, rng) -> BKModule:
    """Module already in the simplified shape used for special subgroups of type I.

    ``ew`` gives v(a_i) for labels in sigma(I^c) (must be positive).
    """
    I = frozenset(I)
    labels = range(1, g + 1)
    nxt = lambda i: i % g + 1  # noqa: E731
    sI = {nxt(i) for i in I}
    one, zero = TruncSeries.one(F, prec), TruncSeries.zero(F, prec)
    mats = []
    for i in labels:
        if i in sI and i in I:
            mats.append((one, TruncSeries.random(F, prec, rng, rng.choice([0, 1])), zero, _rand_unit(F, prec, rng)))
        elif i in sI:
            a = TruncSeries.random(F, prec, rng, e + rng.choice([0, 1, 3]))
            mats.append((a, one, _rand_unit(F, prec, rng), zero))
        else:
            a = TruncSeries.random(F, prec, rng, ew[i]) if ew[i] < prec else zero
            mats.append((a, one, _rand_unit(F, prec, rng), zero))
    return BKModule(F, g, e, prec, tuple(mats))


def companion_module(F: Field, e: int, prec: int, i: int, ew_next: int, rng) -> BKModule:
    """g = 2 module with w_i = 1 and v(a_{i+1}) = ew_next, in the companion shape."""
    j = i % 2 + 1
    one, zero = TruncSeries.one(F, prec), TruncSeries.zero(F, prec)
    mats = [None, None]
    mats[i - 1] = (zero, one, _rand_unit(F, prec, rng), zero)
    a = TruncSeries.random(F, prec, rng, ew_next) if ew_next < prec else zero
    mats[j - 1] = (a, one, _rand_unit(F, prec, rng), zero)
    return BKModule(F, 2, e, prec, tuple(mats))


def spectrum_module(F: Field, e: int, prec: int, i: int, b_next: TruncSeries,
                    a_prime: TruncSeries, c: TruncSeries, d_next: TruncSeries) -> BKModule:
    """g = 2 module with w_i = 1, w_{i+1} = 0 in the normalised spectrum shape."""
    j = i % 2 + 1
    one, zero = TruncSeries.one(F, prec), TruncSeries.zero(F, prec)
    mats = [None, None]
    mats[j - 1] = (one, b_next.truncate(prec), zero, d_next.truncate(prec))
    mats[i - 1] = (a_prime.shift(e).truncate(prec), one, c.truncate(prec), zero)
    return BKModule(F, 2, e, prec, tuple(mats))
