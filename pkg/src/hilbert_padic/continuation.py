"""Exponent bookkeeping for the analytic continuation of U_p-eigenforms.

Every norm estimate is a power of p times the sup norm on the canonical locus,
so only base-p exponents are tracked, and the reference norm has exponent 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import InputError, NormalizationViolated
from .rational import fmt_rat, to_rat

N_MAX = 64


@dataclass(frozen=True)
class PrimeSlope:
    f: int
    k: tuple
    v: Fraction
    eps: Optional[Fraction] = None


@dataclass(frozen=True)
class SlopeData:
    p: int
    primes: tuple

    def __post_init__(self):
        if self.p < 2:
            raise InputError("p must be a prime")
        for pr in self.primes:
            if pr.f not in (1, 2):
                raise InputError("residue degrees must be 1 or 2")
            if len(pr.k) != pr.f:
                raise InputError("need one weight per embedding of the prime")
            if pr.f == 2:
                if pr.eps is None:
                    raise InputError("degree-two primes need an explicit eps")
                if not Fraction(self.p, self.p + 1) < pr.eps < 1:
                    raise InputError("eps must satisfy p/(p+1) < eps < 1")

    @classmethod
    def from_json(cls, obj: dict) -> "SlopeData":
        if not isinstance(obj, dict) or "p" not in obj or "primes" not in obj:
            raise InputError("slope data needs 'p' and 'primes'")
        unknown = set(obj) - {"p", "primes"}
        if unknown:
            raise InputError(f"unknown fields {sorted(unknown)}")
        prs = []
        for x in obj["primes"]:
            extra = set(x) - {"f", "k", "v", "eps"}
            if extra:
                raise InputError(f"unknown prime fields {sorted(extra)}")
            eps = x.get("eps")
            prs.append(PrimeSlope(int(x["f"]), tuple(int(k) for k in x["k"]), to_rat(x["v"]),
                                  None if eps is None else to_rat(eps)))
        return cls(int(obj["p"]), tuple(prs))

    def to_json(self) -> dict:
        out = []
        for pr in self.primes:
            d = {"f": pr.f, "k": list(pr.k), "v": fmt_rat(pr.v)}
            if pr.eps is not None:
                d["eps"] = fmt_rat(pr.eps)
            out.append(d)
        return {"p": self.p, "primes": out}


# ------------------------------------------------------------ epsilons

def epsilon_sequence(kind: str, p: int, n: int) -> Fraction:
    """Radii of the annuli used in the continuation steps."""
    if n < 0:
        raise InputError("n must be non-negative")
    if kind == "deg2-step2":
        return Fraction(p + 1, p ** n * (p * p + 1))
    if kind == "deg1":
        return Fraction(p, p ** n * (p + 1))
    raise InputError(f"unknown epsilon kind {kind!r}")


def epsilon_partial_sum(kind: str, p: int, n: int) -> Fraction:
    """Closed form of eps_1 + ... + eps_n."""
    tail = 1 - Fraction(1, p ** n)
    if kind == "deg2-step2":
        return Fraction(p + 1, (p * p + 1) * (p - 1)) * tail
    if kind == "deg1":
        return Fraction(p, (p + 1) * (p - 1)) * tail
    raise InputError(f"unknown epsilon kind {kind!r}")


def epsilon_limit(kind: str, p: int) -> Fraction:
    if kind == "deg2-step2":
        return Fraction(p + 1, (p * p + 1) * (p - 1))
    if kind == "deg1":
        return Fraction(p, p * p - 1)
    raise InputError(f"unknown epsilon kind {kind!r}")


# ------------------------------------------------------------ verdicts

@dataclass(frozen=True)
class Verdict:
    ok: bool
    first_failure: Optional[str] = None

    def to_json(self) -> dict:
        return {"ok": self.ok, "first_failure": self.first_failure}


def classicality_check(S: SlopeData) -> Verdict:
    """Slope condition v < k_beta - f at every embedding of every prime (strict)."""
    for j, pr in enumerate(S.primes):
        for b, k in enumerate(pr.k, start=1):
            if not pr.v < k - pr.f:
                return Verdict(False, f"prime {j}, embedding {b}: v={fmt_rat(pr.v)} is not < k-f={k - pr.f}")
    return Verdict(True)


@dataclass(frozen=True)
class Linear:
    """An exponent coef*n + const, where const may be a supremum of a bounded part."""

    coef: Fraction
    const: Fraction

    def at(self, n: int) -> Fraction:
        return self.coef * n + self.const


@dataclass
class BoundEntry:
    name: str
    relation: str  # the required relation, or "record" for entries without one
    values: tuple = ()  # per n = 1..N (or a single value)
    symbolic: Optional[Linear] = None
    passed: Optional[bool] = None
    detail: str = ""

    @property
    def required(self) -> bool:
        return self.relation != "record"

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "relation": self.relation,
            "passed": self.passed,
            "values": [fmt_rat(x) for x in self.values],
        }
        if self.symbolic is not None:
            out["symbolic"] = {"coef": fmt_rat(self.symbolic.coef), "const": fmt_rat(self.symbolic.const)}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class BoundLedger:
    entries: list = field(default_factory=list)

    def all_pass(self) -> bool:
        return all(e.passed for e in self.entries if e.required)

    def failures(self) -> list:
        return [e.name for e in self.entries if e.required and not e.passed]

    def get(self, name: str) -> BoundEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_json(self) -> dict:
        return {"all_pass": self.all_pass(), "failures": self.failures(), "entries": [e.to_json() for e in self.entries]}

    def table(self) -> str:
        rows = []
        for e in self.entries:
            status = "-" if not e.required else ("pass" if e.passed else "FAIL")
            head = ", ".join(fmt_rat(x) for x in e.values[:3])
            if len(e.values) > 3:
                head += ", ..."
            rows.append(f"{status:5} {e.name:42} {e.relation:28} [{head}]")
        return "\n".join(rows)


def _decreasing(vals: Sequence[Fraction]) -> bool:
    return all(b < a for a, b in zip(vals, vals[1:]))


def _ledger_deg2(p: int, pr: PrimeSlope, tag: str, n_max: int) -> list:
    k1, k2 = pr.k
    if k1 < k2:
        raise NormalizationViolated(f"{tag}: need k1 >= k2, got {pr.k}")
    v, eps = pr.v, pr.eps
    ns = range(1, n_max + 1)
    drop = k2 - v - 2  # decay per step along the s-branch and the canonical branch
    out = []

    g = Linear(-drop, (1 - eps) * (p - 1) * k2)
    gv = tuple(g.at(n) for n in ns)
    out.append(BoundEntry(f"{tag} g_n exponent", "n-coefficient < 0", gv, g,
                          g.coef < 0 and _decreasing(gv)))

    h = Linear(-drop, Fraction((p - 1) * k2, p + 1))
    hv = tuple(h.at(n) for n in ns)
    h_max = 2 + v - Fraction(2 * k2, p + 1)
    out.append(BoundEntry(f"{tag} h_n exponent", "n-coefficient < 0, max at n=1", hv, h,
                          h.coef < 0 and _decreasing(hv) and hv[0] == h_max))

    s = tuple(-(n - 1) * drop for n in range(2, n_max + 1))
    out.append(BoundEntry(f"{tag} s-branch iterate (n>=2)", "< 0", s, Linear(-drop, drop),
                          all(x < 0 for x in s)))

    step1 = 2 + v - Fraction(k2, p)
    out.append(BoundEntry(f"{tag} step-1 exponent", "record", (step1,),
                          detail=f"bound max(0, {fmt_rat(step1)})"))
    out.append(BoundEntry(f"{tag} step-1 h-bound under step-1 bound", "<=", (h_max, max(Fraction(0), step1)),
                          passed=h_max <= max(Fraction(0), step1)))

    e1 = epsilon_sequence("deg2-step2", p, 1)
    branch_a = 2 + v - e1 * k2
    branch_b = 4 + 2 * v - e1 * k2 - Fraction(k2, p)
    out.append(BoundEntry(f"{tag} step-2 exponent", "record", (branch_a, branch_b, max(branch_a, branch_b)),
                          detail="branches 2+v-e1*k2 and 4+2v-e1*k2-k2/p, then their max"))

    base = 2 + v - k2
    out.append(BoundEntry(f"{tag} step-3 base", "< 0", (base,), passed=base < 0))

    contr = tuple(2 + v - k2 * (2 - p * epsilon_sequence("deg2-step2", p, n)) for n in ns)
    out.append(BoundEntry(f"{tag} step-3 contraction", "< 0", contr, passed=all(x < 0 for x in contr)))

    decay = tuple(n * (2 + v) - k2 * (2 * n - p * epsilon_partial_sum("deg2-step2", p, n)) for n in ns)
    sym = Linear(2 + v - 2 * k2, k2 * p * epsilon_limit("deg2-step2", p))
    out.append(BoundEntry(f"{tag} step-3 decay", "< 0, n-coefficient < 0", decay, sym,
                          sym.coef < 0 and all(x < 0 for x in decay)))

    cap = tuple(-k2 * n + k2 * p * epsilon_partial_sum("deg2-step2", p, n) for n in ns)
    out.append(BoundEntry(f"{tag} step-3 decay cap", "decay < cap < 0", cap,
                          passed=all(d < c < 0 for d, c in zip(decay, cap))))

    out.append(BoundEntry(f"{tag} final bound", "record", (2 + v,)))
    return out


def _ledger_deg1(p: int, pr: PrimeSlope, tag: str, n_max: int) -> list:
    (k,) = pr.k
    v = pr.v
    ns = range(1, n_max + 1)
    coef = 1 + v - k
    out = []
    decay = tuple(n * coef + k * epsilon_partial_sum("deg1", p, n) for n in ns)
    sym = Linear(coef, k * epsilon_limit("deg1", p))
    out.append(BoundEntry(f"{tag} degree-1 decay", "n-coefficient < 0", decay, sym,
                          coef < 0 and all(d < sym.at(n) for n, d in zip(ns, decay))))
    terms = tuple(m * coef + k * (1 + Fraction(1, p * p - 1)) for m in ns)
    out.append(BoundEntry(f"{tag} degree-1 g_n terms", "n-coefficient < 0", terms,
                          Linear(coef, k * (1 + Fraction(1, p * p - 1))), coef < 0 and _decreasing(terms)))
    return out


def bound_ledger(S: SlopeData, n_max: int = N_MAX) -> BoundLedger:
    led = BoundLedger()
    for j, pr in enumerate(S.primes):
        tag = f"prime{j}"
        if pr.f == 2:
            led.entries.extend(_ledger_deg2(S.p, pr, tag, n_max))
        else:
            led.entries.extend(_ledger_deg1(S.p, pr, tag, n_max))
    return led


def _as_linear(x: Union[Linear, Sequence, Fraction, int, str]) -> Linear:
    if isinstance(x, Linear):
        return x
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise InputError("a linear exponent is (coefficient of n, constant)")
        return Linear(to_rat(x[0]), to_rat(x[1]))
    return Linear(Fraction(0), to_rat(x))


def glue_precondition_check(diff_exponents, f_bounds, fprime_bounds) -> Verdict:
    """Gluing needs the differences to tend to zero and both families to stay bounded."""
    d = _as_linear(diff_exponents)
    fb, fpb = _as_linear(f_bounds), _as_linear(fprime_bounds)
    if not d.coef < 0:
        return Verdict(False, "difference exponent does not tend to -infinity")
    if fb.coef > 0:
        return Verdict(False, "the F_n bounds are not uniform in n")
    if fpb.coef > 0:
        return Verdict(False, "the F'_n bounds are not uniform in n")
    return Verdict(True)


def step3_glue_inputs(led: BoundLedger, tag: str = "prime0") -> tuple:
    """Difference exponent and the two bound families of the last continuation step."""
    decay = led.get(f"{tag} step-3 decay").symbolic
    final = led.get(f"{tag} final bound").values[0]
    return decay, Linear(Fraction(0), final), Linear(Fraction(0), final)
