"""The U_p correspondence as a dynamical system on valuation data.

A point carries, for each prime above p, the degrees nu_beta of its subgroup
(one value for a degree-one prime, a pair for a degree-two prime).  Images are
multisets of points with integer multiplicities.  All arithmetic is exact.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InputError, MissingData, TooSingular, UndeterminedDynamics
from .rational import fmt_rat, to_rat

FLAGS = ("supergeneral", "superspecial", "unresolved")
TAGS = ("canonical-branch", "anti-branch", "s-branch", "circ-branch", "generic")
CANONICAL, ANTI, TOO_SINGULAR = "canonical", "anti-canonical", "too-singular"


@dataclass(frozen=True)
class PrimeVal:
    """Valuation data at one prime: residue degree, nu, optional Hodge heights and flags."""

    f: int
    nu: tuple
    w: Optional[tuple] = None
    flag: Optional[str] = None
    coords: Optional[tuple] = None  # valuations of the superspecial parameters (T_i, T_{i+1})

    def __post_init__(self):
        if self.f not in (1, 2):
            raise InputError(f"residue degree must be 1 or 2, got {self.f}")
        nu = tuple(to_rat(x) for x in self.nu)
        if len(nu) != self.f:
            raise InputError(f"need {self.f} nu values, got {len(nu)}")
        if any(x < 0 or x > 1 for x in nu):
            raise InputError("nu values must lie in [0, 1]")
        object.__setattr__(self, "nu", nu)
        if self.w is not None:
            w = tuple(None if x is None else to_rat(x) for x in self.w)
            if len(w) != self.f or any(x is not None and not 0 <= x <= 1 for x in w):
                raise InputError("Hodge heights must be f values in [0, 1]")
            object.__setattr__(self, "w", w)
        if self.flag is not None and self.flag not in FLAGS:
            raise InputError(f"unknown flag {self.flag!r}")
        if self.coords is not None:
            c = tuple(to_rat(x) for x in self.coords)
            if len(c) != 2 or c[0] < 1 or c[1] < 0:
                raise InputError("coordinates must be (m, n) with m >= 1 and n >= 0")
            if self.flag != "superspecial":
                raise InputError("deformation coordinates only make sense on superspecial points")
            object.__setattr__(self, "coords", c)
        if self.flag in ("supergeneral", "superspecial") and self.f == 2:
            if _wii_index(nu) is None:
                raise InputError("sg/ss flags need nu = (0, 1) up to rotation")
            if self.flag == "superspecial":
                i = _wii_index(nu)
                w = self.ss_height()
                if w is not None and not 0 < w <= 1:
                    raise InputError("superspecial points need 0 < w_{i+1} <= 1")
                if self.w is not None and self.w[i - 1] not in (None, 1):
                    raise InputError("superspecial points need w_i = 1")

    def ss_height(self) -> Optional[Fraction]:
        """w_{i+1} on a superspecial point, from the explicit heights or the coordinates."""
        i = _wii_index(self.nu)
        explicit = None if self.w is None else self.w[i % 2]
        if self.coords is not None:
            derived = min(Fraction(1), self.coords[1])
            if explicit is not None and explicit != derived:
                raise InputError("Hodge height disagrees with the deformation coordinates")
            return derived
        return explicit

    def to_json(self) -> dict:
        out: dict = {"f": self.f, "nu": [fmt_rat(x) for x in self.nu]}
        if self.w is not None:
            out["w"] = [None if x is None else fmt_rat(x) for x in self.w]
        if self.flag is not None:
            out["flag"] = self.flag
        if self.coords is not None:
            out["coords"] = [fmt_rat(x) for x in self.coords]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "PrimeVal":
        unknown = set(obj) - {"f", "nu", "w", "flag", "coords"}
        if unknown:
            raise InputError(f"unknown fields {sorted(unknown)}")
        try:
            return cls(int(obj["f"]), tuple(obj["nu"]), obj.get("w"), obj.get("flag"), obj.get("coords"))
        except KeyError as exc:
            raise InputError(f"missing field {exc}") from None


@dataclass(frozen=True)
class ValPoint:
    primes: tuple

    @classmethod
    def single(cls, nu: Sequence, **kw) -> "ValPoint":
        return cls((PrimeVal(len(nu), tuple(nu), **kw),))

    def at(self, prime: int) -> PrimeVal:
        if not 0 <= prime < len(self.primes):
            raise InputError(f"no prime with index {prime}")
        return self.primes[prime]

    def with_prime(self, prime: int, pv: PrimeVal) -> "ValPoint":
        ps = list(self.primes)
        ps[prime] = pv
        return ValPoint(tuple(ps))

    def sort_key(self) -> tuple:
        return tuple(tuple(pv.nu) for pv in self.primes)

    def to_json(self) -> dict:
        return {"primes": [pv.to_json() for pv in self.primes]}

    @classmethod
    def from_json(cls, obj: dict) -> "ValPoint":
        if not isinstance(obj, dict):
            raise InputError("a point must be a JSON object")
        if "primes" in obj:
            if set(obj) != {"primes"}:
                raise InputError("unknown top-level fields next to 'primes'")
            return cls(tuple(PrimeVal.from_json(x) for x in obj["primes"]))
        return cls((PrimeVal.from_json(obj),))


def _wii_index(nu: Sequence[Fraction]) -> Optional[int]:
    """The label i with nu_i = 0 and nu_{i+1} = 1, if any."""
    if len(nu) != 2:
        return None
    if nu == (0, 1):
        return 1
    if nu == (1, 0):
        return 2
    return None


def _place(i: int, a, b) -> tuple:
    """Pair with value a at label i and b at label i+1 (labels mod 2)."""
    return (a, b) if i == 1 else (b, a)


# ---------------------------------------------------------------- regions

def canonical_sums(p: int, nu: Sequence[Fraction]) -> tuple:
    """nu_beta + p * nu_{sigma^{-1} beta} for each label."""
    f = len(nu)
    return tuple(nu[b] + p * nu[(b - 1) % f] for b in range(f))


def stratum_of(nu: Sequence[Fraction]) -> str:
    if len(nu) == 1:
        x = nu[0]
        return "ordinary-canonical" if x == 1 else "ordinary-anticanonical" if x == 0 else "supersingular"
    a, b = nu
    if (a, b) == (1, 1):
        return "W_{B,empty}"
    if (a, b) == (0, 0):
        return "W_{empty,B}"
    i = _wii_index(tuple(nu))
    if i is not None:
        return f"W_{{{i},{i}}}"
    for i, (x, y) in ((1, (a, b)), (2, (b, a))):
        if 0 < x < 1 and y == 1:
            return f"W_{{B,{i}}}"
        if x == 0 and 0 < y < 1:
            return f"W_{{{i},B}}"
    return "W_{B,B}"


def region_classify(Q: ValPoint, p: int, prime: int = 0) -> tuple[str, str]:
    pv = Q.at(prime)
    if pv.nu is None:
        raise MissingData("no valuation data at this prime")
    sums = canonical_sums(p, pv.nu)
    if all(s > 1 for s in sums):
        region = CANONICAL
    elif all(s < 1 for s in sums):
        region = ANTI
    else:
        region = TOO_SINGULAR
    return region, stratum_of(pv.nu)


def derived_hodge(Q: ValPoint, p: int, prime: int = 0) -> tuple:
    """Partial Hodge heights forced by nu on the canonical and anti-canonical loci."""
    region, _ = region_classify(Q, p, prime)
    nu = Q.at(prime).nu
    f = len(nu)
    if region == CANONICAL:
        return tuple(min(Fraction(1), 1 - x) for x in nu)
    if region == ANTI:
        return tuple(min(Fraction(1), p * nu[(b - 1) % f]) for b in range(f))
    raise TooSingular("Hodge heights are not determined by nu on the too-singular locus")


# ---------------------------------------------------------------- images

@dataclass(frozen=True)
class ImageEntry:
    point: ValPoint
    mult: int
    tag: str


@dataclass(frozen=True)
class ImageMultiset:
    entries: tuple

    def size(self) -> int:
        return sum(e.mult for e in self.entries)

    def to_json(self) -> list:
        return [{"point": e.point.to_json(), "mult": e.mult, "tag": e.tag} for e in self.entries]


def _entry(Q: ValPoint, prime: int, nu: tuple, mult: int, tag: str, **kw) -> ImageEntry:
    pv = PrimeVal(len(nu), nu, **kw)
    return ImageEntry(Q.with_prime(prime, pv), mult, tag)


def up_image(Q: ValPoint, p: int, prime: int = 0) -> ImageMultiset:
    """U_p(Q) at the given prime, with branch tags and multiplicities."""
    region, stratum = region_classify(Q, p, prime)
    pv = Q.at(prime)
    nu = pv.nu
    F = Fraction
    out: list[ImageEntry] = []
    if pv.f == 1:
        x = nu[0]
        if region == CANONICAL:
            out.append(_entry(Q, prime, (F(p - 1, p) + x / p,), p, "generic"))
        elif region == ANTI:
            out.append(_entry(Q, prime, (p * x,), 1, "anti-branch"))
            out.append(_entry(Q, prime, (1 - x,), p - 1, "canonical-branch"))
        else:
            out.append(_entry(Q, prime, (F(p, p + 1),), p, "generic"))
        return ImageMultiset(tuple(out))

    q = p * p
    if region == CANONICAL:
        img = tuple(F(p - 1, p) + nu[(b + 1) % 2] / p for b in range(2))
        out.append(_entry(Q, prime, img, q, "generic"))
    elif region == ANTI:
        out.append(_entry(Q, prime, (p * nu[1], p * nu[0]), 1, "anti-branch"))
        out.append(_entry(Q, prime, (1 - nu[0], 1 - nu[1]), q - 1, "canonical-branch"))
    elif stratum.startswith("W_{B,B}"):
        raise UndeterminedDynamics("no pointwise image law on the too-singular interior")
    elif _wii_index(nu) is not None:
        out.extend(_image_wii(Q, p, prime))
    else:
        i = 1 if nu[0] == 0 else 2
        y = nu[i % 2]
        if y < F(1, p):
            raise UndeterminedDynamics("point should have been classified as anti-canonical")
        if y >= F(p + 1, q + 1):
            img = _place(i, F(1), 1 - F(1, p) - (1 - y) / q)
            out.append(_entry(Q, prime, img, q, "generic"))
        else:
            special = _place(i, F(1), q * (y - F(1, p)))
            flag = "unresolved" if y == F(1, p) else None
            out.append(_entry(Q, prime, special, 1, "anti-branch", flag=flag))
            out.append(_entry(Q, prime, _place(i, F(1), 1 - y), q - 1, "canonical-branch"))
    return ImageMultiset(tuple(out))


def _image_wii(Q: ValPoint, p: int, prime: int) -> list:
    pv = Q.at(prime)
    i = _wii_index(pv.nu)
    q = p * p
    F = Fraction
    if pv.flag == "supergeneral":
        return [_entry(Q, prime, _place(i, F(1), 1 - F(1, p)), q, "generic")]
    if pv.flag != "superspecial":
        raise UndeterminedDynamics("a point of W_{i,i} needs the supergeneral/superspecial flag")
    w = pv.ss_height()
    if w is None:
        raise MissingData("superspecial dynamics need w_{i+1}")
    if w <= F(p, p + 1):
        img = _place(i, 1 - w / p, 1 - F(1, p) + w / q)
        return [_entry(Q, prime, img, q, "generic")]
    s_nu = _place(i, p * (1 - w), w)
    kw: dict = {}
    if w == 1:
        if pv.coords is not None:
            m, n = pv.coords
            nxt = (m + 1, n - 1)
            if n - 1 > 0:
                kw = {"flag": "superspecial", "coords": nxt}
            else:
                kw = {"flag": "supergeneral"}
        else:
            kw = {"flag": "unresolved"}
    circ = _place(i, F(p, p + 1), F(p, p + 1))
    return [
        _entry(Q, prime, s_nu, 1, "s-branch", **kw),
        _entry(Q, prime, circ, q - 1, "circ-branch"),
    ]


# ---------------------------------------------------------------- orbits

def weighted_sums(p: int, nu: Sequence[Fraction]) -> tuple:
    """sum_{j<f} p^j nu_{sigma^{-j} beta} for each label beta."""
    f = len(nu)
    return tuple(sum(p ** j * nu[(b - j) % f] for j in range(f)) for b in range(f))


@dataclass
class OrbitNode:
    point: ValPoint
    mult: int
    tag: str
    depth: int
    status: str = "ok"  # ok | undetermined | terminal
    note: str = ""
    children: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "point": self.point.to_json(),
            "mult": self.mult,
            "tag": self.tag,
            "status": self.status,
            "children": [c.to_json() for c in self.children],
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Orbit:
    root: OrbitNode
    p: int
    prime: int

    def paths(self) -> list:
        out: list = []

        def walk(node: OrbitNode, acc: list) -> None:
            acc = acc + [node]
            if not node.children:
                out.append(acc)
            for c in node.children:
                walk(c, acc)

        walk(self.root, [])
        return out

    def path_report(self) -> list:
        """Weighted sums along each root-to-leaf path and whether they never decrease."""
        rep = []
        for path in self.paths():
            sums = [weighted_sums(self.p, n.point.at(self.prime).nu) for n in path]
            mono = all(all(b >= a for a, b in zip(s, t)) for s, t in zip(sums, sums[1:]))
            rep.append({"nodes": path, "sums": sums, "monotone": mono})
        return rep

    def all_monotone(self) -> bool:
        return all(r["monotone"] for r in self.path_report())

    def to_json(self) -> dict:
        return {
            "tree": self.root.to_json(),
            "paths": [
                {
                    "nu": [[fmt_rat(x) for x in n.point.at(self.prime).nu] for n in r["nodes"]],
                    "tags": [n.tag for n in r["nodes"]],
                    "sums": [[fmt_rat(x) for x in s] for s in r["sums"]],
                    "monotone": r["monotone"],
                }
                for r in self.path_report()
            ],
        }


def _expand(node: OrbitNode, p: int, prime: int) -> list:
    try:
        img = up_image(node.point, p, prime)
    except UndeterminedDynamics as exc:
        node.status, node.note = "undetermined", str(exc)
        return []
    except MissingData as exc:
        node.status, node.note = "terminal", str(exc)
        return []
    kids = [OrbitNode(e.point, node.mult * e.mult, e.tag, node.depth + 1) for e in img.entries]
    kids.sort(key=lambda n: (TAGS.index(n.tag), n.point.sort_key()))
    return kids


def orbit(Q: ValPoint, p: int, depth: int, prime: int = 0) -> Orbit:
    """Breadth-first orbit tree; equal images at one step are merged with multiplicity."""
    if depth < 0:
        raise InputError("depth must be non-negative")
    root = OrbitNode(Q, 1, "generic", 0)
    layer = [root]
    for _ in range(depth):
        nxt = []
        for node in layer:
            node.children = _expand(node, p, prime)
            nxt.extend(node.children)
        layer = nxt
    return Orbit(root, p, prime)


def random_path(Q: ValPoint, p: int, depth: int, rng: random.Random, prime: int = 0) -> list:
    """One orbit path, choosing each step with probability proportional to multiplicity."""
    path = [Q]
    cur = Q
    for _ in range(depth):
        try:
            img = up_image(cur, p, prime)
        except (UndeterminedDynamics, MissingData):
            break
        r = rng.randrange(img.size())
        for e in img.entries:
            if r < e.mult:
                cur = e.point
                break
            r -= e.mult
        path.append(cur)
    return path


def image_counts(img: ImageMultiset) -> Counter:
    c: Counter = Counter()
    for e in img.entries:
        c[e.point.sort_key()] += e.mult
    return c


# ---------------------------------------------------- superspecial tower

def in_tower(coords: Sequence, n: int) -> bool:
    """Membership of a superspecial disc point in V_{i,n}: second coordinate at least n."""
    return to_rat(coords[1]) >= n


def in_tower_eps(coords: Sequence, n: int, eps) -> bool:
    """Membership in the strict neighbourhood V_{i,n}(eps)."""
    return to_rat(coords[1]) >= n - 1 + to_rat(eps)


def s_branch_walk(Q: ValPoint, p: int, steps: int, prime: int = 0) -> list:
    """Follow the distinguished s-branch image while it exists; returns the visited points."""
    out = [Q]
    cur = Q
    for _ in range(steps):
        try:
            img = up_image(cur, p, prime)
        except (UndeterminedDynamics, MissingData):
            break
        s = [e for e in img.entries if e.tag == "s-branch"]
        if not s:
            break
        cur = s[0].point
        out.append(cur)
    return out


def steps_in_wii(Q: ValPoint, p: int, steps: int, prime: int = 0) -> int:
    """Number of consecutive s-branch images that land back in W_{i,i}."""
    walk = s_branch_walk(Q, p, steps, prime)
    k = 0
    for pt in walk[1:]:
        if _wii_index(pt.at(prime).nu) is None:
            break
        k += 1
    return k


# ------------------------------------------------------------- sampling

def sample_point(region: str, p: int, f: int, rng: random.Random, denom: int = 997) -> ValPoint:
    """Random point of the requested region with rational coordinates."""
    for _ in range(10_000):
        nu = tuple(Fraction(rng.randint(0, denom), denom) for _ in range(f))
        Q = ValPoint.single(nu)
        if region_classify(Q, p)[0] == region:
            return Q
    raise InputError(f"could not sample region {region}")


def vcan_radius_holds(p: int, nu: Sequence[Fraction], r: Fraction) -> bool:
    """Whether nu lies in V_can(r): every canonical sum is at least p + 1 - r."""
    return all(s >= p + 1 - r for s in canonical_sums(p, nu))


def restrict(Q: ValPoint, prime: int, **changes) -> ValPoint:
    return Q.with_prime(prime, replace(Q.at(prime), **changes))
