"""Dieudonne modules of p-torsion with real multiplication over a finite field.

Each index i (label 1..g) carries a plane D_i with basis (e_i, d_i).  Frobenius
goes D_{i-1} -> D_i and is sigma-linear; Verschiebung goes D_i -> D_{i-1} and is
sigma^{-1}-linear.  A semilinear map is stored as a matrix with a twist
exponent: ``apply(v) = mat . frob^twist(v)``.

A cyclic subgroup H is recorded through the lines L_i = D(A[p]/H)_i, so that
D(H)_i = D_i / L_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import HypothesisViolated, InputError, TooLarge, UnsupportedKind
from .field import Field

Mat2 = tuple  # ((a, b), (c, d)) of raw field elements, acting on column vectors
MAX_FIELD = 10_000
KINDS = ("superspecial", "supersingular-a1", "ordinary")


@dataclass(frozen=True)
class SemilinearMap:
    mat: Mat2
    twist: int

    def apply(self, F: Field, v: tuple) -> tuple:
        x, y = (F.frob(c, self.twist) for c in v)
        (a, b), (c, d) = self.mat
        return (F.add(F.mul(a, x), F.mul(b, y)), F.add(F.mul(c, x), F.mul(d, y)))


@dataclass(frozen=True)
class DieudonneModule:
    field: Field
    g: int
    F: tuple  # F[i-1]: D_{i-1} -> D_i
    V: tuple  # V[i-1]: D_i -> D_{i-1}
    kind: str = "custom"

    def __post_init__(self):
        if len(self.F) != self.g or len(self.V) != self.g:
            raise InputError("need one F and one V map per index")
        if not self.killed_by_p():
            raise InputError("F and V do not compose to zero")

    def nxt(self, i: int) -> int:
        return i % self.g + 1

    def prv(self, i: int) -> int:
        return (i - 2) % self.g + 1

    def Fmap(self, i: int) -> SemilinearMap:
        """Frobenius with target index i."""
        return self.F[(i - 1) % self.g]

    def Vmap(self, i: int) -> SemilinearMap:
        """Verschiebung with source index i."""
        return self.V[(i - 1) % self.g]

    def killed_by_p(self) -> bool:
        k = self.field
        for i in range(1, self.g + 1):
            for v in _basis():
                # F after V, both around index i: D_i -> D_{i-1} -> D_i
                if not _is_zero(self.Fmap(i).apply(k, self.Vmap(i).apply(k, v))):
                    return False
                # V after F: D_{i-1} -> D_i -> D_{i-1}
                if not _is_zero(self.Vmap(i).apply(k, self.Fmap(i).apply(k, v))):
                    return False
        return True

    # special lines at index i
    def ker_F(self, i: int) -> Optional[tuple]:
        """Kernel of F with source index i."""
        return _kernel(self.field, self.Fmap(self.nxt(i)))

    def im_F(self, i: int) -> Optional[tuple]:
        """Image of F inside D_i."""
        return _image(self.field, self.Fmap(i))

    def ker_V(self, i: int) -> Optional[tuple]:
        return _kernel(self.field, self.Vmap(i))

    def im_V(self, i: int) -> Optional[tuple]:
        """Image of V inside D_i (coming from D_{i+1})."""
        return _image(self.field, self.Vmap(self.nxt(i)))

    def to_json(self) -> dict:
        k = self.field
        enc = lambda m: [[k.to_coeffs(x) for x in row] for row in m.mat]  # noqa: E731
        return {
            "kind": self.kind,
            "p": k.p,
            "g": self.g,
            "field_modulus": list(k.modulus),
            "F": [enc(m) for m in self.F],
            "V": [enc(m) for m in self.V],
        }


def _basis() -> list:
    return [(1, 0), (0, 1)]


def _is_zero(v: tuple) -> bool:
    return v[0] == 0 and v[1] == 0


def normalize(F: Field, v: tuple) -> Optional[tuple]:
    """Projective normalisation: first nonzero coordinate equal to one."""
    x, y = v
    if x:
        return (1, F.div(y, x))
    if y:
        return (0, 1)
    return None


def _rank(F: Field, m: Mat2) -> int:
    (a, b), (c, d) = m
    if not (a or b or c or d):
        return 0
    det = F.sub(F.mul(a, d), F.mul(b, c))
    return 2 if det else 1


def _kernel(F: Field, f: SemilinearMap) -> Optional[tuple]:
    """Kernel line of a rank-one semilinear map; None if the rank is not one."""
    if _rank(F, f.mat) != 1:
        return None
    (a, b), (c, d) = f.mat
    v = (F.neg(b), a) if (a or b) else (F.neg(d), c)
    v = tuple(F.frob(x, -f.twist) for x in v)
    return normalize(F, v)


def _image(F: Field, f: SemilinearMap) -> Optional[tuple]:
    if _rank(F, f.mat) != 1:
        return None
    (a, b), (c, d) = f.mat
    col = (a, c) if (a or c) else (b, d)
    return normalize(F, col)


def _contained(F: Field, v: tuple, line: tuple) -> bool:
    """Whether the vector v lies in the line spanned by ``line``."""
    if _is_zero(v):
        return True
    return normalize(F, v) == line


def projective_line(F: Field) -> list:
    """All points of P^1(k), ordered by coefficient code."""
    pts = [(0, 1)] + [(1, y) for y in F.elements()]
    return sorted(pts, key=lambda t: (F.to_coeffs(t[0])[::-1], F.to_coeffs(t[1])[::-1]))


# ------------------------------------------------------------- models

def dmod_model(kind: str, field: Field, g: int, t2: Optional[int] = None) -> DieudonneModule:
    """Explicit Dieudonne modules: superspecial, supersingular with a-number one, ordinary."""
    if kind not in KINDS:
        raise UnsupportedKind(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")
    if g < 1:
        raise InputError("g must be positive")
    if field.g % g:
        raise InputError(f"field F_{field.p}^{field.g} does not contain F_{field.p}^{g}")
    k = field
    if kind == "superspecial":
        Fm = SemilinearMap(((0, 1), (0, 0)), 1)
        Vm = SemilinearMap(((0, 1), (0, 0)), -1)
        return DieudonneModule(k, g, (Fm,) * g, (Vm,) * g, kind)
    if kind == "ordinary":
        Fm = SemilinearMap(((1, 0), (0, 0)), 1)
        Vm = SemilinearMap(((0, 0), (0, 1)), -1)
        return DieudonneModule(k, g, (Fm,) * g, (Vm,) * g, kind)
    if g != 2:
        raise UnsupportedKind("the supersingular a-number one model is only available for g = 2")
    t = 1 if t2 is None else t2
    if t == 0:
        raise HypothesisViolated("the partial Hasse parameter t2 must be nonzero")
    t_root = k.frob(t, -1)
    # F into index 2 (from index 1) and into index 1 (from index 2)
    F2 = SemilinearMap(((0, 1), (0, t)), 1)
    F1 = SemilinearMap(((0, 1), (0, 0)), 1)
    # V out of index 1 (into index 2) and out of index 2 (into index 1)
    V1 = SemilinearMap(((0, 1), (0, 0)), -1)
    V2 = SemilinearMap(((k.neg(t_root), 1), (0, 0)), -1)
    return DieudonneModule(k, 2, (F1, F2), (V1, V2), kind)


# -------------------------------------------------------- enumeration

@dataclass(frozen=True)
class CyclicSubgroupWitness:
    lines: tuple  # normalised generator of L_i per label
    phi_set: frozenset
    eta_set: frozenset
    critical: frozenset
    omega: tuple  # dim omega_{H,i}
    omega_dual: tuple  # dim omega_{H^vee,i}
    group_type: str
    stratum: str

    def to_json(self, F: Field) -> dict:
        return {
            "lines": [[F.to_coeffs(x) for x in v] for v in self.lines],
            "phi": sorted(self.phi_set),
            "eta": sorted(self.eta_set),
            "critical": sorted(self.critical),
            "omega_H": list(self.omega),
            "omega_H_dual": list(self.omega_dual),
            "type": self.group_type,
            "stratum": self.stratum,
        }


def is_stable(D: DieudonneModule, lines: Sequence[tuple]) -> bool:
    k = D.field
    for i in range(1, D.g + 1):
        Li, Lprev = lines[i - 1], lines[D.prv(i) - 1]
        if not _contained(k, D.Fmap(i).apply(k, Lprev), Li):
            return False
        if not _contained(k, D.Vmap(i).apply(k, Li), Lprev):
            return False
    return True


def enumerate_cyclic_subgroups(D: DieudonneModule, limit: int = MAX_FIELD) -> list:
    """All k-rational tuples of lines stable under F and V, with their tags."""
    k = D.field
    if k.q > limit:
        raise TooLarge(f"|k| = {k.q} exceeds the enumeration limit {limit}")
    P1 = projective_line(k)
    found: list = []

    def extend(partial: list) -> None:
        i = len(partial) + 1
        if i > D.g:
            if is_stable(D, partial):
                found.append(tuple(partial))
            return
        image = D.Fmap(i).apply(k, partial[-1])
        cands = [normalize(k, image)] if not _is_zero(image) else P1
        for L in cands:
            if _contained(k, D.Vmap(i).apply(k, L), partial[-1]):
                extend(partial + [L])

    for L1 in P1:
        extend([L1])
    order = {pt: n for n, pt in enumerate(P1)}
    found.sort(key=lambda t: [order[x] for x in t])
    return [_witness(D, t) for t in found]


def _quotient_map_zero(D: DieudonneModule, f: SemilinearMap, target_line: tuple) -> bool:
    """The map induced on D/L is zero iff f sends the whole source into the target line."""
    k = D.field
    return all(_contained(k, f.apply(k, v), target_line) for v in _basis())


def omega_dims(D: DieudonneModule, lines: Sequence[tuple]) -> tuple[tuple, tuple]:
    """dim omega_{H,i} = dim ker(F on D(H)_i); dim omega_{H^vee,i} = dim ker(V on D(H)_i)."""
    om, om_dual = [], []
    for i in range(1, D.g + 1):
        om.append(1 if _quotient_map_zero(D, D.Fmap(D.nxt(i)), lines[D.nxt(i) - 1]) else 0)
        om_dual.append(1 if _quotient_map_zero(D, D.Vmap(i), lines[D.prv(i) - 1]) else 0)
    return tuple(om), tuple(om_dual)


TYPE_BY_DIMS = {
    (2, 2): "alpha_p x alpha_p",
    (1, 1): "alpha",
    (1, 2): "alpha_{p^2}",
    (2, 1): "alpha_{p^2}^vee",
    (2, 0): "multiplicative",
    (0, 2): "etale",
}


def group_type(omega: Sequence[int], omega_dual: Sequence[int]) -> str:
    key = (sum(omega), sum(omega_dual))
    return TYPE_BY_DIMS.get(key, f"other{key}")


def stratum_label(g: int, phi: frozenset, eta: frozenset) -> str:
    full = frozenset(range(1, g + 1))

    def name(s: frozenset) -> str:
        if s == full:
            return "B"
        if not s:
            return "empty"
        return ",".join(str(x) for x in sorted(s)) if len(s) == 1 else "{" + ",".join(str(x) for x in sorted(s)) + "}"

    return f"W_{{{name(phi)},{name(eta)}}}"


def is_admissible(g: int, phi: frozenset, eta: frozenset) -> bool:
    """eta contains sigma^{-1}(complement of phi)."""
    comp = frozenset(range(1, g + 1)) - phi
    return frozenset((i - 2) % g + 1 for i in comp) <= eta


def classify_pair(D: DieudonneModule, lines: Sequence[tuple]) -> tuple[frozenset, frozenset, str]:
    """(phi, eta, stratum label) for a stable tuple of lines."""
    if not is_stable(D, lines):
        raise InputError("lines are not stable under F and V")
    phi = frozenset(i for i in range(1, D.g + 1) if D.ker_V(i) == lines[i - 1])
    eta = frozenset(i for i in range(1, D.g + 1) if D.ker_F(i) == lines[i - 1])
    return phi, eta, stratum_label(D.g, phi, eta)


def _witness(D: DieudonneModule, lines: tuple) -> CyclicSubgroupWitness:
    phi, eta, label = classify_pair(D, lines)
    crit = frozenset(i for i in eta if D.nxt(i) in phi)
    om, om_d = omega_dims(D, lines)
    return CyclicSubgroupWitness(lines, phi, eta, crit, om, om_d, group_type(om, om_d), label)


def stratum_nu(label_phi: frozenset, label_eta: frozenset, g: int = 2) -> Optional[tuple]:
    """Closure region of a degree-two stratum in the valuation square.

    Returns per-index allowed sets as ("eq", value) or ("open", lo, hi).
    """
    if g != 2:
        return None
    full = frozenset({1, 2})
    if label_phi == full and not label_eta:
        return (("eq", 1), ("eq", 1))
    if not label_phi and label_eta == full:
        return (("eq", 0), ("eq", 0))
    if label_phi == full and label_eta == full:
        return (("open", 0, 1), ("open", 0, 1))
    if label_phi == full:
        (i,) = tuple(label_eta)
        return _place(i, ("open", 0, 1), ("eq", 1))
    if label_eta == full:
        (i,) = tuple(label_phi)
        return _place(i, ("eq", 0), ("open", 0, 1))
    (i,) = tuple(label_phi)
    return _place(i, ("eq", 0), ("eq", 1))


def _place(i: int, at_i, at_next) -> tuple:
    out = [None, None]
    out[i - 1] = at_i
    out[i % 2] = at_next
    return tuple(out)


def nu_in_closure(region: tuple, nu: Sequence) -> bool:
    for cond, x in zip(region, nu):
        if cond[0] == "eq" and x != cond[1]:
            return False
        if cond[0] == "open" and not (cond[1] <= x <= cond[2]):
            return False
    return True
