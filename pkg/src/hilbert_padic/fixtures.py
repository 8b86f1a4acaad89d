"""JSON fixture files: schema validation, dispatch and regression comparison.

A fixture is ``{"version": 1, "kind": ..., "name": ..., "payload": {"op": ..., ...},
"expected": {...}}``.  Running it evaluates the payload and compares every key of
``expected`` with the computed output (keys not listed are not compared).
"""

from __future__ import annotations

import json
import os
import random
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Optional

import jsonschema

from . import bk, continuation, dieudonne, hecke, windows
from .errors import InputError
from .field import Field
from .newton import newton_slopes
from .rational import fmt_rat, to_rat
from .svg import crossing_point, render_square

FIXTURE_ENV = "HILBERT_PADIC_FIXTURES"
VERSION = 1

OPS = {
    "bk": ("canonical", "hodge", "special", "companion", "newton", "spectrum_alpha", "two_cyclic"),
    "dieudonne": ("model", "enumerate"),
    "valpoint": ("region", "step", "hodge", "tower", "square"),
    "slope": ("classicality", "ledger", "glue", "epsilon"),
    "window": ("universal", "specialize", "sublattice", "nilpotence"),
}

_RAT = {"type": ["string", "integer"]}
_INT = {"type": "integer"}
_INTS = {"type": "array", "items": _INT}
_RATS = {"type": "array", "items": _RAT}

_PARAMS = {
    "bk": {
        "p": _INT, "g": _INT, "e": _INT, "prec": _INT, "ew": _INTS, "seed": _INT, "I": _INTS, "i": _INT,
        "ew_next": _INT, "alpha": {"type": ["string", "integer", "null"]},
        "points": {"type": "array", "items": {"type": "array", "prefixItems": [_INT, {"type": ["string", "integer", "null"]}], "minItems": 2, "maxItems": 2}},
        "deg1": _RATS, "deg2": _RATS,
    },
    "dieudonne": {"kind": {"type": "string"}, "p": _INT, "g": _INT, "field_degree": _INT, "t2": _INTS},
    "valpoint": {"p": _INT, "point": {"type": "object"}, "steps": _INT, "points": {"type": "array"}},
    "slope": {
        "data": {"type": "object"}, "entry": {"type": "string"}, "n": _INT, "kind": {"type": "string"},
        "p": _INT, "diff": {}, "f_bounds": {}, "fprime_bounds": {},
    },
    "window": {"p": _INT, "g": _INT, "M": _INT, "D": _INT, "m": _INT, "n": _INT, "sign": {"enum": ["+", "-"]},
               "t": _INTS, "steps": _INT},
}


def schema_for(kind: str) -> dict:
    payload = {
        "type": "object",
        "properties": {"op": {"enum": list(OPS[kind])}, **_PARAMS[kind]},
        "required": ["op"],
        "additionalProperties": False,
    }
    return {
        "type": "object",
        "properties": {
            "version": {"const": VERSION},
            "kind": {"const": kind},
            "name": {"type": "string"},
            "note": {"type": "string"},
            "payload": payload,
            "expected": {"type": "object"},
        },
        "required": ["version", "kind", "name", "payload"],
        "additionalProperties": False,
    }


def validate(fx: Any) -> None:
    if not isinstance(fx, dict) or fx.get("kind") not in OPS:
        raise InputError(f"fixture kind must be one of {sorted(OPS)}")
    try:
        jsonschema.validate(fx, schema_for(fx["kind"]))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(x) for x in exc.absolute_path) or "<root>"
        raise InputError(f"fixture {fx.get('name', '?')!r} invalid at {where}: {exc.message}") from None


# ------------------------------------------------------------ evaluation

def _rats(xs) -> list:
    return [fmt_rat(Fraction(x)) for x in xs]


def _field(p: int, g: int) -> Field:
    return Field(p, g)


def _prec(p: int, e: int, prec: Optional[int]) -> int:
    return prec if prec is not None else e * (p + 4)


def eval_bk(pl: dict) -> dict:
    op = pl["op"]
    if op == "newton":
        pts = [(int(i), None if v is None else to_rat(v)) for i, v in pl["points"]]
        return {"roots": [[fmt_rat(v), m] for v, m in newton_slopes(pts)]}
    if op == "spectrum_alpha":
        a = pl.get("alpha")
        spectrum_obj = bk.spectrum_from_alpha(pl["p"], pl["e"], None if a is None else to_rat(a))
        out = spectrum_obj.to_json()
        out["closed_form"] = [[fmt_rat(d), m] for d, m in bk.spectrum_closed_form(pl["p"], spectrum_obj.alpha)]
        return out
    if op == "two_cyclic":
        return {"compatible": bk.two_cyclic_compatible(pl["p"], [to_rat(x) for x in pl["deg1"]],
                                                       [to_rat(x) for x in pl["deg2"]])}
    p, e = pl["p"], pl["e"]
    g = pl.get("g", 2)
    F = _field(p, g)
    rng = random.Random(pl.get("seed", 0))
    prec = _prec(p, e, pl.get("prec"))
    if op in ("canonical", "hodge"):
        M = bk.random_adapted_module(F, g, e, prec, pl["ew"], rng)
        w = bk.bk_hodge_heights(M)
        if op == "hodge":
            return {"w": _rats(w), "degrees": _rats(bk.bk_degrees(M))}
        res = bk.canonical_subgroup(M)
        c = res.c_degrees
        sums = [c[i - 1] + p * c[M.prev(i) - 1] for i in M.labels()]
        return {"w": _rats(w), "line_degrees": _rats(res.line.degrees()), "c_degrees": _rats(c),
                "canonical_sums": _rats(sums), "sums_exceed_one": all(s > 1 for s in sums)}
    if op == "special":
        I = frozenset(pl["I"])
        sigma_Ic = {i % g + 1 for i in range(1, g + 1) if i not in I}
        ew = dict(zip(sorted(sigma_Ic), pl["ew"]))
        M = bk.normalized_special_module(F, g, e, prec, I, ew, rng)
        line = bk.special_subgroup(M, I)
        return {"w": _rats(bk.bk_hodge_heights(M)), "H_degrees": _rats(line.quotient_degrees())}
    if op == "companion":
        M = bk.companion_module(F, e, prec, pl["i"], pl["ew_next"], rng)
        res = bk.companion_subgroup_g2(M, pl["i"])
        return {"w": _rats(bk.bk_hodge_heights(M)), "H_degrees": _rats(res.h_degrees)}
    raise InputError(f"unknown bk op {op!r}")


def _witness_summary(F: Field, ws: list) -> dict:
    types: dict = {}
    strata: dict = {}
    for w in ws:
        types[w.group_type] = types.get(w.group_type, 0) + 1
        strata[w.stratum] = strata.get(w.stratum, 0) + 1
    return {
        "count": len(ws),
        "types": dict(sorted(types.items())),
        "strata": dict(sorted(strata.items())),
        "omega_H": sorted({tuple(w.omega) for w in ws}),
        "omega_H_values_by_index": [sorted({w.omega[i] for w in ws}) for i in range(len(ws[0].omega))] if ws else [],
        "witnesses": [w.to_json(F) for w in ws],
    }


def eval_dieudonne(pl: dict) -> dict:
    p, g = pl["p"], pl.get("g", 2)
    F = _field(p, pl.get("field_degree", g))
    t2 = F.from_coeffs(pl["t2"]) if "t2" in pl else None
    D = dieudonne.dmod_model(pl["kind"], F, g, t2)
    if pl["op"] == "model":
        return D.to_json()
    out = _witness_summary(F, dieudonne.enumerate_cyclic_subgroups(D))
    out["omega_H"] = [list(x) for x in out["omega_H"]]
    return out


def image_summary(img: hecke.ImageMultiset, prime: int = 0) -> list:
    return [[[fmt_rat(x) for x in e.point.at(prime).nu], e.mult, e.tag] for e in img.entries]


def eval_valpoint(pl: dict) -> dict:
    p = pl["p"]
    if pl["op"] == "square":
        pts = [tuple(to_rat(x) for x in q) for q in pl.get("points", [])]
        svg = render_square(p, pts)
        return {"crossing": _rats(crossing_point(p)), "segments": svg.count('class="segment"'),
                "points": svg.count('class="point"')}
    Q = hecke.ValPoint.from_json(pl["point"])
    op = pl["op"]
    if op == "region":
        region, stratum = hecke.region_classify(Q, p)
        return {"region": region, "stratum": stratum}
    if op == "step":
        img = hecke.up_image(Q, p)
        return {"size": img.size(), "images": image_summary(img)}
    if op == "hodge":
        return {"w": _rats(hecke.derived_hodge(Q, p))}
    if op == "tower":
        walk = hecke.s_branch_walk(Q, p, pl.get("steps", 10))
        last = walk[-1].at(0)
        return {
            "steps_in_wii": hecke.steps_in_wii(Q, p, pl.get("steps", 10)),
            "walk": [[fmt_rat(x) for x in pt.at(0).nu] for pt in walk],
            "last_flag": last.flag,
            "last_coords": None if last.coords is None else _rats(last.coords),
        }
    raise InputError(f"unknown valpoint op {op!r}")


def eval_slope(pl: dict) -> dict:
    op = pl["op"]
    if op == "epsilon":
        return {"value": fmt_rat(continuation.epsilon_sequence(pl["kind"], pl["p"], pl["n"]))}
    if op == "glue":
        v = continuation.glue_precondition_check(pl["diff"], pl["f_bounds"], pl["fprime_bounds"])
        return v.to_json()
    S = continuation.SlopeData.from_json(pl["data"])
    if op == "classicality":
        return continuation.classicality_check(S).to_json()
    led = continuation.bound_ledger(S)
    out = {"all_pass": led.all_pass(), "failures": led.failures()}
    if "entry" in pl:
        ent = led.get(pl["entry"])
        n = pl.get("n", 1)
        out["value"] = fmt_rat(ent.values[min(n, len(ent.values)) - 1])
        out["passed"] = ent.passed
        out["required"] = ent.required
    return out


def eval_window(pl: dict) -> dict:
    p, g, M, D = pl["p"], pl["g"], pl.get("M", 3), pl.get("D", 27)
    U = windows.universal_window(p, g, M, D, guard=M + 3)
    R = U.ring
    op = pl["op"]
    if op == "universal":
        psi = windows.psi_compute(U)
        zero = windows.set_variables(U, [0] * g)
        return {
            "phi": [windows.mat_show(R, A) for A in U.phi],
            "psi": [windows.mat_show(R, A) for A in psi],
            "phi_at_zero": [windows.mat_show(R, A) for A in zero.phi],
            "psi_at_zero": [windows.mat_show(R, A) for A in windows.psi_compute(zero)],
            "hasse": [R.show(h) for h in windows.partial_hasse_invariants(U)],
            "psi_identity": windows.psi_identity_holds(U),
        }
    Wmn = windows.specialize(U, pl["m"], pl["n"])
    if op == "specialize":
        out = {"phi": [windows.mat_show(Wmn.ring, A) for A in Wmn.phi]}
        if "t" in pl:
            ev = windows.set_variables(Wmn, pl["t"])
            out["phi_at_t"] = [windows.mat_show(ev.ring, A) for A in ev.phi]
        return out
    if op == "sublattice":
        S = windows.build_sublattice(Wmn, pl["sign"])
        return {
            "phi": [windows.mat_show(S.window.ring, A) for A in S.window.phi],
            "matches_display": S.matches_display(),
            "omega": windows.omega_cokernel(Wmn, S).to_json(),
            "splits_at_zero": windows.splits_at_zero(S),
        }
    if op == "nilpotence":
        steps = pl.get("steps", 2 * g)
        out = {"universal": windows.nilpotence_check(U, steps).to_json()}
        for sign in "+-":
            S = windows.build_sublattice(Wmn, sign)
            out[f"L{sign}"] = windows.nilpotence_check(S.window, steps).to_json()
            out[f"L{sign}_nilpotent"] = out[f"L{sign}"]["in_p"]
        out["multiplicative"] = windows.nilpotence_check(windows.multiplicative_window(p, g, M, D), steps).to_json()
        out["multiplicative_nilpotent"] = out["multiplicative"]["in_p"]
        out["universal_in_p_and_vars"] = out["universal"]["in_p_and_vars"]
        return out
    raise InputError(f"unknown window op {op!r}")


EVALUATORS = {"bk": eval_bk, "dieudonne": eval_dieudonne, "valpoint": eval_valpoint, "slope": eval_slope,
              "window": eval_window}


def _norm(x: Any) -> Any:
    """Canonical JSON form so tuples and lists compare equal."""
    return json.loads(json.dumps(x))


def run_fixture(fx: dict) -> tuple[dict, list]:
    """Evaluate a fixture; returns (output, list of mismatching expected keys)."""
    validate(fx)
    out = _norm(EVALUATORS[fx["kind"]](fx["payload"]))
    bad = [k for k, v in fx.get("expected", {}).items() if out.get(k) != _norm(v)]
    return out, bad


def fixture_dir() -> Path:
    env = os.environ.get(FIXTURE_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("hilbert_padic") / "data" / "fixtures"))


def load_fixtures(directory: Optional[Path] = None) -> list:
    d = Path(directory) if directory is not None else fixture_dir()
    out = []
    for path in sorted(d.glob("*.json")):
        obj = json.loads(path.read_text())
        items = obj if isinstance(obj, list) else [obj]
        for fx in items:
            validate(fx)
            out.append(fx)
    return out
