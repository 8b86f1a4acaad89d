"""Command-line front end: ``hilbert-padic <area> <command> ...``.

Exit status is 0 on success, 1 when a requested check fails and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import bk, continuation, dieudonne, fixtures, hecke, windows
from .errors import HilbertPadicError, InputError
from .field import Field
from .newton import newton_slopes
from .rational import fmt_rat, to_rat
from .svg import STYLES, render_square

OK, CHECK_FAILED, BAD_INPUT = 0, 1, 2


def _emit(args, data, text: Optional[str] = None) -> None:
    if args.json or text is None:
        print(json.dumps(data, indent=2, sort_keys=False))
    else:
        print(text)


def _ints(s: str) -> list:
    return [int(x) for x in s.split(",") if x.strip()]


def _rats(s: str) -> list:
    return [to_rat(x) for x in s.split(",") if x.strip()]


def _load_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


# ---------------------------------------------------------------- bk

def _module(args) -> bk.BKModule:
    return bk.BKModule.from_json(_load_json(args.module))


def cmd_bk_generate(args) -> int:
    F = Field(args.p, args.g)
    rng = random.Random(args.seed)
    prec = args.prec or args.e * (args.p + 4)
    ew = _ints(args.ew) if args.ew else []
    if args.kind == "adapted":
        M = bk.random_adapted_module(F, args.g, args.e, prec, ew, rng)
    elif args.kind == "special":
        I = frozenset(_ints(args.type))
        sig = sorted({i % args.g + 1 for i in range(1, args.g + 1) if i not in I})
        M = bk.normalized_special_module(F, args.g, args.e, prec, I, dict(zip(sig, ew)), rng)
    else:
        if len(ew) != 1:
            raise InputError("--kind companion needs one value in --ew")
        M = bk.companion_module(F, args.e, prec, args.i, ew[0], rng)
    print(json.dumps(M.to_json()))
    return OK


def cmd_bk_degrees(args) -> int:
    M = _module(args)
    d = [fmt_rat(x) for x in bk.bk_degrees(M)]
    _emit(args, {"degrees": d}, "deg_i: " + "  ".join(d))
    return OK


def cmd_bk_hodge(args) -> int:
    M = _module(args)
    w = [fmt_rat(x) for x in bk.bk_hodge_heights(M)]
    _emit(args, {"w": w}, "w_i: " + "  ".join(w))
    return OK


def cmd_bk_canonical(args) -> int:
    M = _module(args)
    res = bk.canonical_subgroup(M)
    c = res.c_degrees
    sums = [c[i - 1] + M.p * c[M.prev(i) - 1] for i in M.labels()]
    data = {"w": [fmt_rat(x) for x in res.hodge], "c_degrees": [fmt_rat(x) for x in c],
            "canonical_sums": [fmt_rat(x) for x in sums], "line": res.line.to_json()}
    _emit(args, data, f"w = {data['w']}\ndeg(C) = {data['c_degrees']}\ndeg_i + p deg_(i-1) = {data['canonical_sums']}")
    return OK


def cmd_bk_special(args) -> int:
    M = _module(args)
    line = bk.special_subgroup(M, _ints(args.type))
    data = line.to_json()
    _emit(args, data, f"deg(H) = {data['quotient_degrees']}")
    return OK


def cmd_bk_companion(args) -> int:
    res = bk.companion_subgroup_g2(_module(args), args.i)
    data = {"w": fmt_rat(res.w), "h_degrees": [fmt_rat(x) for x in res.h_degrees], "line": res.line.to_json()}
    _emit(args, data, f"deg(H) = {data['h_degrees']}")
    return OK


def cmd_bk_spectrum(args) -> int:
    if args.module:
        spectrum_obj = bk.subgroup_degree_spectrum_g2(_module(args), args.i)
    else:
        spectrum_obj = bk.spectrum_from_alpha(args.p, args.e, None if args.alpha == "none" else to_rat(args.alpha), args.i)
    data = spectrum_obj.to_json()
    rows = [f"{d['multiplicity']:4d} x ({', '.join(d['degrees'])})" for d in data["spectrum"]]
    _emit(args, data, f"alpha = {data['alpha']}  case {data['case']}\n" + "\n".join(rows))
    return OK


def cmd_bk_newton(args) -> int:
    pts = []
    for item in args.points.split(","):
        i, v = item.split(":")
        pts.append((int(i), None if v.strip() in ("inf", "none") else to_rat(v)))
    roots = newton_slopes(pts)
    data = {"roots": [[fmt_rat(v), m] for v, m in roots]}
    _emit(args, data, "\n".join(f"valuation {fmt_rat(v)}: {m} roots" for v, m in roots))
    return OK


def cmd_bk_raynaud(args) -> int:
    rep = bk.raynaud_degree_check(args.p, _rats(args.deg_g), _rats(args.deg_h))
    _emit(args, rep.to_json(), f"holds per index: {rep.holds}  hom possible: {rep.hom_possible}")
    return OK if rep.hom_possible else CHECK_FAILED


# ---------------------------------------------------------------- dieudonne

def cmd_dieudonne_enumerate(args) -> int:
    F = Field(args.p, args.field or args.g)
    t2 = F.from_coeffs(_ints(args.t2)) if args.t2 else None
    D = dieudonne.dmod_model(args.kind, F, args.g, t2)
    ws = dieudonne.enumerate_cyclic_subgroups(D)
    data = {"kind": args.kind, "p": args.p, "g": args.g, "count": len(ws), "witnesses": [w.to_json(F) for w in ws]}
    rows = [f"{len(ws)} cyclic subgroups"]
    for w in ws:
        rows.append(f"  {w.stratum:14} {w.group_type:18} omega_H={list(w.omega)} omega_Hdual={list(w.omega_dual)}")
    _emit(args, data, "\n".join(rows))
    return OK


# ---------------------------------------------------------------- hecke

def _point(args) -> hecke.ValPoint:
    if getattr(args, "point", None):
        return hecke.ValPoint.from_json(_load_json(args.point))
    if not args.nu:
        raise InputError("give a point file or --nu")
    nu = _rats(args.nu)
    kw = {}
    if args.flag:
        kw["flag"] = args.flag
    if args.w:
        kw["w"] = tuple(_rats(args.w))
    if args.coords:
        kw["coords"] = tuple(_rats(args.coords))
    return hecke.ValPoint.single(nu, **kw)


def cmd_hecke_region(args) -> int:
    Q = _point(args)
    region, stratum = hecke.region_classify(Q, args.p, args.prime)
    _emit(args, {"region": region, "stratum": stratum}, f"{region}  {stratum}")
    return OK


def cmd_hecke_step(args) -> int:
    Q = _point(args)
    img = hecke.up_image(Q, args.p, args.prime)
    rows = [f"{e.mult:4d} x ({', '.join(fmt_rat(x) for x in e.point.at(args.prime).nu)})  {e.tag}"
            + (f"  [{e.point.at(args.prime).flag}]" if e.point.at(args.prime).flag else "")
            for e in img.entries]
    _emit(args, {"size": img.size(), "images": img.to_json()}, f"{img.size()} images\n" + "\n".join(rows))
    return OK


def cmd_hecke_orbit(args) -> int:
    O = hecke.orbit(_point(args), args.p, args.depth, args.prime)
    data = O.to_json()
    data["all_monotone"] = O.all_monotone()
    rows = [" -> ".join("(" + ",".join(x) + ")" for x in path["nu"]) for path in data["paths"]]
    _emit(args, data, "\n".join(rows) + f"\nweighted sums nondecreasing: {data['all_monotone']}")
    return OK if data["all_monotone"] else CHECK_FAILED


def cmd_hecke_square(args) -> int:
    O = None
    pts = []
    if args.point or args.nu:
        Q = _point(args)
        if args.depth:
            O = hecke.orbit(Q, args.p, args.depth, args.prime)
        else:
            pts = [Q.at(args.prime).nu]
    svg = render_square(args.p, pts, O, args.style)
    if args.svg:
        Path(args.svg).write_text(svg)
        print(f"wrote {args.svg}")
    else:
        sys.stdout.write(svg)
    return OK


def cmd_hecke_sample(args) -> int:
    rng = random.Random(args.seed)
    out = []
    for _ in range(args.count):
        Q = hecke.sample_point(args.region, args.p, args.f, rng)
        img = hecke.up_image(Q, args.p)
        out.append({"point": Q.to_json(), "image_size": img.size()})
    bad = [o for o in out if o["image_size"] != args.p ** args.f]
    _emit(args, {"samples": out, "size_failures": len(bad)},
          f"{len(out)} samples, {len(bad)} with image size != p^f")
    return OK if not bad else CHECK_FAILED


# ---------------------------------------------------------------- continuation

def cmd_continuation_check(args) -> int:
    S = continuation.SlopeData.from_json(_load_json(args.config))
    verdict = continuation.classicality_check(S)
    led = continuation.bound_ledger(S, args.n_max)
    data = {"classical": verdict.to_json(), "ledger": led.to_json()}
    text = led.table() + f"\nslope condition: {'holds' if verdict.ok else 'fails: ' + verdict.first_failure}"
    if led.failures():
        text += "\nfirst failing entry: " + led.failures()[0]
    _emit(args, data, text)
    return OK if led.all_pass() else CHECK_FAILED


def cmd_continuation_epsilon(args) -> int:
    vals = [continuation.epsilon_sequence(args.kind, args.p, n) for n in range(args.n + 1)]
    data = {"values": [fmt_rat(v) for v in vals], "limit": fmt_rat(continuation.epsilon_limit(args.kind, args.p))}
    _emit(args, data, "  ".join(data["values"]) + f"   (sum limit {data['limit']})")
    return OK


# ---------------------------------------------------------------- windows

def _universal(args) -> windows.Window:
    return windows.universal_window(args.p, args.g, args.M, args.D, guard=max(args.M, args.m + args.n + 1))


def _mats(R, mats) -> list:
    return [windows.mat_show(R, A) for A in mats]


def cmd_windows_universal(args) -> int:
    U = _universal(args)
    psi = windows.psi_compute(U)
    data = {"phi": _mats(U.ring, U.phi), "psi": _mats(U.ring, psi),
            "hasse": [U.ring.show(h) for h in windows.partial_hasse_invariants(U)]}
    rows = [f"index {i}: phi {a}   psi {b}" for i, (a, b) in enumerate(zip(data["phi"], data["psi"]), start=1)]
    _emit(args, data, "\n".join(rows))
    return OK


def cmd_windows_specialize(args) -> int:
    W = windows.specialize(_universal(args), args.m, args.n)
    data = {"m": args.m, "n": args.n, "phi": _mats(W.ring, W.phi)}
    _emit(args, data, "\n".join(f"index {i}: {a}" for i, a in enumerate(data["phi"], start=1)))
    return OK


def cmd_windows_sublattice(args) -> int:
    W = windows.specialize(_universal(args), args.m, args.n)
    S = windows.build_sublattice(W, args.sign)
    om = windows.omega_cokernel(W, S)
    data = S.to_json()
    data["phi_shown"] = _mats(S.window.ring, S.window.phi)
    data["omega"] = om.to_json()
    rows = [f"index {i}: {a}" for i, a in enumerate(data["phi_shown"], start=1)]
    rows.append(f"matches displayed matrices: {data['matches_display']}")
    rows.append("omega cokernel: " + ", ".join(om.describe()))
    _emit(args, data, "\n".join(rows))
    return OK if data["matches_display"] else CHECK_FAILED


def cmd_windows_verify(args) -> int:
    ps = _ints(args.ps) if args.ps else [args.p]
    gs = _ints(args.gs) if args.gs else [args.g]
    pairs = [(m, n) for m in range(1, args.max_mn + 1) for n in range(1, args.max_mn + 1)] if args.max_mn else [(args.m, args.n)]
    reports, ok = [], True
    for p in ps:
        for g in gs:
            for m, n in pairs:
                r = windows.window_report(p, g, args.M, args.D, m, n)
                good = windows.report_passes(r)
                ok &= good
                reports.append({"report": r, "pass": good})
    rows = [f"{'PASS' if x['pass'] else 'FAIL'} p={x['report']['p']} g={x['report']['g']} "
            f"(m,n)=({x['report']['m']},{x['report']['n']})" for x in reports]
    _emit(args, {"all_pass": ok, "cases": reports}, "\n".join(rows))
    return OK if ok else CHECK_FAILED


# ---------------------------------------------------------------- fixtures

def cmd_fixtures_run(args) -> int:
    fxs = fixtures.load_fixtures(Path(args.dir) if args.dir else None)
    results = []
    for fx in fxs:
        _, bad = fixtures.run_fixture(fx)
        results.append({"kind": fx["kind"], "name": fx["name"], "pass": not bad, "mismatched": bad})
    n_bad = sum(not r["pass"] for r in results)
    _emit(args, {"results": results, "failures": n_bad},
          "\n".join(f"{'PASS' if r['pass'] else 'FAIL'} [{r['kind']}] {r['name']}" for r in results)
          + f"\n{len(results) - n_bad}/{len(results)} fixtures pass")
    return OK if not n_bad else CHECK_FAILED


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print machine-readable JSON")
    common.add_argument("--seed", type=int, default=0, help="seed for sampling commands")

    ap = argparse.ArgumentParser(prog="hilbert-padic", description=__doc__.splitlines()[0])
    areas = ap.add_subparsers(dest="area", required=True)

    def sub(area, name, fn, help_):
        sp = area.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    # bk
    a = areas.add_parser("bk", help="Breuil-Kisin module solvers").add_subparsers(dest="cmd", required=True)
    sp = sub(a, "generate", cmd_bk_generate, "write a random module in adapted form as JSON")
    sp.add_argument("--kind", choices=["adapted", "special", "companion"], default="adapted")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--g", type=int, default=2)
    sp.add_argument("--e", type=int, required=True)
    sp.add_argument("--prec", type=int)
    sp.add_argument("--ew", help="comma-separated valuations of the a_i")
    sp.add_argument("--type", default="", help="index set for --kind special")
    sp.add_argument("--i", type=int, default=1)
    for name, fn, help_ in (("degrees", cmd_bk_degrees, "partial degrees"),
                            ("hodge", cmd_bk_hodge, "partial Hodge heights"),
                            ("canonical", cmd_bk_canonical, "canonical subgroup")):
        sub(a, name, fn, help_).add_argument("--module", required=True)
    sp = sub(a, "special", cmd_bk_special, "special subgroup of a given type")
    sp.add_argument("--module", required=True)
    sp.add_argument("--type", required=True, help="comma-separated index set I")
    sp = sub(a, "companion", cmd_bk_companion, "companion subgroup (g = 2)")
    sp.add_argument("--module", required=True)
    sp.add_argument("--i", type=int, required=True)
    sp = sub(a, "spectrum", cmd_bk_spectrum, "degree spectrum of all cyclic subgroups (g = 2)")
    sp.add_argument("--module")
    sp.add_argument("--i", type=int, default=1)
    sp.add_argument("--p", type=int)
    sp.add_argument("--e", type=int)
    sp.add_argument("--alpha", help="valuation ratio instead of a module ('none' for vanishing)")
    sp = sub(a, "newton", cmd_bk_newton, "root valuations from a Newton polygon")
    sp.add_argument("--points", required=True, help="exponent:valuation pairs, e.g. 0:2,1:0,10:0")
    sp = sub(a, "raynaud", cmd_bk_raynaud, "weighted degree comparison for a homomorphism")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--deg-g", required=True)
    sp.add_argument("--deg-h", required=True)

    # dieudonne
    a = areas.add_parser("dieudonne", help="Dieudonne module enumeration").add_subparsers(dest="cmd", required=True)
    sp = sub(a, "enumerate", cmd_dieudonne_enumerate, "all stable line tuples with their tags")
    sp.add_argument("--kind", choices=list(dieudonne.KINDS), required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--g", type=int, default=2)
    sp.add_argument("--field", type=int, help="degree of the residue field (default g)")
    sp.add_argument("--t2", help="coefficients of the Hasse parameter, low degree first")

    # hecke
    a = areas.add_parser("hecke", help="U_p dynamics on valuation data").add_subparsers(dest="cmd", required=True)

    def point_args(sp, positional=True):
        if positional:
            sp.add_argument("point", nargs="?", help="point JSON file ('-' for stdin)")
        sp.add_argument("--p", type=int, default=3)
        sp.add_argument("--prime", type=int, default=0)
        sp.add_argument("--nu", help="comma-separated nu values")
        sp.add_argument("--flag", choices=list(hecke.FLAGS))
        sp.add_argument("--w", help="comma-separated Hodge heights")
        sp.add_argument("--coords", help="superspecial coordinates m,n")

    point_args(sub(a, "region", cmd_hecke_region, "classify a point"))
    point_args(sub(a, "step", cmd_hecke_step, "one U_p step"))
    sp = sub(a, "orbit", cmd_hecke_orbit, "orbit tree to a given depth")
    point_args(sp)
    sp.add_argument("--depth", type=int, default=3)
    sp = sub(a, "square", cmd_hecke_square, "SVG of the valuation square")
    point_args(sp)
    sp.add_argument("--depth", type=int, default=0)
    sp.add_argument("--svg", help="output file (default stdout)")
    sp.add_argument("--style", choices=sorted(STYLES), default="default")
    sp = sub(a, "sample", cmd_hecke_sample, "sample points of a region and check image sizes")
    sp.add_argument("--region", choices=[hecke.CANONICAL, hecke.ANTI, hecke.TOO_SINGULAR], required=True)
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--f", type=int, default=2)
    sp.add_argument("--count", type=int, default=10)

    # continuation
    a = areas.add_parser("continuation", help="norm-bound ledger").add_subparsers(dest="cmd", required=True)
    sp = sub(a, "check", cmd_continuation_check, "slope condition and bound ledger")
    sp.add_argument("--config", required=True, help="slope data JSON")
    sp.add_argument("--n-max", type=int, default=continuation.N_MAX)
    sp = sub(a, "epsilon", cmd_continuation_epsilon, "annulus radii")
    sp.add_argument("--kind", choices=["deg2-step2", "deg1"], required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, default=5)

    # windows
    a = areas.add_parser("windows", help="Dieudonne windows").add_subparsers(dest="cmd", required=True)

    def win_args(sp):
        sp.add_argument("--p", type=int, default=3)
        sp.add_argument("--g", type=int, default=2)
        sp.add_argument("--M", type=int, default=3)
        sp.add_argument("--D", type=int, default=27)
        sp.add_argument("--m", type=int, default=1)
        sp.add_argument("--n", type=int, default=1)

    win_args(sub(a, "universal", cmd_windows_universal, "universal Frobenius and psi"))
    win_args(sub(a, "specialize", cmd_windows_specialize, "specialised window"))
    sp = sub(a, "sublattice", cmd_windows_sublattice, "L_+ or L_- with induced Frobenius")
    win_args(sp)
    sp.add_argument("--sign", choices=["+", "-"], default="+")
    sp = sub(a, "verify", cmd_windows_verify, "full verification suite")
    win_args(sp)
    sp.add_argument("--ps", help="comma-separated primes (overrides --p)")
    sp.add_argument("--gs", help="comma-separated g values (overrides --g)")
    sp.add_argument("--max-mn", type=int, default=0, help="sweep (m,n) over 1..N")

    # fixtures
    a = areas.add_parser("fixtures", help="regression corpus").add_subparsers(dest="cmd", required=True)
    sp = sub(a, "run", cmd_fixtures_run, f"run every fixture (directory from --dir or ${fixtures.FIXTURE_ENV})")
    sp.add_argument("--dir")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except HilbertPadicError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return BAD_INPUT
    except (ValueError, KeyError) as exc:
        print(f"error: bad input: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
