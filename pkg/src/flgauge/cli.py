"""Command line entry point: ``flgauge <command> ...``.

Exit codes: 0 pass, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction
from math import factorial

from . import linalg as la
from .acceptance import CRITERIA, run_criterion
from .arith import ArithError, MazurTable, PrimeContext, _check_prime, pd_exponent
from .fileformat import ParseError, emit_module, load, load_morphism
from .fl import (FLError, FLModule, fl_cokernel, fl_hom_ext1, fl_kernel, fl_validate,
                 torsionfree_lift, twist)
from .gradmod import NotNDetermined, base_change_A_to_B, random_effective_A, tor1_B_over_A
from .laurent import verify_pd_relations
from .mazsyn import MazurModule, mazur_validate, syn_vs_ext_crosscheck, syntomic_cohomology
from .sen import alpha, di_maz_endofunctor, extension_class, sen_theta
from .witt import (WittIntegralityError, bigwitt_pth_root, divided_teichmuller,
                   verify_di_matrix, verify_psi_maz)

SCHEMA = "flgauge/{}/1"


class UsageError(Exception):
    pass


def _out(args, command: str, payload: dict, text: str) -> None:
    if args.json:
        payload = {"schema": SCHEMA.format(command), **payload}
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _matrix_ints(A) -> list:
    return [[list(x.c) if x.ctx.f > 1 else x.c[0] for x in row] for row in A]


def _matrix_text(A) -> str:
    if not A:
        return "  (empty)"
    return "\n".join("  " + " ".join(str(x) for x in row) for row in _matrix_ints(A))


def _fl(path: str) -> FLModule:
    M = load(path)
    if isinstance(M, MazurModule):
        raise UsageError(f"{path}: expected an fl module, got kind mazur")
    return M


# ---------------------------------------------------------------------------
# mazur-numbers

def cmd_mazur_numbers(args) -> int:
    if args.max < 1:
        raise UsageError("--max must be >= 1")
    t = MazurTable(args.p, args.max)
    vals = [t[n] for n in range(1, args.max + 1)]
    _out(args, "mazur-numbers", {"p": args.p, "values": vals},
         "\n".join(f"[{n}] = {v}" for n, v in enumerate(vals, start=1)))
    return 0


# ---------------------------------------------------------------------------
# verify

def _gamma_form(c, p: int) -> str:
    """Write a homogeneous element c v+^d as k * gamma_d(v+)."""
    (d, coef), = c.coeffs.items()
    k = coef * factorial(d)
    k = k.numerator if k.denominator == 1 else k
    return f"gamma_{d}(v+)" if k == 1 else f"{k}*gamma_{d}(v+)"


def _suite_pd(p, n, D):
    out = []
    for c in verify_pd_relations(p, n, D):
        out.append({"name": f"{c.name} n={c.n}", "ok": c.ok})
    return out


def _suite_divisibility(p, n, D):
    try:
        dt = divided_teichmuller(p, n, D)
    except WittIntegralityError as e:
        return [{"name": "p z = [v+^p]", "ok": False, "detail": str(e)}]
    comps = [_gamma_form(c, p) for c in dt.z.comps]
    return [{"name": "p z = [v+^p], z integral", "ok": True, "z": comps}]


def _suite_bigwitt(p, n, D):
    try:
        r = bigwitt_pth_root(p, 8)
    except WittIntegralityError as e:
        return [{"name": "g^p = 1 - v+^p x", "ok": False, "detail": str(e)}]
    return [{"name": "g^p = 1 - v+^p x to order 8, coefficients integral", "ok": r.identity and r.integral}]


def _checks(checks):
    return [{"name": c.name, "ok": c.ok, **({"detail": c.detail} if c.detail else {})} for c in checks]


def _suite_psi(p, n, D):
    return _checks(verify_psi_maz(p, n, D))


def _suite_di(p, n, D):
    return _checks(verify_di_matrix(p, n, D))


def _suite_effectivity(p, n, D):
    rng = random.Random(0)
    ctx = PrimeContext(p, 3)
    bad = 0
    for _ in range(20):
        M = random_effective_A(ctx, rng, rank=rng.randint(1, 2), hi=rng.randint(0, p))
        if not all(base_change_A_to_B(M, range(p))["iso_below_p"].values()):
            bad += 1
    return [{"name": "base change iso in degrees 0..p-1 (20 random modules)", "ok": bad == 0}]


def _suite_tor1(p, n, D):
    ctx = PrimeContext(p, 3)
    out = []
    for i, (pk, quot) in tor1_B_over_A(ctx, range(0, 2 * p + 1)).items():
        want = (1,) if i >= p else ()
        out.append({"name": f"Tor1 degree {i}", "ok": pk == want and quot == want,
                    "dims": [len(pk), len(quot)]})
    return out


def _suite_witt(p, n, D):
    from .acceptance import crit_witt_core
    ok, detail = crit_witt_core(cases=200)
    return [{"name": "ring axioms, ghost, FV = p, Teichmuller", "ok": ok, "detail": detail}]


SUITES = {
    "pd": _suite_pd,
    "divisibility": _suite_divisibility,
    "bigwitt": _suite_bigwitt,
    "psi-maz": _suite_psi,
    "di-matrix": _suite_di,
    "effectivity": _suite_effectivity,
    "tor1": _suite_tor1,
    "witt-identities": _suite_witt,
}


def cmd_verify(args) -> int:
    p, n = args.p, args.witt_len
    if n < 1:
        raise UsageError("--witt-len must be >= 1")
    D = args.window if args.window is not None else p ** (n + 1) + p
    if D < p ** n:
        raise UsageError(f"--window must be >= p^n = {p ** n}")
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    report = {}
    for name in names:
        fn = SUITES[name]
        nn = min(n, 2) if name == "pd" else n
        try:
            report[name] = fn(p, nn, D)
        except (ValueError, ArithError) as e:
            report[name] = [{"name": name, "ok": False, "detail": str(e)}]
    ok = all(c["ok"] for cs in report.values() for c in cs)
    lines = []
    for name, cs in report.items():
        for c in cs:
            extra = f"  z = ({', '.join(c['z'])})" if "z" in c else ""
            lines.append(f"[{'PASS' if c['ok'] else 'FAIL'}] {name}: {c['name']}{extra}")
    _out(args, "verify", {"p": p, "witt_len": n, "window": D, "ok": ok, "suites": report},
         "\n".join(lines))
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# fl

def cmd_fl(args) -> int:
    op = args.op
    if op == "check":
        M = _fl(args.input)
        try:
            v = fl_validate(M)
        except NotNDetermined as e:
            _out(args, "fl-check", {"ok": False, "refused": str(e)}, f"refused: {e}")
            return 1
        diag = {k: v for k, v in v.diagnostics.items()}
        _out(args, "fl-check", {"ok": v.ok, "witness": v.witness, "diagnostics": diag},
             "valid" if v.ok else f"invalid: {v.witness}")
        return 0 if v.ok else 1
    if op in ("kernel", "cokernel"):
        f = load_morphism(args.input)
        errs = f.check()
        if errs:
            _out(args, f"fl-{op}", {"ok": False, "errors": errs}, "not a morphism: " + "; ".join(errs))
            return 1
        K = fl_kernel(f) if op == "kernel" else fl_cokernel(f)
        text = emit_module(K)
        _out(args, f"fl-{op}", {"ok": True, "module": text}, text.rstrip("\n"))
        return 0
    if op == "ext1":
        if not args.in2:
            raise UsageError("fl ext1 needs --in2")
        M, N = _fl(args.input), _fl(args.in2)
        he = fl_hom_ext1(M, N)
        _out(args, "fl-ext1", {"hom_dim": he.hom_dim, "ext1_dim": he.ext1_dim, "f": he.f,
                               "field": f"F_{M.ctx.p}"},
             f"dim_F{M.ctx.p} Hom = {he.hom_dim}\ndim_F{M.ctx.p} Ext1 = {he.ext1_dim}")
        return 0
    if op == "lift":
        M = _fl(args.input)
        L = torsionfree_lift(M, args.precision)
        text = emit_module(L)
        _out(args, "fl-lift", {"module": text}, text.rstrip("\n"))
        return 0
    if op == "twist":
        if args.i is None:
            raise UsageError("fl twist needs --i")
        M = _fl(args.input)
        T = twist(M, args.i)
        text = emit_module(T)
        _out(args, "fl-twist", {"module": text}, text.rstrip("\n"))
        return 0
    raise UsageError(f"unknown fl operation {op}")


# ---------------------------------------------------------------------------
# syn

def _inv_text(p: int, inv) -> str:
    return "(" + ", ".join(f"{p}^{e}" for e in inv) + ")"


def cmd_syn(args) -> int:
    M = load(args.input)
    p = M.ctx.p
    if isinstance(M, MazurModule):
        v = mazur_validate(M)
        if not v:
            raise FLError(f"Mazur relation fails in degree {v.failing_degree}")
    s = syntomic_cohomology(M, args.weight)
    h0, h1 = s.H0.invariants(), s.H1.invariants()
    payload = {"p": p, "weight": args.weight, "H0": list(h0), "H1": list(h1),
               "n_determined": s.n_determined}
    text = f"H0 = {_inv_text(p, h0)}\nH1 = {_inv_text(p, h1)}"
    if not s.n_determined:
        text += "\nwarning: pieces mix free and torsion summands"
    rc = 0
    if args.crosscheck:
        cc = syn_vs_ext_crosscheck(M, args.weight)
        payload["crosscheck"] = {"ok": cc.ok, "syn": list(cc.syn), "fl": list(cc.fl)}
        text += f"\ncrosscheck: {'pass' if cc.ok else 'FAIL'} syn {cc.syn} vs (Hom, Ext1) {cc.fl}"
        rc = 0 if cc.ok else 1
    _out(args, "syn", payload, text)
    return rc


# ---------------------------------------------------------------------------
# sen

def cmd_sen(args) -> int:
    M = _fl(args.input)
    op = args.op
    if op == "theta":
        T = sen_theta(M)
        _out(args, "sen-theta", {"theta": _matrix_ints(T)}, _matrix_text(T))
        return 0
    if op == "alpha":
        A = alpha(M)
        _out(args, "sen-alpha", {"alpha": _matrix_ints(A)}, _matrix_text(A))
        return 0
    if op == "apply":
        out = di_maz_endofunctor(M)
        text = emit_module(out)
        _out(args, "sen-apply", {"module": text}, text.rstrip("\n"))
        return 0
    if op == "ext-class":
        ec = extension_class(M)
        t = list(ec.t.c) if M.ctx.f > 1 else ec.t.c[0]
        _out(args, "sen-ext-class", {"class": t, "splits": ec.splits},
             f"class = {t}\nsplits = {ec.splits}")
        return 0
    raise UsageError(f"unknown sen operation {op}")


# ---------------------------------------------------------------------------
# selftest

def cmd_selftest(args) -> int:
    t0 = time.perf_counter()
    results = []
    for num, _, _ in CRITERIA:
        r = run_criterion(num)
        results.append(r)
        if not args.json:
            print(r.line(), flush=True)
    total = time.perf_counter() - t0
    ok = all(r.ok for r in results)
    if args.json:
        print(json.dumps({"schema": SCHEMA.format("selftest"), "ok": ok,
                          "criteria": [{"number": r.number, "name": r.name, "ok": r.ok,
                                        "detail": r.detail} for r in results]},
                         sort_keys=True))
    else:
        print(f"{sum(r.ok for r in results)}/{len(results)} criteria passed in {total:.1f}s")
    return 0 if ok else 1


# ---------------------------------------------------------------------------

def _prime(s: str) -> int:
    try:
        p = int(s)
        _check_prime(p)
    except (ValueError, ArithError):
        raise argparse.ArgumentTypeError(f"{s} is not a prime") from None
    return p


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="flgauge", description="Fontaine-Laffaille modules, Mazur modules and Witt vector checks.")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        return p

    m = common(sub.add_parser("mazur-numbers", help="table of Mazur numbers [n]"))
    m.add_argument("--p", type=_prime, required=True)
    m.add_argument("--max", type=int, required=True)
    m.set_defaults(func=cmd_mazur_numbers)

    v = common(sub.add_parser("verify", help="exact identity checks"))
    v.add_argument("--p", type=_prime, required=True)
    v.add_argument("--witt-len", type=int, default=2)
    v.add_argument("--window", type=int, default=None)
    v.add_argument("--suite", choices=["all"] + sorted(SUITES), default="all")
    v.set_defaults(func=cmd_verify)

    f = common(sub.add_parser("fl", help="Fontaine-Laffaille module operations"))
    f.add_argument("op", choices=["check", "kernel", "cokernel", "ext1", "lift", "twist"])
    f.add_argument("--in", dest="input", required=True)
    f.add_argument("--in2", default=None)
    f.add_argument("--i", type=int, default=None)
    f.add_argument("--precision", type=int, default=2, help="precision N of a lift")
    f.set_defaults(func=cmd_fl)

    s = common(sub.add_parser("syn", help="syntomic cohomology in weight 0..p-2"))
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--weight", type=int, required=True)
    s.add_argument("--crosscheck", action="store_true")
    s.set_defaults(func=cmd_syn)

    e = common(sub.add_parser("sen", help="Sen operator and the correction alpha"))
    e.add_argument("op", choices=["theta", "alpha", "apply", "ext-class"])
    e.add_argument("--in", dest="input", required=True)
    e.set_defaults(func=cmd_sen)

    t = common(sub.add_parser("selftest", help="run the acceptance suite"))
    t.set_defaults(func=cmd_selftest)
    return ap


def _error(args_json: bool, kind: str, msg: str, code: int) -> int:
    if args_json:
        print(json.dumps({"schema": SCHEMA.format("error"), "error": kind, "message": msg}, sort_keys=True))
    else:
        print(f"error: {msg}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    want_json = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        return _error(want_json, "usage", str(e), 2)
    try:
        return args.func(args)
    except UsageError as e:
        return _error(want_json, "usage", str(e), 2)
    except ParseError as e:
        return _error(want_json, "parse", str(e), 2)
    except OSError as e:
        return _error(want_json, "io", str(e), 2)
    except (FLError, NotNDetermined, ArithError, WittIntegralityError) as e:
        return _error(want_json, "verification", str(e), 1)


if __name__ == "__main__":
    sys.exit(main())
