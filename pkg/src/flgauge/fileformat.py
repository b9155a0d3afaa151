"""Plain-text module files: parser and canonical emitter.

Grammar (one directive per line, '#' starts a comment)::

    kind fl | mazur | morphism
    p 3
    N 4
    f 1
    minpoly 1 0 1            # optional, low degree first, monic
    wmax 1
    piece 0 free 1 torsion 2 3
    piece 1 exps 4 1         # explicit generator order
    vminus 1 2x2             # v-: F^1 -> F^0, followed by 2 indented rows
      1 0
      0 3
    phi 0 2x2
      ...

Entries are integers, or [c0,c1,...] coordinates when f > 1. A morphism
file wraps two module bodies in ``begin source`` / ``end`` and
``begin target`` / ``end`` and then lists ``map i RxC`` blocks.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from . import linalg as la
from .arith import ArithError, PrimeContext, Zq
from .fl import FLError, FLModule, FLMorphism
from .gradmod import DimensionError, FPModule, GradedModule
from .mazsyn import MazurModule


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line else msg)


_SHAPE = re.compile(r"^(\d+)x(\d+)$")


@dataclass
class _Line:
    no: int
    text: str
    indented: bool


def _lines(text: str) -> list[_Line]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if body.strip():
            out.append(_Line(no, body.strip(), raw[:1] in (" ", "\t")))
    return out


def _int(tok: str, ln: _Line, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what}: expected an integer, got {tok!r}", ln.no) from None


def _entry(ctx: PrimeContext, tok: str, ln: _Line) -> Zq:
    if tok.startswith("["):
        if not tok.endswith("]"):
            raise ParseError(f"unterminated entry {tok!r}", ln.no)
        parts = [t for t in tok[1:-1].split(",") if t.strip()]
        cs = [_int(t.strip(), ln, "entry") for t in parts]
        if len(cs) > ctx.f:
            raise ParseError(f"entry {tok!r} has more than f={ctx.f} coordinates", ln.no)
        return ctx(tuple(cs + [0] * (ctx.f - len(cs))))
    return ctx(_int(tok, ln, "entry"))


def _split_entries(text: str) -> list[str]:
    # brackets may contain spaces after commas
    return re.findall(r"\[[^\]]*\]?|[^\s\[\]]+", text)


class _Reader:
    def __init__(self, lines: list[_Line]):
        self.lines = lines
        self.pos = 0

    def peek(self) -> _Line | None:
        return self.lines[self.pos] if self.pos < len(self.lines) else None

    def next(self) -> _Line:
        ln = self.lines[self.pos]
        self.pos += 1
        return ln

    def matrix(self, ctx: PrimeContext, head: _Line, rows: int, cols: int) -> la.Matrix:
        out = []
        for r in range(rows):
            ln = self.peek()
            if ln is None or not ln.indented:
                raise ParseError(f"expected {rows} matrix rows, found {r}", (ln or head).no)
            self.next()
            toks = _split_entries(ln.text)
            if len(toks) != cols:
                raise ParseError(f"row has {len(toks)} entries, expected {cols}", ln.no)
            out.append([_entry(ctx, t, ln) for t in toks])
        return out


def _header(rd: _Reader) -> tuple[dict, PrimeContext]:
    vals: dict = {}
    while (ln := rd.peek()) is not None:
        key, *rest = ln.text.split()
        if key not in ("kind", "p", "N", "f", "minpoly"):
            break
        rd.next()
        if key == "kind":
            if len(rest) != 1 or rest[0] not in ("fl", "mazur", "morphism"):
                raise ParseError("kind must be fl, mazur or morphism", ln.no)
            vals["kind"] = rest[0]
        elif key == "minpoly":
            vals["minpoly"] = ([_int(t, ln, "minpoly") for t in rest], ln)
        else:
            if len(rest) != 1:
                raise ParseError(f"{key} takes one value", ln.no)
            vals[key] = (_int(rest[0], ln, key), ln)
    for key in ("p", "N"):
        if key not in vals:
            raise ParseError(f"missing header field {key!r}")
    p, pln = vals["p"]
    N, _ = vals["N"]
    f, _ = vals.get("f", (1, None))
    mp = vals.get("minpoly")
    try:
        ctx = PrimeContext(p, N, f, mp[0] if mp else None)
    except ArithError as e:
        raise ParseError(str(e), (mp[1] if mp else pln).no) from None
    return vals, ctx


def _body(rd: _Reader, ctx: PrimeContext, stop: str | None = None):
    """Parse wmax / piece / vminus / phi lines; returns (GradedModule, phi list)."""
    ln = rd.peek()
    if ln is None or ln.text.split()[0] != "wmax":
        raise ParseError("expected 'wmax'", ln.no if ln else None)
    rd.next()
    toks = ln.text.split()
    if len(toks) != 2:
        raise ParseError("wmax takes one value", ln.no)
    wmax = _int(toks[1], ln, "wmax")
    if wmax < 0:
        raise ParseError("wmax must be >= 0", ln.no)
    pieces: dict[int, FPModule] = {}
    vms: dict[int, la.Matrix] = {}
    phis: dict[int, la.Matrix] = {}
    while (ln := rd.peek()) is not None:
        toks = ln.text.split()
        key = toks[0]
        if stop and ln.text == stop:
            break
        if key not in ("piece", "vminus", "phi"):
            break
        rd.next()
        if len(toks) < 2:
            raise ParseError(f"{key} needs a degree", ln.no)
        i = _int(toks[1], ln, f"{key} degree")
        if not 0 <= i <= wmax:
            raise ParseError(f"{key} degree {i} outside [0, {wmax}]", ln.no)
        if key == "piece":
            if i in pieces:
                raise ParseError(f"piece {i} given twice", ln.no)
            pieces[i] = _piece(ctx, toks[2:], ln)
            continue
        if len(toks) != 3 or not _SHAPE.match(toks[2]):
            raise ParseError(f"{key} {i}: expected a shape RxC", ln.no)
        r, c = map(int, _SHAPE.match(toks[2]).groups())
        if key == "vminus":
            if i == 0:
                raise ParseError("vminus degrees start at 1", ln.no)
            want = (_g(pieces, i - 1, ln), _g(pieces, i, ln))
        else:
            want = (_g(pieces, 0, ln), _g(pieces, i, ln))
        if (r, c) != want:
            raise ParseError(f"{key} {i}: dimension mismatch in degree {i}, "
                             f"got {r}x{c}, pieces need {want[0]}x{want[1]}", ln.no)
        target = vms if key == "vminus" else phis
        if i in target:
            raise ParseError(f"{key} {i} given twice", ln.no)
        target[i] = rd.matrix(ctx, ln, r, c)
    for i in range(wmax + 1):
        if i not in pieces:
            raise ParseError(f"missing piece {i}")
        if i not in phis:
            raise ParseError(f"missing phi {i}")
        if i and i not in vms:
            raise ParseError(f"missing vminus {i}")
    plist = [pieces[i] for i in range(wmax + 1)]
    try:
        base = GradedModule(ctx, plist, [vms[i] for i in range(1, wmax + 1)])
    except (DimensionError, ValueError) as e:
        raise ParseError(str(e)) from None
    return base, [phis[i] for i in range(wmax + 1)]


def _g(pieces: dict, i: int, ln: _Line) -> int:
    if i not in pieces:
        raise ParseError(f"piece {i} must be declared before use", ln.no)
    return pieces[i].g


def _piece(ctx: PrimeContext, toks: list[str], ln: _Line) -> FPModule:
    if toks and toks[0] == "exps":
        exps = [_int(t, ln, "exponent") for t in toks[1:]]
    else:
        exps = []
        mode = None
        for t in toks:
            if t in ("free", "torsion"):
                mode = t
                continue
            if mode == "free":
                exps += [ctx.N] * _int(t, ln, "free rank")
                mode = "free-done"
            elif mode == "torsion":
                exps.append(_int(t, ln, "torsion exponent"))
            else:
                raise ParseError(f"unexpected token {t!r} in piece descriptor", ln.no)
    for e in exps:
        if not 1 <= e <= ctx.N:
            raise ParseError(f"exponent {e} outside [1, N={ctx.N}]", ln.no)
    return FPModule(ctx, exps)


def parse_module(text: str):
    """FLModule (kind fl, the default) or MazurModule (kind mazur)."""
    rd = _Reader(_lines(text))
    vals, ctx = _header(rd)
    kind = vals.get("kind", "fl")
    if kind == "morphism":
        raise ParseError("this is a morphism file")
    base, phi = _body(rd, ctx)
    if (ln := rd.peek()) is not None:
        raise ParseError(f"unexpected directive {ln.text.split()[0]!r}", ln.no)
    try:
        return MazurModule(base, phi) if kind == "mazur" else FLModule(base, phi)
    except (FLError, ValueError) as e:
        raise ParseError(str(e)) from None


def parse_morphism(text: str) -> FLMorphism:
    rd = _Reader(_lines(text))
    vals, ctx = _header(rd)
    if vals.get("kind") != "morphism":
        raise ParseError("expected 'kind morphism'")
    mods = {}
    for name in ("source", "target"):
        ln = rd.peek()
        if ln is None or ln.text != f"begin {name}":
            raise ParseError(f"expected 'begin {name}'", ln.no if ln else None)
        rd.next()
        base, phi = _body(rd, ctx, stop="end")
        ln = rd.peek()
        if ln is None or ln.text != "end":
            raise ParseError(f"expected 'end' closing {name}", ln.no if ln else None)
        rd.next()
        mods[name] = FLModule(base, phi)
    S, T = mods["source"], mods["target"]
    w = max(S.wmax, T.wmax)
    maps = {}
    while (ln := rd.peek()) is not None:
        rd.next()
        toks = ln.text.split()
        if toks[0] != "map" or len(toks) != 3 or not _SHAPE.match(toks[2]):
            raise ParseError("expected 'map i RxC'", ln.no)
        i = _int(toks[1], ln, "map degree")
        if not 0 <= i <= w:
            raise ParseError(f"map degree {i} outside [0, {w}]", ln.no)
        r, c = map(int, _SHAPE.match(toks[2]).groups())
        want = (T.base.piece(i).g, S.base.piece(i).g)
        if (r, c) != want:
            raise ParseError(f"map {i}: dimension mismatch in degree {i}, got {r}x{c}, "
                             f"pieces need {want[0]}x{want[1]}", ln.no)
        maps[i] = rd.matrix(ctx, ln, r, c)
    mats = [maps.get(i, la.zeros(ctx, T.base.piece(i).g, S.base.piece(i).g)) for i in range(w + 1)]
    try:
        return FLMorphism(S, T, mats)
    except ValueError as e:
        raise ParseError(str(e)) from None


def load(path: str | Path):
    return parse_module(Path(path).read_text())


def load_morphism(path: str | Path) -> FLMorphism:
    return parse_morphism(Path(path).read_text())


# ---------------------------------------------------------------------------
# emitter

def _fmt_entry(x: Zq) -> str:
    if x.ctx.f == 1:
        return str(x.c[0])
    return "[" + ",".join(str(c) for c in x.c) + "]"


def _fmt_matrix(key: str, i: int, A: la.Matrix, r: int, c: int) -> list[str]:
    out = [f"{key} {i} {r}x{c}"]
    for row in A:
        out.append("  " + " ".join(_fmt_entry(x) for x in row))
    return out


def _fmt_piece(i: int, P: FPModule) -> str:
    N = P.ctx.N
    nfree = 0
    while nfree < len(P.exps) and P.exps[nfree] == N:
        nfree += 1
    rest = P.exps[nfree:]
    if any(e == N for e in rest):
        return f"piece {i} exps " + " ".join(map(str, P.exps))
    s = f"piece {i} free {nfree}"
    if rest:
        s += " torsion " + " ".join(map(str, rest))
    return s


def _header_lines(ctx: PrimeContext, kind: str) -> list[str]:
    out = [f"kind {kind}", f"p {ctx.p}", f"N {ctx.N}", f"f {ctx.f}"]
    if ctx.f > 1:
        out.append("minpoly " + " ".join(map(str, ctx.minpoly)))
    return out


def _body_lines(M) -> list[str]:
    out = [f"wmax {M.wmax}"]
    for i, P in enumerate(M.pieces):
        out.append(_fmt_piece(i, P))
    for i in range(1, M.wmax + 1):
        out += _fmt_matrix("vminus", i, M.base.vm(i).matrix, M.pieces[i - 1].g, M.pieces[i].g)
    for i in range(M.wmax + 1):
        out += _fmt_matrix("phi", i, M.phi[i], M.pieces[0].g, M.pieces[i].g)
    return out


def emit_module(M) -> str:
    kind = "mazur" if isinstance(M, MazurModule) else "fl"
    return "\n".join(_header_lines(M.ctx, kind) + _body_lines(M)) + "\n"


def emit_morphism(f: FLMorphism) -> str:
    out = _header_lines(f.source.ctx, "morphism")
    for name, M in (("source", f.source), ("target", f.target)):
        out.append(f"begin {name}")
        out += _body_lines(M)
        out.append("end")
    for i in range(f.w + 1):
        m = f.map(i)
        out += _fmt_matrix("map", i, m.matrix, m.target.g, m.source.g)
    return "\n".join(out) + "\n"
