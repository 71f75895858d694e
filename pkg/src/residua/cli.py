"""Command-line front end: ``residua <verb> --model ... [args]``.

Exit codes: 0 ok, 1 parse or flag error, 2 domain error, 3 suite failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field

from . import lgroup
from .checker import InapplicableSuite, SUITES, run_suite
from .congruence import coordinates, parse_cone, cong_equal_p, project_model, project_p
from .lgroup import GroupMismatch
from .lmonoid import NotIdempotent, embed, format_lmon, parse_lmon
from .metric import dist_p, gromov_p, lam_p
from .prufer import Ext, PolyDomain, ProductExt, p2_witness, parse_ext, pm_valuation
from .qsring import DomainError, LFl, QsModel, RLambda, SAlpha
from .residue import ResidueModel
from . import ringbuild


class ExprError(ValueError):
    """Malformed expression; ``offset`` counts bytes of the UTF-8 source."""

    def __init__(self, msg: str, src: str, pos: int):
        self.offset = len(src[:pos].encode())
        super().__init__(f"syntax error at offset {self.offset}: {msg}")


# models

def model_from_descriptor(text: str) -> QsModel:
    """``res:<ext>``, ``rlambda:Z``/``rlambda:Z^k``, ``lf:p,l`` or ``salpha:<flavor>``."""
    kind, sep, arg = text.partition(":")
    if not sep:
        raise ValueError(f"model descriptor needs a kind prefix: {text!r}")
    arg = arg.strip()
    if kind == "res":
        return ResidueModel(parse_ext(arg))
    if kind == "rlambda":
        m = re.fullmatch(r"Z(?:\^(\d+))?", arg)
        if not m:
            raise ValueError(f"expected rlambda:Z or rlambda:Z^k, got {text!r}")
        return RLambda(lgroup.zn(int(m.group(1) or 1)))
    if kind == "lf":
        m = re.fullmatch(r"(\d+)\s*,\s*(\d+)", arg)
        if not m:
            raise ValueError(f"expected lf:p,l, got {text!r}")
        return LFl(int(m.group(1)), int(m.group(2)))
    if kind == "salpha":
        return SAlpha(arg)
    raise ValueError(f"unknown model kind {kind!r}")


# expressions

@dataclass
class Lit:
    text: str
    offset: int


@dataclass
class Num:
    text: str
    offset: int


@dataclass
class Eps:
    offset: int


@dataclass
class Neg:
    arg: object
    offset: int


@dataclass
class BinOp:
    op: str
    left: object
    right: object
    offset: int


@dataclass
class Call:
    fn: str
    args: list = field(default_factory=list)
    offset: int = 0


FUNCTIONS = {
    "inv": 1, "meet": 2, "join": 2, "median": 3, "d": 2, "lam": 2, "gromov": 3,
    "eplus": 1, "v": 1, "ebullet": 1, "one": 1, "leq": 2,
}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<ident>[A-Za-z_]\w*)
  | (?P<brace>\{[^{}]*\})
  | (?P<bracket>\[[^\[\]]*\])
  | (?P<punct>[-−+*(),|^])
""", re.X)


def tokenize(src: str):
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ExprError(f"unexpected character {src[pos]!r}", src, pos)
        kind = m.lastgroup
        if kind != "ws":
            text = m.group()
            out.append((kind, "-" if text == "−" else text, pos))
        pos = m.end()
    out.append(("end", "", len(src)))
    return out


class Parser:
    """Recursive descent over the grammar

        expr := prod (("+" | "-") prod)*
        prod := unary ("*" unary)*
        unary := "-" unary | primary
        primary := literal | func "(" args ")" | "(" expr ")"

    with ``mod`` binding tighter than every operator.
    """

    def __init__(self, src: str, model: QsModel | None = None):
        self.src = src
        self.model = model
        self.toks = tokenize(src)
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        raise ExprError(msg, self.src, (tok or self.peek())[2])

    def expect(self, text):
        tok = self.peek()
        if tok[1] != text or tok[0] not in ("punct",):
            self.fail(f"expected {text!r}")
        return self.take()

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.prod()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "punct":
            op = self.take()
            node = BinOp(op[1], node, self.prod(), op[2])
        return node

    def prod(self):
        node = self.unary()
        while self.peek()[1] == "*" and self.peek()[0] == "punct":
            op = self.take()
            node = BinOp("*", node, self.unary(), op[2])
        return node

    def unary(self):
        if self.peek()[1] == "-" and self.peek()[0] == "punct":
            tok = self.take()
            return Neg(self.unary(), tok[2])
        return self.primary()

    def _poly_var(self, tok) -> bool:
        """The bare variable ``t`` of a polynomial residue model."""
        m = self.model
        return (tok[:2] == ("ident", "t") and isinstance(m, ResidueModel)
                and isinstance(getattr(m.ext, "domain", None), PolyDomain))

    def primary(self):
        kind, text, pos = self.peek()
        if kind in ("num", "brace") or (self._poly_var(self.peek()) and self.peek(1)[1] != "("):
            self.take()
            if self.peek()[:2] == ("ident", "mod"):
                self.take()
                mk, mt, _ = self.peek()
                if mk not in ("num", "brace") and not self._poly_var(self.peek()):
                    self.fail("expected a modulus after 'mod'")
                self.take()
                return Lit(f"{text} mod {mt}", pos)
            return Num(text, pos)
        if kind == "bracket":
            self.take()
            return Lit(text, pos)
        if kind == "ident":
            if text == "eps":
                self.take()
                return Eps(pos)
            if text == "g" and self.peek(1)[1] == "^":
                return self._power_literal()
            if text not in FUNCTIONS:
                if self.peek(1)[1] != "(":
                    self.fail(f"unknown name {text!r}")
                self.fail(f"unknown function {text!r}")
            self.take()
            self.expect("(")
            args = [self.expr()]
            while self.peek()[1] == ",":
                self.take()
                args.append(self.expr())
            self.expect(")")
            if len(args) != FUNCTIONS[text]:
                raise ExprError(f"{text} takes {FUNCTIONS[text]} argument(s), got {len(args)}",
                                self.src, pos)
            return Call(text, args, pos)
        if kind == "punct" and text == "(":
            lit = self._tuple_literal()
            if lit is not None:
                return lit
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            self.fail("unexpected end of input")
        self.fail(f"unexpected {text!r}")

    def _power_literal(self):
        _, _, pos = self.take()
        self.take()
        sign = ""
        if self.peek()[1] == "-":
            self.take()
            sign = "-"
        if self.peek()[0] != "num":
            self.fail("expected an exponent")
        return Lit(f"g^{sign}{self.take()[1]}", pos)

    def _tuple_literal(self):
        """``(n,x)`` points of L(F, l) and ``(a mod q | b mod r)`` product residues."""
        pos = self.peek()[2]
        depth, j = 0, self.i
        bar = False
        while j < len(self.toks):
            k, t, _ = self.toks[j]
            if t in ("(",):
                depth += 1
            elif t == ")":
                depth -= 1
                if depth == 0:
                    break
            elif t == "|" and depth == 1:
                bar = True
            elif k == "end":
                return None
            j += 1
        if j >= len(self.toks) or self.toks[j][0] == "end":
            return None
        end = self.toks[j][2] + 1
        text = self.src[pos:end]
        if bar or (isinstance(self.model, LFl) and re.fullmatch(r"\(\s*-?\d+\s*,\s*-?\d+\s*\)", text)):
            self.i = j + 1
            return Lit(text, pos)
        return None


def parse(src: str, model: QsModel | None = None):
    return Parser(src, model).parse()


# evaluation

@dataclass(frozen=True)
class Value:
    kind: str  # "element", "level" or "bool"
    data: object


class TypeMismatch(ValueError):
    pass


def evaluate(node, m: QsModel) -> Value:
    if isinstance(node, Lit):
        return Value("element", m.parse(node.text))
    if isinstance(node, Eps):
        return Value("element", m.eps())
    if isinstance(node, Num):
        if not isinstance(m, ResidueModel):
            raise TypeMismatch(f"bare number {node.text} is a level only in residue models")
        ext = m.ext
        x = ext.parse(node.text.strip("{}")) if not isinstance(ext, ProductExt) else \
            ext.coerce(tuple(ext.parts[i].parse(node.text) for i in range(len(ext.parts))))
        return Value("level", ext.ideal(x))
    if isinstance(node, Neg):
        return Value("element", m.neg(_elem(evaluate(node.arg, m))))
    if isinstance(node, BinOp):
        a, b = evaluate(node.left, m), evaluate(node.right, m)
        if node.op == "*" and a.kind == b.kind == "level":
            return Value("level", m.lat_mul(a.data, b.data))
        x, y = _elem(a), _elem(b)
        op = {"+": m.add, "-": m.sub, "*": m.mul}[node.op]
        return Value("element", op(x, y))
    if isinstance(node, Call):
        vals = [evaluate(a, m) for a in node.args]
        fn = node.fn
        if fn == "one":
            if vals[0].kind != "level":
                raise TypeMismatch("one(α) takes a level")
            return Value("element", m.one(vals[0].data))
        xs = [_elem(v) for v in vals]
        if fn == "inv":
            return Value("element", m.qinv(xs[0]))
        if fn == "meet":
            return Value("element", m.meet(*xs))
        if fn == "join":
            return Value("element", m.join(*xs))
        if fn == "median":
            return Value("element", m.median(*xs))
        if fn == "ebullet":
            return Value("element", m.ebullet(xs[0]))
        if fn == "d":
            return Value("level", dist_p(m, *xs))
        if fn == "lam":
            return Value("level", lam_p(m, *xs))
        if fn == "gromov":
            return Value("level", gromov_p(m, *xs))
        if fn == "eplus":
            return Value("level", m.eplus(xs[0]))
        if fn == "v":
            return Value("level", m.v(xs[0]))
        if fn == "leq":
            return Value("bool", m.leq(*xs))
    raise TypeMismatch(f"cannot evaluate {node!r}")


def _elem(v: Value):
    if v.kind != "element":
        raise TypeMismatch(f"expected an element, got a {v.kind}")
    return v.data


def render(m: QsModel, v: Value) -> str:
    if v.kind == "element":
        return m.fmt(v.data)
    if v.kind == "level":
        return m.lat_fmt(v.data)
    return "true" if v.data else "false"


def value_json(m: QsModel, v: Value) -> dict:
    out = {"kind": v.kind, "value": render(m, v)}
    if v.kind == "element":
        out["eplus"] = m.lat_fmt(m.eplus(v.data))
        out["v"] = m.lat_fmt(m.v(v.data))
    return out


# verbs

def _emit(args, text: str, payload: dict):
    if args.json:
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    else:
        print(text)


def _element(m: QsModel, text: str):
    return _elem(evaluate(parse(text, m), m))


def cmd_eval(args) -> int:
    m = model_from_descriptor(args.model)
    v = evaluate(parse(args.expr, m), m)
    _emit(args, render(m, v), {"expr": args.expr, "model": m.name, **value_json(m, v)})
    return 0


def cmd_dist(args) -> int:
    m = model_from_descriptor(args.model)
    x, y = _element(m, args.x), _element(m, args.y)
    d = dist_p(m, x, y)
    _emit(args, m.lat_fmt(d), {
        "model": m.name, "x": m.fmt(x), "y": m.fmt(y), "dist": m.lat_fmt(d),
        "lam_xy": m.lat_fmt(lam_p(m, x, y)), "lam_yx": m.lat_fmt(lam_p(m, y, x))})
    return 0


def cmd_median(args) -> int:
    m = model_from_descriptor(args.model)
    xs = [_element(m, t) for t in (args.x, args.y, args.z)]
    med = m.median(*xs)
    _emit(args, m.fmt(med), {"model": m.name, "args": [m.fmt(x) for x in xs],
                             **value_json(m, Value("element", med))})
    return 0


def cmd_decompose(args) -> int:
    """Coordinate projections of an element (and optionally a cone test)."""
    m = model_from_descriptor(args.model)
    x = _element(m, args.x)
    rows = []
    for key in coordinates(m, (x,)):
        t = project_model(m, key)
        rows.append((str(key), t.fmt(project_p(m, t, key, x))))
    payload = {"model": m.name, "x": m.fmt(x), "projections": dict(rows)}
    lines = [f"{k}: {v}" for k, v in rows] or ["(no coordinates)"]
    if args.cone:
        c = parse_cone(m.group, args.cone)
        other = _element(m, args.other) if args.other else m.eps()
        same = cong_equal_p(m, c, x, other)
        payload["congruent"] = same
        lines.append(f"{m.fmt(x)} ≡ {m.fmt(other)} mod {args.cone}: {'yes' if same else 'no'}")
    _emit(args, "\n".join(lines), payload)
    return 0


def cmd_check(args) -> int:
    m = model_from_descriptor(args.model)
    rep = run_suite(m, args.suite, args.trials, args.seed)
    _emit(args, rep.text(), rep.to_json())
    return 0 if rep.ok else 3


def cmd_ring(args) -> int:
    """T_n of the reconstructed ring at one level.

    Without a sub-operation, runs the slice and idempotent checks.
    """
    ext = parse_ext(args.ext)
    m = ResidueModel(ext)
    if args.level is None:
        raise ValueError("ring needs --level")
    alpha = ext.ideal(ext.coerce(_ext_number(ext, args.level)))
    lvl = m.lat_fmt(alpha)
    op, rest = args.op, args.operands
    if op is None:
        checks = [ringbuild.tn_report(m, alpha), ringbuild.idempotent_report(m, alpha)]
        ok = all(c.passed for c in checks)
        payload = {"level": lvl, "checks": [c.to_json() for c in checks], "pass": ok}
        text = "\n".join(f"{c.name}: {'pass' if c.passed else 'FAIL'}" for c in checks)
        _emit(args, f"level {lvl}\n{text}", payload)
        return 0 if ok else 3
    need = {"add": 2, "mul": 2, "one": 0, "eta": 1, "witness": 1}
    if op not in need:
        raise ValueError(f"unknown ring operation {op!r}; use add, mul, one, eta or witness")
    if len(rest) != need[op]:
        raise ValueError(f"ring {op} takes {need[op]} operand(s)")
    if op in ("add", "mul"):
        a, b = (ringbuild.b_eval(ringbuild.family(m, ext.coerce(_ext_number(ext, t))), alpha)
                for t in rest)
        out = ringbuild.trunc_ring_ops(m, alpha, op, a, b)
        _emit(args, m.fmt(out), {"level": lvl, "op": op, "value": m.fmt(out)})
        return 0
    if op == "one":
        out = ringbuild.trunc_ring_ops(m, alpha, "one")
        _emit(args, m.fmt(out), {"level": lvl, "op": op, "value": m.fmt(out)})
        return 0
    if op == "eta":
        theta = parse_lmon(m.group, rest[0])
        out = ringbuild.eta(m, theta, alpha)
        _emit(args, m.fmt(out), {"level": lvl, "op": op, "theta": format_lmon(theta),
                                 "value": m.fmt(out)})
        return 0
    phi = ringbuild.family(m, ext.coerce(_ext_number(ext, rest[0])))
    psi, rep = ringbuild.prufer_witness(phi)
    at = ringbuild.b_eval(psi, alpha)
    payload = {"level": lvl, "op": op, "checks": [rep.to_json()], "value": m.fmt(at),
               "pass": rep.passed}
    _emit(args, f"psi = {rep.details['psi']}; at level {lvl}: {m.fmt(at)}; "
                f"{'pass' if rep.passed else 'FAIL'}", payload)
    return 0 if rep.passed else 3


def _ext_number(ext: Ext, text: str):
    """A number of B; on products either ``(a | b | ...)`` or one number for every part."""
    if isinstance(ext, ProductExt):
        s = text.strip()
        chunks = s[1:-1].split("|") if s.startswith("(") and s.endswith(")") and "|" in s \
            else [s] * len(ext.parts)
        if len(chunks) != len(ext.parts):
            raise ValueError(f"expected {len(ext.parts)} components, got {len(chunks)}")
        return tuple(p.parse(c.strip()) for p, c in zip(ext.parts, chunks))
    return ext.parse(text)


def cmd_ideal(args) -> int:
    """Arithmetic of invertible ideals of A and the valuation of B-elements."""
    ext = parse_ext(args.ext)
    op, xs = args.op, [ext.coerce(_ext_number(ext, t)) for t in args.operands]
    binary = {"gcd": ext.igcd, "lcm": ext.ilcm, "mul": ext.imul, "div": ext.idiv}
    model = ResidueModel(ext)
    if op in binary:
        if len(xs) != 2:
            raise ValueError(f"ideal {op} takes two operands")
        a, b = (ext.ideal(x) for x in xs)
        out = binary[op](a, b)
        _emit(args, model.lat_fmt(out), {"ext": str(ext), "op": op, "value": model.lat_fmt(out)})
        return 0
    if len(xs) != 1:
        raise ValueError(f"ideal {op} takes one operand")
    x = xs[0]
    if op == "val":
        text = format_lmon(pm_valuation(ext, x))
    elif op == "p2":
        text = ext.fmt(p2_witness(ext, x))
    elif op == "factor":
        text = format_lmon(embed(ext.to_lelem(ext.ideal(x))))
    else:
        raise ValueError(f"unknown ideal operation {op!r}; use gcd, lcm, mul, div, val, p2 or factor")
    _emit(args, text, {"ext": str(ext), "op": op, "value": text})
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="residua", description="Exact computations in residue quasi-rings.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name, fn, help_text, model=True):
        sp = sub.add_parser(name, help=help_text)
        if model:
            sp.add_argument("--model", required=True, help="res:<ext>, rlambda:Z^k, lf:p,l, salpha:<flavor>")
        sp.add_argument("--json", action="store_true")
        sp.set_defaults(fn=fn)
        return sp

    verb("eval", cmd_eval, "evaluate an expression").add_argument("expr")
    sp = verb("dist", cmd_dist, "distance between two elements")
    sp.add_argument("x")
    sp.add_argument("y")
    sp = verb("median", cmd_median, "median of three elements")
    for a in "xyz":
        sp.add_argument(a)
    sp = verb("decompose", cmd_decompose, "coordinate projections of an element")
    sp.add_argument("x")
    sp.add_argument("--cone", help="cone{2,3}: also test congruence with --other (default eps)")
    sp.add_argument("--other")
    sp = verb("check", cmd_check, "run a property suite")
    sp.add_argument("--suite", required=True, choices=sorted(SUITES))
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp = verb("ring", cmd_ring, "truncation of the reconstructed ring", model=False)
    sp.add_argument("--ext", default="Z⊂Q")
    sp.add_argument("--level")
    sp.add_argument("op", nargs="?")
    sp.add_argument("operands", nargs="*")
    sp = verb("ideal", cmd_ideal, "ideal arithmetic over an extension", model=False)
    sp.add_argument("--ext", default="Z⊂Q")
    sp.add_argument("op")
    sp.add_argument("operands", nargs="*")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (DomainError, InapplicableSuite, NotIdempotent, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ExprError, TypeMismatch, GroupMismatch, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
