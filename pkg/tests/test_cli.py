import json
import random
import subprocess
import sys
from pathlib import Path

import pytest

from residua import lgroup
from residua.cli import BinOp, Call, ExprError, Lit, Neg, evaluate, main, parse, render
from residua.qsring import LFl, RLambda
from residua.residue import build_model

ZQ = build_model("Z⊂Q")
GOLDEN = json.loads((Path(__file__).parent / "golden" / "cli.json").read_text(encoding="utf-8"))


def run(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr()
    return out.out, out.err, code


@pytest.mark.parametrize("case", GOLDEN, ids=[" ".join(c["argv"][:1] + c["argv"][-1:]) for c in GOLDEN])
def test_golden(capsys, case):
    out, err, code = run(capsys, case["argv"])
    assert (out, err, code) == (case["stdout"], case["stderr"], case["exit"])


def test_golden_count_and_verbs():
    assert len(GOLDEN) == 20
    assert {c["argv"][0] for c in GOLDEN} == {"eval", "dist", "median", "check", "ring"}


def test_console_script_exit_code():
    proc = subprocess.run([sys.executable, "-m", "residua.cli", "eval", "--model", "res:Z⊂Q",
                           "join(1 mod 4, 3 mod 4)"], capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stderr == "error: not incident\n" and proc.stdout == ""


def test_parse_nodes():
    node = parse("d(1 mod 4, 3 mod 8)", ZQ)
    assert isinstance(node, Call) and node.fn == "d" and [a.text for a in node.args] == ["1 mod 4", "3 mod 8"]
    node = parse("median(1 mod 8, 5 mod 8, 3 mod 4)", ZQ)
    assert isinstance(node, Call) and node.fn == "median" and len(node.args) == 3


def test_precedence_and_associativity():
    node = parse("1 mod 2 - 1 mod 4 - 3 mod 8 * 1 mod 2", ZQ)
    assert isinstance(node, BinOp) and node.op == "-"
    assert isinstance(node.left, BinOp) and node.left.op == "-"
    assert isinstance(node.right, BinOp) and node.right.op == "*"
    assert isinstance(parse("--1 mod 4", ZQ), Neg)
    assert isinstance(parse("1 mod 4", ZQ), Lit)


@pytest.mark.parametrize("src,offset", [("1 mod", 5), ("meet(1 mod 4)", 0), ("1 mod 4 +", 9),
                                        ("(1 mod 4", 8), ("1 mod 4 $", 8), ("nope(1 mod 2)", 0)])
def test_syntax_errors_carry_offsets(src, offset):
    with pytest.raises(ExprError) as info:
        parse(src, ZQ)
    assert info.value.offset == offset


def test_whitespace_insensitive():
    a = evaluate(parse("meet(1 mod 4,3 mod 8)", ZQ), ZQ)
    b = evaluate(parse("  meet ( 1 mod 4 ,  3 mod 8 )  ", ZQ), ZQ)
    assert a == b


@pytest.mark.parametrize("model", [ZQ, build_model("prod(Zloc{2}, Zloc{3})"), build_model("F3[t]loc{t}"),
                                   RLambda(lgroup.zn(2)), LFl(3, 1)], ids=lambda m: m.name)
def test_print_parse_round_trip(model):
    rng = random.Random(0)
    for _ in range(100):
        x = model.sample(rng)
        text = model.fmt(x)
        assert evaluate(parse(text, model), model).data == x
        assert render(model, evaluate(parse(text, model), model)) == text


def test_arity_and_unknown_names():
    with pytest.raises(ExprError, match="takes 2"):
        parse("join(1 mod 4)", ZQ)
    with pytest.raises(ExprError, match="unknown name"):
        parse("x", ZQ)


def test_bad_flags_exit_1(capsys):
    _, err, code = run(capsys, ["check", "--model", "res:Z⊂Q", "--suite", "nope"])
    assert code == 1 and "invalid choice" in err
    _, err, code = run(capsys, ["eval", "--model", "zz:Q", "1 mod 2"])
    assert code == 1 and err.startswith("error:")


def test_check_json_is_stable(capsys):
    argv = ["check", "--model", "lf:2,0", "--suite", "crq_axioms", "--trials", "50", "--seed", "1", "--json"]
    first, _, code = run(capsys, argv)
    again, _, _ = run(capsys, argv)
    assert code == 0 and first == again
    assert json.loads(first)["outcome"] == "PASS"


def test_ideal_and_decompose(capsys):
    assert run(capsys, ["ideal", "--ext", "Z⊂Q", "gcd", "4/3", "6"])[0] == "2/3\n"
    assert run(capsys, ["ideal", "--ext", "Z⊂Q", "val", "12/5"])[0] == "2^2*3^1*5^-1\n"
    assert run(capsys, ["ideal", "--ext", "Z⊂Q", "p2", "7/12"])[0] == "-60\n"
    assert run(capsys, ["ideal", "--ext", "Z⊂Q", "factor", "4/45"])[0] == "2^2*3^-2*5^-1\n"
    assert run(capsys, ["ideal", "--ext", "prod(Zloc{2}, Zloc{3})", "gcd", "(12 | 18)", "6"])[0] == "(2 | 3)\n"
    assert run(capsys, ["decompose", "--model", "res:Z⊂Q", "5 mod 12"])[0] == "2: 1 mod 4\n3: 2 mod 3\n"


def test_ring_summary(capsys):
    out, _, code = run(capsys, ["ring", "--ext", "Z⊂Q", "--level", "12", "--json"])
    data = json.loads(out)
    assert code == 0 and data["pass"] is True and data["level"] == "12"
