import random

import pytest

from progring.interface import EMPTY, ClassificationError, interface, is_fmi
from progring.pglb import (
    Basic, BwdJump, FocusMethod, FwdJump, Halt, NegTest, PglbSyntaxError, PosTest,
    Program, in_notation, occurring_basics, parse_pglb, render_pglb,
)

from gen import random_program

P = "-b1.get;#3;b4.set:false;#3;b4.set:true;!"
REGISTERS = ("f.(get+(set:+testeq:)(0+1+2)(0+1+2)(0+1+2))"
            "+g.(get+(set+testeq)(:)(true+false+error))")


def fm(text):
    return FocusMethod.parse(text)


def test_parse_branching_program():
    assert list(parse_pglb(P)) == [
        NegTest(fm("b1.get")), FwdJump(3), Basic(fm("b4.set:false")),
        FwdJump(3), Basic(fm("b4.set:true")), Halt(),
    ]


def test_parse_halt():
    assert list(parse_pglb("!")) == [Halt()]


def test_parse_backward_jump_and_positive_test():
    assert list(parse_pglb("\\#2;+f.m")) == [BwdJump(2), PosTest(fm("f.m"))]


def test_whitespace_and_newlines():
    assert parse_pglb(" +f.m ;\n #2 ;\n!\n") == parse_pglb("+f.m;#2;!")


@pytest.mark.parametrize("text", [P, "!", "\\#2;+f.m", "#0;\\#0;c.push:0"])
def test_render_inverts_parse(text):
    assert render_pglb(parse_pglb(text)) == text


@pytest.mark.parametrize("text, pos", [
    ("", 0),
    ("f.m;;!", 4),
    ("f.m;!;", 6),
    ("fm", 0),
    ("f.1m", 2),
    ("1f.m", 0),
    ("f.m-x", 3),
    ("#x", 0),
    ("\\3", 0),
    ("#-1", 0),
    ("+.m", 1),
    ("f.m;b 1.get", 5),
])
def test_syntax_errors_report_position(text, pos):
    with pytest.raises(PglbSyntaxError) as exc:
        parse_pglb(text)
    assert exc.value.position == pos


def test_program_is_nonempty():
    with pytest.raises(ValueError):
        Program(())


def test_occurring_basics():
    assert occurring_basics(parse_pglb(P)) == interface("b1.get+b4.set:false+b4.set:true")
    assert occurring_basics(parse_pglb("#3;b2.set:false;!;!")) == interface("b2.set:false")
    assert occurring_basics(parse_pglb("!")) == EMPTY


def test_in_notation():
    p = parse_pglb(P)
    assert in_notation(p, occurring_basics(p))
    assert in_notation(parse_pglb("#2;\\#1;!"), EMPTY)
    assert not in_notation(parse_pglb("c.push:0;!"), interface(REGISTERS))
    with pytest.raises(ClassificationError):
        in_notation(p, interface("a.b.c"))


def test_round_trips_on_random_programs():
    rng = random.Random(7)
    for _ in range(300):
        p = random_program(rng, 8)
        assert parse_pglb(render_pglb(p)) == p


def test_occurring_basics_properties():
    rng = random.Random(11)
    swap = {Basic: PosTest, PosTest: NegTest, NegTest: Basic}
    for _ in range(200):
        p = random_program(rng, 8)
        basics = occurring_basics(p)
        assert is_fmi(basics)
        q = Program(tuple(swap[type(i)](i.fm) if type(i) in swap else i for i in p))
        assert occurring_basics(q) == basics
