"""
PGLB instruction sequences in focus-method notation.

Concrete syntax, one primitive instruction per ``;``-separated token::

    f.m      basic instruction
    +f.m     positive test
    -f.m     negative test
    #k       forward jump over k positions
    \\#k      backward jump
    !        termination

Foci and methods start with a letter and continue with letters, digits and
colons (``b17.set:true``, ``c.push:0``).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .interface import (
    ClassificationError, Interface, Word, is_fmi, leq,
)

__all__ = [
    "PglbSyntaxError", "FocusMethod",
    "Basic", "PosTest", "NegTest", "FwdJump", "BwdJump", "Halt", "Instruction",
    "Program", "parse_pglb", "render_pglb", "occurring_basics", "in_notation",
]

_NAME = r"[A-Za-z][A-Za-z0-9:]*"
_FM_RE = re.compile(rf"({_NAME})\.({_NAME})")
_JUMP_RE = re.compile(r"(\\?)#([0-9]+)")


class PglbSyntaxError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.text = text
        self.position = position


@dataclass(frozen=True)
class FocusMethod:
    focus: str
    method: str

    def __post_init__(self):
        if not re.fullmatch(_NAME, self.focus) or not re.fullmatch(_NAME, self.method):
            raise ValueError(f"bad focus-method pair {self.focus!r}.{self.method!r}")

    @classmethod
    def parse(cls, text: str) -> "FocusMethod":
        m = _FM_RE.fullmatch(text)
        if not m:
            raise ValueError(f"not a focus-method pair: {text!r}")
        return cls(m.group(1), m.group(2))

    def __str__(self):
        return f"{self.focus}.{self.method}"


@dataclass(frozen=True)
class Basic:
    fm: FocusMethod

    def __str__(self):
        return str(self.fm)


@dataclass(frozen=True)
class PosTest:
    fm: FocusMethod

    def __str__(self):
        return f"+{self.fm}"


@dataclass(frozen=True)
class NegTest:
    fm: FocusMethod

    def __str__(self):
        return f"-{self.fm}"


@dataclass(frozen=True)
class FwdJump:
    k: int

    def __str__(self):
        return f"#{self.k}"


@dataclass(frozen=True)
class BwdJump:
    k: int

    def __str__(self):
        return f"\\#{self.k}"


@dataclass(frozen=True)
class Halt:
    def __str__(self):
        return "!"


Instruction = Union[Basic, PosTest, NegTest, FwdJump, BwdJump, Halt]


@dataclass(frozen=True)
class Program:
    instructions: tuple

    def __post_init__(self):
        object.__setattr__(self, "instructions", tuple(self.instructions))
        if not self.instructions:
            raise ValueError("a program has at least one instruction")

    def __len__(self):
        return len(self.instructions)

    def __iter__(self):
        return iter(self.instructions)

    def __getitem__(self, i):
        return self.instructions[i]

    def __add__(self, other: "Program") -> "Program":
        return Program(self.instructions + other.instructions)

    def __str__(self):
        return render_pglb(self)


def _parse_token(token: str, text: str, pos: int) -> Instruction:
    if token == "!":
        return Halt()
    m = _JUMP_RE.fullmatch(token)
    if m:
        k = int(m.group(2))
        return BwdJump(k) if m.group(1) else FwdJump(k)
    if token.startswith(("#", "\\")):
        raise PglbSyntaxError(f"malformed jump {token!r}", text, pos)
    kind, body = Basic, token
    if token[0] == "+":
        kind, body = PosTest, token[1:]
    elif token[0] == "-":
        kind, body = NegTest, token[1:]
    m = _FM_RE.fullmatch(body)
    if m:
        return kind(FocusMethod(m.group(1), m.group(2)))
    if "." not in body:
        raise PglbSyntaxError(f"missing period in {token!r}", text, pos)
    offset = pos + (len(token) - len(body))
    focus, _, method = body.partition(".")
    for part, at in ((focus, offset), (method, offset + len(focus) + 1)):
        if not part:
            raise PglbSyntaxError(f"empty focus or method in {token!r}", text, at)
        if not part[0].isalpha() or not part[0].isascii():
            raise PglbSyntaxError(f"focus/method must start with a letter in {token!r}", text, at)
        for j, ch in enumerate(part):
            if not (ch.isascii() and (ch.isalnum() or ch == ":")):
                raise PglbSyntaxError(f"invalid character {ch!r}", text, at + j)
    raise PglbSyntaxError(f"invalid instruction {token!r}", text, pos)


def parse_pglb(text: str) -> Program:
    """Parse ``;``-separated PGLB text; newlines count as whitespace."""
    instructions = []
    start = 0
    for chunk in text.split(";"):
        stripped = chunk.strip()
        pos = start + (len(chunk) - len(chunk.lstrip()))
        if not stripped:
            raise PglbSyntaxError("empty instruction", text, pos)
        if any(ch.isspace() for ch in stripped):
            bad = pos + next(i for i, ch in enumerate(stripped) if ch.isspace())
            raise PglbSyntaxError("whitespace inside instruction", text, bad)
        instructions.append(_parse_token(stripped, text, pos))
        start += len(chunk) + 1
    return Program(tuple(instructions))


def render_pglb(p: Program) -> str:
    return ";".join(str(ins) for ins in p)


def occurring_basics(p: Program) -> Interface:
    """Focus-method pairs occurring in ``p`` as basic or test instructions."""
    return Interface(frozenset(
        Word(str(ins.fm)) for ins in p if isinstance(ins, (Basic, PosTest, NegTest))
    ))


def in_notation(p: Program, i: Interface) -> bool:
    """Whether ``p`` is a program of PGLB restricted to the basic instructions of ``i``."""
    if not is_fmi(i):
        raise ClassificationError(f"not a focus-method interface: {i}")
    return leq(occurring_basics(p), i)
