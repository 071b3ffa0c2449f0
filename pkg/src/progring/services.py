"""
Services: a method interface plus a reply function.

Service values are immutable.  ``step`` returns a :class:`Reply` carrying the
boolean reply and the successor service, or ``None`` when the method is not
offered.  The call history that determines replies is kept as explicit state.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .interface import (
    ClassificationError, EMPTY, Interface, InterfaceSyntaxError, LDC,
    interface, is_mi, leq,
)

__all__ = [
    "Reply", "Service", "EmptyService", "BooleanRegister", "Stack", "FsmService",
    "ServiceDefinitionError", "empty_service", "boolean_register", "stack", "counter",
    "load_fsm_service", "provides", "superprovides", "STACK_INTERFACE",
    "BOOLREG_INTERFACE",
]

STACK_INTERFACE = interface("(push:+topeq:)(0+1+2)+pop")
BOOLREG_INTERFACE = interface("set:(true+false)+get")


class ServiceDefinitionError(ValueError):
    pass


class Reply(NamedTuple):
    value: bool
    service: "Service"


class Service:
    mi: Interface = EMPTY

    @property
    def capability(self) -> Interface:
        """Methods for which ``step`` produces a reply."""
        return self.mi

    def step(self, method: str) -> Optional[Reply]:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.describe()


@dataclass(frozen=True)
class EmptyService(Service):
    def step(self, method):
        return None

    def describe(self):
        return "empty"


@dataclass(frozen=True)
class BooleanRegister(Service):
    value: bool = False
    mi = BOOLREG_INTERFACE

    def step(self, method):
        if method == "get":
            return Reply(self.value, self)
        if method == "set:true":
            return Reply(True, BooleanRegister(True))
        if method == "set:false":
            return Reply(False, BooleanRegister(False))
        return None

    def describe(self):
        return f"boolreg {str(self.value).lower()}"


@dataclass(frozen=True)
class Stack(Service):
    """Stack over ``0``, ``1`` and ``2``; ``contents`` lists the top first."""
    contents: tuple = ()
    mi = STACK_INTERFACE

    def step(self, method):
        if method == "pop":
            if self.contents:
                return Reply(True, Stack(self.contents[1:]))
            return Reply(False, self)
        op, _, arg = method.partition(":")
        if arg not in ("0", "1", "2"):
            return None
        i = int(arg)
        if op == "push":
            return Reply(True, Stack((i,) + self.contents))
        if op == "topeq":
            return Reply(bool(self.contents) and self.contents[0] == i, self)
        return None

    def describe(self):
        if not self.contents:
            return "stack"
        return "stack " + ",".join(map(str, self.contents))


class _Machine:
    # identity-hashed; shared by every state of one loaded service
    def __init__(self, name, mi, initial, table):
        self.name = name
        self.mi = mi
        self.initial = initial
        self.table = table


@dataclass(frozen=True)
class FsmService(Service):
    machine: _Machine = field(repr=False)
    state: str = ""

    @property
    def mi(self):
        return self.machine.mi

    def step(self, method):
        hit = self.machine.table.get((self.state, method))
        if hit is None:
            return None
        value, nxt = hit
        return Reply(value, FsmService(self.machine, nxt))

    def describe(self):
        return f"fsm {self.machine.name} state {self.state}"


def empty_service() -> EmptyService:
    return EmptyService()


def boolean_register(init: bool = False) -> BooleanRegister:
    return BooleanRegister(bool(init))


def stack(initial=()) -> Stack:
    """A stack holding ``initial``, listed top first."""
    contents = tuple(int(v) for v in initial)
    if any(v not in (0, 1, 2) for v in contents):
        raise ValueError(f"stack values must be 0, 1 or 2: {initial!r}")
    return Stack(contents)


def counter(n: int) -> Stack:
    """A stack holding ``n`` zeros."""
    if n < 0:
        raise ValueError("counter value must be a natural number")
    return Stack((0,) * n)


_STATE_RE = re.compile(r"[A-Za-z0-9]+")


def load_fsm_service(text: str) -> FsmService:
    """Load a finite-state service definition.

    The format is line based, with ``#`` comments::

        service toggle
        interface flip+read
        initial off
        off flip -> true on
        off read -> false off
        on flip -> false off
        on read -> true on

    Every state must answer every method of the interface.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if len(lines) < 3:
        raise ServiceDefinitionError("expected service, interface and initial lines")

    def header(k, keyword):
        lineno, line = lines[k]
        key, _, rest = line.partition(" ")
        if key != keyword or not rest.strip():
            raise ServiceDefinitionError(f"line {lineno}: expected '{keyword} ...'")
        return rest.strip()

    name = header(0, "service")
    try:
        mi = interface(header(1, "interface"))
    except InterfaceSyntaxError as e:
        raise ServiceDefinitionError(f"line {lines[1][0]}: {e}") from None
    if not is_mi(mi):
        raise ServiceDefinitionError(f"line {lines[1][0]}: interface {mi} is not a method interface")
    initial = header(2, "initial")
    if not _STATE_RE.fullmatch(initial):
        raise ServiceDefinitionError(f"line {lines[2][0]}: bad state id {initial!r}")

    methods = {w.letters for w in mi.words}
    table = {}
    states = {initial}
    for lineno, line in lines[3:]:
        parts = line.split()
        if len(parts) != 5 or parts[2] != "->" or parts[3] not in ("true", "false"):
            raise ServiceDefinitionError(
                f"line {lineno}: expected '<state> <method> -> <true|false> <state>'")
        src, method, _, reply, dst = parts
        for s in (src, dst):
            if not _STATE_RE.fullmatch(s):
                raise ServiceDefinitionError(f"line {lineno}: bad state id {s!r}")
        if not set(method) <= LDC:
            raise ServiceDefinitionError(f"line {lineno}: bad method word {method!r}")
        if method not in methods:
            raise ServiceDefinitionError(f"line {lineno}: method {method} not in interface")
        if (src, method) in table:
            raise ServiceDefinitionError(f"line {lineno}: duplicate row for ({src}, {method})")
        table[(src, method)] = (reply == "true", dst)
        states.update((src, dst))

    for s in sorted(states):
        for m in sorted(methods):
            if (s, m) not in table:
                raise ServiceDefinitionError(f"no row for state {s} and method {m}")
    return FsmService(_Machine(name, mi, initial, table), initial)


def _check_mi(i: Interface):
    if not is_mi(i):
        raise ClassificationError(f"not a method interface: {i}")


def provides(h: Service, i: Interface) -> bool:
    _check_mi(i)
    return leq(i, h.capability)


def superprovides(h: Service, i: Interface) -> bool:
    # Provision is element-wise, so some j above i is provided exactly
    # when i itself is.
    return provides(h, i)
