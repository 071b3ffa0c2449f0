"""
Instruction sequence, thread and service components, and the use and apply
compositions between them.

An instruction sequence component pairs a focus-method interface with a
PGLB program; by default the program must subrequire the interface.  A
service component pairs a method interface with a service that provides it.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from .interface import (
    EMPTY, ClassificationError, Interface, derivative, filter_complement,
    is_fmi, is_mi, leq, seq, word,
)
from .pglb import FwdJump, Program, occurring_basics
from .services import EmptyService, Service, provides
from .threads import DEADLOCK, Deadlock, Post, Stop, ThreadGraph, actions_of, extract

__all__ = [
    "BudgetExhausted", "Mode", "REQUIRES", "SUBREQUIRES",
    "InseqComponent", "ThreadComponent", "ServiceComponent", "ValidationReport",
    "requires", "subrequires", "properly_subrequires",
    "thread_requires", "thread_subrequires", "thread_properly_subrequires",
    "n_requires", "range_requires", "validate",
    "use_thread", "apply_thread", "use_component", "apply_component",
    "use_matches", "apply_matches", "execute",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 10000


class BudgetExhausted(RuntimeError):
    """A composition did not settle within its budget.

    ``interface`` carries the interface part of a matching component
    composition, when there is one.
    """

    def __init__(self, budget: int, interface: Optional[Interface] = None):
        super().__init__(f"budget of {budget} exhausted")
        self.budget = budget
        self.interface = interface


def _check_fmi(i: Interface):
    if not is_fmi(i):
        raise ClassificationError(f"not a focus-method interface: {i}")


# --------------------------------------------------------------------------
# The requires family

def _requires(found: Interface, i: Interface) -> bool:
    _check_fmi(i)
    return found == i


def _subrequires(found: Interface, i: Interface) -> bool:
    _check_fmi(i)
    return leq(found, i)


def requires(p: Program, i: Interface) -> bool:
    return _requires(occurring_basics(p), i)


def subrequires(p: Program, i: Interface) -> bool:
    return _subrequires(occurring_basics(p), i)


def properly_subrequires(p: Program, i: Interface) -> bool:
    found = occurring_basics(p)
    return _subrequires(found, i) and found != i


def thread_requires(t: ThreadGraph, i: Interface) -> bool:
    return _requires(actions_of(t), i)


def thread_subrequires(t: ThreadGraph, i: Interface) -> bool:
    return _subrequires(actions_of(t), i)


def thread_properly_subrequires(t: ThreadGraph, i: Interface) -> bool:
    found = actions_of(t)
    return _subrequires(found, i) and found != i


def _jump_in(p: Program, n: int) -> ThreadGraph:
    if n < 1:
        raise ValueError("n must be at least 1")
    return extract(Program((FwdJump(n),) + p.instructions))


def n_requires(p: Program, i: Interface, n: int, sub: bool = False) -> bool:
    """Whether the thread of ``#n;p`` (sub)requires ``i``."""
    t = _jump_in(p, n)
    return thread_subrequires(t, i) if sub else thread_requires(t, i)


def range_requires(p: Program, i: Interface, n: int, sub: bool = False) -> bool:
    """``p`` (sub-)m-requires ``i`` for every m in 1..n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return all(n_requires(p, i, m, sub) for m in range(1, n + 1))


# --------------------------------------------------------------------------
# Components

_MODE_RE = re.compile(r"(sub-)?(requires|subrequires|n-requires|range-requires)(?:\s+(\d+))?")


@dataclass(frozen=True)
class Mode:
    """How a component body must match its interface.

    ``kind`` is ``requires``, ``subrequires``, ``n-requires`` or
    ``range-requires``; the last two take ``n`` and may be weakened with
    ``sub``.
    """
    kind: str = "subrequires"
    n: Optional[int] = None
    sub: bool = False

    def __post_init__(self):
        if self.kind in ("n-requires", "range-requires"):
            if self.n is None or self.n < 1:
                raise ValueError(f"{self.kind} needs n >= 1")
        elif self.kind in ("requires", "subrequires"):
            if self.n is not None or self.sub:
                raise ValueError(f"{self.kind} takes no count")
        else:
            raise ValueError(f"unknown mode {self.kind!r}")

    @classmethod
    def parse(cls, text: str) -> "Mode":
        m = _MODE_RE.fullmatch(text.strip())
        if not m:
            raise ValueError(f"bad mode {text!r}")
        sub, kind, n = m.groups()
        if sub and kind in ("requires", "subrequires"):
            raise ValueError(f"bad mode {text!r}")
        return cls(kind, int(n) if n is not None else None, bool(sub))

    def __str__(self):
        prefix = "sub-" if self.sub else ""
        suffix = f" {self.n}" if self.n is not None else ""
        return f"{prefix}{self.kind}{suffix}"


REQUIRES = Mode("requires")
SUBREQUIRES = Mode("subrequires")


@dataclass(frozen=True)
class InseqComponent:
    interface: Interface
    body: Program
    mode: Mode = SUBREQUIRES


@dataclass(frozen=True)
class ThreadComponent:
    interface: Interface
    body: ThreadGraph
    mode: Mode = SUBREQUIRES


@dataclass(frozen=True)
class ServiceComponent:
    interface: Interface
    body: Service


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    check: str
    declared: Interface
    found: Optional[Interface] = None
    message: str = ""

    def __bool__(self):
        return self.ok

    def __str__(self):
        status = "pass" if self.ok else "fail"
        out = f"{status}: {self.check}"
        if self.message:
            out += f" ({self.message})"
        return out


def validate(c: Union[InseqComponent, ThreadComponent, ServiceComponent]) -> ValidationReport:
    """Check a component body against its interface under the component's mode."""
    i = c.interface
    if isinstance(c, ServiceComponent):
        if not is_mi(i):
            return ValidationReport(False, "provides", i, message="interface is not a method interface")
        cap = c.body.capability
        ok = provides(c.body, i)
        return ValidationReport(ok, "provides", i, cap, "" if ok else "service lacks some methods")
    if not is_fmi(i):
        return ValidationReport(False, str(c.mode), i, message="interface is not a focus-method interface")
    mode = c.mode
    if isinstance(c, ThreadComponent):
        found = actions_of(c.body)
        if mode.kind == "requires":
            ok = found == i
        elif mode.kind == "subrequires":
            ok = leq(found, i)
        else:
            return ValidationReport(False, str(mode), i, found, "mode applies to instruction sequences only")
        return ValidationReport(ok, str(mode), i, found)
    p = c.body
    if mode.kind == "requires":
        found = occurring_basics(p)
        return ValidationReport(found == i, str(mode), i, found)
    if mode.kind == "subrequires":
        found = occurring_basics(p)
        return ValidationReport(leq(found, i), str(mode), i, found)
    if mode.kind == "n-requires":
        found = actions_of(_jump_in(p, mode.n))
        ok = n_requires(p, i, mode.n, mode.sub)
        return ValidationReport(ok, str(mode), i, found)
    for m in range(1, mode.n + 1):
        if not n_requires(p, i, m, mode.sub):
            found = actions_of(_jump_in(p, m))
            return ValidationReport(False, str(mode), i, found, f"fails at m={m}")
    return ValidationReport(True, str(mode), i)


# --------------------------------------------------------------------------
# Thread-service compositions

def _split(action) -> tuple:
    return action.focus, action.method


def use_thread(t: ThreadGraph, focus: str, h: Service, budget: int = DEFAULT_BUDGET) -> ThreadGraph:
    """The thread ``t /focus h``.

    Actions on ``focus`` are processed by ``h`` and disappear; other
    actions remain, with ``h`` carried along both branches.  Product states
    are shared, so finite-state services give finite results.  Raises
    :class:`BudgetExhausted` after expanding ``budget`` product states.
    """
    resolved = {}
    expanded = 0

    def settle(state):
        # follow absorbed focus steps until a visible node appears
        nonlocal expanded
        path = []
        on_path = set()
        while state not in resolved:
            if state in on_path:
                result = "D"
                break
            k, service = state
            n = t[k]
            if isinstance(n, Stop):
                result = "S"
                break
            if isinstance(n, Deadlock):
                result = "D"
                break
            expanded += 1
            if expanded > budget:
                raise BudgetExhausted(budget)
            path.append(state)
            on_path.add(state)
            f, m = _split(n.action)
            if f != focus:
                result = state
                break
            reply = service.step(m)
            if reply is None:
                result = "D"
                break
            state = (n.on_true if reply.value else n.on_false, reply.service)
        else:
            result = resolved[state]
        for s in path:
            resolved[s] = result
        return result

    index = {"S": 0, "D": 1}
    nodes = [Stop(), Deadlock()]
    entry = settle((t.entry, h))
    todo = []

    def node_of(key):
        if key not in index:
            index[key] = len(nodes)
            nodes.append(None)
            todo.append(key)
        return index[key]

    entry_id = node_of(entry)
    while todo:
        key = todo.pop()
        k, service = key
        n = t[k]
        yes = node_of(settle((n.on_true, service)))
        no = node_of(settle((n.on_false, service)))
        nodes[index[key]] = Post(n.action, yes, no)
    return ThreadGraph(tuple(nodes), entry_id)


def apply_thread(t: ThreadGraph, focus: str, h: Service, budget: int = DEFAULT_BUDGET) -> Optional[Service]:
    """The service ``t *focus h``, or ``None`` when the outcome is the empty
    service because ``t`` deadlocks, calls an unoffered method or acts on a
    different focus.  Raises :class:`BudgetExhausted` after ``budget`` steps.
    """
    k = t.entry
    steps = 0
    while True:
        n = t[k]
        if isinstance(n, Stop):
            return h
        if isinstance(n, Deadlock):
            return None
        f, m = _split(n.action)
        if f != focus:
            return None
        if steps == budget:
            raise BudgetExhausted(budget)
        steps += 1
        reply = h.step(m)
        if reply is None:
            return None
        k = n.on_true if reply.value else n.on_false
        h = reply.service


def _composable(c: InseqComponent, s: ServiceComponent) -> bool:
    return bool(validate(c)) and bool(validate(s))


def use_matches(c: InseqComponent, focus: str, s: ServiceComponent) -> bool:
    """Both components are valid and the ``focus.`` derivative of the
    inseq interface lies below the service interface."""
    return _composable(c, s) and leq(derivative(focus + ".", c.interface), s.interface)


def apply_matches(c: InseqComponent, focus: str, s: ServiceComponent) -> bool:
    """Both components are valid and the inseq interface lies below
    ``focus.j`` for the service interface ``j``."""
    return _composable(c, s) and leq(c.interface, seq(word(focus + "."), s.interface))


def use_component(c: InseqComponent, focus: str, s: ServiceComponent,
                  budget: int = DEFAULT_BUDGET) -> tuple:
    """``(i, P) /focus (j, H)`` as a pair of interface and thread.

    Matching requires both components to be valid and the ``focus.``
    derivative of ``i`` to lie below ``j``; otherwise the result is
    ``(@, D)``.
    """
    if not use_matches(c, focus, s):
        return EMPTY, DEADLOCK
    out = filter_complement(focus + ".", c.interface)
    try:
        return out, use_thread(extract(c.body), focus, s.body, budget)
    except BudgetExhausted as e:
        raise BudgetExhausted(e.budget, out) from None


def apply_component(c: InseqComponent, focus: str, s: ServiceComponent,
                    budget: int = DEFAULT_BUDGET) -> tuple:
    """``(i, P) *focus (j, H)`` as a pair of interface and service.

    Matching requires both components to be valid and ``i`` to lie below
    ``focus.j``; otherwise the result is ``(@, empty service)``.
    """
    if not apply_matches(c, focus, s):
        return EMPTY, EmptyService()
    try:
        result = apply_thread(extract(c.body), focus, s.body, budget)
    except BudgetExhausted as e:
        raise BudgetExhausted(e.budget, s.interface) from None
    return s.interface, (EmptyService() if result is None else result)


def execute(t: ThreadGraph, services: dict, budget: int = DEFAULT_BUDGET) -> tuple:
    """Run ``t`` against services keyed by focus.

    Returns the list of ``(action, reply)`` steps and the final ``"S"`` or
    ``"D"``.  A reply of ``None`` marks an action nobody answers, which
    deadlocks the run.
    """
    trace = []
    k = t.entry
    while True:
        n = t[k]
        if isinstance(n, Stop):
            return trace, "S"
        if isinstance(n, Deadlock):
            return trace, "D"
        if len(trace) == budget:
            raise BudgetExhausted(budget)
        f, m = _split(n.action)
        h = services.get(f)
        reply = None if h is None else h.step(m)
        if reply is None:
            trace.append((n.action, None))
            return trace, "D"
        trace.append((n.action, reply.value))
        services = {**services, f: reply.service}
        k = n.on_true if reply.value else n.on_false
