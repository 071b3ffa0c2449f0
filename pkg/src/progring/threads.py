"""
Regular threads as finite rooted graphs.

A node is termination ``S``, deadlock ``D`` or a postconditional composition
``Post(a, x, y)``: perform action ``a``, continue with ``x`` on reply true and
with ``y`` on reply false.  The action prefix ``a o T`` is ``Post(a, T, T)``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Union

from .interface import Interface, Word
from .pglb import Basic, BwdJump, FocusMethod, FwdJump, Halt, NegTest, PosTest, Program

__all__ = [
    "Stop", "Deadlock", "Post", "ThreadGraph", "STOP", "DEADLOCK",
    "extract", "actions_of", "bisimilar", "unfold", "format_tree", "CUT",
]

CUT = "cut"


@dataclass(frozen=True)
class Stop:
    def __str__(self):
        return "S"


@dataclass(frozen=True)
class Deadlock:
    def __str__(self):
        return "D"


@dataclass(frozen=True)
class Post:
    action: FocusMethod
    on_true: int
    on_false: int

    def __str__(self):
        return f"{self.action} ? {self.on_true} : {self.on_false}"


Node = Union[Stop, Deadlock, Post]


@dataclass(frozen=True)
class ThreadGraph:
    """Nodes are numbered in breadth-first order from the entry (true branch
    first), with a single ``S`` and a single ``D`` node at most."""
    nodes: tuple
    entry: int = 0

    def __post_init__(self):
        nodes, entry = _canonical(tuple(self.nodes), self.entry)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "entry", entry)

    @classmethod
    def from_term(cls, term) -> "ThreadGraph":
        """Build a finite thread from ``"S"``, ``"D"`` and ``(action, t, f)``
        tuples, e.g. ``("g.set:true", ("f.get", "S", "S"), "S")``."""
        nodes = []

        def build(t):
            if t == "S":
                nodes.append(Stop())
            elif t == "D":
                nodes.append(Deadlock())
            else:
                action, yes, no = t
                if not isinstance(action, FocusMethod):
                    action = FocusMethod.parse(action)
                k = len(nodes)
                nodes.append(None)
                nodes[k] = Post(action, build(yes), build(no))
                return k
            return len(nodes) - 1

        entry = build(term)
        return cls(tuple(nodes), entry)

    def __len__(self):
        return len(self.nodes)

    def __getitem__(self, i) -> Node:
        return self.nodes[i]

    @property
    def root(self) -> Node:
        return self.nodes[self.entry]

    def is_stop(self) -> bool:
        return isinstance(self.root, Stop)

    def is_deadlock(self) -> bool:
        return isinstance(self.root, Deadlock)

    def render(self) -> str:
        return "\n".join(f"{i}: {n}" for i, n in enumerate(self.nodes))

    def __str__(self):
        return self.render()


def _canonical(nodes, entry):
    order = {}
    sinks = {}
    count = 0
    queue = deque([entry])
    seen = {entry}
    while queue:
        k = queue.popleft()
        n = nodes[k]
        if isinstance(n, (Stop, Deadlock)):
            if type(n) not in sinks:
                sinks[type(n)] = count
                count += 1
            order[k] = sinks[type(n)]
            continue
        order[k] = count
        count += 1
        for succ in (n.on_true, n.on_false):
            if succ not in seen:
                seen.add(succ)
                queue.append(succ)
    out = [None] * count
    for old, new in order.items():
        n = nodes[old]
        if isinstance(n, Post):
            n = Post(n.action, order[n.on_true], order[n.on_false])
        out[new] = n
    return tuple(out), 0


STOP = ThreadGraph((Stop(),))
DEADLOCK = ThreadGraph((Deadlock(),))


def extract(p: Program) -> ThreadGraph:
    """The thread of a PGLB program.

    Running off either end, ``#0`` and any cycle of jumps give deadlock.
    """
    n = len(p)

    def resolve(pos):
        seen = set()
        while 1 <= pos <= n and pos not in seen:
            seen.add(pos)
            ins = p[pos - 1]
            if isinstance(ins, FwdJump):
                pos += ins.k
            elif isinstance(ins, BwdJump):
                pos -= ins.k
            elif isinstance(ins, Halt):
                return "S"
            else:
                return pos
        return "D"

    index = {"S": 0, "D": 1}
    nodes = [Stop(), Deadlock()]
    entry = resolve(1)
    todo = [entry]
    if entry not in index:
        index[entry] = len(nodes)
        nodes.append(None)
    while todo:
        pos = todo.pop()
        if pos in ("S", "D"):
            continue
        ins = p[pos - 1]
        nxt, skip = resolve(pos + 1), resolve(pos + 2)
        if isinstance(ins, Basic):
            yes = no = nxt
        elif isinstance(ins, PosTest):
            yes, no = nxt, skip
        else:
            assert isinstance(ins, NegTest)
            yes, no = skip, nxt
        for succ in (yes, no):
            if succ not in index:
                index[succ] = len(nodes)
                nodes.append(None)
                todo.append(succ)
        nodes[index[pos]] = Post(ins.fm, index[yes], index[no])
    return ThreadGraph(tuple(nodes), index[entry])


def actions_of(t: ThreadGraph) -> Interface:
    """Actions on nodes reachable from the entry."""
    return Interface(frozenset(Word(str(n.action)) for n in t.nodes if isinstance(n, Post)))


def bisimilar(t1: ThreadGraph, t2: ThreadGraph) -> bool:
    # Threads are deterministic, so the largest bisimulation relates the
    # entries iff no reachable pair of nodes disagrees locally.
    seen = set()
    todo = [(t1.entry, t2.entry)]
    while todo:
        pair = todo.pop()
        if pair in seen:
            continue
        seen.add(pair)
        a, b = t1[pair[0]], t2[pair[1]]
        if type(a) is not type(b):
            return False
        if isinstance(a, Post):
            if a.action != b.action:
                return False
            todo.append((a.on_true, b.on_true))
            todo.append((a.on_false, b.on_false))
    return True


def unfold(t: ThreadGraph, depth: int):
    """Depth-bounded tree: ``"S"``, ``"D"``, ``"cut"`` or ``(action, t, f)``.

    Depth counts node levels; whatever lies below the last level is ``cut``.
    """
    def go(k, d):
        if d <= 0:
            return CUT
        n = t[k]
        if isinstance(n, Stop):
            return "S"
        if isinstance(n, Deadlock):
            return "D"
        return (str(n.action), go(n.on_true, d - 1), go(n.on_false, d - 1))

    return go(t.entry, depth)


def format_tree(tree) -> str:
    if isinstance(tree, str):
        return tree
    action, yes, no = tree
    return f"({format_tree(yes)} <| {action} |> {format_tree(no)})"
