"""
Focus-method interfaces as elements of the initial distributive right
progression ring over single-character constants.

Terms are built from constants (letters, digits, ``:`` and ``.``), the empty
interface ``@``, alternative composition ``+`` and sequential composition
(juxtaposition).  Every closed term has a unique normal form, an
:class:`Interface`, which is a finite set of :class:`Word` objects.

A word is a product of constants, optionally terminated by ``@``.  Two facts
of the equational theory shape the normal form:

* ``X.@`` is not equal to ``X`` (there is no right-zero law), so deadlocked
  words are first-class.
* Left distributivity together with ``X + @ = X`` gives
  ``X.Y = X.(Y + @) = X.Y + X.@``.  A deadlocked word ``u@`` is therefore
  absorbed by any other word that has ``u`` as a proper prefix.

The stored word set is the reduced representative: absorbed deadlocked
words are dropped, so equality of interfaces is equality of word sets.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable, Union

__all__ = [
    "LETTERS", "LDC", "LDCP",
    "InterfaceSyntaxError", "ClassificationError",
    "Delta", "Atom", "Sum", "Seq", "Term",
    "Word", "Interface", "EMPTY",
    "parse_interface", "normalize", "interface",
    "plus", "seq", "leq", "word", "derivative", "filter_complement",
    "is_fmi", "fmi_split", "is_mi", "render",
]

LETTERS = frozenset(string.ascii_letters)
DIGITS = frozenset(string.digits)
LDC = LETTERS | DIGITS | {":"}
LDCP = LDC | {"."}

DELTA_CHAR = "@"


class InterfaceSyntaxError(ValueError):
    """Raised on malformed interface expressions; ``position`` is 0-based."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


class ClassificationError(ValueError):
    pass


# --------------------------------------------------------------------------
# Terms

@dataclass(frozen=True)
class Delta:
    def __str__(self):
        return DELTA_CHAR


@dataclass(frozen=True)
class Atom:
    symbol: str

    def __post_init__(self):
        if len(self.symbol) != 1 or self.symbol not in LDCP:
            raise ValueError(f"not a constant: {self.symbol!r}")

    def __str__(self):
        return self.symbol


@dataclass(frozen=True)
class Sum:
    left: "Term"
    right: "Term"

    def __str__(self):
        return f"{self.left}+{self.right}"


@dataclass(frozen=True)
class Seq:
    left: "Term"
    right: "Term"

    def __str__(self):
        return f"{_factor_str(self.left)}{_factor_str(self.right)}"


def _factor_str(t: "Term") -> str:
    return f"({t})" if isinstance(t, Sum) else str(t)


Term = Union[Delta, Atom, Sum, Seq]


class _Parser:
    # expr := term ('+' term)* ; term := factor+ ; factor := const | '@' | '(' expr ')'

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message, pos=None):
        return InterfaceSyntaxError(message, self.text, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def parse(self) -> Term:
        t = self.expr()
        if self.peek() is not None:
            ch = self.text[self.pos]
            if ch == ")":
                raise self.error("unbalanced ')'")
            raise self.error(f"unexpected character {ch!r}")
        return t

    def expr(self) -> Term:
        t = self.term()
        while self.peek() == "+":
            self.pos += 1
            t = Sum(t, self.term())
        return t

    def term(self) -> Term:
        factors = [self.factor()]
        while True:
            ch = self.peek()
            if ch is None or ch in "+)":
                break
            factors.append(self.factor())
        # right-nested chain; immaterial by associativity
        t = factors[-1]
        for f in reversed(factors[:-1]):
            t = Seq(f, t)
        return t

    def factor(self) -> Term:
        ch = self.peek()
        if ch is None:
            raise self.error("unexpected end of expression")
        if ch == "(":
            start = self.pos
            self.pos += 1
            t = self.expr()
            if self.peek() != ")":
                raise self.error("missing ')'", start if self.peek() is None else None)
            self.pos += 1
            return t
        if ch == DELTA_CHAR:
            self.pos += 1
            return Delta()
        if ch in LDCP:
            self.pos += 1
            return Atom(ch)
        if ch in "+)":
            raise self.error(f"expected operand before {ch!r}")
        raise self.error(f"invalid character {ch!r}")


def parse_interface(text: str) -> Term:
    """Parse an interface expression into a term.

    ``@`` is the empty interface, ``+`` is alternative composition and
    juxtaposition is sequential composition.  The period is an ordinary
    constant.  Whitespace between tokens is ignored.

    >>> parse_interface("a(b+@)c")
    Seq(left=Atom(symbol='a'), right=Seq(left=Sum(left=Atom(symbol='b'), right=Delta()), right=Atom(symbol='c')))
    """
    return _Parser(text).parse()


# --------------------------------------------------------------------------
# Normal forms

@dataclass(frozen=True, order=True)
class Word:
    """A product of constants, deadlocked if it ends in ``@``.

    Ordering is by character code with the deadlocked variant directly
    after its plain twin.
    """
    letters: str
    deadlocked: bool = False

    def __post_init__(self):
        if not self.letters:
            raise ValueError("a word needs at least one constant")
        bad = set(self.letters) - LDCP
        if bad:
            raise ValueError(f"not constants: {''.join(sorted(bad))!r}")

    def __str__(self):
        return self.letters + (DELTA_CHAR if self.deadlocked else "")


def _reduce(words: Iterable[Word]) -> frozenset:
    words = set(words)
    dead = [w for w in words if w.deadlocked]
    if not dead:
        return frozenset(words)
    for w in dead:
        n = len(w.letters)
        if any(len(v.letters) > n and v.letters.startswith(w.letters) for v in words):
            words.discard(w)
    return frozenset(words)


@dataclass(frozen=True)
class Interface:
    """Canonical form of an interface; the empty set is ``@``."""
    words: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "words", _reduce(self.words))

    def __iter__(self):
        return iter(sorted(self.words))

    def __len__(self):
        return len(self.words)

    def __bool__(self):
        return bool(self.words)

    def __contains__(self, w):
        if isinstance(w, str):
            w = Word(w)
        return w in self.words

    def __add__(self, other: "Interface") -> "Interface":
        return plus(self, other)

    def __mul__(self, other: "Interface") -> "Interface":
        return seq(self, other)

    def __le__(self, other: "Interface") -> bool:
        return leq(self, other)

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"Interface({render(self)!r})"


EMPTY = Interface()


def word(letters: str, deadlocked: bool = False) -> Interface:
    """The interface consisting of a single word."""
    return Interface(frozenset([Word(letters, deadlocked)]))


def plus(x: Interface, y: Interface) -> Interface:
    return Interface(x.words | y.words)


def seq(x: Interface, y: Interface) -> Interface:
    out = set()
    for u in x.words:
        if u.deadlocked:
            out.add(u)
        elif not y.words:
            out.add(Word(u.letters, True))
        else:
            out.update(Word(u.letters + v.letters, v.deadlocked) for v in y.words)
    return Interface(frozenset(out))


def leq(x: Interface, y: Interface) -> bool:
    """``x`` is below ``y``, that is ``x + y == y``."""
    for w in x.words:
        if w in y.words:
            continue
        if w.deadlocked and any(
            len(v.letters) > len(w.letters) and v.letters.startswith(w.letters)
            for v in y.words
        ):
            continue
        return False
    return True


def normalize(t: Term) -> Interface:
    if isinstance(t, Delta):
        return EMPTY
    if isinstance(t, Atom):
        return word(t.symbol)
    if isinstance(t, Sum):
        return plus(normalize(t.left), normalize(t.right))
    if isinstance(t, Seq):
        return seq(normalize(t.left), normalize(t.right))
    raise TypeError(f"not a term: {t!r}")


def interface(text: str) -> Interface:
    """Parse and normalize in one go."""
    return normalize(parse_interface(text))


def _check_beta(beta: str):
    if not beta:
        raise ValueError("selector path must be nonempty")
    bad = set(beta) - LDCP
    if bad:
        raise ValueError(f"selector path has non-constants: {''.join(sorted(bad))!r}")


def derivative(beta: str, x: Interface) -> Interface:
    """What remains of ``x`` after following the selector path ``beta``.

    This is the largest ``Y`` with ``x + beta.Y`` below ``x``.

    >>> render(derivative("a.b", interface("a. + a.b + a.bc")))
    'c'
    """
    _check_beta(beta)
    n = len(beta)
    return Interface(frozenset(
        Word(w.letters[n:], w.deadlocked)
        for w in x.words
        if len(w.letters) > n and w.letters.startswith(beta)
    ))


def _filter_keeps(beta: str, w: Word) -> bool:
    # Walk the defining clauses along the word; a word ending in @ hands
    # the remaining filter to delta, which yields delta.
    letters = w.letters
    for k, u in enumerate(beta):
        if k == len(letters):
            return False  # reached the trailing @
        if letters[k] != u:
            return True
        if k == len(beta) - 1:
            return False
        if k == len(letters) - 1 and not w.deadlocked:
            return True  # single constant left under a longer filter
    raise AssertionError("unreachable")


def filter_complement(beta: str, x: Interface) -> Interface:
    """Remove every progression of ``x`` that starts with ``beta``.

    >>> render(filter_complement("a.b", interface("a. + a.b + a.bc")))
    'a.'
    """
    _check_beta(beta)
    return Interface(frozenset(w for w in x.words if _filter_keeps(beta, w)))


# --------------------------------------------------------------------------
# Classification

def _fmi_parts(w: Word):
    if w.deadlocked or w.letters.count(".") != 1:
        return None
    focus, method = w.letters.split(".")
    if not focus or not method or focus[0] not in LETTERS or method[0] not in LETTERS:
        return None
    return focus, method


def is_fmi(x: Interface) -> bool:
    """Each word is ``focus.method`` with one period and no trailing ``@``."""
    return all(_fmi_parts(w) is not None for w in x.words)


def fmi_split(x: Interface) -> dict:
    """Group an FMI by focus, mapping each focus to its method interface."""
    if not x.words:
        raise ClassificationError("the empty interface has no foci")
    groups = {}
    for w in sorted(x.words):
        parts = _fmi_parts(w)
        if parts is None:
            raise ClassificationError(f"not a focus-method word: {w}")
        groups.setdefault(parts[0], set()).add(Word(parts[1]))
    return {f: Interface(frozenset(ms)) for f, ms in groups.items()}


def is_mi(x: Interface) -> bool:
    return all(not w.deadlocked and "." not in w.letters for w in x.words)


def render(x: Interface) -> str:
    if not x.words:
        return DELTA_CHAR
    return "+".join(str(w) for w in sorted(x.words))
