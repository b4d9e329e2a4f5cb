"""Well-formed names: the term language shared by events, beliefs and rules.

A name is a symbol (``John``, ``5``, ``True``), a variable (``[x]``) or a
composed name (``Has(John, [x])``).  Symbols compare case-insensitively and
numeric symbols compare by value, so ``True`` equals ``true`` and ``5``
equals ``5.0``.  The symbol ``SELF`` is reserved for the owning agent and
``*`` is a wildcard that matches any name without binding.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator

SELF_TEXT = "SELF"
UNIVERSAL_TEXT = "*"

_NUMBER_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT_RE = re.compile(r"[A-Za-z0-9_-]+")
_TOKEN_CHARS = re.compile(r"[A-Za-z0-9_.+-]+")


class NameSyntaxError(ValueError):
    """Raised when a textual name cannot be parsed; carries the offset."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


def _format_number(value: float) -> str:
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


class Name:
    """Base class for Symbol, Variable and ComposedName."""

    def variables(self) -> Iterator["Variable"]:
        raise NotImplementedError

    def is_ground(self) -> bool:
        return next(self.variables(), None) is None

    def canonical(self) -> str:
        """Case- and number-normalised text, used for keys and tie-breaks."""
        raise NotImplementedError


@dataclass(frozen=True, eq=False, repr=False)
class Symbol(Name):
    text: str
    numeric: float | None = field(init=False, compare=False, default=None)

    def __post_init__(self):
        if not self.text:
            raise ValueError("symbol text must be nonempty")
        if self.text == UNIVERSAL_TEXT:
            return
        if _NUMBER_RE.fullmatch(self.text):
            object.__setattr__(self, "numeric", float(self.text))
        elif not _IDENT_RE.fullmatch(self.text):
            raise ValueError(f"illegal symbol text {self.text!r}")

    @property
    def is_universal(self) -> bool:
        return self.text == UNIVERSAL_TEXT

    @property
    def is_self(self) -> bool:
        return self.text.casefold() == "self"

    def _key(self):
        if self.numeric is not None:
            return ("n", self.numeric)
        return ("s", self.text.casefold())

    def canonical(self) -> str:
        if self.numeric is not None:
            return _format_number(self.numeric)
        return self.text.casefold()

    def variables(self) -> Iterator["Variable"]:
        return iter(())

    def __eq__(self, other):
        return isinstance(other, Symbol) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __str__(self):
        return self.text

    def __repr__(self):
        return f"Symbol({self.text!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Variable(Name):
    text: str

    def __post_init__(self):
        if not _IDENT_RE.fullmatch(self.text):
            raise ValueError(f"illegal variable text {self.text!r}")

    def canonical(self) -> str:
        return f"[{self.text.casefold()}]"

    def variables(self) -> Iterator["Variable"]:
        yield self

    def __eq__(self, other):
        return isinstance(other, Variable) and self.text.casefold() == other.text.casefold()

    def __hash__(self):
        return hash(("v", self.text.casefold()))

    def __str__(self):
        return f"[{self.text}]"

    def __repr__(self):
        return f"Variable({self.text!r})"


@dataclass(frozen=True, eq=False, repr=False)
class ComposedName(Name):
    root: Symbol
    terms: tuple[Name, ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("composed name needs at least one inner term")
        if self.root.is_universal or self.root.numeric is not None:
            raise ValueError(f"composed name root must be a textual symbol, got {self.root}")

    def canonical(self) -> str:
        inner = ", ".join(t.canonical() for t in self.terms)
        return f"{self.root.canonical()}({inner})"

    def variables(self) -> Iterator[Variable]:
        for term in self.terms:
            yield from term.variables()

    def __eq__(self, other):
        return (
            isinstance(other, ComposedName)
            and self.root == other.root
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(("c", self.root, self.terms))

    def __str__(self):
        inner = ", ".join(str(t) for t in self.terms)
        return f"{self.root}({inner})"

    def __repr__(self):
        return f"ComposedName({self.root!r}, {list(self.terms)!r})"


SELF = Symbol(SELF_TEXT)
UNIVERSAL = Symbol(UNIVERSAL_TEXT)
TRUE = Symbol("True")
FALSE = Symbol("False")


def num_symbol(value: float | int) -> Symbol:
    """Symbol holding a number in canonical textual form."""
    return Symbol(_format_number(float(value)))


def composed(root: str | Symbol, *terms: "Name | str | float | int") -> ComposedName:
    """Convenience constructor: ``composed("Has", "John", "[x]")``."""
    root_sym = root if isinstance(root, Symbol) else Symbol(root)
    return ComposedName(root_sym, tuple(coerce_name(t) for t in terms))


def coerce_name(value: "Name | str | float | int") -> Name:
    if isinstance(value, Name):
        return value
    if isinstance(value, bool):
        return TRUE if value else FALSE
    if isinstance(value, (int, float)):
        return num_symbol(value)
    return parse_name(value)


# ---------------------------------------------------------------------------
# Parsing


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> NameSyntaxError:
        return NameSyntaxError(message, self.text, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def token(self) -> str:
        m = _TOKEN_CHARS.match(self.text, self.pos)
        if not m:
            raise self.error("expected a symbol or number")
        self.pos = m.end()
        return m.group()

    def symbol(self) -> Symbol:
        start = self.pos
        text = self.token()
        try:
            return Symbol(text)
        except ValueError as exc:
            self.pos = start
            raise self.error(str(exc))

    def name(self) -> Name:
        self.skip_ws()
        ch = self.peek()
        if ch == "[":
            self.pos += 1
            self.skip_ws()
            start = self.pos
            text = self.token()
            try:
                var = Variable(text)
            except ValueError as exc:
                self.pos = start
                raise self.error(str(exc))
            self.skip_ws()
            self.expect("]")
            return var
        if ch == "*":
            self.pos += 1
            return UNIVERSAL
        if not ch:
            raise self.error("unexpected end of input")
        if ch in ")],(":
            raise self.error(f"unexpected {ch!r}")
        sym = self.symbol()
        self.skip_ws()
        if self.peek() == "(":
            self.pos += 1
            terms = [self.name()]
            self.skip_ws()
            while self.peek() == ",":
                self.pos += 1
                terms.append(self.name())
                self.skip_ws()
            self.expect(")")
            return ComposedName(sym, tuple(terms))
        return sym


def parse_name(text: str) -> Name:
    """Parse the canonical textual form; ``parse_name(str(n)) == n``."""
    parser = _Parser(text)
    result = parser.name()
    parser.skip_ws()
    if parser.pos != len(text):
        raise parser.error("trailing characters after name")
    return result


# ---------------------------------------------------------------------------
# Substitutions and unification


class SubstitutionSet:
    """Immutable variable bindings plus the certainty of the beliefs used.

    Bindings may chain variable-to-variable; resolution follows chains and
    the occurs check keeps them acyclic.
    """

    __slots__ = ("_bindings", "certainty")

    def __init__(self, bindings: dict | None = None, certainty: float = 1.0):
        self._bindings: dict[tuple, tuple[Variable, Name]] = bindings or {}
        self.certainty = certainty

    def __len__(self):
        return len(self._bindings)

    def __bool__(self):
        # A successful empty substitution is still a success; never test
        # truthiness for match/no-match, compare against None instead.
        return True

    def get(self, var: Variable) -> Name | None:
        entry = self._bindings.get(("v", var.text.casefold()))
        return entry[1] if entry else None

    def items(self) -> list[tuple[Variable, Name]]:
        return list(self._bindings.values())

    def resolve(self, name: Name) -> Name:
        """Follow variable chains one representative deep (no recursion)."""
        seen = set()
        while isinstance(name, Variable):
            key = ("v", name.text.casefold())
            if key in seen:
                break
            seen.add(key)
            bound = self._bindings.get(key)
            if bound is None:
                return name
            name = bound[1]
        return name

    def apply(self, name: Name) -> Name:
        """Replace every bound variable recursively; unbound ones remain."""
        resolved = self.resolve(name)
        if isinstance(resolved, ComposedName):
            terms = tuple(self.apply(t) for t in resolved.terms)
            if terms == resolved.terms:
                return resolved
            return ComposedName(resolved.root, terms)
        return resolved

    def _occurs(self, var: Variable, value: Name) -> bool:
        value = self.resolve(value)
        if isinstance(value, Variable):
            return value == var
        if isinstance(value, ComposedName):
            return any(self._occurs(var, t) for t in value.terms)
        return False

    def bind(self, var: Variable, value: Name) -> "SubstitutionSet | None":
        value = self.resolve(value)
        if isinstance(value, Variable) and value == var:
            return self
        if self._occurs(var, value):
            return None
        bindings = dict(self._bindings)
        bindings[("v", var.text.casefold())] = (var, value)
        return SubstitutionSet(bindings, self.certainty)

    def scaled(self, certainty: float) -> "SubstitutionSet":
        if certainty == 1.0:
            return self
        return SubstitutionSet(dict(self._bindings), self.certainty * certainty)

    def as_dict(self) -> dict[str, Name]:
        return {var.text: self.apply(var) for var, _ in self._bindings.values()}

    def canonical_bindings(self) -> frozenset:
        return frozenset(
            (key, self.apply(var).canonical()) for key, (var, _) in self._bindings.items()
        )

    def __eq__(self, other):
        return (
            isinstance(other, SubstitutionSet)
            and self.canonical_bindings() == other.canonical_bindings()
        )

    def __hash__(self):
        return hash(self.canonical_bindings())

    def __repr__(self):
        inner = ", ".join(f"[{v.text}]->{self.apply(v)}" for v, _ in self._bindings.values())
        return f"SubstitutionSet({{{inner}}}, certainty={self.certainty:g})"


def unify(a: Name, b: Name, seed: SubstitutionSet | None = None) -> SubstitutionSet | None:
    """Most general unifier of ``a`` and ``b`` extending ``seed``, or None.

    The ``*`` wildcard matches anything without binding.  ``SELF`` must
    already have been replaced by the caller.
    """
    subst = seed if seed is not None else SubstitutionSet()
    stack: list[tuple[Name, Name]] = [(a, b)]
    while stack:
        x, y = stack.pop()
        x = subst.resolve(x)
        y = subst.resolve(y)
        if isinstance(x, Symbol) and x.is_universal:
            continue
        if isinstance(y, Symbol) and y.is_universal:
            continue
        if isinstance(x, Variable):
            next_subst = subst.bind(x, y)
            if next_subst is None:
                return None
            subst = next_subst
        elif isinstance(y, Variable):
            next_subst = subst.bind(y, x)
            if next_subst is None:
                return None
            subst = next_subst
        elif isinstance(x, Symbol) and isinstance(y, Symbol):
            if x != y:
                return None
        elif isinstance(x, ComposedName) and isinstance(y, ComposedName):
            if x.root != y.root or len(x.terms) != len(y.terms):
                return None
            stack.extend(zip(x.terms, y.terms))
        else:
            return None
    return subst


def apply_substitution(name: Name, subst: SubstitutionSet) -> Name:
    return subst.apply(name)


def replace_symbol(name: Name, old: Symbol, new: Name) -> Name:
    """Replace occurrences of a symbol, including composed-name roots."""
    if isinstance(name, Symbol):
        return new if name == old else name
    if isinstance(name, ComposedName):
        terms = tuple(replace_symbol(t, old, new) for t in name.terms)
        root = name.root
        if root == old:
            if not isinstance(new, Symbol):
                raise ValueError(f"cannot replace root {root} with non-symbol {new}")
            root = new
        return ComposedName(root, terms)
    return name


def expand_self(name: Name, owner: Symbol) -> Name:
    """Substitute the reserved ``SELF`` symbol with the owning agent's name."""
    return replace_symbol(name, SELF, owner)


# ---------------------------------------------------------------------------
# Events

ACTION_END = Symbol("Action-End")
PROPERTY_CHANGE = Symbol("Property-Change")
_EVENT_ROOT = Symbol("Event")


@dataclass(frozen=True)
class Event:
    """A perceived world change: either an action ending or a property change.

    The logical name has the fixed shape ``Event(Action-End, subject,
    action, target)`` or ``Event(Property-Change, subject, property,
    value)`` and must be ground.
    """

    name: ComposedName
    tick: int = 0

    def __post_init__(self):
        n = self.name
        if not isinstance(n, ComposedName) or n.root != _EVENT_ROOT or len(n.terms) != 4:
            raise ValueError(f"event must be Event(kind, a, b, c), got {n}")
        kind = n.terms[0]
        if kind != ACTION_END and kind != PROPERTY_CHANGE:
            raise ValueError(f"event kind must be Action-End or Property-Change, got {kind}")
        if not n.is_ground():
            raise ValueError(f"perceived events must be ground, got {n}")
        if any(isinstance(t, Symbol) and t.is_universal for t in _walk(n)):
            raise ValueError(f"perceived events may not contain '*', got {n}")

    @property
    def kind(self) -> Symbol:
        return self.name.terms[0]  # type: ignore[return-value]

    @property
    def is_action(self) -> bool:
        return self.kind == ACTION_END

    @property
    def subject(self) -> Name:
        return self.name.terms[1]

    @property
    def action(self) -> Name:
        return self.name.terms[2]

    @property
    def target(self) -> Name:
        return self.name.terms[3]

    # Property-change accessors (aliases over the same slots).  `property`
    # shadows the builtin, so it must stay the last decorated member.
    @property
    def value(self) -> Name:
        return self.name.terms[3]

    @property
    def property(self) -> Name:
        return self.name.terms[2]

    @classmethod
    def action_end(cls, subject, action, target, tick: int = 0) -> "Event":
        return cls(composed("Event", ACTION_END, coerce_name(subject),
                            coerce_name(action), coerce_name(target)), tick)

    @classmethod
    def property_change(cls, subject, prop, value, tick: int = 0) -> "Event":
        return cls(composed("Event", PROPERTY_CHANGE, coerce_name(subject),
                            coerce_name(prop), coerce_name(value)), tick)

    @classmethod
    def parse(cls, text: str, tick: int = 0) -> "Event":
        name = parse_name(text)
        if not isinstance(name, ComposedName):
            raise ValueError(f"not an event name: {text!r}")
        return cls(name, tick)

    def __str__(self):
        return str(self.name)


def _walk(name: Name) -> Iterator[Name]:
    yield name
    if isinstance(name, ComposedName):
        for t in name.terms:
            yield from _walk(t)
