"""Perspective-aware belief store with certainty and meta-belief dispatch.

Beliefs are (property, value) pairs held under a perspective: ``SELF`` for
the agent's own view, or another agent's name for what the agent thinks
that agent believes (one level deep).  Meta-beliefs are reserved roots
whose values are computed by registered code at query time; queries and
rule conditions treat them exactly like stored beliefs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Iterable

from .wfn import (
    SELF,
    ComposedName,
    Name,
    SubstitutionSet,
    Symbol,
    Variable,
    coerce_name,
    unify,
)

log = logging.getLogger(__name__)

OPERATORS = ("!=", ">=", "<=", "=", "<", ">")


class BeliefError(ValueError):
    """Invalid tell/registration: non-ground terms, bad certainty, clashes."""


@dataclass(frozen=True)
class Belief:
    property: Name
    value: Name
    perspective: Symbol
    certainty: float = 1.0


@dataclass(frozen=True)
class Condition:
    """One rule condition: ``lhs op rhs`` with op in =, !=, <, <=, >, >=."""

    lhs: Name
    op: str
    rhs: Name

    def __post_init__(self):
        if self.op not in OPERATORS:
            raise ValueError(f"unknown operator {self.op!r}")

    @classmethod
    def parse(cls, text: str) -> "Condition":
        lhs, op, rhs = _split_condition(text)
        return cls(coerce_name(lhs), op, coerce_name(rhs))

    def __str__(self):
        return f"{self.lhs} {self.op} {self.rhs}"


def _split_condition(text: str) -> tuple[str, str, str]:
    depth = 0
    found: tuple[int, str] | None = None
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif depth == 0 and ch in "<>!=":
            op = ch
            if i + 1 < len(text) and text[i + 1] == "=":
                op += "="
                i += 1
            if op == "!":
                raise ValueError(f"stray '!' in condition {text!r}")
            if found is not None:
                raise ValueError(f"multiple operators in condition {text!r}")
            found = (i - len(op) + 1, op)
        i += 1
    if found is None:
        raise ValueError(f"no operator in condition {text!r}")
    pos, op = found
    return text[:pos].strip(), op, text[pos + len(op):].strip()


def parse_conditions(texts: Iterable[str]) -> list[Condition]:
    return [Condition.parse(t) for t in texts]


# An evaluator receives the (already substituted) argument terms, the active
# perspective, the knowledge base and the current bindings, and returns
# (value, extended bindings) pairs.  Evaluators may read the KB, including
# other meta-beliefs, but never write it.
MetaBeliefFn = Callable[
    [list[Name], Symbol, "KnowledgeBase", SubstitutionSet],
    list[tuple[Name, SubstitutionSet]],
]


class KnowledgeBase:
    """Belief store for one agent, with a registry of dynamic meta-beliefs."""

    def __init__(self, owner: Symbol | str | None = None):
        self.owner = coerce_name(owner) if isinstance(owner, str) else owner
        if self.owner is not None and not isinstance(self.owner, Symbol):
            raise BeliefError(f"owner must be a symbol, got {self.owner}")
        self._store: dict[str, dict[str, Belief]] = {}
        self._meta: dict[str, MetaBeliefFn] = {}
        self.register_meta("ToM", _theory_of_mind)

    # -- perspectives -------------------------------------------------

    def _perspective_key(self, perspective: Name) -> str:
        if isinstance(perspective, Symbol):
            if perspective.is_self:
                return "self"
            if self.owner is not None and perspective == self.owner:
                return "self"
        return perspective.canonical()

    def perspectives(self) -> list[str]:
        return list(self._store.keys())

    def is_self_perspective(self, perspective: Name) -> bool:
        return self._perspective_key(perspective) == "self"

    # -- meta-beliefs --------------------------------------------------

    def register_meta(self, root: str | Symbol, fn: MetaBeliefFn) -> None:
        key = Symbol(root).canonical() if isinstance(root, str) else root.canonical()
        if key in self._meta:
            raise BeliefError(f"meta-belief root {root} already registered")
        self._meta[key] = fn

    def meta_roots(self) -> list[str]:
        return list(self._meta.keys())

    def _is_meta(self, name: Name) -> bool:
        return isinstance(name, ComposedName) and name.root.canonical() in self._meta

    # -- writing -------------------------------------------------------

    def tell(self, property: Name | str, value: Name | str | float | bool,
             perspective: Name | str = SELF, certainty: float = 1.0) -> None:
        prop = coerce_name(property)
        val = coerce_name(value)
        persp = coerce_name(perspective)
        if not prop.is_ground() or not val.is_ground():
            raise BeliefError(f"beliefs must be ground: {prop} = {val}")
        if _contains_universal(prop) or _contains_universal(val):
            raise BeliefError(f"beliefs may not contain '*': {prop} = {val}")
        if not 0.0 <= certainty <= 1.0:
            raise BeliefError(f"certainty must be in [0, 1], got {certainty}")
        if self._is_meta(prop):
            raise BeliefError(f"{prop.root} is a registered meta-belief root")  # type: ignore[union-attr]
        if not isinstance(persp, Symbol):
            raise BeliefError(f"perspective must be a symbol, got {persp}")
        store = self._store.setdefault(self._perspective_key(persp), {})
        store[prop.canonical()] = Belief(prop, val, persp, certainty)

    def forget(self, property: Name | str, perspective: Name | str = SELF) -> None:
        prop = coerce_name(property)
        store = self._store.get(self._perspective_key(coerce_name(perspective)), {})
        store.pop(prop.canonical(), None)

    # -- reading -------------------------------------------------------

    def beliefs(self, perspective: Name | str = SELF) -> list[Belief]:
        key = self._perspective_key(coerce_name(perspective))
        return list(self._store.get(key, {}).values())

    def all_beliefs(self) -> list[Belief]:
        return [b for store in self._store.values() for b in store.values()]

    def ask(self, property: Name | str, perspective: Name | str = SELF,
            seed: SubstitutionSet | None = None) -> list[tuple[Name, SubstitutionSet]]:
        """All (value, bindings) pairs whose property unifies with the query.

        Meta-belief roots dispatch to their registered evaluator; certainty
        of consumed beliefs is multiplied into each result's bindings.
        """
        subst = seed if seed is not None else SubstitutionSet()
        persp = coerce_name(perspective)
        if not isinstance(persp, Symbol):
            return []
        query = subst.apply(coerce_name(property))
        if isinstance(query, ComposedName):
            fn = self._meta.get(query.root.canonical())
            if fn is not None:
                return fn(list(query.terms), persp, self, subst)
        results: list[tuple[Name, SubstitutionSet]] = []
        store = self._store.get(self._perspective_key(persp), {})
        for belief in store.values():
            if self._is_meta(belief.property):
                continue  # shadowed by a later meta registration
            bound = unify(query, belief.property, subst)
            if bound is not None:
                results.append((belief.value, bound.scaled(belief.certainty)))
        return results

    def lookup(self, property: Name | str, perspective: Name | str = SELF) -> Name | None:
        """Exact-match value of a ground property, or None."""
        key = self._perspective_key(coerce_name(perspective))
        belief = self._store.get(key, {}).get(coerce_name(property).canonical())
        return belief.value if belief else None

    # -- condition evaluation -------------------------------------------

    def evaluate_conditions(self, conditions: Iterable[Condition],
                            perspective: Name | str = SELF,
                            seed: SubstitutionSet | None = None) -> list[SubstitutionSet]:
        """Conjunctive left-to-right evaluation; authoring order matters.

        Each condition filters and extends the substitution sets produced by
        the previous ones.  Identical final bindings reached through
        different beliefs are merged, keeping the highest certainty.
        """
        sets = [seed if seed is not None else SubstitutionSet()]
        for condition in conditions:
            produced: list[SubstitutionSet] = []
            for subst in sets:
                produced.extend(self._evaluate_condition(condition, perspective, subst))
            sets = _dedupe(produced)
            if not sets:
                break
        return sets

    def _side_values(self, side: Name, perspective: Name | str,
                     subst: SubstitutionSet) -> list[tuple[Name, SubstitutionSet]]:
        resolved = subst.apply(side)
        if isinstance(resolved, ComposedName):
            return self.ask(resolved, perspective, subst)
        if isinstance(resolved, Symbol) and not resolved.is_universal:
            # A bare symbol is a literal unless it names a stored property.
            key = self._perspective_key(coerce_name(perspective))
            if resolved.canonical() in self._store.get(key, {}):
                return self.ask(resolved, perspective, subst)
        return [(resolved, subst)]

    def _evaluate_condition(self, condition: Condition, perspective: Name | str,
                            subst: SubstitutionSet) -> list[SubstitutionSet]:
        out: list[SubstitutionSet] = []
        for lhs_value, s1 in self._side_values(condition.lhs, perspective, subst):
            for rhs_value, s2 in self._side_values(condition.rhs, perspective, s1):
                if condition.op == "=":
                    bound = unify(lhs_value, rhs_value, s2)
                    if bound is not None:
                        out.append(bound)
                elif condition.op == "!=":
                    left = s2.apply(lhs_value)
                    right = s2.apply(rhs_value)
                    if left.is_ground() and right.is_ground() and left != right:
                        out.append(s2)
                else:
                    left = _numeric(s2.apply(lhs_value))
                    right = _numeric(s2.apply(rhs_value))
                    if left is None or right is None:
                        continue
                    if _compare(condition.op, left, right):
                        out.append(s2)
        return out


def _numeric(name: Name) -> float | None:
    if isinstance(name, Symbol):
        return name.numeric
    return None


def _compare(op: str, left: float, right: float) -> bool:
    if op == "<":
        return left < right
    if op == "<=":
        return left <= right
    if op == ">":
        return left > right
    return left >= right


def _dedupe(sets: list[SubstitutionSet]) -> list[SubstitutionSet]:
    chosen: dict[frozenset, SubstitutionSet] = {}
    order: list[frozenset] = []
    for subst in sets:
        key = subst.canonical_bindings()
        existing = chosen.get(key)
        if existing is None:
            chosen[key] = subst
            order.append(key)
        elif subst.certainty > existing.certainty:
            chosen[key] = subst
    return [chosen[k] for k in order]


def _contains_universal(name: Name) -> bool:
    if isinstance(name, Symbol):
        return name.is_universal
    if isinstance(name, ComposedName):
        return any(_contains_universal(t) for t in name.terms)
    return False


def _theory_of_mind(args: list[Name], perspective: Symbol, kb: KnowledgeBase,
                    seed: SubstitutionSet) -> list[tuple[Name, SubstitutionSet]]:
    """``ToM([agent], [belief])``: re-ask the belief under the agent's view.

    Perspective nesting is one level deep: asking ToM while already inside
    another agent's perspective yields nothing.
    """
    if len(args) != 2:
        log.warning("ToM expects 2 arguments, got %d", len(args))
        return []
    if not kb.is_self_perspective(perspective):
        return []
    agent = seed.resolve(args[0])
    belief = args[1]
    candidates: list[tuple[Symbol, SubstitutionSet]] = []
    if isinstance(agent, Variable):
        for key in kb.perspectives():
            if key == "self":
                continue
            sym = Symbol(key)
            bound = seed.bind(agent, sym)
            if bound is not None:
                candidates.append((sym, bound))
    elif isinstance(agent, Symbol):
        candidates.append((agent, seed))
    results: list[tuple[Name, SubstitutionSet]] = []
    for agent_sym, subst in candidates:
        results.extend(kb.ask(belief, agent_sym, subst))
    return results
