"""Shipped reasoner meta-beliefs: social importance and social exchanges.

Social importance sums attribution rules into a 1..100 status value per
target.  Social exchanges are named multi-step interaction patterns
(e.g. Initiate, Answer, Finalize) performed in alternation by two agents;
their mode conditions score the desire to perform the next step in a
given mode, directly usable as a decision-rule priority.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .kb import Condition, KnowledgeBase
from .wfn import (
    SELF,
    ComposedName,
    Event,
    Name,
    SubstitutionSet,
    Symbol,
    expand_self,
    num_symbol,
    unify,
)

log = logging.getLogger(__name__)

SI_MIN, SI_MAX = 1.0, 100.0


@dataclass(frozen=True)
class AttributionRule:
    """<target, conditions, siValue>; satisfied rules add siValue once."""

    target: Name
    conditions: tuple[Condition, ...]
    si_value: float


def social_importance(rules: list[AttributionRule], target: Name, kb: KnowledgeBase,
                      owner: Symbol, perspective: Name | str = SELF) -> float:
    """Summed siValue of every rule satisfied for the target, clamped to 1..100."""
    total = 0.0
    for rule in rules:
        seed = unify(expand_self(rule.target, owner), target)
        if seed is None:
            continue
        conditions = [
            Condition(expand_self(c.lhs, owner), c.op, expand_self(c.rhs, owner))
            for c in rule.conditions
        ]
        if kb.evaluate_conditions(conditions, perspective, seed=seed):
            total += rule.si_value
    return max(SI_MIN, min(SI_MAX, total))


@dataclass(frozen=True)
class ModeCondition:
    mode: Symbol
    conditions: tuple[Condition, ...]
    value: float


@dataclass(frozen=True)
class SocialExchange:
    """<name, target, steps, starting conditions, mode conditions>."""

    name: Symbol
    target: Name
    steps: tuple[Symbol, ...]
    starting_conditions: tuple[Condition, ...] = ()
    mode_conditions: tuple[ModeCondition, ...] = ()

    def __post_init__(self):
        if not self.steps:
            raise ValueError("a social exchange needs at least one step")

    def modes(self) -> list[Symbol]:
        seen: list[Symbol] = []
        for mc in self.mode_conditions:
            if mc.mode not in seen:
                seen.append(mc.mode)
        return seen


@dataclass
class ExchangeInstance:
    """A running exchange between two agents; steps advance strictly forward."""

    exchange: SocialExchange
    initiator: Symbol
    partner: Symbol
    step_index: int = 1  # the Initiate step created the instance

    @property
    def completed(self) -> bool:
        return self.step_index >= len(self.exchange.steps)

    @property
    def expected_step(self) -> Symbol | None:
        if self.completed:
            return None
        return self.exchange.steps[self.step_index]

    @property
    def expected_performer(self) -> Symbol:
        # Performers alternate starting with the initiator.
        return self.initiator if self.step_index % 2 == 0 else self.partner

    def involves(self, a: Symbol, b: Symbol) -> bool:
        return {self.initiator, self.partner} == {a, b}


class ExchangeTracker:
    """Per-character bookkeeping of social exchange instances.

    Steps are performed through actions shaped ``ExchangeName(Step)`` or
    ``ExchangeName(Step, Mode)`` aimed at the partner; out-of-order steps or
    wrong performers are ignored with a warning.
    """

    def __init__(self, exchanges: list[SocialExchange] | None = None):
        self.exchanges = list(exchanges or [])
        self.active: list[ExchangeInstance] = []
        self.completed: list[ExchangeInstance] = []

    def instance_between(self, exchange: SocialExchange, a: Symbol,
                         b: Symbol) -> ExchangeInstance | None:
        for instance in self.active:
            if instance.exchange.name == exchange.name and instance.involves(a, b):
                return instance
        return None

    def evaluate(self, name: Name, target: Name, step: Name, mode: Name,
                 kb: KnowledgeBase, owner: Symbol, perspective: Name | str = SELF,
                 agents: list[Symbol] | None = None,
                 seed: SubstitutionSet | None = None) -> list[tuple[Name, SubstitutionSet]]:
        """SE([name],[target],[step],[mode]) -> desire values with bindings.

        For each exchange the owner could act in next (either by initiating
        with some partner, or because a running instance expects the owner),
        and for each mode consistent with the pattern, returns the summed
        value of the satisfied mode conditions.
        """
        base = seed if seed is not None else SubstitutionSet()
        results: list[tuple[Name, SubstitutionSet]] = []
        partners = [a for a in (agents or []) if a != owner]
        for exchange in self.exchanges:
            s0 = unify(name, exchange.name, base)
            if s0 is None:
                continue
            options: list[tuple[Symbol, Symbol, SubstitutionSet]] = []
            # Running instances where it is the owner's turn.
            for instance in self.active:
                if instance.exchange.name != exchange.name or instance.completed:
                    continue
                if owner not in (instance.initiator, instance.partner):
                    continue
                if instance.expected_performer != owner:
                    continue
                other = instance.partner if owner == instance.initiator else instance.initiator
                s1 = unify(target, other, s0)
                if s1 is None:
                    continue
                s2 = unify(step, instance.expected_step, s1)
                if s2 is not None:
                    options.append((other, instance.expected_step, s2))
            # Fresh starts with any known partner not already engaged.
            for partner in partners:
                if self.instance_between(exchange, owner, partner) is not None:
                    continue
                s1 = unify(target, partner, s0)
                if s1 is None:
                    continue
                s2 = unify(step, exchange.steps[0], s1)
                if s2 is None:
                    continue
                if not self._starting_ok(exchange, partner, kb, owner, perspective, s2):
                    continue
                options.append((partner, exchange.steps[0], s2))
            for partner, _expected, s2 in options:
                bound = unify(expand_self(exchange.target, owner), partner, s2)
                if bound is None:
                    continue
                for mode_sym in exchange.modes():
                    s3 = unify(mode, mode_sym, bound)
                    if s3 is None:
                        continue
                    value = self._mode_value(exchange, mode_sym, kb, owner, perspective, s3)
                    results.append((num_symbol(value), s3))
        return results

    def _starting_ok(self, exchange: SocialExchange, partner: Symbol, kb: KnowledgeBase,
                     owner: Symbol, perspective: Name | str,
                     seed: SubstitutionSet) -> bool:
        bound = unify(expand_self(exchange.target, owner), partner, seed)
        if bound is None:
            return False
        conditions = [
            Condition(expand_self(c.lhs, owner), c.op, expand_self(c.rhs, owner))
            for c in exchange.starting_conditions
        ]
        return bool(kb.evaluate_conditions(conditions, perspective, seed=bound))

    def _mode_value(self, exchange: SocialExchange, mode: Symbol, kb: KnowledgeBase,
                    owner: Symbol, perspective: Name | str,
                    seed: SubstitutionSet) -> float:
        total = 0.0
        for mc in exchange.mode_conditions:
            if mc.mode != mode:
                continue
            conditions = [
                Condition(expand_self(c.lhs, owner), c.op, expand_self(c.rhs, owner))
                for c in mc.conditions
            ]
            if kb.evaluate_conditions(conditions, perspective, seed=seed):
                total += mc.value
        return total

    def advance(self, event: Event) -> ExchangeInstance | None:
        """Advance or start an instance from a perceived step action."""
        if not event.is_action:
            return None
        action = event.action
        if not isinstance(action, ComposedName):
            return None
        step = action.terms[0]
        if not isinstance(step, Symbol):
            return None
        subject = event.subject
        target = event.target
        if not isinstance(subject, Symbol) or not isinstance(target, Symbol):
            return None
        for exchange in self.exchanges:
            if exchange.name != action.root:
                continue
            instance = self.instance_between(exchange, subject, target)
            if instance is not None:
                if instance.expected_performer == subject and instance.expected_step == step:
                    instance.step_index += 1
                    if instance.completed:
                        self.active.remove(instance)
                        self.completed.append(instance)
                    return instance
                log.warning("ignored out-of-order %s step %s by %s", exchange.name, step, subject)
                return None
            if step == exchange.steps[0]:
                instance = ExchangeInstance(exchange, subject, target)
                if instance.completed:
                    self.completed.append(instance)
                else:
                    self.active.append(instance)
                return instance
            log.warning("ignored %s step %s with no running instance", exchange.name, step)
            return None
        return None
