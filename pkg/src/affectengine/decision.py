"""Layered decision rules: unify conditions against beliefs, rank by
priority discounted by belief certainty.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .kb import Condition, KnowledgeBase
from .wfn import SELF, Name, SubstitutionSet, Symbol, coerce_name, expand_self

log = logging.getLogger(__name__)

REACTIVE = Symbol("Reactive")
DELIBERATIVE = Symbol("Deliberative")


@dataclass(frozen=True)
class DecisionRule:
    """<action, target, conditions, priority, layer>.

    Priority is a numeric symbol or a variable the conditions must bind;
    candidates whose priority does not resolve to a number >= 0 are dropped.
    """

    action: Name
    target: Name
    conditions: tuple[Condition, ...]
    priority: Name
    layer: Symbol = DELIBERATIVE


@dataclass(frozen=True)
class ActionCandidate:
    action: Name
    target: Name
    score: float
    rule_index: int
    bindings: SubstitutionSet

    def __str__(self):
        return f"{self.action} -> {self.target} (score {self.score:g})"


def decide(rules: list[DecisionRule], kb: KnowledgeBase, layer: Symbol | str,
           owner: Symbol, perspective: Name | str = SELF) -> list[ActionCandidate]:
    """All applicable actions of one layer, best first.

    Score is the resolved priority times the certainty of the beliefs the
    substitution consumed.  Ties break by rule declaration order, then by
    the canonical text of the ground action and target, so the ordering is
    reproducible across runs.
    """
    layer_sym = coerce_name(layer) if isinstance(layer, str) else layer
    candidates: list[ActionCandidate] = []
    for index, rule in enumerate(rules):
        if rule.layer != layer_sym:
            continue
        conditions = [
            Condition(expand_self(c.lhs, owner), c.op, expand_self(c.rhs, owner))
            for c in rule.conditions
        ]
        for subst in kb.evaluate_conditions(conditions, perspective):
            action = subst.apply(expand_self(rule.action, owner))
            target = subst.apply(expand_self(rule.target, owner))
            if not action.is_ground() or not target.is_ground():
                log.warning("decision rule %d left variables in %s -> %s", index, action, target)
                continue
            priority = subst.apply(expand_self(rule.priority, owner))
            if not isinstance(priority, Symbol) or priority.numeric is None:
                log.warning("decision rule %d priority %s is not numeric", index, priority)
                continue
            if priority.numeric < 0:
                log.warning("decision rule %d priority %g is negative, dropped",
                            index, priority.numeric)
                continue
            candidates.append(ActionCandidate(
                action=action,
                target=target,
                score=priority.numeric * subst.certainty,
                rule_index=index,
                bindings=subst,
            ))
    candidates.sort(key=lambda c: (-c.score, c.rule_index,
                                   c.action.canonical(), c.target.canonical()))
    return candidates
