"""Appraisal rules turn events into judgement values; affect derivation
turns those values into OCC emotions.

Appraisal rules are authored; affect derivation is fixed engine logic.
Five judgement kinds are supported: desirability, desirability for others,
praiseworthiness, like, and goal likelihood, the last driving the
prospect emotions through the agent's goals.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass

from .emotional_state import Emotion, EmotionType
from .kb import Condition, KnowledgeBase
from .wfn import (
    SELF,
    Event,
    Name,
    SubstitutionSet,
    Symbol,
    coerce_name,
    expand_self,
    unify,
)

log = logging.getLogger(__name__)

KIND_DESIRABILITY = "Desirability"
KIND_DESIRABILITY_FOR_OTHERS = "DesirabilityForOthers"
KIND_PRAISEWORTHINESS = "Praiseworthiness"
KIND_LIKE = "Like"
KIND_GOAL_LIKELIHOOD = "GoalLikelihood"

VARIABLE_KINDS = (
    KIND_DESIRABILITY,
    KIND_DESIRABILITY_FOR_OTHERS,
    KIND_PRAISEWORTHINESS,
    KIND_LIKE,
    KIND_GOAL_LIKELIHOOD,
)

# Threshold on the likelihood shift separating minor moves (Hope/Fear) from
# major ones (Relief/Disappointment); consistent with shifts of 0.3 vs 0.6.
MAJOR_SHIFT = 0.5


@dataclass(frozen=True)
class AppraisalVariable:
    """One judgement a rule makes: a kind plus a value expression.

    The value expression is a numeric symbol or a variable bound by the
    rule's conditions.  ``GoalLikelihood`` additionally names the goal it
    updates.
    """

    kind: str
    value: Name
    goal: Name | None = None

    def __post_init__(self):
        if self.kind not in VARIABLE_KINDS:
            raise ValueError(f"unknown appraisal variable kind {self.kind!r}")
        if self.kind == KIND_GOAL_LIKELIHOOD and self.goal is None:
            raise ValueError("GoalLikelihood needs a goal name")


@dataclass(frozen=True)
class AppraisalRule:
    event: Name
    target: Name
    variables: tuple[AppraisalVariable, ...]
    conditions: tuple[Condition, ...] = ()


class GoalStatus(enum.Enum):
    ACTIVE = "Active"
    SUCCEEDED = "Succeeded"
    FAILED = "Failed"


@dataclass
class Goal:
    """Something the agent wants to attain, always positively oriented."""

    name: Symbol
    significance: float
    likelihood: float
    status: GoalStatus = GoalStatus.ACTIVE

    def __post_init__(self):
        if not 0.0 <= self.significance <= 10.0:
            raise ValueError(f"significance must be in [0, 10], got {self.significance}")
        if not 0.0 <= self.likelihood <= 1.0:
            raise ValueError(f"likelihood must be in [0, 1], got {self.likelihood}")
        if self.status is GoalStatus.ACTIVE:
            if self.likelihood == 1.0:
                self.status = GoalStatus.SUCCEEDED
            elif self.likelihood == 0.0:
                self.status = GoalStatus.FAILED


@dataclass
class AppraisalValues:
    """Resolved judgement values for one rule activation."""

    desirability: float | None = None
    desirability_for_others: float | None = None
    praiseworthiness: float | None = None
    like: float | None = None


def derive_affect(values: AppraisalValues, actor: Name, owner: Symbol,
                  cause: Event | None = None, target: Name | None = None,
                  tick: int = 0) -> list[Emotion]:
    """Fixed OCC mapping from judgement values to emotions.

    Desirability alone gives the well-being pair; combined with
    desirability-for-others it gives the fortune-of-others four; with
    praiseworthiness it adds the compound four.  Praiseworthiness alone
    gives attribution emotions, split on whether the actor is the owner,
    and like gives the attraction pair.
    """
    d = values.desirability
    o = values.desirability_for_others
    p = values.praiseworthiness
    l = values.like
    self_acting = actor == owner
    emotions: list[tuple[EmotionType, float]] = []

    if d:
        emotions.append((EmotionType.JOY if d > 0 else EmotionType.DISTRESS, abs(d)))
    if d and o:
        if o > 0 and d > 0:
            fortune = EmotionType.HAPPY_FOR
        elif o < 0 and d < 0:
            fortune = EmotionType.PITY
        elif o < 0 and d > 0:
            fortune = EmotionType.GLOATING
        else:
            fortune = EmotionType.RESENTMENT
        emotions.append((fortune, (abs(d) + abs(o)) / 2))
    if p:
        if self_acting:
            attribution = EmotionType.PRIDE if p > 0 else EmotionType.SHAME
        else:
            attribution = EmotionType.ADMIRATION if p > 0 else EmotionType.REPROACH
        emotions.append((attribution, abs(p)))
    if l:
        emotions.append((EmotionType.LOVE if l > 0 else EmotionType.HATE, abs(l)))
    if d and p:
        compound = None
        if d > 0 and p > 0:
            compound = EmotionType.GRATIFICATION if self_acting else EmotionType.GRATITUDE
        elif d < 0 and p < 0:
            compound = EmotionType.REMORSE if self_acting else EmotionType.ANGER
        if compound is not None:
            emotions.append((compound, (abs(d) + abs(p)) / 2))

    emotion_target = target if target is not None else actor
    return [
        Emotion(type_, intensity, cause=cause, target=emotion_target, tick=tick)
        for type_, intensity in emotions
        if intensity > 0
    ]


def update_goal(goal: Goal, new_likelihood: float, cause: Event | None = None,
                tick: int = 0) -> list[Emotion]:
    """Prospect emotions from a likelihood shift; confirms at 0 and 1.

    A shift below the major-shift threshold yields Hope or Fear, a larger
    one Relief or Disappointment, scaled by the goal's significance.
    Reaching 1 adds Satisfaction and reaching 0 adds Fears-Confirmed at
    full significance, never weaker than the unconfirmed emotion.
    """
    if goal.status is not GoalStatus.ACTIVE:
        return []
    if not 0.0 <= new_likelihood <= 1.0:
        raise ValueError(f"likelihood must be in [0, 1], got {new_likelihood}")
    delta = new_likelihood - goal.likelihood
    emotions: list[Emotion] = []

    def emit(type_: EmotionType, intensity: float):
        if intensity > 0:
            emotions.append(Emotion(type_, intensity, cause=cause, target=goal.name, tick=tick))

    if delta > 0:
        emit(EmotionType.HOPE if delta < MAJOR_SHIFT else EmotionType.RELIEF,
             abs(delta) * goal.significance)
    elif delta < 0:
        emit(EmotionType.FEAR if -delta < MAJOR_SHIFT else EmotionType.DISAPPOINTMENT,
             abs(delta) * goal.significance)
    goal.likelihood = new_likelihood
    if new_likelihood == 1.0:
        goal.status = GoalStatus.SUCCEEDED
        emit(EmotionType.SATISFACTION, goal.significance)
    elif new_likelihood == 0.0:
        goal.status = GoalStatus.FAILED
        emit(EmotionType.FEARS_CONFIRMED, goal.significance)
    return emotions


def appraise(event: Event, rules: list[AppraisalRule], kb: KnowledgeBase,
             owner: Symbol, perspective: Name | str = SELF,
             goals: dict[str, Goal] | None = None) -> list[Emotion]:
    """Run every matching rule against the event and derive emotions.

    ``owner`` replaces ``SELF`` in rule patterns; ``perspective`` selects
    the belief store the conditions are checked against, so the same rules
    can be evaluated as another agent by passing that agent for both.
    """
    emotions: list[Emotion] = []
    goals = goals or {}
    for rule in rules:
        pattern = expand_self(rule.event, owner)
        seed = unify(pattern, event.name)
        if seed is None:
            continue
        conditions = [
            Condition(expand_self(c.lhs, owner), c.op, expand_self(c.rhs, owner))
            for c in rule.conditions
        ]
        for subst in kb.evaluate_conditions(conditions, perspective, seed=seed):
            activation = _resolve_variables(rule, subst)
            if activation is None:
                continue
            values, goal_updates = activation
            target = subst.apply(expand_self(rule.target, owner))
            if not target.is_ground():
                target = event.subject
            emotions.extend(derive_affect(
                values, event.subject, owner, cause=event, target=target, tick=event.tick))
            for goal_name, likelihood in goal_updates:
                goal = goals.get(goal_name.canonical())
                if goal is None:
                    log.warning("appraisal rule names unknown goal %s", goal_name)
                    continue
                emotions.extend(update_goal(goal, likelihood, cause=event, tick=event.tick))
    return emotions


def _resolve_variables(rule: AppraisalRule, subst: SubstitutionSet):
    values = AppraisalValues()
    goal_updates: list[tuple[Name, float]] = []
    for variable in rule.variables:
        resolved = subst.apply(variable.value)
        if not isinstance(resolved, Symbol) or resolved.numeric is None:
            log.warning("appraisal value %s did not resolve to a number (rule for %s)",
                        variable.value, rule.event)
            return None
        number = resolved.numeric
        if variable.kind == KIND_GOAL_LIKELIHOOD:
            clamped = _clamp(number, 0.0, 1.0, str(variable.goal))
            goal_updates.append((subst.apply(variable.goal), clamped))
            continue
        number = _clamp(number, -10.0, 10.0, variable.kind)
        if variable.kind == KIND_DESIRABILITY:
            values.desirability = number
        elif variable.kind == KIND_DESIRABILITY_FOR_OTHERS:
            values.desirability_for_others = number
        elif variable.kind == KIND_PRAISEWORTHINESS:
            values.praiseworthiness = number
        elif variable.kind == KIND_LIKE:
            values.like = number
    return values, goal_updates


def _clamp(value: float, low: float, high: float, label: str) -> float:
    if value < low or value > high:
        log.warning("%s value %g clamped to [%g, %g]", label, value, low, high)
        return max(low, min(high, value))
    return value


def appraise_for_others(event: Event, rules: list[AppraisalRule], kb: KnowledgeBase,
                        agents: list[Symbol]) -> dict[Symbol, list[Emotion]]:
    """Appraise the same event as each other agent would.

    Other agents are assumed to share the rule set; conditions run against
    the beliefs held under each agent's perspective with ``SELF`` mapped to
    that agent.  Goal-likelihood variables are skipped: goals are not
    modelled for others.
    """
    return {
        agent: appraise(event, rules, kb, owner=agent, perspective=agent, goals={})
        for agent in agents
    }


def make_goal(name: str | Symbol, significance: float, likelihood: float) -> Goal:
    sym = name if isinstance(name, Symbol) else Symbol(name)
    return Goal(sym, significance, likelihood)
