"""The role-play character: beliefs, memory, emotions and rule sets wired
into one perceive/decide/tick cycle.

Perceiving an action appraises it for the character itself and, from their
perspectives, for every known agent; the result feeds the character's own
emotional state, the modelled states of the others, and the
autobiographical memory.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from . import decision as decision_mod
from .appraisal import AppraisalRule, Goal, appraise, appraise_for_others
from .dialogue import DialogueGraph
from .emotional_state import Emotion, EmotionalState, EmotionType
from .kb import KnowledgeBase
from .reasoners import AttributionRule, ExchangeTracker, SocialExchange, social_importance
from .wfn import (
    SELF,
    TRUE,
    Event,
    Name,
    SubstitutionSet,
    Symbol,
    Variable,
    coerce_name,
    expand_self,
    num_symbol,
    unify,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MemoryRecord:
    """An event, when it happened, and the emotions it caused."""

    event: Event
    tick: int
    emotions: tuple[tuple[EmotionType, float], ...] = ()


class RolePlayCharacter:
    """One agent: the single owner of its knowledge base and state."""

    def __init__(self, name: Symbol | str, *,
                 body_name: Symbol | str | None = None,
                 appraisal_rules: list[AppraisalRule] | None = None,
                 decision_rules: list[decision_mod.DecisionRule] | None = None,
                 attribution_rules: list[AttributionRule] | None = None,
                 exchanges: list[SocialExchange] | None = None,
                 goals: list[Goal] | None = None,
                 dialogue_graph: DialogueGraph | None = None,
                 thresholds: dict[EmotionType, float] | None = None,
                 half_lives: dict[EmotionType, float] | None = None,
                 mood: float = 0.0):
        self.name = _sym(name)
        self.body_name = _sym(body_name) if body_name else self.name
        self.kb = KnowledgeBase(owner=self.name)
        self.state = EmotionalState(thresholds=dict(thresholds or {}),
                                    half_lives=dict(half_lives or {}), mood=mood)
        self.appraisal_rules = list(appraisal_rules or [])
        self.decision_rules = list(decision_rules or [])
        self.attribution_rules = list(attribution_rules or [])
        self.exchange_tracker = ExchangeTracker(exchanges or [])
        self.goals: dict[str, Goal] = {g.name.canonical(): g for g in (goals or [])}
        self.dialogue_graph = dialogue_graph
        self.known_agents: dict[str, Symbol] = {}
        self.modeled_states: dict[str, EmotionalState] = {}
        self.memory: list[MemoryRecord] = []
        self.clock = 0
        self._register_meta_beliefs()

    # -- construction helpers ------------------------------------------

    def _register_meta_beliefs(self):
        self.kb.register_meta("Mood", self._mood_meta)
        self.kb.register_meta("SI", self._si_meta)
        self.kb.register_meta("SE", self._se_meta)
        self.kb.register_meta("ValidDialogue", self._valid_dialogue_meta)
        self.kb.register_meta("IsAgent", self._is_agent_meta)

    def tell(self, property, value, perspective=SELF, certainty: float = 1.0):
        """Author or perceive a belief; SELF expands to the character."""
        self.kb.tell(expand_self(coerce_name(property), self.name),
                     expand_self(coerce_name(value), self.name),
                     perspective, certainty)

    def ask(self, property, perspective=SELF,
            seed: SubstitutionSet | None = None) -> list[tuple[Name, SubstitutionSet]]:
        """Query the belief store with SELF expanded to the character."""
        return self.kb.ask(expand_self(coerce_name(property), self.name),
                           perspective, seed)

    def add_known_agent(self, agent: Symbol | str):
        sym = _sym(agent)
        if sym == self.name:
            return
        if sym.canonical() not in self.known_agents:
            self.known_agents[sym.canonical()] = sym
            self.modeled_states.setdefault(
                sym.canonical(),
                EmotionalState(thresholds=dict(self.state.thresholds),
                               half_lives=dict(self.state.half_lives)))

    def modeled_state(self, agent: Symbol | str) -> EmotionalState | None:
        return self.modeled_states.get(_sym(agent).canonical())

    # -- the perception-action cycle -------------------------------------

    def perceive(self, event: Event) -> list[Emotion]:
        """Process one ground event; returns the emotions it caused.

        Property changes update the belief store; actions additionally add
        unknown performers to the known agents, advance social exchanges
        and append a memory record.  Both kinds run through appraisal.
        """
        accepted: list[Emotion] = []
        if event.kind.canonical() == "property-change":
            self.kb.tell(event.property, event.value, SELF, 1.0)
        elif isinstance(event.subject, Symbol):
            # Only performers are auto-registered as agents; targets may be objects.
            self.add_known_agent(event.subject)
        emotions = appraise(event, self.appraisal_rules, self.kb,
                            owner=self.name, perspective=SELF, goals=self.goals)
        for emotion in emotions:
            emotion.tick = self.clock
            if self.state.add_emotion(emotion):
                accepted.append(emotion)
        others = appraise_for_others(event, self.appraisal_rules, self.kb,
                                     list(self.known_agents.values()))
        for agent, agent_emotions in others.items():
            modeled = self.modeled_states[agent.canonical()]
            for emotion in agent_emotions:
                emotion.tick = self.clock
                modeled.add_emotion(emotion)
        if event.is_action:
            self.exchange_tracker.advance(event)
            self.memory.append(MemoryRecord(
                event, self.clock,
                tuple((e.type, e.intensity) for e in accepted)))
        return accepted

    def decide(self, layer: Symbol | str = decision_mod.DELIBERATIVE) -> list[decision_mod.ActionCandidate]:
        return decision_mod.decide(self.decision_rules, self.kb, layer, owner=self.name)

    def tick(self, ticks: int = 1) -> None:
        if ticks < 0:
            raise ValueError("ticks must be >= 0")
        self.clock += ticks
        self.state.decay(ticks)
        for modeled in self.modeled_states.values():
            modeled.decay(ticks)

    def recall(self, pattern: Name | str) -> list[MemoryRecord]:
        """Memory records whose event unifies with the pattern, in order."""
        query = expand_self(coerce_name(pattern), self.name)
        return [r for r in self.memory if unify(query, r.event.name) is not None]

    @property
    def mood(self) -> float:
        return self.state.mood

    def strongest_emotion(self) -> Emotion | None:
        return self.state.strongest_emotion()

    # -- meta-belief evaluators ------------------------------------------

    def _agent_candidates(self, term: Name, seed: SubstitutionSet,
                          include_self: bool = True) -> list[tuple[Symbol, SubstitutionSet]]:
        resolved = seed.resolve(term)
        if isinstance(resolved, Variable):
            out = []
            pool = ([self.name] if include_self else []) + list(self.known_agents.values())
            for agent in pool:
                bound = seed.bind(resolved, agent)
                if bound is not None:
                    out.append((agent, bound))
            return out
        if isinstance(resolved, Symbol):
            return [(resolved, seed)]
        return []

    def _mood_meta(self, args, perspective, kb, seed):
        if len(args) != 1:
            log.warning("Mood expects 1 argument, got %d", len(args))
            return []
        results = []
        for agent, subst in self._agent_candidates(args[0], seed):
            if agent.is_self or agent == self.name:
                value = self.state.mood
            else:
                modeled = self.modeled_states.get(agent.canonical())
                value = modeled.mood if modeled else 0.0
            results.append((num_symbol(value), subst))
        return results

    def _si_meta(self, args, perspective, kb, seed):
        if len(args) != 1:
            log.warning("SI expects 1 argument, got %d", len(args))
            return []
        owner = self.name if kb.is_self_perspective(perspective) else perspective
        results = []
        for agent, subst in self._agent_candidates(args[0], seed):
            value = social_importance(self.attribution_rules, agent, kb,
                                      owner=owner, perspective=perspective)
            results.append((num_symbol(value), subst))
        return results

    def _se_meta(self, args, perspective, kb, seed):
        if len(args) != 4:
            log.warning("SE expects 4 arguments, got %d", len(args))
            return []
        owner = self.name if kb.is_self_perspective(perspective) else perspective
        return self.exchange_tracker.evaluate(
            args[0], args[1], args[2], args[3], kb,
            owner=owner, perspective=perspective,
            agents=list(self.known_agents.values()), seed=seed)

    def _valid_dialogue_meta(self, args, perspective, kb, seed):
        if self.dialogue_graph is None:
            return []
        if len(args) != 4:
            log.warning("ValidDialogue expects 4 arguments, got %d", len(args))
            return []
        matches = self.dialogue_graph.valid_dialogue(args[0], args[1], args[2], args[3], seed)
        return [(TRUE, subst) for subst in matches]

    def _is_agent_meta(self, args, perspective, kb, seed):
        if len(args) != 1:
            return []
        return [(TRUE, subst) for _, subst in self._agent_candidates(args[0], seed)]


def _sym(value: Symbol | str) -> Symbol:
    if isinstance(value, Symbol):
        return value
    name = coerce_name(value)
    if not isinstance(name, Symbol):
        raise ValueError(f"expected a symbol, got {value!r}")
    return name
