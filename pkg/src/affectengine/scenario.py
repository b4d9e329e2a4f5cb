"""Scenario files, world effect rules, and the turn-based simulation loop.

A scenario is one JSON document holding the character profiles (beliefs,
goals, emotional parameters and rule sets), the dialogue table, the world
effect rules and the start states.  The simulation owns the loaded
characters, rotates turns through them in file order, executes one action
per step, applies effect rules, broadcasts the event to every character
and advances time by one tick.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .appraisal import AppraisalRule, AppraisalVariable, Goal
from .character import RolePlayCharacter
from .decision import DecisionRule
from .dialogue import NEUTRAL_TAG, DialogueEntry, DialogueGraph, ValidationReport
from .emotional_state import Emotion, EmotionType
from .kb import Condition, KnowledgeBase
from .reasoners import AttributionRule, ModeCondition, SocialExchange
from .wfn import (
    ComposedName,
    Event,
    Name,
    NameSyntaxError,
    Symbol,
    coerce_name,
    parse_name,
    unify,
)

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
SPEAK = Symbol("Speak")


class ScenarioError(ValueError):
    """Schema violation with a JSON-path diagnostic."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.reason = message


class StaleChoiceError(ValueError):
    """The chosen dialogue entry does not match the role's current state."""

    def __init__(self, message: str, options: list["DialogueOption"]):
        super().__init__(message)
        self.options = options


@dataclass(frozen=True)
class Effect:
    """One belief write caused by an effect rule.

    ``applies_to`` lists the characters receiving the belief; entries may
    be variables resolved from the event bindings, and ``*`` means every
    character.
    """

    property: Name
    value: Name
    applies_to: tuple[Name, ...] = (parse_name("*"),)


@dataclass(frozen=True)
class EffectRule:
    event: Name
    conditions: tuple[Condition, ...]
    effects: tuple[Effect, ...]


@dataclass(frozen=True)
class DialogueOption:
    entry: DialogueEntry
    partner: Symbol
    state: Symbol


@dataclass
class LogEntry:
    """One executed action; the log is totally ordered and replayable."""

    index: int
    tick: int
    actor: Symbol
    event: Event
    target: Symbol | None = None
    utterance: str | None = None
    entry_id: Symbol | None = None
    style: Symbol | None = None

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "tick": self.tick,
            "actor": str(self.actor),
            "event": str(self.event),
            "target": str(self.target) if self.target else None,
            "utterance": self.utterance,
            "entryId": str(self.entry_id) if self.entry_id else None,
            "style": str(self.style) if self.style else None,
        }


# ---------------------------------------------------------------------------
# Loading


def _expect(value, types, path: str, what: str):
    if not isinstance(value, types):
        raise ScenarioError(path, f"expected {what}, got {type(value).__name__}")
    return value


def _parse_name_at(text, path: str) -> Name:
    if isinstance(text, bool):
        return coerce_name(text)
    if isinstance(text, (int, float)):
        return coerce_name(text)
    _expect(text, str, path, "a WFN string")
    try:
        return parse_name(text)
    except (NameSyntaxError, ValueError) as exc:
        raise ScenarioError(path, str(exc))


def _parse_conditions_at(raw, path: str) -> tuple[Condition, ...]:
    if raw is None:
        return ()
    _expect(raw, list, path, "a list of condition strings")
    out = []
    for i, text in enumerate(raw):
        _expect(text, str, f"{path}[{i}]", "a condition string")
        try:
            out.append(Condition.parse(text))
        except ValueError as exc:
            raise ScenarioError(f"{path}[{i}]", str(exc))
    return tuple(out)


def _parse_symbol_at(text, path: str) -> Symbol:
    name = _parse_name_at(text, path)
    if not isinstance(name, Symbol):
        raise ScenarioError(path, f"expected a symbol, got {name}")
    return name


def _parse_appraisal_rule(raw, path: str) -> AppraisalRule:
    _expect(raw, dict, path, "an appraisal rule object")
    variables = []
    for i, item in enumerate(raw.get("appraisalVariables", [])):
        vp = f"{path}.appraisalVariables[{i}]"
        _expect(item, dict, vp, "an appraisal variable object")
        kind = _expect(item.get("kind"), str, f"{vp}.kind", "a kind string")
        goal = item.get("goal")
        try:
            variables.append(AppraisalVariable(
                kind=kind,
                value=_parse_name_at(item.get("value"), f"{vp}.value"),
                goal=_parse_name_at(goal, f"{vp}.goal") if goal is not None else None,
            ))
        except ValueError as exc:
            raise ScenarioError(vp, str(exc))
    return AppraisalRule(
        event=_parse_name_at(raw.get("event"), f"{path}.event"),
        target=_parse_name_at(raw.get("target", "SELF"), f"{path}.target"),
        variables=tuple(variables),
        conditions=_parse_conditions_at(raw.get("conditions"), f"{path}.conditions"),
    )


def _parse_decision_rule(raw, path: str) -> DecisionRule:
    _expect(raw, dict, path, "a decision rule object")
    priority = raw.get("priority")
    if priority is None:
        raise ScenarioError(f"{path}.priority", "priority is required")
    return DecisionRule(
        action=_parse_name_at(raw.get("action"), f"{path}.action"),
        target=_parse_name_at(raw.get("target", "SELF"), f"{path}.target"),
        conditions=_parse_conditions_at(raw.get("conditions"), f"{path}.conditions"),
        priority=_parse_name_at(priority, f"{path}.priority"),
        layer=_parse_symbol_at(raw.get("layer", "Deliberative"), f"{path}.layer"),
    )


def _parse_attribution_rule(raw, path: str) -> AttributionRule:
    _expect(raw, dict, path, "an attribution rule object")
    si_value = _expect(raw.get("siValue"), (int, float), f"{path}.siValue", "a number")
    return AttributionRule(
        target=_parse_name_at(raw.get("target", "[t]"), f"{path}.target"),
        conditions=_parse_conditions_at(raw.get("conditions"), f"{path}.conditions"),
        si_value=float(si_value),
    )


def _parse_exchange(raw, path: str) -> SocialExchange:
    _expect(raw, dict, path, "a social exchange object")
    steps = _expect(raw.get("steps"), list, f"{path}.steps", "a list of step symbols")
    modes = []
    for i, item in enumerate(raw.get("modeConditions", [])):
        mp = f"{path}.modeConditions[{i}]"
        _expect(item, dict, mp, "a mode condition object")
        value = _expect(item.get("value"), (int, float), f"{mp}.value", "a number")
        modes.append(ModeCondition(
            mode=_parse_symbol_at(item.get("mode"), f"{mp}.mode"),
            conditions=_parse_conditions_at(item.get("conditions"), f"{mp}.conditions"),
            value=float(value),
        ))
    try:
        return SocialExchange(
            name=_parse_symbol_at(raw.get("name"), f"{path}.name"),
            target=_parse_name_at(raw.get("target", "[t]"), f"{path}.target"),
            steps=tuple(_parse_symbol_at(s, f"{path}.steps[{i}]")
                        for i, s in enumerate(steps)),
            starting_conditions=_parse_conditions_at(
                raw.get("startingConditions"), f"{path}.startingConditions"),
            mode_conditions=tuple(modes),
        )
    except ValueError as exc:
        raise ScenarioError(path, str(exc))


def _parse_dialogue_entry(raw, path: str) -> DialogueEntry:
    _expect(raw, dict, path, "a dialogue entry object")
    try:
        return DialogueEntry.make(
            _expect(raw.get("id"), str, f"{path}.id", "an id string"),
            _expect(raw.get("currentState"), str, f"{path}.currentState", "a state"),
            _expect(raw.get("nextState"), str, f"{path}.nextState", "a state"),
            _expect(raw.get("utterance", ""), str, f"{path}.utterance", "text"),
            raw.get("meanings", []),
            raw.get("styles", []),
        )
    except ValueError as exc:
        raise ScenarioError(path, str(exc))


def _parse_effect_rule(raw, path: str) -> EffectRule:
    _expect(raw, dict, path, "an effect rule object")
    effects = []
    raw_effects = _expect(raw.get("effects"), list, f"{path}.effects", "a list")
    for i, item in enumerate(raw_effects):
        ep = f"{path}.effects[{i}]"
        _expect(item, dict, ep, "an effect object")
        applies = item.get("appliesTo", ["*"])
        _expect(applies, list, f"{ep}.appliesTo", "a list of names")
        effects.append(Effect(
            property=_parse_name_at(item.get("property"), f"{ep}.property"),
            value=_parse_name_at(item.get("value"), f"{ep}.value"),
            applies_to=tuple(_parse_name_at(a, f"{ep}.appliesTo[{j}]")
                             for j, a in enumerate(applies)),
        ))
    return EffectRule(
        event=_parse_name_at(raw.get("event"), f"{path}.event"),
        conditions=_parse_conditions_at(raw.get("conditions"), f"{path}.conditions"),
        effects=tuple(effects),
    )


def _parse_emotion_params(raw, path: str) -> dict[EmotionType, float]:
    if raw is None:
        return {}
    _expect(raw, dict, path, "an object keyed by emotion type")
    out = {}
    for key, value in raw.items():
        try:
            type_ = EmotionType.parse(key)
        except ValueError as exc:
            raise ScenarioError(f"{path}.{key}", str(exc))
        out[type_] = float(_expect(value, (int, float), f"{path}.{key}", "a number"))
    return out


def _build_character(raw, path: str, graph: DialogueGraph) -> tuple[RolePlayCharacter, bool]:
    _expect(raw, dict, path, "a character profile object")
    name = _parse_symbol_at(raw.get("name"), f"{path}.name")
    goals = []
    for i, item in enumerate(raw.get("goals", [])):
        gp = f"{path}.goals[{i}]"
        _expect(item, dict, gp, "a goal object")
        try:
            goals.append(Goal(
                name=_parse_symbol_at(item.get("name"), f"{gp}.name"),
                significance=float(_expect(item.get("significance", 5),
                                           (int, float), f"{gp}.significance", "a number")),
                likelihood=float(_expect(item.get("likelihood", 0.5),
                                         (int, float), f"{gp}.likelihood", "a number")),
            ))
        except ValueError as exc:
            raise ScenarioError(gp, str(exc))

    character = RolePlayCharacter(
        name,
        body_name=raw.get("bodyName"),
        appraisal_rules=[_parse_appraisal_rule(r, f"{path}.appraisalRules[{i}]")
                         for i, r in enumerate(raw.get("appraisalRules", []))],
        decision_rules=[_parse_decision_rule(r, f"{path}.decisionRules[{i}]")
                        for i, r in enumerate(raw.get("decisionRules", []))],
        attribution_rules=[_parse_attribution_rule(r, f"{path}.attributionRules[{i}]")
                           for i, r in enumerate(raw.get("attributionRules", []))],
        exchanges=[_parse_exchange(r, f"{path}.socialExchanges[{i}]")
                   for i, r in enumerate(raw.get("socialExchanges", []))],
        goals=goals,
        dialogue_graph=graph,
        thresholds=_parse_emotion_params(raw.get("emotionThresholds"),
                                         f"{path}.emotionThresholds"),
        half_lives=_parse_emotion_params(raw.get("emotionHalfLives"),
                                         f"{path}.emotionHalfLives"),
        mood=float(_expect(raw.get("mood", 0), (int, float), f"{path}.mood", "a number")),
    )
    for i, item in enumerate(raw.get("beliefs", [])):
        bp = f"{path}.beliefs[{i}]"
        _expect(item, dict, bp, "a belief object")
        certainty = float(_expect(item.get("certainty", 1.0), (int, float),
                                  f"{bp}.certainty", "a number"))
        try:
            character.tell(
                _parse_name_at(item.get("name"), f"{bp}.name"),
                _parse_name_at(item.get("value"), f"{bp}.value"),
                _parse_symbol_at(item.get("perspective", "SELF"), f"{bp}.perspective"),
                certainty,
            )
        except ValueError as exc:
            raise ScenarioError(bp, str(exc))
    for i, item in enumerate(raw.get("initialEmotions", [])):
        ep = f"{path}.initialEmotions[{i}]"
        _expect(item, dict, ep, "an emotion object")
        try:
            type_ = EmotionType.parse(_expect(item.get("type"), str, f"{ep}.type", "a type"))
            intensity = float(_expect(item.get("intensity"), (int, float),
                                      f"{ep}.intensity", "a number"))
            target = item.get("target")
            character.state.add_emotion(Emotion(
                type_, intensity,
                target=_parse_name_at(target, f"{ep}.target") if target else None))
        except ValueError as exc:
            raise ScenarioError(ep, str(exc))
    for i, item in enumerate(raw.get("knownAgents", [])):
        character.add_known_agent(_parse_symbol_at(item, f"{path}.knownAgents[{i}]"))
    return character, bool(raw.get("human", False))


class Simulation:
    """Loaded scenario plus the live turn loop."""

    def __init__(self, characters: list[RolePlayCharacter], humans: set[str],
                 dialogue: DialogueGraph, effects: list[EffectRule],
                 start_states: list[Symbol], name: str = "", description: str = "",
                 raw: dict | None = None):
        self.characters = characters
        self.humans = humans
        self.dialogue = dialogue
        self.effects = effects
        self.start_states = start_states
        self.name = name
        self.description = description
        self.raw = raw or {}
        self.world = KnowledgeBase()  # inspection mirror, not authoritative
        self.log: list[LogEntry] = []
        self.clock = 0
        self.turn_index = 0
        self.validation: ValidationReport = dialogue.validate(start_states)
        for problem in self.validation.errors + self.validation.warnings:
            log.warning("dialogue validation: %s", problem)

    # -- lookups --------------------------------------------------------

    def character(self, name: Symbol | str) -> RolePlayCharacter | None:
        key = coerce_name(str(name)).canonical()
        for character in self.characters:
            if character.name.canonical() == key:
                return character
        return None

    def is_human(self, name: Symbol | str) -> bool:
        return coerce_name(str(name)).canonical() in self.humans

    @property
    def turn_holder(self) -> RolePlayCharacter | None:
        if not self.characters:
            return None
        return self.characters[self.turn_index % len(self.characters)]

    def _advance_turn(self):
        if self.characters:
            self.turn_index = (self.turn_index + 1) % len(self.characters)

    # -- the loop ---------------------------------------------------------

    def step(self) -> LogEntry | None:
        """Let the turn holder act: Reactive first, then Deliberative.

        Human turns are left to ``inject_human_choice``; an agent with no
        candidates passes its turn.  Returns the executed log entry.
        """
        actor = self.turn_holder
        if actor is None or self.is_human(actor.name):
            return None
        candidates = actor.decide("Reactive")
        if not candidates:
            candidates = actor.decide("Deliberative")
        if not candidates:
            self._advance_turn()
            self._tick_all()
            return None
        head = candidates[0]
        entry = self._execute(actor, head.action, head.target)
        self._advance_turn()
        return entry

    def dialogue_options(self, role: Symbol | str) -> list[DialogueOption]:
        """Entries valid at the role's current dialogue states."""
        character = self.character(role)
        if character is None:
            return []
        options: list[DialogueOption] = []
        seen: set[tuple[str, str]] = set()
        for value, subst in character.ask("DialogueState([partner])"):
            if not isinstance(value, Symbol):
                continue
            partner = subst.apply(parse_name("[partner]"))
            if not isinstance(partner, Symbol):
                continue
            for entry in self.dialogue.outgoing(value):
                key = (entry.id.canonical(), partner.canonical())
                if key not in seen:
                    seen.add(key)
                    options.append(DialogueOption(entry, partner, value))
        return options

    def inject_human_choice(self, role: Symbol | str, entry_id: Symbol | str) -> LogEntry:
        """Execute a human role's dialogue choice through the normal path."""
        character = self.character(role)
        if character is None:
            raise ScenarioError("role", f"unknown character {role}")
        if not self.is_human(character.name):
            raise ScenarioError("role", f"{role} is not a human role")
        entry = self.dialogue.entry(str(entry_id))
        options = self.dialogue_options(role)
        if entry is None:
            raise StaleChoiceError(f"unknown dialogue entry {entry_id}", options)
        chosen = [o for o in options if o.entry.id == entry.id]
        if not chosen:
            raise StaleChoiceError(
                f"entry {entry_id} is not valid at {role}'s current state", options)
        option = chosen[0]
        meaning = entry.meanings[0] if entry.meanings else NEUTRAL_TAG
        style = entry.styles[0] if entry.styles else NEUTRAL_TAG
        action = ComposedName(SPEAK, (entry.current_state, entry.next_state, meaning, style))
        log_entry = self._execute(character, action, option.partner)
        self.turn_index = (self.characters.index(character) + 1) % len(self.characters)
        return log_entry

    def run_until_human_turn(self, limit: int = 100) -> list[LogEntry]:
        """Step agents until a human holds the turn (or nothing happens)."""
        produced: list[LogEntry] = []
        for _ in range(limit):
            actor = self.turn_holder
            if actor is None or self.is_human(actor.name):
                break
            entry = self.step()
            if entry is not None:
                produced.append(entry)
        return produced

    # -- execution ---------------------------------------------------------

    def _execute(self, actor: RolePlayCharacter, action: Name, target: Name) -> LogEntry:
        event = Event(ComposedName(Symbol("Event"), (
            Symbol("Action-End"), actor.name, action, coerce_name(target))), self.clock)
        utterance = None
        entry_id = None
        style = None
        if isinstance(action, ComposedName) and action.root == SPEAK and len(action.terms) == 4:
            entry = self.dialogue.find_entry(*action.terms)
            if entry is not None:
                utterance = entry.utterance
                entry_id = entry.id
                style = action.terms[3] if isinstance(action.terms[3], Symbol) else None
        self._apply_effects(event)
        for character in self.characters:
            character.perceive(event)
        log_entry = LogEntry(
            index=len(self.log), tick=self.clock, actor=actor.name, event=event,
            target=coerce_name(target) if isinstance(coerce_name(target), Symbol) else None,
            utterance=utterance, entry_id=entry_id, style=style)
        self.log.append(log_entry)
        self._tick_all()
        return log_entry

    def _tick_all(self):
        for character in self.characters:
            character.tick(1)
        self.clock += 1

    def _apply_effects(self, event: Event):
        for index, rule in enumerate(self.effects):
            seed = unify(rule.event, event.name)
            if seed is None:
                continue
            sets = self.world.evaluate_conditions(list(rule.conditions), seed=seed)
            if not sets:
                continue
            bindings = sets[0]
            writes: list[tuple[Name, Name, tuple[Name, ...]]] = []
            ok = True
            for effect in rule.effects:
                prop = bindings.apply(effect.property)
                value = bindings.apply(effect.value)
                receivers = tuple(bindings.apply(a) for a in effect.applies_to)
                if not prop.is_ground() or not value.is_ground() or \
                        any(not r.is_ground() for r in receivers):
                    log.warning("effect rule %d: unresolved effect %s = %s, rule skipped",
                                index, prop, value)
                    ok = False
                    break
                writes.append((prop, value, receivers))
            if not ok:
                continue  # atomic: all effects of the rule or none
            for prop, value, receivers in writes:
                self.world.tell(prop, value)
                for character in self.characters:
                    if _receives(character.name, receivers):
                        character.kb.tell(prop, value)

    # -- export -------------------------------------------------------------

    def export_log_jsonl(self) -> str:
        return "".join(json.dumps(e.as_dict(), sort_keys=True) + "\n" for e in self.log)


def _receives(name: Symbol, receivers: tuple[Name, ...]) -> bool:
    for receiver in receivers:
        if isinstance(receiver, Symbol) and (receiver.is_universal or receiver == name):
            return True
    return False


def from_dict(data: dict, source: str = "scenario") -> Simulation:
    """Build a simulation from a parsed scenario document."""
    _expect(data, dict, source, "a JSON object")
    version = data.get("formatVersion", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ScenarioError("formatVersion", f"unsupported version {version}")
    entries = [_parse_dialogue_entry(raw, f"dialogues[{i}]")
               for i, raw in enumerate(data.get("dialogues", []))]
    graph = DialogueGraph(entries)
    characters: list[RolePlayCharacter] = []
    humans: set[str] = set()
    raw_profiles = _expect(data.get("characters", []), list, "characters", "a list")
    for i, raw in enumerate(raw_profiles):
        character, is_human = _build_character(raw, f"characters[{i}]", graph)
        characters.append(character)
        if is_human:
            humans.add(character.name.canonical())
    for name in data.get("humanRoles", []):
        sym = _parse_symbol_at(name, "humanRoles")
        if not any(c.name == sym for c in characters):
            raise ScenarioError("humanRoles", f"unknown character {name}")
        humans.add(sym.canonical())
    # Every participant knows every other from the start.
    for character in characters:
        for other in characters:
            if other.name != character.name:
                character.add_known_agent(other.name)
    effects = [_parse_effect_rule(raw, f"effectRules[{i}]")
               for i, raw in enumerate(data.get("effectRules", []))]
    starts = [_parse_symbol_at(s, f"startStates[{i}]")
              for i, s in enumerate(data.get("startStates", []))]
    return Simulation(
        characters, humans, graph, effects, starts,
        name=str(data.get("name", "")),
        description=str(data.get("description", "")),
        raw=data,
    )


def load(path: str | Path) -> Simulation:
    """Load a scenario JSON file into a ready simulation."""
    file_path = Path(path)
    try:
        text = file_path.read_text()
    except OSError as exc:
        raise ScenarioError(str(path), f"cannot read file: {exc}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(str(path), f"invalid JSON: {exc}")
    return from_dict(data, source=str(path))


def loads(text: str) -> Simulation:
    return from_dict(json.loads(text))
