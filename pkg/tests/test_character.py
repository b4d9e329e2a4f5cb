import pytest

from affectengine.appraisal import AppraisalRule, AppraisalVariable, make_goal
from affectengine.character import RolePlayCharacter
from affectengine.decision import DELIBERATIVE, DecisionRule
from affectengine.dialogue import DialogueEntry, DialogueGraph
from affectengine.emotional_state import EmotionType
from affectengine.kb import parse_conditions
from affectengine.wfn import Event, Symbol, Variable, parse_name


def smile_rule():
    return AppraisalRule(
        event=parse_name("Event(Action-End, [x], Smile, SELF)"),
        target=parse_name("SELF"),
        variables=(AppraisalVariable("Desirability", parse_name("[d]")),),
        conditions=tuple(parse_conditions(["RapportLevel(SELF, [x]) = [d]"])),
    )


def speak_rules():
    generic = DecisionRule(
        action=parse_name("Speak([cs], [ns], [m], [s])"),
        target=parse_name("[x]"),
        conditions=tuple(parse_conditions([
            "DialogueState([x]) = [cs]",
            "ValidDialogue([cs], [ns], [m], [s]) = True",
        ])),
        priority=parse_name("1"),
        layer=DELIBERATIVE,
    )
    rude = DecisionRule(
        action=parse_name("Speak([cs], [ns], [m], Rude)"),
        target=parse_name("[x]"),
        conditions=tuple(parse_conditions([
            "DialogueState([x]) = [cs]",
            "ValidDialogue([cs], [ns], [m], Rude) = True",
            "Mood(SELF) < 0",
        ])),
        priority=parse_name("2"),
        layer=DELIBERATIVE,
    )
    return [generic, rude]


def paper_graph():
    return DialogueGraph([
        DialogueEntry.make("d1", "s1", "s2", "What are you doing?"),
        DialogueEntry.make("d2", "s1", "s3", "How are you feeling?"),
        DialogueEntry.make("d3", "s2", "s4", "Nothing special."),
        DialogueEntry.make("d4", "s3", "s4", "I am feeling great."),
        DialogueEntry.make("d5", "s3", "s4", "None of your business.",
                           styles=["Rude"]),
    ])


def john_with_rapport(value=5):
    john = RolePlayCharacter("John", appraisal_rules=[smile_rule()])
    john.tell("RapportLevel(SELF, Sam)", value)
    return john


# -- perceive -------------------------------------------------------------

def test_property_change_updates_belief():
    char = RolePlayCharacter("Sam")
    char.perceive(Event.parse("Event(Property-Change, Sam, State(TV), On)"))
    assert char.kb.lookup("State(TV)") == Symbol("On")


def test_smile_event_full_pipeline():
    john = john_with_rapport(5)
    accepted = john.perceive(Event.parse("Event(Action-End, Sam, Smile, John)"))
    assert [e.type for e in accepted] == [EmotionType.JOY]
    assert john.state.emotions[0].intensity == pytest.approx(5)
    assert "sam" in john.known_agents
    assert len(john.memory) == 1
    assert john.memory[0].emotions == ((EmotionType.JOY, 5.0),)


def test_unmatched_event_still_remembered():
    char = RolePlayCharacter("Sam")
    char.perceive(Event.parse("Event(Action-End, John, Wave, Sam)"))
    assert len(char.memory) == 1
    assert char.memory[0].emotions == ()
    assert char.state.emotions == []


def test_perceive_rejects_non_ground():
    char = RolePlayCharacter("Sam")
    with pytest.raises(ValueError):
        char.perceive(Event.parse("Event(Action-End, [x], Wave, Sam)"))


def test_known_agents_grow_monotonically():
    char = RolePlayCharacter("Sam")
    char.perceive(Event.parse("Event(Action-End, John, Wave, Sam)"))
    char.perceive(Event.parse("Event(Action-End, Mary, Wave, Sam)"))
    char.perceive(Event.parse("Event(Action-End, John, Wave, Mary)"))
    assert set(char.known_agents) == {"john", "mary"}
    # Own actions never register the character as its own acquaintance.
    char.perceive(Event.parse("Event(Action-End, Sam, Wave, John)"))
    assert "sam" not in char.known_agents


def test_modeled_states_updated_from_other_perspective():
    sam = RolePlayCharacter("Sam", appraisal_rules=[smile_rule()])
    sam.perceive(Event.parse("Event(Action-End, John, Wave, Sam)"))  # meet John
    sam.tell("RapportLevel(John, Sam)", 2, perspective="John")
    sam.perceive(Event.parse("Event(Action-End, Sam, Smile, John)"))
    modeled = sam.modeled_state("John")
    assert [e.type for e in modeled.emotions] == [EmotionType.JOY]
    assert modeled.emotions[0].intensity == pytest.approx(2)
    # Self state untouched: no rule matched for Sam.
    assert sam.state.emotions == []


def test_perceiving_does_not_mutate_other_characters():
    sam = RolePlayCharacter("Sam")
    john = john_with_rapport()
    before = len(john.memory), len(john.state.emotions), len(john.kb.all_beliefs())
    sam.perceive(Event.parse("Event(Action-End, Sam, Smile, John)"))
    assert (len(john.memory), len(john.state.emotions), len(john.kb.all_beliefs())) == before


# -- decide ----------------------------------------------------------------

def make_speaker(mood=0.0):
    agent = RolePlayCharacter("Alex", decision_rules=speak_rules(),
                              dialogue_graph=paper_graph(), mood=mood)
    agent.tell("DialogueState(Player)", "s1")
    return agent


def test_speak_rule_offers_both_options_at_s1():
    agent = make_speaker()
    candidates = agent.decide(DELIBERATIVE)
    assert len(candidates) == 2
    actions = [str(c.action) for c in candidates]
    assert actions[0] == "Speak(s1, s2, -, -)"
    assert actions[1] == "Speak(s1, s3, -, -)"


def test_rude_style_wins_when_mood_negative():
    agent = make_speaker(mood=-3)
    agent.tell("DialogueState(Player)", "s3")
    head = agent.decide(DELIBERATIVE)[0]
    assert str(head.action) == "Speak(s3, s4, -, Rude)"
    assert head.score == pytest.approx(2.0)


def test_neutral_choice_when_mood_positive():
    agent = make_speaker(mood=3)
    agent.tell("DialogueState(Player)", "s3")
    head = agent.decide(DELIBERATIVE)[0]
    assert str(head.action) == "Speak(s3, s4, -, -)"


def test_unknown_layer_returns_empty():
    agent = make_speaker()
    assert agent.decide("Expressive") == []


def test_fresh_character_decides_nothing():
    assert RolePlayCharacter("Blank").decide() == []


# -- tick and recall ------------------------------------------------------

def test_tick_decays_self_and_modeled_states():
    sam = RolePlayCharacter("Sam", appraisal_rules=[smile_rule()])
    sam.tell("RapportLevel(Sam, John)", 4)
    sam.tell("RapportLevel(John, Sam)", 4, perspective="John")
    sam.perceive(Event.parse("Event(Action-End, John, Smile, Sam)"))  # Sam's Joy
    sam.perceive(Event.parse("Event(Action-End, Sam, Smile, John)"))  # John's Joy
    assert sam.state.emotions[0].intensity == pytest.approx(4)
    assert sam.modeled_state("John").emotions[0].intensity == pytest.approx(4)
    sam.tick(8)
    assert sam.clock == 8
    assert sam.state.emotions[0].intensity == pytest.approx(2)
    assert sam.modeled_state("John").emotions[0].intensity == pytest.approx(2)


def test_recall_by_pattern():
    john = john_with_rapport()
    john.perceive(Event.parse("Event(Action-End, Sam, Smile, John)"))
    john.perceive(Event.parse("Event(Action-End, Sam, Wave, John)"))
    records = john.recall("Event(Action-End, [x], Smile, *)")
    assert len(records) == 1
    assert records[0].event.action == Symbol("Smile")
    assert john.recall("Event(Action-End, *, *, *)") == john.memory
    assert RolePlayCharacter("Empty").recall("Event(Action-End, *, *, *)") == []


def test_recall_is_tick_ordered():
    char = RolePlayCharacter("Sam")
    char.perceive(Event.parse("Event(Action-End, A, Wave, Sam)"))
    char.tick(3)
    char.perceive(Event.parse("Event(Action-End, B, Wave, Sam)"))
    ticks = [r.tick for r in char.recall("Event(Action-End, [x], Wave, Sam)")]
    assert ticks == [0, 3]


def test_memory_records_only_actions():
    char = RolePlayCharacter("Sam")
    char.perceive(Event.parse("Event(Property-Change, Sam, State(TV), On)"))
    assert char.memory == []


# -- meta-beliefs through the character -------------------------------------

def test_mood_meta_belief():
    agent = RolePlayCharacter("Sam", mood=-3)
    [(value, _)] = agent.kb.ask("Mood(SELF)")
    assert value.numeric == pytest.approx(-3)
    [(value, _)] = agent.kb.ask("Mood(Sam)")
    assert value.numeric == pytest.approx(-3)


def test_mood_meta_belief_for_modeled_agent():
    agent = RolePlayCharacter("Sam")
    agent.add_known_agent("John")
    [(value, _)] = agent.kb.ask("Mood(John)")
    assert value.numeric == 0.0


def test_is_agent_meta_belief():
    agent = RolePlayCharacter("Sam")
    agent.add_known_agent("John")
    results = agent.kb.ask("IsAgent([who])")
    names = {s.apply(Variable("who")).canonical() for _, s in results}
    assert names == {"sam", "john"}


def test_tom_si_integration():
    # ToM(John, SI(SELF)): how important does John consider Sam?
    from affectengine.reasoners import AttributionRule

    sam = RolePlayCharacter("Sam", attribution_rules=[
        AttributionRule(parse_name("[t]"), (), 20),
        AttributionRule(parse_name("[t]"),
                        tuple(parse_conditions(["IsFriend(SELF, [t]) = True"])), 30),
    ])
    sam.tell("IsFriend(John, Sam)", "True", perspective="John")
    # character.ask expands SELF to Sam before the meta-belief dispatch.
    [(value, _)] = sam.ask("ToM(John, SI(SELF))")
    assert value.numeric == 50


def test_goal_state_visible_on_character():
    goal = make_goal("Survive", 8, 0.5)
    char = RolePlayCharacter("Sam", goals=[goal])
    assert char.goals[goal.name.canonical()].likelihood == 0.5


def test_determinism_same_events_same_outcome():
    def run():
        agent = make_speaker(mood=-1)
        agent.tell("RapportLevel(SELF, Player)", 5)
        agent.appraisal_rules.append(smile_rule())
        agent.perceive(Event.parse("Event(Action-End, Player, Smile, Alex)"))
        agent.tick(2)
        agent.tell("DialogueState(Player)", "s3")
        return ([str(c.action) for c in agent.decide(DELIBERATIVE)],
                [(r.event.name.canonical(), r.tick, r.emotions) for r in agent.memory],
                agent.mood)

    assert run() == run()
