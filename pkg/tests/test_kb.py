import random

import pytest

from affectengine.kb import BeliefError, Condition, KnowledgeBase, parse_conditions
from affectengine.wfn import (
    SELF,
    TRUE,
    Symbol,
    Variable,
    num_symbol,
    parse_name,
)
from oracles import brute_force_conditions, engine_result_keys


@pytest.fixture
def kb():
    return KnowledgeBase(owner="Sam")


# -- tell ------------------------------------------------------------------

def test_tell_and_exact_ask(kb):
    kb.tell("Has(Apple)", "True")
    results = kb.ask("Has(Apple)")
    assert len(results) == 1
    value, subst = results[0]
    assert value == TRUE and subst.certainty == 1.0


def test_tell_overwrites(kb):
    kb.tell("Has(Apple)", "True")
    kb.tell("Has(Apple)", "False")
    assert len(kb.beliefs()) == 1
    assert kb.lookup("Has(Apple)") == Symbol("False")


def test_tell_numeric_property(kb):
    kb.tell("RapportLevel(Sam, John)", 5)
    assert kb.lookup("RapportLevel(Sam, John)") == num_symbol(5)


def test_tell_rejects_non_ground(kb):
    with pytest.raises(BeliefError):
        kb.tell("Has([x])", "True")
    with pytest.raises(BeliefError):
        kb.tell("Has(Apple)", "[v]")


def test_tell_rejects_bad_certainty(kb):
    with pytest.raises(BeliefError):
        kb.tell("Has(Apple)", "True", certainty=1.5)


def test_tell_rejects_registered_meta_root(kb):
    kb.register_meta("Fancy", lambda args, persp, kb_, seed: [])
    with pytest.raises(BeliefError):
        kb.tell("Fancy(Thing)", "True")


# -- ask -------------------------------------------------------------------

def test_ask_binds_variables_per_belief(kb):
    kb.tell("Has(Bag)", "True")
    kb.tell("Has(Apple)", "True")
    results = kb.ask("Has([object])")
    bound = {subst.apply(Variable("object")).canonical() for _, subst in results}
    assert bound == {"bag", "apple"}


def test_ask_empty_kb(kb):
    assert kb.ask("Missing(Thing)") == []


def test_ask_unknown_perspective_is_empty(kb):
    kb.tell("Has(Apple)", "True")
    assert kb.ask("Has(Apple)", perspective="Stranger") == []


def test_ask_multiplies_certainty(kb):
    kb.tell("Has(Apple)", "True", certainty=0.4)
    [(_, subst)] = kb.ask("Has(Apple)")
    assert subst.certainty == pytest.approx(0.4)


def test_owner_perspective_aliases_self(kb):
    kb.tell("Has(Apple)", "True", perspective="Sam")
    assert kb.lookup("Has(Apple)", SELF) == TRUE


def test_perspectives_are_isolated(kb):
    kb.tell("Has(Apple)", "True")
    kb.tell("Has(Apple)", "False", perspective="John")
    assert kb.lookup("Has(Apple)") == TRUE
    assert kb.lookup("Has(Apple)", "John") == Symbol("False")


# -- meta-beliefs -------------------------------------------------------------

def test_meta_dispatch_and_shadowing(kb):
    kb.tell("Level(Thing)", 1)
    kb.register_meta("Level", lambda args, persp, kb_, seed: [(num_symbol(9), seed)])
    [(value, _)] = kb.ask("Level(Thing)")
    assert value == num_symbol(9)
    # The stored belief with the same root is now unreachable, even via '*'.
    values = [v for v, _ in kb.ask(parse_name("*"))]
    assert num_symbol(1) not in values


def test_duplicate_meta_registration_rejected(kb):
    with pytest.raises(BeliefError):
        kb.register_meta("ToM", lambda args, persp, kb_, seed: [])


def test_tom_reads_other_perspective(kb):
    kb.tell("Has(Apple)", "True", perspective="John")
    [(value, subst)] = kb.ask("ToM(John, Has([x]))")
    assert value == TRUE
    assert subst.apply(Variable("x")) == Symbol("Apple")


def test_tom_enumerates_unbound_agent(kb):
    kb.tell("Has(Apple)", "True", perspective="John")
    kb.tell("Has(Pear)", "True", perspective="Mary")
    results = kb.ask("ToM([who], Has([x]))")
    agents = {subst.apply(Variable("who")).canonical() for _, subst in results}
    assert agents == {"john", "mary"}


def test_tom_nesting_depth_is_one(kb):
    kb.tell("Has(Apple)", "True", perspective="John")
    assert kb.ask("ToM(John, ToM(Mary, Has([x])))") == []
    assert kb.ask("ToM(John, Has(Apple))", perspective="Mary") == []


def test_nested_meta_beliefs(kb):
    # A meta-belief may ask the KB, which dispatches other meta-beliefs.
    kb.register_meta("Inner", lambda args, persp, kb_, seed: [(num_symbol(2), seed)])

    def outer(args, persp, kb_, seed):
        return [(value, subst) for value, subst in kb_.ask(parse_name("Inner(X)"), persp, seed)]

    kb.register_meta("Outer", outer)
    [(value, _)] = kb.ask("Outer(Y)")
    assert value == num_symbol(2)


# -- conditions ---------------------------------------------------------------

def test_condition_parsing():
    cond = Condition.parse("RapportLevel(SELF, [x]) = [d]")
    assert cond.op == "=" and cond.lhs == parse_name("RapportLevel(SELF, [x])")
    assert Condition.parse("Mood(SELF) < 0").op == "<"
    assert Condition.parse("A != B").op == "!="
    assert Condition.parse("[v] >= 2").op == ">="
    with pytest.raises(ValueError):
        Condition.parse("A B")
    with pytest.raises(ValueError):
        Condition.parse("A = B = C")


def test_eat_example_conditions(kb):
    kb.tell("Has(Bag)", "True")
    kb.tell("Has(Apple)", "True")
    kb.tell("Edible(Apple)", "True")
    sets = kb.evaluate_conditions(parse_conditions([
        "Has([object]) = True",
        "Edible([object]) = True",
    ]))
    assert len(sets) == 1
    assert sets[0].apply(Variable("object")) == Symbol("Apple")


def test_empty_condition_list_is_vacuously_true(kb):
    sets = kb.evaluate_conditions([])
    assert len(sets) == 1 and len(sets[0]) == 0


def test_numeric_comparison_capture(kb):
    kb.tell("Count(A)", 1)
    kb.tell("Count(B)", 3)
    kb.tell("Count(C)", 7)
    conditions = parse_conditions(["Count([x]) = [v]", "[v] > 2"])
    sets = kb.evaluate_conditions(conditions)
    bound = {s.apply(Variable("x")).canonical() for s in sets}
    assert bound == {"b", "c"}
    # Brute-force oracle agrees.
    assert engine_result_keys(sets) == brute_force_conditions(kb, conditions)


def test_ordering_on_non_numeric_discards_quietly(kb):
    kb.tell("Count(A)", "Lots")
    sets = kb.evaluate_conditions(parse_conditions(["Count([x]) = [v]", "[v] > 2"]))
    assert sets == []


def test_value_capture_through_rhs_lookup(kb):
    kb.tell("RapportLevel(Sam, John)", 5)
    kb.tell("Mirror(X)", 5)
    sets = kb.evaluate_conditions(parse_conditions(["RapportLevel(Sam, John) = Mirror(X)"]))
    assert len(sets) == 1


def test_bare_symbol_is_literal_unless_stored(kb):
    kb.tell("Weather", "Raining")
    assert len(kb.evaluate_conditions(parse_conditions(["Weather = Raining"]))) == 1
    # 'Raining' itself is not a stored property, so it compares literally.
    assert len(kb.evaluate_conditions(parse_conditions(["Raining = Raining"]))) == 1


def test_not_equal_requires_ground_sides(kb):
    kb.tell("Has(Apple)", "True")
    kb.tell("Has(Bag)", "False")
    sets = kb.evaluate_conditions(parse_conditions(["Has([x]) != True"]))
    assert len(sets) == 1
    assert sets[0].apply(Variable("x")) == Symbol("Bag")
    # An unbound bare variable cannot be proven unequal.
    assert kb.evaluate_conditions(parse_conditions(["[free] != True"])) == []


def test_certainty_products(kb):
    kb.tell("Has(Apple)", "True", certainty=0.5)
    kb.tell("Edible(Apple)", "True", certainty=0.8)
    [subst] = kb.evaluate_conditions(parse_conditions([
        "Has([object]) = True", "Edible([object]) = True"]))
    assert subst.certainty == pytest.approx(0.4)


def test_tell_then_ask_returns_certainty_as_told(kb):
    kb.tell("Shady(Fact)", "True", certainty=0.3)
    [(value, subst)] = kb.ask("Shady(Fact)")
    assert value == TRUE and subst.certainty == pytest.approx(0.3)


# -- randomized oracle equivalence ------------------------------------------

ENTITIES = ["A", "B", "C", "D", "E"]
ROOTS = ["P", "Q", "R"]
VALUES = ["True", "False", "1", "2", "3", "5", "8"]


def random_kb_and_conditions(rng: random.Random):
    kb = KnowledgeBase(owner="Sam")
    n_beliefs = rng.randint(1, 20)
    for _ in range(n_beliefs):
        root = rng.choice(ROOTS)
        args = [rng.choice(ENTITIES) for _ in range(rng.randint(1, 2))]
        value = rng.choice(VALUES + ENTITIES)
        kb.tell(f"{root}({', '.join(args)})", value)
    variables = ["x", "y", "z"][: rng.randint(0, 3)]
    bound: list[str] = []
    conditions = []
    for _ in range(rng.randint(1, 4)):
        kind = rng.random()
        if kind < 0.6 or not bound:
            # Lookup equality; may introduce new variables on either side.
            root = rng.choice(ROOTS)
            args = []
            for _ in range(rng.randint(1, 2)):
                if variables and rng.random() < 0.5:
                    var = rng.choice(variables)
                    args.append(f"[{var}]")
                    if var not in bound:
                        bound.append(var)
                else:
                    args.append(rng.choice(ENTITIES))
            if variables and rng.random() < 0.4:
                var = rng.choice(variables)
                rhs = f"[{var}]"
                if var not in bound:
                    bound.append(var)
            else:
                rhs = rng.choice(VALUES + ENTITIES)
            conditions.append(f"{root}({', '.join(args)}) = {rhs}")
        elif kind < 0.8:
            lhs = f"[{rng.choice(bound)}]"
            op = rng.choice(["<", "<=", ">", ">="])
            conditions.append(f"{lhs} {op} {rng.choice(['1', '2', '3', '5'])}")
        else:
            root = rng.choice(ROOTS)
            args = [f"[{rng.choice(bound)}]" if rng.random() < 0.5 else rng.choice(ENTITIES)
                    for _ in range(rng.randint(1, 2))]
            conditions.append(f"{root}({', '.join(args)}) != {rng.choice(VALUES)}")
    return kb, parse_conditions(conditions)


def test_condition_evaluation_matches_brute_force_oracle():
    rng = random.Random(20240817)
    for _ in range(150):
        kb, conditions = random_kb_and_conditions(rng)
        engine = engine_result_keys(kb.evaluate_conditions(conditions))
        oracle = brute_force_conditions(kb, conditions)
        assert engine == oracle, f"mismatch for {[str(c) for c in conditions]}"
