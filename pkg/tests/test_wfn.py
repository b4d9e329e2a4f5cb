import pytest
from hypothesis import given
from hypothesis import strategies as st

from affectengine.wfn import (
    SELF,
    UNIVERSAL,
    ComposedName,
    Event,
    NameSyntaxError,
    SubstitutionSet,
    Symbol,
    Variable,
    apply_substitution,
    composed,
    expand_self,
    num_symbol,
    parse_name,
    unify,
)


# -- parsing ----------------------------------------------------------------

def test_parse_composed_with_variable():
    name = parse_name("Has(John, [x])")
    assert isinstance(name, ComposedName)
    assert name.root == Symbol("Has")
    assert name.terms == (Symbol("John"), Variable("x"))


def test_parse_reserved_self():
    assert parse_name("SELF") == SELF
    assert parse_name("self") == SELF


def test_parse_nested_event_name():
    name = parse_name("Event(Action-End, Sam, Turn(On), TV)")
    assert isinstance(name, ComposedName)
    inner = name.terms[2]
    assert isinstance(inner, ComposedName)
    assert inner == composed("Turn", "On")


def test_parse_numbers():
    five = parse_name("5")
    assert isinstance(five, Symbol) and five.numeric == 5.0
    assert parse_name("5") == parse_name("5.0")
    assert parse_name("-4") == num_symbol(-4)
    assert parse_name("0.5").numeric == 0.5


def test_symbols_compare_case_insensitively():
    assert Symbol("True") == Symbol("true")
    assert Symbol("Action-End") == Symbol("ACTION-END")
    assert hash(Symbol("On")) == hash(Symbol("on"))
    assert Symbol("John") != Symbol("Johnny")


@pytest.mark.parametrize("text", [
    "", "Has(", "Has()", "[x", "()", "a b", "Has(a,,b)", "Has(a) extra",
    "Has(a))", "[x]]", "*(a)", "5(a)", "Ha$s",
])
def test_parse_errors(text):
    with pytest.raises((NameSyntaxError, ValueError)):
        parse_name(text)


def test_parse_error_carries_position():
    with pytest.raises(NameSyntaxError) as exc:
        parse_name("Has(a,,b)")
    assert exc.value.position == 6


def test_round_trip_examples():
    for text in ["Has(John, [x])", "SELF", "Event(Action-End, Sam, Turn(On), TV)",
                 "Color(Sky, Blue)", "*", "[target]", "RapportLevel(Sam, John)"]:
        assert parse_name(str(parse_name(text))) == parse_name(text)


# -- hypothesis strategies ----------------------------------------------------

idents = st.from_regex(r"[A-Za-z][A-Za-z0-9_-]{0,6}", fullmatch=True)
numbers = st.integers(-999, 999).map(str) | st.floats(
    allow_nan=False, allow_infinity=False, width=16).map(repr)
symbols = st.builds(Symbol, idents | numbers)
variables = st.builds(Variable, idents)
names = st.recursive(
    symbols | variables,
    lambda children: st.builds(
        lambda root, terms: ComposedName(Symbol(root), tuple(terms)),
        idents, st.lists(children, min_size=1, max_size=3)),
    max_leaves=8)
ground_names = st.recursive(
    symbols,
    lambda children: st.builds(
        lambda root, terms: ComposedName(Symbol(root), tuple(terms)),
        idents, st.lists(children, min_size=1, max_size=3)),
    max_leaves=8)


@given(names)
def test_print_parse_round_trip(name):
    assert parse_name(str(name)) == name


@given(names, names)
def test_unify_soundness(a, b):
    subst = unify(a, b)
    if subst is not None:
        assert subst.apply(a) == subst.apply(b)


@given(names, names)
def test_unify_symmetry_of_success(a, b):
    assert (unify(a, b) is None) == (unify(b, a) is None)


@given(ground_names, ground_names)
def test_ground_unification_is_equality(a, b):
    assert (unify(a, b) is not None) == (a == b)


@given(names)
def test_apply_is_idempotent(name):
    subst = SubstitutionSet()
    for var in list(name.variables())[:2]:
        bound = subst.bind(var, Symbol("Const"))
        if bound is not None:
            subst = bound
    once = subst.apply(name)
    assert subst.apply(once) == once


# -- unification specifics ----------------------------------------------------

def test_unify_binds_variable():
    subst = unify(parse_name("Has([object])"), parse_name("Has(Apple)"))
    assert subst is not None
    assert subst.apply(Variable("object")) == Symbol("Apple")


def test_unify_identical_ground_terms_yields_empty_set():
    subst = unify(Symbol("John"), Symbol("John"))
    assert subst is not None and len(subst) == 0


def test_unify_conflicting_positions_fails():
    # Oracle: no single binding of [x] makes F([x],[x]) equal F(A,B).
    pattern, term = parse_name("F([x],[x])"), parse_name("F(A,B)")
    for candidate in (Symbol("A"), Symbol("B")):
        subst = SubstitutionSet().bind(Variable("x"), candidate)
        assert subst.apply(pattern) != term
    assert unify(pattern, term) is None


def test_unify_occurs_check():
    assert unify(Variable("x"), parse_name("F([x])")) is None


def test_unify_universal_matches_anything_without_binding():
    for other in (Symbol("A"), parse_name("F(A, [y])"), Variable("z")):
        subst = unify(UNIVERSAL, other)
        assert subst is not None and len(subst) == 0
    inner = unify(parse_name("Has(*)"), parse_name("Has(Apple)"))
    assert inner is not None and len(inner) == 0


def test_unify_respects_seed_bindings():
    seed = SubstitutionSet().bind(Variable("x"), Symbol("Apple"))
    assert unify(parse_name("Has([x])"), parse_name("Has(Pear)"), seed) is None
    ok = unify(parse_name("Has([x])"), parse_name("Has(Apple)"), seed)
    assert ok is not None


def test_variable_chains_resolve():
    subst = unify(parse_name("F([x])"), parse_name("F([y])"))
    assert subst is not None
    subst = subst.bind(Variable("y"), Symbol("A"))
    assert subst.apply(Variable("x")) == Symbol("A")


# -- substitution application ---------------------------------------------

def test_apply_substitution_examples():
    subst = SubstitutionSet().bind(Variable("object"), Symbol("Apple"))
    assert apply_substitution(parse_name("Eat([object])"), subst) == parse_name("Eat(Apple)")
    assert apply_substitution(Symbol("John"), subst) == Symbol("John")
    two = subst.bind(Variable("x"), Symbol("A")).bind(Variable("y"), Symbol("B"))
    # Structural-recursion oracle: rebuild by hand.
    assert apply_substitution(parse_name("F([x],G([y]))"), two) == parse_name("F(A,G(B))")


def test_expand_self():
    owner = Symbol("Sam")
    assert expand_self(parse_name("RapportLevel(SELF, [x])"), owner) == \
        parse_name("RapportLevel(Sam, [x])")
    assert expand_self(SELF, owner) == owner


def test_substitution_certainty_scaling():
    subst = SubstitutionSet().scaled(0.5).scaled(0.8)
    assert subst.certainty == pytest.approx(0.4)


# -- events --------------------------------------------------------------

def test_event_accessors():
    event = Event.parse("Event(Property-Change, Sam, State(TV), On)")
    assert not event.is_action
    assert event.subject == Symbol("Sam")
    assert event.property == parse_name("State(TV)")
    assert event.value == Symbol("On")


def test_event_action_accessors():
    event = Event.action_end("Sam", "Turn(On)", "TV", tick=3)
    assert event.is_action and event.tick == 3
    assert event.action == parse_name("Turn(On)")
    assert event.target == Symbol("TV")


@pytest.mark.parametrize("text", [
    "Event(Action-End, Sam, Smile)",              # arity
    "Event(Bad-Kind, Sam, Smile, John)",          # kind
    "Smile(Sam, John, A, B)",                     # root
    "Event(Action-End, [x], Smile, John)",        # not ground
    "Event(Action-End, *, Smile, John)",          # wildcard
])
def test_event_validation(text):
    with pytest.raises(ValueError):
        Event.parse(text)
