"""Rule-based affective agent engine.

Each module stands on its own: the term language (`wfn`), the belief store
(`kb`), emotions (`emotional_state`, `appraisal`), decision making
(`decision`), social reasoners (`reasoners`), the dialogue store
(`dialogue`), the composed agent (`character`), the simulator (`scenario`),
and the HTTP service (`service`).
"""

from .appraisal import (
    AppraisalRule,
    AppraisalValues,
    AppraisalVariable,
    Goal,
    GoalStatus,
    appraise,
    appraise_for_others,
    derive_affect,
    update_goal,
)
from .character import MemoryRecord, RolePlayCharacter
from .decision import ActionCandidate, DecisionRule, decide
from .dialogue import DialogueEntry, DialogueGraph, ValidationReport
from .emotional_state import Emotion, EmotionalState, EmotionType
from .kb import Belief, Condition, KnowledgeBase
from .reasoners import (
    AttributionRule,
    ExchangeTracker,
    ModeCondition,
    SocialExchange,
    social_importance,
)
from .scenario import Simulation, StaleChoiceError, from_dict, load
from .wfn import (
    ComposedName,
    Event,
    Name,
    NameSyntaxError,
    SubstitutionSet,
    Symbol,
    Variable,
    apply_substitution,
    parse_name,
    unify,
)

__version__ = "0.1.0"

__all__ = [
    "ActionCandidate",
    "AppraisalRule",
    "AppraisalValues",
    "AppraisalVariable",
    "AttributionRule",
    "Belief",
    "ComposedName",
    "Condition",
    "DecisionRule",
    "DialogueEntry",
    "DialogueGraph",
    "Emotion",
    "EmotionalState",
    "EmotionType",
    "Event",
    "ExchangeTracker",
    "Goal",
    "GoalStatus",
    "KnowledgeBase",
    "MemoryRecord",
    "ModeCondition",
    "Name",
    "NameSyntaxError",
    "RolePlayCharacter",
    "Simulation",
    "SocialExchange",
    "StaleChoiceError",
    "SubstitutionSet",
    "Symbol",
    "ValidationReport",
    "Variable",
    "appraise",
    "appraise_for_others",
    "apply_substitution",
    "decide",
    "derive_affect",
    "from_dict",
    "load",
    "parse_name",
    "social_importance",
    "unify",
    "update_goal",
]
