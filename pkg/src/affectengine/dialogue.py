"""The explicit dialogue store: a centralized state/utterance table.

The table holds no decision logic; agents pick among the entries valid at
a state through the ``ValidDialogue`` meta-belief, using meaning and style
tags to reason about their choice.  Validation, CSV interchange and DOT
export support the authoring workflow.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from .wfn import Name, SubstitutionSet, Symbol, coerce_name, unify

END_STATE = Symbol("End")
NEUTRAL_TAG = Symbol("-")

CSV_HEADER = ["id", "currentState", "nextState", "utterance", "meanings", "styles"]


class DialogueImportError(ValueError):
    """CSV import failure; one message per offending row."""

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


def _sym(value: Symbol | str) -> Symbol:
    if isinstance(value, Symbol):
        return value
    name = coerce_name(value)
    if not isinstance(name, Symbol):
        raise ValueError(f"expected a symbol, got {value!r}")
    return name


@dataclass(frozen=True)
class DialogueEntry:
    """One edge of the dialogue tree, with meaning and style tags."""

    id: Symbol
    current_state: Symbol
    next_state: Symbol
    utterance: str
    meanings: tuple[Symbol, ...] = ()
    styles: tuple[Symbol, ...] = ()

    def __post_init__(self):
        if self.current_state == END_STATE:
            raise ValueError(f"entry {self.id}: the End state has no outgoing dialogue")

    @classmethod
    def make(cls, id, current_state, next_state, utterance,
             meanings=(), styles=()) -> "DialogueEntry":
        return cls(_sym(id), _sym(current_state), _sym(next_state), utterance,
                   tuple(_sym(m) for m in meanings), tuple(_sym(s) for s in styles))


@dataclass
class ValidationReport:
    """What the reachability search found; unreachable states are warnings,
    duplicate ids are errors."""

    unreachable: list[Symbol] = field(default_factory=list)
    end_states: list[Symbol] = field(default_factory=list)
    dangling: list[Symbol] = field(default_factory=list)
    duplicate_ids: list[Symbol] = field(default_factory=list)

    @property
    def errors(self) -> list[str]:
        return [f"duplicate dialogue id {d}" for d in self.duplicate_ids]

    @property
    def warnings(self) -> list[str]:
        out = [f"unreachable state {s}" for s in self.unreachable]
        out += [f"dangling next state {s}" for s in self.dangling]
        return out

    def summary(self) -> str:
        return f"unreachable: {len(self.unreachable)}, end states: {len(self.end_states)}"


class DialogueGraph:
    """Immutable-after-load dialogue table with state adjacency."""

    def __init__(self, entries: list[DialogueEntry] | None = None):
        self.entries: list[DialogueEntry] = list(entries or [])
        self._outgoing: dict[str, list[DialogueEntry]] = {}
        self._by_id: dict[str, DialogueEntry] = {}
        for entry in self.entries:
            self._outgoing.setdefault(entry.current_state.canonical(), []).append(entry)
            self._by_id.setdefault(entry.id.canonical(), entry)

    def __len__(self):
        return len(self.entries)

    def entry(self, id: Symbol | str) -> DialogueEntry | None:
        return self._by_id.get(_sym(id).canonical())

    def outgoing(self, state: Symbol | str) -> list[DialogueEntry]:
        return list(self._outgoing.get(_sym(state).canonical(), []))

    def states(self) -> list[Symbol]:
        seen: dict[str, Symbol] = {}
        for entry in self.entries:
            for state in (entry.current_state, entry.next_state):
                seen.setdefault(state.canonical(), state)
        return list(seen.values())

    # -- the ValidDialogue relation -------------------------------------

    def valid_dialogue(self, current_state: Name | str, next_state: Name | str,
                       meaning: Name | str, style: Name | str,
                       seed: SubstitutionSet | None = None) -> list[SubstitutionSet]:
        """One substitution per entry x meaning x style consistent with the
        patterns; entries without tags carry the neutral tag ``-``."""
        cs, ns = coerce_name(current_state), coerce_name(next_state)
        m, s = coerce_name(meaning), coerce_name(style)
        base = seed if seed is not None else SubstitutionSet()
        results: list[SubstitutionSet] = []
        for entry in self.entries:
            s1 = unify(cs, entry.current_state, base)
            if s1 is None:
                continue
            s2 = unify(ns, entry.next_state, s1)
            if s2 is None:
                continue
            for meaning_tag in entry.meanings or (NEUTRAL_TAG,):
                s3 = unify(m, meaning_tag, s2)
                if s3 is None:
                    continue
                for style_tag in entry.styles or (NEUTRAL_TAG,):
                    s4 = unify(s, style_tag, s3)
                    if s4 is not None:
                        results.append(s4)
        return results

    def find_entry(self, current_state: Name, next_state: Name, meaning: Name,
                   style: Name) -> DialogueEntry | None:
        """First entry matching a ground Speak parameter tuple."""
        for entry in self.entries:
            if unify(coerce_name(current_state), entry.current_state) is None:
                continue
            if unify(coerce_name(next_state), entry.next_state) is None:
                continue
            meanings = entry.meanings or (NEUTRAL_TAG,)
            styles = entry.styles or (NEUTRAL_TAG,)
            if any(unify(coerce_name(meaning), t) is not None for t in meanings) and \
               any(unify(coerce_name(style), t) is not None for t in styles):
                return entry
        return None

    # -- validation ------------------------------------------------------

    def validate(self, start_states: list[Symbol | str] | None = None) -> ValidationReport:
        """Depth-first reachability from the start states.

        Start states default to every state whose name begins with ``Start``
        plus any explicitly configured ones.  End states are reachable
        states with no outgoing entries; dangling states are unreachable
        leaves other than the reserved ``End``.
        """
        report = ValidationReport()
        seen_ids: set[str] = set()
        for entry in self.entries:
            key = entry.id.canonical()
            if key in seen_ids:
                report.duplicate_ids.append(entry.id)
            seen_ids.add(key)

        states = {s.canonical(): s for s in self.states()}
        starts: list[str] = []
        for s in start_states or []:
            starts.append(_sym(s).canonical())
        for key in states:
            if key.startswith("start") and key not in starts:
                starts.append(key)

        visited: set[str] = set()
        stack = [s for s in starts if s in states]
        while stack:
            key = stack.pop()
            if key in visited:
                continue
            visited.add(key)
            for entry in self._outgoing.get(key, []):
                nxt = entry.next_state.canonical()
                if nxt not in visited:
                    stack.append(nxt)

        for key, state in states.items():
            has_outgoing = bool(self._outgoing.get(key))
            if key not in visited:
                report.unreachable.append(state)
                if not has_outgoing and state != END_STATE:
                    report.dangling.append(state)
            elif not has_outgoing:
                report.end_states.append(state)
        return report

    # -- interchange -------------------------------------------------------

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for entry in self.entries:
            writer.writerow([
                str(entry.id), str(entry.current_state), str(entry.next_state),
                entry.utterance,
                ";".join(str(m) for m in entry.meanings),
                ";".join(str(s) for s in entry.styles),
            ])
        return buffer.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "DialogueGraph":
        rows = list(csv.reader(io.StringIO(text)))
        problems: list[str] = []
        if not rows or [c.strip() for c in rows[0]] != CSV_HEADER:
            raise DialogueImportError([f"header must be {','.join(CSV_HEADER)}"])
        entries: list[DialogueEntry] = []
        ids: set[str] = set()
        for number, row in enumerate(rows[1:], start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(CSV_HEADER):
                problems.append(f"row {number}: expected {len(CSV_HEADER)} fields, got {len(row)}")
                continue
            id_, cs, ns, utterance, meanings, styles = row
            if not id_.strip() or not cs.strip() or not ns.strip():
                problems.append(f"row {number}: id, currentState and nextState are required")
                continue
            try:
                entry = DialogueEntry.make(
                    id_.strip(), cs.strip(), ns.strip(), utterance,
                    [m for m in meanings.split(";") if m.strip()],
                    [s for s in styles.split(";") if s.strip()],
                )
            except ValueError as exc:
                problems.append(f"row {number}: {exc}")
                continue
            if entry.id.canonical() in ids:
                problems.append(f"row {number}: duplicate id {entry.id}")
                continue
            ids.add(entry.id.canonical())
            entries.append(entry)
        if problems:
            raise DialogueImportError(problems)
        return cls(entries)

    def to_dot(self) -> str:
        lines = ["digraph dialogue {", "  rankdir=LR;"]
        for state in self.states():
            lines.append(f'  "{_escape(str(state))}" [shape=circle];')
        for entry in self.entries:
            label = _escape(f"{entry.id}: {entry.utterance}")
            lines.append(
                f'  "{_escape(str(entry.current_state))}" -> '
                f'"{_escape(str(entry.next_state))}" [label="{label}"];'
            )
        lines.append("}")
        return "\n".join(lines) + "\n"


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')
