"""Command-line front door: validate, run, serve, and dialogue interchange.

Exit codes: 0 ok, 1 validation failure, 2 I/O or schema error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .dialogue import DialogueGraph, DialogueImportError
from .scenario import ScenarioError, StaleChoiceError, load


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DialogueImportError as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="affect-engine",
        description="Affective agent engine: validate, play, or serve scenarios.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scenario file and its dialogue graph")
    p.add_argument("scenario")
    p.add_argument("--strict", action="store_true",
                   help="treat warnings (unreachable or dangling states) as errors")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("run", help="play a scenario in the terminal")
    p.add_argument("scenario")
    p.add_argument("--role", help="human role to play (default: first human role)")
    p.add_argument("--seed-log", help="JSON file with a list of entry ids to replay")
    p.add_argument("--log-out", help="write the executed event log as JSON lines")
    p.add_argument("--max-steps", type=int, default=200)
    p.set_defaults(handler=cmd_run)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("scenario", nargs="?", help="scenario to preload into a session")
    p.add_argument("--addr", default=os.environ.get("AFFECT_ENGINE_ADDR", "127.0.0.1:8600"))
    p.add_argument("--ui", help="directory with the built web UI (served at /ui)")
    p.add_argument("--session-ttl", type=float, default=3600.0,
                   help="idle seconds before a session expires")
    p.set_defaults(handler=cmd_serve)

    p = sub.add_parser("export-dot", help="write the dialogue graph in DOT format")
    p.add_argument("scenario")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_export_dot)

    p = sub.add_parser("export-csv", help="write the dialogue table as CSV")
    p.add_argument("scenario")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_export_csv)

    p = sub.add_parser("import-csv", help="convert a dialogue CSV into JSON entries")
    p.add_argument("csv")
    p.add_argument("-o", "--output", help="write JSON here instead of stdout")
    p.set_defaults(handler=cmd_import_csv)
    return parser


def cmd_validate(args) -> int:
    simulation = load(args.scenario)
    report = simulation.validation
    print(f"scenario: {simulation.name or args.scenario}")
    print(f"characters: {len(simulation.characters)} "
          f"({len(simulation.humans)} human)")
    print(f"dialogue: {len(simulation.dialogue)} entries, "
          f"{len(simulation.dialogue.states())} states")
    print(f"unreachable: {len(report.unreachable)}, end states: {len(report.end_states)}")
    for state in report.unreachable:
        print(f"  unreachable: {state}")
    for state in report.end_states:
        print(f"  end state: {state}")
    for state in report.dangling:
        print(f"  dangling: {state}")
    for problem in report.errors:
        print(f"  error: {problem}")
    if report.errors:
        return 1
    if args.strict and report.warnings:
        return 1
    return 0


def _print_transcript(entries) -> None:
    for entry in entries:
        if entry.utterance is not None:
            style = f" ({entry.style})" if entry.style and str(entry.style) != "-" else ""
            print(f'[{entry.actor}] "{entry.utterance}"{style}')
        else:
            print(f"[{entry.actor}] {entry.event.action} -> {entry.target}")


def cmd_run(args) -> int:
    simulation = load(args.scenario)
    role = args.role
    if role is None:
        humans = [str(c.name) for c in simulation.characters
                  if simulation.is_human(c.name)]
        role = humans[0] if humans else None
    if role is not None and simulation.character(role) is None:
        print(f"error: unknown role {role}", file=sys.stderr)
        return 2
    seed: list[str] | None = None
    if args.seed_log:
        seed = json.loads(Path(args.seed_log).read_text())
        if not isinstance(seed, list):
            print("error: seed log must be a JSON list of entry ids", file=sys.stderr)
            return 2
    interactive = seed is None and sys.stdin.isatty()
    printed = 0
    idle = 0
    for _ in range(args.max_steps):
        holder = simulation.turn_holder
        if holder is None:
            break
        holder_is_played_role = (
            role is not None and simulation.is_human(holder.name)
            and str(holder.name).casefold() == role.casefold())
        if simulation.is_human(holder.name) and not holder_is_played_role:
            # Another human role has the turn; nobody is driving it here.
            simulation.turn_index = (simulation.turn_index + 1) % len(simulation.characters)
            idle += 1
            if idle > len(simulation.characters):
                break
            continue
        if holder_is_played_role:
            options = simulation.dialogue_options(role)
            if not options:
                break
            if seed is not None:
                if not seed:
                    break
                choice = seed.pop(0)
            elif interactive:
                for i, option in enumerate(options, start=1):
                    print(f"  {i}) {option.entry.utterance}")
                raw = input("choice> ").strip()
                if raw in ("q", "quit", ""):
                    break
                try:
                    choice = str(options[int(raw) - 1].entry.id)
                except (ValueError, IndexError):
                    print("  (enter an option number, or q to quit)")
                    continue
            else:
                break
            try:
                simulation.inject_human_choice(role, choice)
            except StaleChoiceError as exc:
                print(f"  (invalid choice {choice}: {exc})")
                if seed is not None:
                    return 1
                continue
            idle = 0
        else:
            entry = simulation.step()
            if entry is None:
                idle += 1
                if idle > len(simulation.characters):
                    break
                continue
            idle = 0
        _print_transcript(simulation.log[printed:])
        printed = len(simulation.log)
    _print_transcript(simulation.log[printed:])
    print("--- final state ---")
    for character in simulation.characters:
        strongest = character.strongest_emotion()
        feeling = f"{strongest.type} {strongest.intensity:.2f}" if strongest else "nothing"
        print(f"{character.name}: mood {character.mood:+.2f}, feeling {feeling}")
    if args.log_out:
        Path(args.log_out).write_text(simulation.export_log_jsonl())
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    host, _, port_text = args.addr.rpartition(":")
    if not host or not port_text.isdigit():
        print(f"error: --addr must be HOST:PORT, got {args.addr!r}", file=sys.stderr)
        return 2
    app = create_app(ttl=args.session_ttl, ui_dir=args.ui)
    if args.scenario:
        simulation = load(args.scenario)  # fail fast before binding
        session = app.state.store.create(simulation)
        print(f"preloaded session: {session.id}")
    uvicorn.run(app, host=host, port=int(port_text), log_level="warning")
    return 0


def cmd_export_dot(args) -> int:
    simulation = load(args.scenario)
    Path(args.output).write_text(simulation.dialogue.to_dot())
    print(f"wrote {args.output}")
    return 0


def cmd_export_csv(args) -> int:
    simulation = load(args.scenario)
    Path(args.output).write_text(simulation.dialogue.to_csv())
    print(f"wrote {args.output}")
    return 0


def cmd_import_csv(args) -> int:
    graph = DialogueGraph.from_csv(Path(args.csv).read_text())
    entries = [
        {
            "id": str(e.id),
            "currentState": str(e.current_state),
            "nextState": str(e.next_state),
            "utterance": e.utterance,
            "meanings": [str(m) for m in e.meanings],
            "styles": [str(s) for s in e.styles],
        }
        for e in graph.entries
    ]
    text = json.dumps(entries, indent=2)
    if args.output:
        Path(args.output).write_text(text + "\n")
        print(f"wrote {args.output}")
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
