"""HTTP service over the simulator: sessions, perception, decisions,
state inspection and the dialogue play loop.

The layer is a pure adapter: every response is reproducible by calling the
underlying module operations directly.  All terms travel in their
canonical textual form.
"""

from __future__ import annotations

import secrets
import threading
import time
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import scenario as scenario_mod
from .character import RolePlayCharacter
from .emotional_state import Emotion, EmotionalState
from .scenario import ScenarioError, Simulation, StaleChoiceError
from .wfn import Event, NameSyntaxError

DEFAULT_SESSION_TTL = 3600.0


class CreateSessionBody(BaseModel):
    scenario: dict | str = Field(description="Inline scenario JSON or a server-side path")


class PerceiveBody(BaseModel):
    character: str | None = None
    event: str


class ChooseBody(BaseModel):
    role: str
    entryId: str


class Session:
    def __init__(self, id: str, simulation: Simulation):
        self.id = id
        self.simulation = simulation
        self.created = time.monotonic()
        self.last_access = self.created
        self.lock = threading.Lock()


class SessionStore:
    def __init__(self, ttl: float = DEFAULT_SESSION_TTL):
        self.ttl = ttl
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, simulation: Simulation) -> Session:
        session = Session(secrets.token_urlsafe(16), simulation)
        with self._lock:
            self._evict()
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            self._evict()
            session = self._sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        session.last_access = time.monotonic()
        return session

    def all(self) -> list[Session]:
        with self._lock:
            self._evict()
            return list(self._sessions.values())

    def _evict(self):
        now = time.monotonic()
        expired = [sid for sid, s in self._sessions.items()
                   if now - s.last_access > self.ttl]
        for sid in expired:
            del self._sessions[sid]


# -- serializers -------------------------------------------------------------

def emotion_json(emotion: Emotion) -> dict:
    return {
        "type": str(emotion.type),
        "valence": emotion.valence,
        "intensity": emotion.intensity,
        "cause": str(emotion.cause) if emotion.cause else None,
        "target": str(emotion.target) if emotion.target is not None else None,
        "tick": emotion.tick,
    }


def state_json(state: EmotionalState) -> dict:
    return {
        "mood": state.mood,
        "emotions": [emotion_json(e) for e in state.emotions],
    }


def character_json(character: RolePlayCharacter, memory_tail: int = 20) -> dict:
    return {
        "name": str(character.name),
        "mood": character.mood,
        "emotions": [emotion_json(e) for e in character.state.emotions],
        "beliefs": [
            {
                "name": str(b.property),
                "value": str(b.value),
                "perspective": str(b.perspective),
                "certainty": b.certainty,
            }
            for b in character.kb.all_beliefs()
        ],
        "goals": [
            {
                "name": str(g.name),
                "significance": g.significance,
                "likelihood": g.likelihood,
                "status": g.status.value,
            }
            for g in character.goals.values()
        ],
        "knownAgents": [str(a) for a in character.known_agents.values()],
        "modeledStates": {
            str(agent): state_json(character.modeled_states[key])
            for key, agent in character.known_agents.items()
            if key in character.modeled_states
        },
        "memory": [
            {
                "event": str(r.event),
                "tick": r.tick,
                "emotions": [{"type": str(t), "intensity": i} for t, i in r.emotions],
            }
            for r in character.memory[-memory_tail:]
        ],
        "clock": character.clock,
    }


def candidate_json(candidate) -> dict:
    return {
        "action": str(candidate.action),
        "target": str(candidate.target),
        "score": candidate.score,
        "ruleIndex": candidate.rule_index,
        "bindings": {k: str(v) for k, v in candidate.bindings.as_dict().items()},
    }


def option_json(option) -> dict:
    return {
        "id": str(option.entry.id),
        "utterance": option.entry.utterance,
        "currentState": str(option.entry.current_state),
        "nextState": str(option.entry.next_state),
        "meanings": [str(m) for m in option.entry.meanings],
        "styles": [str(s) for s in option.entry.styles],
        "partner": str(option.partner),
    }


def log_json(entries) -> list[dict]:
    return [e.as_dict() for e in entries]


def _get_character(simulation: Simulation, name: str) -> RolePlayCharacter:
    character = simulation.character(name)
    if character is None:
        raise HTTPException(status_code=404, detail=f"unknown character {name}")
    return character


def create_app(ttl: float = DEFAULT_SESSION_TTL, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="affect-engine", version="0.1.0",
                  description="Affective agent engine: sessions over scenario "
                              "simulations with perception, decision and dialogue.")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"])
    store = SessionStore(ttl)
    app.state.store = store

    @app.get("/sessions")
    def list_sessions() -> dict:
        return {
            "sessions": [
                {"id": s.id, "name": s.simulation.name} for s in store.all()
            ],
        }

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody) -> dict:
        try:
            if isinstance(body.scenario, str):
                simulation = scenario_mod.load(body.scenario)
            else:
                simulation = scenario_mod.from_dict(body.scenario)
        except ScenarioError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        session = store.create(simulation)
        return {
            "sessionId": session.id,
            "name": simulation.name,
            "validation": {
                "unreachable": [str(s) for s in simulation.validation.unreachable],
                "endStates": [str(s) for s in simulation.validation.end_states],
                "warnings": simulation.validation.warnings,
                "errors": simulation.validation.errors,
            },
        }

    @app.get("/sessions/{session_id}/characters")
    def list_characters(session_id: str) -> dict:
        session = store.get(session_id)
        with session.lock:
            sim = session.simulation
            return {
                "characters": [
                    {"name": str(c.name), "human": sim.is_human(c.name)}
                    for c in sim.characters
                ],
                "humanRoles": [str(c.name) for c in sim.characters
                               if sim.is_human(c.name)],
                "turn": str(sim.turn_holder.name) if sim.turn_holder else None,
            }

    @app.post("/sessions/{session_id}/characters/{name}/perceive")
    def perceive(session_id: str, name: str, body: PerceiveBody) -> dict:
        session = store.get(session_id)
        with session.lock:
            character = _get_character(session.simulation, name)
            try:
                event = Event.parse(body.event, tick=character.clock)
            except (NameSyntaxError, ValueError) as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            emotions = character.perceive(event)
            return {"emotions": [emotion_json(e) for e in emotions]}

    @app.get("/sessions/{session_id}/characters/{name}/decide")
    def decide(session_id: str, name: str,
               layer: str = Query(default="Deliberative")) -> dict:
        session = store.get(session_id)
        with session.lock:
            character = _get_character(session.simulation, name)
            candidates = character.decide(layer)
            return {"layer": layer, "candidates": [candidate_json(c) for c in candidates]}

    @app.get("/sessions/{session_id}/characters/{name}/state")
    def character_state(session_id: str, name: str) -> dict:
        session = store.get(session_id)
        with session.lock:
            return character_json(_get_character(session.simulation, name))

    @app.get("/sessions/{session_id}/dialogue/options")
    def dialogue_options(session_id: str, role: str) -> dict:
        session = store.get(session_id)
        with session.lock:
            sim = session.simulation
            _get_character(sim, role)
            return {
                "role": role,
                "options": [option_json(o) for o in sim.dialogue_options(role)],
            }

    @app.get("/sessions/{session_id}/dialogue/graph")
    def dialogue_graph(session_id: str) -> dict:
        session = store.get(session_id)
        with session.lock:
            sim = session.simulation
            report = sim.validation
            unreachable = {s.canonical() for s in report.unreachable}
            ends = {s.canonical() for s in report.end_states}
            return {
                "dot": sim.dialogue.to_dot(),
                "states": [
                    {
                        "name": str(s),
                        "reachable": s.canonical() not in unreachable,
                        "end": s.canonical() in ends,
                    }
                    for s in sim.dialogue.states()
                ],
                "entries": [
                    {
                        "id": str(e.id),
                        "currentState": str(e.current_state),
                        "nextState": str(e.next_state),
                        "utterance": e.utterance,
                        "meanings": [str(m) for m in e.meanings],
                        "styles": [str(s) for s in e.styles],
                    }
                    for e in sim.dialogue.entries
                ],
            }

    @app.post("/sessions/{session_id}/choose")
    def choose(session_id: str, body: ChooseBody,
               autostep: bool = Query(default=True)) -> dict:
        session = store.get(session_id)
        with session.lock:
            sim = session.simulation
            _get_character(sim, body.role)
            since = len(sim.log)
            try:
                sim.inject_human_choice(body.role, body.entryId)
            except StaleChoiceError as exc:
                raise HTTPException(status_code=409, detail={
                    "error": "stale_state",
                    "message": str(exc),
                    "options": [option_json(o) for o in exc.options],
                })
            except ScenarioError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            if autostep:
                sim.run_until_human_turn()
            return {
                "transcript": log_json(sim.log[since:]),
                "next": len(sim.log),
                "turn": str(sim.turn_holder.name) if sim.turn_holder else None,
            }

    @app.post("/sessions/{session_id}/step")
    def step(session_id: str) -> dict:
        session = store.get(session_id)
        with session.lock:
            entry = session.simulation.step()
            return {
                "executed": entry.as_dict() if entry else None,
                "next": len(session.simulation.log),
                "turn": str(session.simulation.turn_holder.name)
                if session.simulation.turn_holder else None,
            }

    @app.get("/sessions/{session_id}/log")
    def log_slice(session_id: str, since: int = Query(default=0, ge=0)) -> dict:
        session = store.get(session_id)
        with session.lock:
            entries = session.simulation.log[since:]
            return {"events": log_json(entries), "next": len(session.simulation.log)}

    ui_path = Path(ui_dir) if ui_dir else Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if ui_path.is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_path), html=True), name="ui")

    @app.get("/", include_in_schema=False)
    def root():
        if ui_path.is_dir():
            return FileResponse(str(ui_path / "index.html"))
        return {"service": "affect-engine", "docs": "/docs", "openapi": "/openapi.json"}

    return app
