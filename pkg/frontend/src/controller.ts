// Session controller: owns the view state and talks to the API client.
// All state is derived from API responses; nothing is computed locally.

import {
  ApiClient,
  CharacterState,
  CharacterSummary,
  DialogueGraphView,
  DialogueOption,
  StaleStateError,
  TranscriptEntry,
} from "./api.js";

export interface ViewState {
  sessionId: string | null;
  scenarioName: string;
  characters: CharacterSummary[];
  role: string | null; // null = spectator
  transcript: TranscriptEntry[];
  options: DialogueOption[];
  inspectors: Record<string, CharacterState>;
  graph: DialogueGraphView | null;
  turn: string | null;
  notice: string | null;
  cursor: number;
  busy: boolean;
}

export function emptyState(): ViewState {
  return {
    sessionId: null,
    scenarioName: "",
    characters: [],
    role: null,
    transcript: [],
    options: [],
    inspectors: {},
    graph: null,
    turn: null,
    notice: null,
    cursor: 0,
    busy: false,
  };
}

export class SessionController {
  state: ViewState = emptyState();
  onChange: (state: ViewState) => void = () => {};

  constructor(private api: ApiClient) {}

  private emit() {
    this.onChange(this.state);
  }

  async loadScenario(scenario: object | string): Promise<void> {
    const created = await this.api.createSession(scenario);
    await this.attach(created.sessionId);
  }

  async attach(sessionId: string): Promise<void> {
    this.state = emptyState();
    this.state.sessionId = sessionId;
    const listing = await this.api.characters(sessionId);
    this.state.characters = listing.characters;
    this.state.turn = listing.turn;
    this.state.graph = await this.api.graph(sessionId);
    this.emit();
  }

  async selectRole(role: string | null): Promise<void> {
    this.state.role = role;
    this.state.notice = null;
    await this.refresh();
  }

  /** Pull the log tail, the role's options, and every inspector panel. */
  async refresh(): Promise<void> {
    const id = this.sessionIdOrThrow();
    const slice = await this.api.log(id, this.state.cursor);
    this.state.transcript = this.state.transcript.concat(slice.events);
    this.state.cursor = slice.next;
    if (this.state.role !== null) {
      const body = await this.api.options(id, this.state.role);
      this.state.options = body.options;
    } else {
      this.state.options = [];
    }
    const inspectors: Record<string, CharacterState> = {};
    for (const character of this.state.characters) {
      inspectors[character.name] = await this.api.state(id, character.name);
    }
    this.state.inspectors = inspectors;
    const listing = await this.api.characters(id);
    this.state.turn = listing.turn;
    this.emit();
  }

  /**
   * Play one of the offered utterances. On a stale-state conflict the
   * fresh options from the 409 body replace the list and a notice is set.
   */
  async choose(entryId: string): Promise<void> {
    const id = this.sessionIdOrThrow();
    if (this.state.role === null) {
      throw new Error("spectators cannot choose");
    }
    this.state.busy = true;
    this.emit();
    try {
      await this.api.choose(id, this.state.role, entryId);
      this.state.notice = null;
    } catch (error) {
      if (error instanceof StaleStateError) {
        this.state.options = error.options;
        this.state.notice =
          "Those options were out of date; here is what you can say now.";
        this.state.busy = false;
        this.emit();
        return;
      }
      this.state.busy = false;
      this.emit();
      throw error;
    }
    this.state.busy = false;
    await this.refresh();
  }

  /** Spectator mode: advance the simulation one step and re-poll. */
  async stepOnce(): Promise<boolean> {
    const id = this.sessionIdOrThrow();
    const result = await this.api.step(id);
    await this.refresh();
    return result.executed !== null;
  }

  private sessionIdOrThrow(): string {
    if (this.state.sessionId === null) {
      throw new Error("no session loaded");
    }
    return this.state.sessionId;
  }
}
