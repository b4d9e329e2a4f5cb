// Typed client for the affect-engine HTTP service. The UI computes no
// engine state of its own: everything rendered comes from these calls.

export interface DialogueOption {
  id: string;
  utterance: string;
  currentState: string;
  nextState: string;
  meanings: string[];
  styles: string[];
  partner: string;
}

export interface EmotionView {
  type: string;
  valence: string;
  intensity: number;
  cause: string | null;
  target: string | null;
  tick: number;
}

export interface BeliefView {
  name: string;
  value: string;
  perspective: string;
  certainty: number;
}

export interface GoalView {
  name: string;
  significance: number;
  likelihood: number;
  status: string;
}

export interface MemoryView {
  event: string;
  tick: number;
  emotions: { type: string; intensity: number }[];
}

export interface ModeledStateView {
  mood: number;
  emotions: EmotionView[];
}

export interface CharacterState {
  name: string;
  mood: number;
  emotions: EmotionView[];
  beliefs: BeliefView[];
  goals: GoalView[];
  knownAgents: string[];
  modeledStates: Record<string, ModeledStateView>;
  memory: MemoryView[];
  clock: number;
}

export interface CharacterSummary {
  name: string;
  human: boolean;
}

export interface TranscriptEntry {
  index: number;
  tick: number;
  actor: string;
  event: string;
  target: string | null;
  utterance: string | null;
  entryId: string | null;
  style: string | null;
}

export interface GraphState {
  name: string;
  reachable: boolean;
  end: boolean;
}

export interface GraphEntry {
  id: string;
  currentState: string;
  nextState: string;
  utterance: string;
  meanings: string[];
  styles: string[];
}

export interface DialogueGraphView {
  dot: string;
  states: GraphState[];
  entries: GraphEntry[];
}

export interface ChooseResult {
  transcript: TranscriptEntry[];
  next: number;
  turn: string | null;
}

export class StaleStateError extends Error {
  options: DialogueOption[];

  constructor(message: string, options: DialogueOption[]) {
    super(message);
    this.options = options;
  }
}

export class ApiError extends Error {
  status: number;

  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

async function parseError(response: Response): Promise<never> {
  let detail: unknown = response.statusText;
  try {
    const body = (await response.json()) as { detail?: unknown };
    detail = body.detail ?? detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  if (
    response.status === 409 &&
    typeof detail === "object" &&
    detail !== null &&
    "options" in detail
  ) {
    const stale = detail as { message?: string; options: DialogueOption[] };
    throw new StaleStateError(stale.message ?? "stale dialogue state", stale.options);
  }
  throw new ApiError(response.status, typeof detail === "string" ? detail : JSON.stringify(detail));
}

export class ApiClient {
  constructor(private baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    if (!response.ok) {
      await parseError(response);
    }
    return (await response.json()) as T;
  }

  listSessions(): Promise<{ sessions: { id: string; name: string }[] }> {
    return this.request("/sessions");
  }

  createSession(scenario: object | string): Promise<{ sessionId: string; name: string }> {
    return this.request("/sessions", {
      method: "POST",
      body: JSON.stringify({ scenario }),
    });
  }

  characters(sessionId: string): Promise<{
    characters: CharacterSummary[];
    humanRoles: string[];
    turn: string | null;
  }> {
    return this.request(`/sessions/${sessionId}/characters`);
  }

  options(sessionId: string, role: string): Promise<{ options: DialogueOption[] }> {
    return this.request(
      `/sessions/${sessionId}/dialogue/options?role=${encodeURIComponent(role)}`,
    );
  }

  choose(sessionId: string, role: string, entryId: string): Promise<ChooseResult> {
    return this.request(`/sessions/${sessionId}/choose`, {
      method: "POST",
      body: JSON.stringify({ role, entryId }),
    });
  }

  step(sessionId: string): Promise<{ executed: TranscriptEntry | null; turn: string | null }> {
    return this.request(`/sessions/${sessionId}/step`, { method: "POST" });
  }

  log(sessionId: string, since: number): Promise<{ events: TranscriptEntry[]; next: number }> {
    return this.request(`/sessions/${sessionId}/log?since=${since}`);
  }

  state(sessionId: string, name: string): Promise<CharacterState> {
    return this.request(
      `/sessions/${sessionId}/characters/${encodeURIComponent(name)}/state`,
    );
  }

  graph(sessionId: string): Promise<DialogueGraphView> {
    return this.request(`/sessions/${sessionId}/dialogue/graph`);
  }
}
