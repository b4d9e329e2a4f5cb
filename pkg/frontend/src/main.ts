// Browser entry point: DOM wiring around the controller and renderers.

import { ApiClient } from "./api.js";
import { SessionController } from "./controller.js";
import {
  renderGraph,
  renderInspector,
  renderNotice,
  renderOptions,
  renderTranscript,
} from "./render.js";

const api = new ApiClient("");
const controller = new SessionController(api);

const el = (id: string) => document.getElementById(id)!;

let spectatorTimer: number | null = null;

function render() {
  const state = controller.state;
  el("scenario-name").textContent = state.scenarioName || "(no session)";
  el("notice").innerHTML = renderNotice(state);
  el("transcript").innerHTML = renderTranscript(state.transcript);
  el("options").innerHTML =
    state.role === null
      ? '<p class="empty">Spectating; the simulation advances on its own.</p>'
      : renderOptions(state.options, state.busy);
  el("inspectors").innerHTML = state.characters
    .map((c) => {
      const inspector = state.inspectors[c.name];
      return inspector ? renderInspector(inspector, c.human) : "";
    })
    .join("");
  el("graph").innerHTML = renderGraph(state);
  el("turn").textContent = state.turn ? `turn: ${state.turn}` : "";
  const picker = el("role-picker") as HTMLSelectElement;
  const wanted =
    '<option value="">spectator</option>' +
    state.characters
      .filter((c) => c.human)
      .map((c) => `<option value="${c.name}">${c.name}</option>`)
      .join("");
  if (picker.innerHTML !== wanted) {
    picker.innerHTML = wanted;
  }
  picker.value = state.role ?? "";
  el("session-controls").classList.toggle("hidden", state.sessionId === null);
  const transcript = el("transcript");
  transcript.scrollTop = transcript.scrollHeight;
}

controller.onChange = render;

async function attachFirstSessionOrNothing() {
  const listing = await api.listSessions();
  const first = listing.sessions[0];
  if (first) {
    await controller.attach(first.id);
    controller.state.scenarioName = first.name;
    render();
  }
}

function stopSpectating() {
  if (spectatorTimer !== null) {
    window.clearInterval(spectatorTimer);
    spectatorTimer = null;
  }
}

el("scenario-file").addEventListener("change", async (event) => {
  const input = event.target as HTMLInputElement;
  const file = input.files?.[0];
  if (!file) {
    return;
  }
  try {
    const data = JSON.parse(await file.text()) as object;
    await controller.loadScenario(data);
    controller.state.scenarioName = file.name;
    render();
  } catch (error) {
    el("notice").innerHTML = `<div class="notice error">${String(error)}</div>`;
  }
});

el("role-picker").addEventListener("change", async (event) => {
  stopSpectating();
  const value = (event.target as HTMLSelectElement).value;
  await controller.selectRole(value === "" ? null : value);
  if (value === "") {
    // Spectators poll: one simulation step per interval keeps the pace sane
    // whether or not the agents have anything to do.
    spectatorTimer = window.setInterval(() => {
      void controller.stepOnce();
    }, 1500);
  }
});

el("options").addEventListener("click", async (event) => {
  const button = (event.target as HTMLElement).closest("button.option");
  if (!button) {
    return;
  }
  const entryId = button.getAttribute("data-entry-id");
  if (entryId) {
    await controller.choose(entryId);
  }
});

el("refresh").addEventListener("click", () => controller.refresh());

attachFirstSessionOrNothing().catch(() => {
  // No preloaded session; the file picker is the entry point.
});
