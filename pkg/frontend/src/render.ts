// Pure view-state -> HTML string renderers, kept DOM-free so they are
// testable without a browser.

import { CharacterState, DialogueOption, TranscriptEntry } from "./api.js";
import { ViewState } from "./controller.js";
import { layoutGraph } from "./graph.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function styleClass(style: string | null): string {
  if (!style || style === "-") {
    return "style-neutral";
  }
  return `style-${style.toLowerCase().replace(/[^a-z0-9]+/g, "-")}`;
}

export function renderTranscript(entries: TranscriptEntry[]): string {
  if (entries.length === 0) {
    return '<p class="empty">Nothing has been said yet.</p>';
  }
  const lines = entries.map((entry) => {
    if (entry.utterance !== null) {
      const tag =
        entry.style && entry.style !== "-"
          ? ` <span class="style-tag">${escapeHtml(entry.style)}</span>`
          : "";
      return (
        `<li class="line ${styleClass(entry.style)}">` +
        `<span class="speaker">${escapeHtml(entry.actor)}</span>` +
        `<span class="utterance">${escapeHtml(entry.utterance)}</span>${tag}</li>`
      );
    }
    return (
      `<li class="line action"><span class="speaker">${escapeHtml(entry.actor)}</span>` +
      `<span class="utterance">${escapeHtml(entry.event)}</span></li>`
    );
  });
  return `<ol class="transcript">${lines.join("")}</ol>`;
}

export function renderOptions(options: DialogueOption[], busy: boolean): string {
  if (options.length === 0) {
    return '<p class="empty">No dialogue options right now.</p>';
  }
  const buttons = options.map((option) => {
    const tags = [...option.meanings, ...option.styles]
      .map((t) => `<span class="tag">${escapeHtml(t)}</span>`)
      .join("");
    return (
      `<button class="option" data-entry-id="${escapeHtml(option.id)}"` +
      `${busy ? " disabled" : ""}>` +
      `${escapeHtml(option.utterance)}${tags}</button>`
    );
  });
  return `<div class="options">${buttons.join("")}</div>`;
}

function moodGauge(mood: number): string {
  const percent = ((mood + 10) / 20) * 100;
  const cls = mood < 0 ? "negative" : mood > 0 ? "positive" : "neutral";
  return (
    `<div class="mood-gauge" title="mood ${mood.toFixed(2)}">` +
    `<div class="mood-fill ${cls}" style="left:${Math.min(percent, 50)}%;` +
    `width:${Math.abs(percent - 50)}%"></div>` +
    `<span class="mood-value">${mood.toFixed(2)}</span></div>`
  );
}

function emotionRows(emotions: CharacterState["emotions"]): string {
  if (emotions.length === 0) {
    return '<p class="empty">calm</p>';
  }
  return emotions
    .map(
      (e) =>
        `<div class="emotion ${e.valence.toLowerCase()}">` +
        `<span class="emotion-type">${escapeHtml(e.type)}</span>` +
        `<div class="bar"><div class="fill" style="width:${(e.intensity / 10) * 100}%"></div></div>` +
        `<span class="emotion-intensity">${e.intensity.toFixed(2)}</span></div>`,
    )
    .join("");
}

export function renderInspector(state: CharacterState, isHuman: boolean): string {
  const goals = state.goals
    .map(
      (g) =>
        `<div class="goal"><span>${escapeHtml(g.name)} (${escapeHtml(g.status)})</span>` +
        `<div class="bar"><div class="fill" style="width:${g.likelihood * 100}%"></div></div>` +
        `<span>${(g.likelihood * 100).toFixed(0)}%</span></div>`,
    )
    .join("");
  const beliefs = state.beliefs
    .map(
      (b) =>
        `<tr><td>${escapeHtml(b.name)}</td><td>${escapeHtml(b.value)}</td>` +
        `<td>${escapeHtml(b.perspective)}</td><td>${b.certainty.toFixed(2)}</td></tr>`,
    )
    .join("");
  const memory = state.memory
    .slice(-8)
    .map(
      (m) =>
        `<li><span class="tick">t${m.tick}</span> ${escapeHtml(m.event)}` +
        (m.emotions.length
          ? ` <span class="memory-emotions">${m.emotions
              .map((e) => `${escapeHtml(e.type)} ${e.intensity.toFixed(1)}`)
              .join(", ")}</span>`
          : "") +
        `</li>`,
    )
    .join("");
  const modeled = Object.entries(state.modeledStates)
    .map(
      ([agent, view]) =>
        `<div class="modeled"><h5>as ${escapeHtml(agent)} sees it` +
        ` (mood ${view.mood.toFixed(2)})</h5>${emotionRows(view.emotions)}</div>`,
    )
    .join("");
  return (
    `<section class="inspector" data-character="${escapeHtml(state.name)}">` +
    `<h3>${escapeHtml(state.name)}${isHuman ? ' <span class="tag">human</span>' : ""}</h3>` +
    moodGauge(state.mood) +
    `<h4>Emotions</h4>${emotionRows(state.emotions)}` +
    (goals ? `<h4>Goals</h4>${goals}` : "") +
    (modeled ? `<h4>Modeled others</h4>${modeled}` : "") +
    `<h4>Beliefs</h4><table class="beliefs"><thead><tr>` +
    `<th>property</th><th>value</th><th>view</th><th>certainty</th></tr></thead>` +
    `<tbody>${beliefs}</tbody></table>` +
    `<h4>Memory</h4><ul class="memory">${memory || "<li>empty</li>"}</ul>` +
    `</section>`
  );
}

export function renderGraph(state: ViewState): string {
  if (!state.graph) {
    return "";
  }
  return layoutGraph(state.graph);
}

export function renderNotice(state: ViewState): string {
  return state.notice
    ? `<div class="notice">${escapeHtml(state.notice)}</div>`
    : "";
}
