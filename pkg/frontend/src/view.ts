/**
 * DOM rendering of the transcript view model. No framework: the whole
 * transcript re-renders from state, which keeps ordering trivially
 * consistent with the reducer.
 */

import type { ChunkState, TranscriptState, UiMessage } from "./transcript.js";
import type { DebugMode } from "./protocol.js";

export interface ViewHandlers {
  onChipClick: (label: string) => void;
  onChunkSave: (chunkId: string, source: string) => void;
  onDebug: (chunkId: string, mode: DebugMode, ideas?: string) => void;
}

export function renderTranscript(
  container: HTMLElement,
  state: TranscriptState,
  handlers: ViewHandlers,
): void {
  container.textContent = "";
  for (const message of state.messages) {
    container.appendChild(renderMessage(message, state, handlers));
  }
  container.scrollTop = container.scrollHeight;
}

function renderMessage(
  message: UiMessage,
  state: TranscriptState,
  handlers: ViewHandlers,
): HTMLElement {
  const element = el("div", `message ${message.direction} kind-${message.kind}`);
  element.dataset.seq = String(message.seq);

  if (message.sources.length > 0) {
    element.appendChild(renderSources(message));
  }

  if (message.kind === "chunk" && message.chunkRef) {
    const chunk = state.chunks.get(message.chunkRef);
    if (chunk) element.appendChild(renderCodePanel(chunk, handlers));
    return element;
  }

  const body = el("div", "body");
  body.textContent = message.body;
  element.appendChild(body);

  if (message.kind === "clarification") {
    for (const question of message.questions) {
      const row = el("div", "question");
      const label = el("span", "question-text");
      label.textContent = question.text;
      row.appendChild(label);
      for (const suggestion of question.suggested_answers) {
        const chip = el("button", "chip") as HTMLButtonElement;
        chip.type = "button";
        chip.textContent = suggestion;
        // chips insert text instead of sending, keeping the user in charge
        chip.addEventListener("click", () => handlers.onChipClick(suggestion));
        row.appendChild(chip);
      }
      element.appendChild(row);
    }
  }
  return element;
}

function renderSources(message: UiMessage): HTMLElement {
  const details = el("details", "sources") as HTMLDetailsElement;
  if (message.kind === "answer") details.open = true;
  const summary = el("summary", "sources-summary");
  summary.textContent = `Sources (${message.sources.length})`;
  details.appendChild(summary);
  const list = el("ul", "source-list");
  for (const source of message.sources) {
    const item = el("li", "source");
    const link = el("a", "source-link") as HTMLAnchorElement;
    link.href = source.url;
    link.target = "_blank";
    link.rel = "noreferrer";
    link.textContent = source.title;
    item.appendChild(link);
    const snippet = el("span", "source-snippet");
    snippet.textContent = ` ${source.snippet}`;
    item.appendChild(snippet);
    list.appendChild(item);
  }
  details.appendChild(list);
  return details;
}

export function renderCodePanel(chunk: ChunkState, handlers: ViewHandlers): HTMLElement {
  const panel = el("div", "code-panel");
  panel.dataset.chunkId = chunk.chunkId;

  const header = el("div", "panel-header");
  const title = el("span", "panel-title");
  title.textContent = chunk.chunkId;
  const badge = el("span", "revision-badge");
  badge.textContent = `rev ${chunk.revision}`;
  header.appendChild(title);
  header.appendChild(badge);
  panel.appendChild(header);

  const editorRow = el("div", "editor-row");
  const gutter = el("div", "gutter");
  const lines = chunk.source.split("\n").length;
  const byLine = new Map<number, string[]>();
  for (const diagnostic of chunk.diagnostics) {
    const line = diagnostic.span.start_line;
    const existing = byLine.get(line) ?? [];
    existing.push(diagnostic.clarified_message);
    byLine.set(line, existing);
  }
  for (let line = 1; line <= lines; line += 1) {
    const marker = el("div", "gutter-line");
    const notes = byLine.get(line);
    if (notes) {
      marker.classList.add("has-diagnostic");
      marker.textContent = "⚠";
      marker.title = notes.join("\n"); // hover shows the clarified message
    } else {
      marker.textContent = String(line);
    }
    gutter.appendChild(marker);
  }
  editorRow.appendChild(gutter);

  const editor = el("textarea", "editor") as HTMLTextAreaElement;
  editor.value = chunk.source;
  editor.rows = Math.max(lines, 3);
  editor.spellcheck = false;
  editorRow.appendChild(editor);
  panel.appendChild(editorRow);

  const diagnosticsBox = el("div", "diagnostics");
  for (const diagnostic of chunk.diagnostics) {
    const row = el("div", `diagnostic ${diagnostic.severity}`);
    row.textContent = `${diagnostic.code} (line ${diagnostic.span.start_line}): ${diagnostic.raw_message}`;
    row.title = diagnostic.clarified_message;
    diagnosticsBox.appendChild(row);
  }
  panel.appendChild(diagnosticsBox);

  const actions = el("div", "panel-actions");
  const save = button("Check my edit", "save", () =>
    handlers.onChunkSave(chunk.chunkId, editor.value),
  );
  const explain = button("Explain", "explain", () => handlers.onDebug(chunk.chunkId, "explain"));
  const fix = button("Fix", "fix", () => handlers.onDebug(chunk.chunkId, "auto-fix"));

  const ideasWrap = el("span", "ideas-wrap");
  const ideasInput = el("input", "ideas-input") as HTMLInputElement;
  ideasInput.placeholder = "your ideas...";
  ideasInput.hidden = true;
  const fixWithIdeas = button("Fix with my ideas", "fix-with-ideas", () => {
    if (ideasInput.hidden) {
      ideasInput.hidden = false;
      ideasInput.focus();
      return;
    }
    handlers.onDebug(chunk.chunkId, "fix-with-ideas", ideasInput.value);
    ideasInput.hidden = true;
  });
  ideasWrap.appendChild(fixWithIdeas);
  ideasWrap.appendChild(ideasInput);

  actions.appendChild(save);
  actions.appendChild(explain);
  actions.appendChild(fix);
  actions.appendChild(ideasWrap);
  panel.appendChild(actions);
  return panel;
}

export function setBanner(element: HTMLElement, connected: boolean): void {
  element.hidden = connected;
  element.textContent = connected ? "" : "Connection lost - resuming...";
}

function el(tag: string, className: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  return node;
}

function button(label: string, action: string, onClick: () => void): HTMLButtonElement {
  const node = el("button", `action action-${action}`) as HTMLButtonElement;
  node.type = "button";
  node.textContent = label;
  node.addEventListener("click", onClick);
  return node;
}
