/** Application wiring: upload, configure, explore, play. */

import { describeError, TokenizeClient } from "./api.js";
import {
  applyServerError,
  FormState,
  initialForm,
  setField,
  validateForm,
} from "./config-form.js";
import { metadataSummary, trackLabel } from "./metadata.js";
import { PianoRoll } from "./pianoroll.js";
import { Player } from "./playback.js";
import {
  clearSelection,
  currentTrack,
  highlightedNotes,
  highlightedTokens,
  initialState,
  loadResponse,
  selectNote,
  selectScheme,
  selectToken,
  selectTrack,
  ViewState,
} from "./state.js";
import { renderTokenPanel, scrollToHighlight } from "./tokens.js";
import { ConfigField, Scheme, SchemeDescriptor } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

// ?api=http://host:port points at a service on another origin
const apiBase = new URLSearchParams(location.search).get("api") ?? "";
const client = new TokenizeClient(apiBase);
const player = new Player();

let state: ViewState = initialState();
let descriptors: SchemeDescriptor[] = [];
let schema: ConfigField[] = [];
let form: FormState = { values: {}, errors: {} };
let fileBytes: Blob | null = null;
let fileName = "";

const fileInput = el<HTMLInputElement>("file-input");
const schemeSelect = el<HTMLSelectElement>("scheme-select");
const configFields = el<HTMLDivElement>("config-fields");
const applyButton = el<HTMLButtonElement>("apply-button");
const statusLine = el<HTMLDivElement>("status-line");
const metadataStrip = el<HTMLDivElement>("metadata-strip");
const warningsBox = el<HTMLDivElement>("warnings");
const trackTabs = el<HTMLDivElement>("track-tabs");
const tokenPanel = el<HTMLDivElement>("token-panel");
const rollCanvas = el<HTMLCanvasElement>("roll-canvas");
const playButton = el<HTMLButtonElement>("play-button");
const pauseButton = el<HTMLButtonElement>("pause-button");
const stopButton = el<HTMLButtonElement>("stop-button");
const audioNote = el<HTMLSpanElement>("audio-note");

const pianoRoll = new PianoRoll(rollCanvas);
pianoRoll.onNoteClick = (noteId) => {
  state = noteId === null ? clearSelection(state) : selectNote(state, noteId);
  renderLinkedViews();
  if (noteId !== null) scrollToHighlight(tokenPanel);
};
player.onTick = (seconds) => pianoRoll.setCursor(seconds);

function setStatus(text: string, isError = false): void {
  statusLine.textContent = text;
  statusLine.classList.toggle("error", isError);
}

function compoundWidthFor(scheme: Scheme): number {
  return descriptors.find((d) => d.scheme === scheme)?.compoundWidth ?? 0;
}

function renderConfigForm(): void {
  configFields.textContent = "";
  for (const field of schema) {
    const wrapper = document.createElement("label");
    wrapper.className = "config-field";
    const caption = document.createElement("span");
    caption.textContent = field.name;
    const input = document.createElement("input");
    input.value = form.values[field.name] ?? "";
    input.addEventListener("input", () => {
      form = setField(form, field.name, input.value);
    });
    const error = document.createElement("em");
    error.className = "field-error";
    error.textContent = form.errors[field.name] ?? "";
    wrapper.append(caption, input, error);
    configFields.appendChild(wrapper);
  }
}

function renderTrackTabs(): void {
  trackTabs.textContent = "";
  const response = state.response;
  if (!response) return;
  for (const track of response.tracks) {
    const tab = document.createElement("button");
    tab.type = "button";
    tab.className = "tab";
    tab.textContent = trackLabel(track);
    if (track.trackIndex === state.trackIndex) tab.classList.add("active");
    tab.addEventListener("click", () => {
      state = selectTrack(state, track.trackIndex);
      renderAll();
    });
    trackTabs.appendChild(tab);
  }
}

function renderLinkedViews(): void {
  const track = currentTrack(state);
  if (!track) {
    pianoRoll.setHighlight(new Set());
    tokenPanel.textContent = "";
    return;
  }
  pianoRoll.setHighlight(highlightedNotes(track, state.target));
  renderTokenPanel(
    tokenPanel,
    track.tokens,
    compoundWidthFor(state.scheme),
    highlightedTokens(track, state.target),
    {
      onTokenClick: (tokenIndex) => {
        state = selectToken(state, tokenIndex);
        renderLinkedViews();
      },
    },
  );
}

function renderAll(): void {
  const response = state.response;
  const track = currentTrack(state);
  metadataStrip.textContent = response ? metadataSummary(response.metadata) : "";
  warningsBox.textContent = response && response.warnings.length > 0
    ? response.warnings.join("\n")
    : "";
  renderTrackTabs();
  if (response && track) {
    pianoRoll.setScene(track.notes, response.barLines, response.metadata.durationSeconds);
    player.load(track.notes);
  } else {
    pianoRoll.setScene([], [], 1);
    player.load([]);
  }
  renderLinkedViews();
  updatePlayerControls();
}

function updatePlayerControls(): void {
  const track = currentTrack(state);
  const usable = player.available && track !== null && track.notes.length > 0;
  playButton.disabled = !usable;
  pauseButton.disabled = !usable;
  stopButton.disabled = !usable;
  audioNote.textContent = player.available ? "" : "audio unavailable in this browser";
}

async function submit(): Promise<void> {
  if (!fileBytes) {
    setStatus("choose a MIDI file first", true);
    return;
  }
  const { config, errors } = validateForm(schema, form);
  form = { values: form.values, errors };
  renderConfigForm();
  if (config === null) {
    setStatus("fix the highlighted config fields", true);
    return;
  }
  setStatus(`tokenizing ${fileName} as ${state.scheme}...`);
  const result = await client.tokenize(fileBytes, state.scheme, config);
  if (result.kind === "stale") return;
  if (result.kind === "error") {
    if (result.error.field && result.error.reason) {
      form = applyServerError(form, result.error.field, result.error.reason);
      renderConfigForm();
    }
    setStatus(describeError(result.status, result.error), true);
    return;
  }
  state = loadResponse(state, result.response);
  setStatus(`${fileName}: ${result.response.metadata.noteCount} notes, ${state.scheme}`);
  renderAll();
}

async function boot(): Promise<void> {
  try {
    descriptors = await client.fetchTokenizers();
  } catch (err) {
    setStatus(err instanceof Error ? err.message : String(err), true);
    return;
  }
  schemeSelect.textContent = "";
  for (const descriptor of descriptors) {
    const option = document.createElement("option");
    option.value = descriptor.scheme;
    option.textContent = descriptor.scheme;
    schemeSelect.appendChild(option);
  }
  schema = descriptors[0]?.configSchema ?? [];
  form = initialForm(schema);
  renderConfigForm();
  updatePlayerControls();
  setStatus("ready");

  schemeSelect.addEventListener("change", () => {
    state = selectScheme(state, schemeSelect.value as Scheme);
    if (fileBytes) void submit();
  });
  fileInput.addEventListener("change", () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    fileBytes = file;
    fileName = file.name;
    void submit();
  });
  applyButton.addEventListener("click", () => void submit());
  playButton.addEventListener("click", () => player.play());
  pauseButton.addEventListener("click", () => player.pause());
  stopButton.addEventListener("click", () => player.stop());
}

void boot();
