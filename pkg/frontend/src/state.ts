/** View state and the pure selection/highlight logic behind the linked views. */

import { Scheme, TokenizeResponse, TrackView } from "./types.js";

export type SelectionTarget =
  | { kind: "none" }
  | { kind: "note"; noteId: number }
  | { kind: "token"; tokenIndex: number };

export interface ViewState {
  response: TokenizeResponse | null;
  trackIndex: number;
  scheme: Scheme;
  target: SelectionTarget;
}

const NONE: SelectionTarget = { kind: "none" };

export function initialState(scheme: Scheme = "REMI"): ViewState {
  return { response: null, trackIndex: 0, scheme, target: NONE };
}

export function currentTrack(state: ViewState): TrackView | null {
  if (!state.response) return null;
  return state.response.tracks.find((t) => t.trackIndex === state.trackIndex) ?? null;
}

/** A new document replaces everything the selection could refer to. */
export function loadResponse(state: ViewState, response: TokenizeResponse): ViewState {
  const trackIndex = response.tracks.some((t) => t.trackIndex === state.trackIndex)
    ? state.trackIndex
    : (response.tracks[0]?.trackIndex ?? 0);
  return { ...state, response, trackIndex, target: NONE };
}

export function selectTrack(state: ViewState, trackIndex: number): ViewState {
  if (trackIndex === state.trackIndex) return state;
  return { ...state, trackIndex, target: NONE };
}

export function selectScheme(state: ViewState, scheme: Scheme): ViewState {
  return { ...state, scheme };
}

/** Selecting the selected note again clears it; unknown ids clear too. */
export function selectNote(state: ViewState, noteId: number): ViewState {
  const track = currentTrack(state);
  if (!track || !track.notes.some((n) => n.id === noteId)) {
    return { ...state, target: NONE };
  }
  if (state.target.kind === "note" && state.target.noteId === noteId) {
    return { ...state, target: NONE };
  }
  return { ...state, target: { kind: "note", noteId } };
}

export function selectToken(state: ViewState, tokenIndex: number): ViewState {
  const track = currentTrack(state);
  if (!track || tokenIndex < 0 || tokenIndex >= track.tokens.length) {
    return { ...state, target: NONE };
  }
  if (state.target.kind === "token" && state.target.tokenIndex === tokenIndex) {
    return { ...state, target: NONE };
  }
  return { ...state, target: { kind: "token", tokenIndex } };
}

export function clearSelection(state: ViewState): ViewState {
  return state.target.kind === "none" ? state : { ...state, target: NONE };
}

/** Token indices to highlight: a selected note lights exactly its mapped
 *  tokens, a selected token lights itself. */
export function highlightedTokens(track: TrackView, target: SelectionTarget): Set<number> {
  switch (target.kind) {
    case "note":
      return new Set(track.noteToTokens[String(target.noteId)] ?? []);
    case "token":
      return new Set([target.tokenIndex]);
    default:
      return new Set();
  }
}

/** Note ids to highlight: a selected token lights exactly its note (if any). */
export function highlightedNotes(track: TrackView, target: SelectionTarget): Set<number> {
  switch (target.kind) {
    case "note":
      return new Set([target.noteId]);
    case "token": {
      const noteId = track.tokenToNote[String(target.tokenIndex)];
      return noteId === undefined ? new Set() : new Set([noteId]);
    }
    default:
      return new Set();
  }
}
