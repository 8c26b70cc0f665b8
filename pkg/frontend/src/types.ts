/** Wire types for the tokenize service, mirroring its committed JSON schema. */

export type Scheme = "REMI" | "TSD" | "MIDILike" | "Structured" | "CPWord" | "Octuple";

export interface TempoEntry {
  tick: number;
  seconds: number;
  bpm: number;
}

export interface TimeSigEntry {
  tick: number;
  seconds: number;
  numerator: number;
  denominator: number;
}

export interface KeySigEntry {
  tick: number;
  seconds: number;
  sharpsFlats: number;
  mode: "major" | "minor";
  name: string;
}

export interface TrackPitchRange {
  trackIndex: number;
  pitchMin: number;
  pitchMax: number;
}

export interface Metadata {
  /** Absent when the file has no notes. */
  pitchMin?: number;
  pitchMax?: number;
  noteCount: number;
  durationSeconds: number;
  tempoMap: TempoEntry[];
  timeSigMap: TimeSigEntry[];
  keySigMap: KeySigEntry[];
  trackPitchRanges: TrackPitchRange[];
}

export interface BarSpan {
  barIndex: number;
  startUnits: number;
  unitsPerBar: number;
  numerator: number;
  denominator: number;
}

export interface BarLine {
  bar: number;
  units: number;
  seconds: number;
}

export interface NoteView {
  id: number;
  pitch: number;
  /** Original file velocity, not the quantized bin. */
  velocity: number;
  startSeconds: number;
  endSeconds: number;
  startUnits: number;
  durationUnits: number;
  bar: number;
  position: number;
}

export interface SimpleToken {
  index: number;
  type: string;
  value: string;
  noteId: number | null;
}

export interface TokenCell {
  type: string;
  value: string;
}

export interface CompoundToken {
  index: number;
  cells: TokenCell[];
  noteId: number | null;
}

export type Token = SimpleToken | CompoundToken;

export function isCompound(token: Token): token is CompoundToken {
  return "cells" in token;
}

export interface VocabularyEntry {
  type: string;
  value: string;
  count: number;
}

export interface TrackView {
  trackIndex: number;
  name: string;
  program: number | "Drums";
  notes: NoteView[];
  tokens: Token[];
  noteToTokens: Record<string, number[]>;
  tokenToNote: Record<string, number>;
  vocabulary: VocabularyEntry[];
}

export interface TokenizeResponse {
  metadata: Metadata;
  barMap: BarSpan[];
  barLines: BarLine[];
  tracks: TrackView[];
  warnings: string[];
}

export interface ConfigField {
  name: string;
  type: "integer" | "number";
  default: number;
  min: number | null;
  max: number | null;
}

export interface SchemeDescriptor {
  scheme: Scheme;
  tokenTypes: string[];
  /** 0 for simple-token schemes, 5 for CPWord, 8 for Octuple. */
  compoundWidth: number;
  configSchema: ConfigField[];
}

export interface ApiError {
  type: string;
  message?: string;
  field?: string;
  reason?: string;
}
