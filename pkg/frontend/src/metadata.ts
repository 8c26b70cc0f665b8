/** Human-readable metadata strip, matching the service's inspect wording. */

import { Metadata, TrackView } from "./types.js";

function trim(value: number): string {
  return String(Number(value.toFixed(6)));
}

export function metadataSummary(metadata: Metadata): string {
  const parts: string[] = [];
  if (metadata.pitchMin !== undefined && metadata.pitchMax !== undefined) {
    parts.push(`pitch range ${metadata.pitchMin}–${metadata.pitchMax}`);
  }
  parts.push(`${metadata.noteCount} notes`);
  parts.push(`${trim(metadata.durationSeconds)} s`);
  const tempo = metadata.tempoMap[0];
  if (tempo) parts.push(`${trim(tempo.bpm)} bpm`);
  const sig = metadata.timeSigMap[0];
  if (sig) parts.push(`${sig.numerator}/${sig.denominator}`);
  const key = metadata.keySigMap[0];
  if (key) parts.push(key.name);
  return parts.join(", ");
}

export function trackLabel(track: TrackView): string {
  const name = track.name.trim();
  const program = track.program === "Drums" ? "drums" : `program ${track.program}`;
  const base = name === "" ? `Track ${track.trackIndex}` : name;
  return `${base} (${program}, ${track.notes.length} notes)`;
}
