/** Pure piano-roll scene computation: notes and bar lines to pixel space.
 *  Drawing lives in pianoroll.ts; everything here is testable headlessly. */

import { BarLine, NoteView } from "./types.js";

export interface Viewport {
  widthPx: number;
  heightPx: number;
  startSeconds: number;
  endSeconds: number;
  /** Inclusive pitch bounds, low at the bottom of the canvas. */
  pitchLow: number;
  pitchHigh: number;
}

export interface NoteRect {
  noteId: number;
  x: number;
  y: number;
  width: number;
  height: number;
  velocity: number;
  highlighted: boolean;
}

const MIN_SPAN_SECONDS = 1e-9;

/** Frame the whole track with one octave of headroom split around it. */
export function fitViewport(
  notes: NoteView[],
  durationSeconds: number,
  widthPx: number,
  heightPx: number,
): Viewport {
  let pitchLow = 48;
  let pitchHigh = 72;
  if (notes.length > 0) {
    pitchLow = Math.max(0, Math.min(...notes.map((n) => n.pitch)) - 6);
    pitchHigh = Math.min(127, Math.max(...notes.map((n) => n.pitch)) + 6);
  }
  return {
    widthPx,
    heightPx,
    startSeconds: 0,
    endSeconds: Math.max(durationSeconds, MIN_SPAN_SECONDS),
    pitchLow,
    pitchHigh,
  };
}

export function secondsToX(viewport: Viewport, seconds: number): number {
  const span = Math.max(viewport.endSeconds - viewport.startSeconds, MIN_SPAN_SECONDS);
  return ((seconds - viewport.startSeconds) / span) * viewport.widthPx;
}

export function pitchToY(viewport: Viewport, pitch: number): number {
  const rows = viewport.pitchHigh - viewport.pitchLow + 1;
  const rowHeight = viewport.heightPx / rows;
  return viewport.heightPx - (pitch - viewport.pitchLow + 1) * rowHeight;
}

export function noteRects(
  notes: NoteView[],
  viewport: Viewport,
  highlighted: ReadonlySet<number>,
): NoteRect[] {
  const rows = viewport.pitchHigh - viewport.pitchLow + 1;
  const rowHeight = viewport.heightPx / rows;
  return notes.map((note) => {
    const x = secondsToX(viewport, note.startSeconds);
    return {
      noteId: note.id,
      x,
      y: pitchToY(viewport, note.pitch),
      width: Math.max(secondsToX(viewport, note.endSeconds) - x, 1),
      height: rowHeight,
      velocity: note.velocity,
      highlighted: highlighted.has(note.id),
    };
  });
}

export function barLineXs(barLines: BarLine[], viewport: Viewport): number[] {
  return barLines
    .map((line) => secondsToX(viewport, line.seconds))
    .filter((x) => x >= 0 && x <= viewport.widthPx);
}

export function zoom(viewport: Viewport, factor: number, anchorSeconds: number): Viewport {
  const span = (viewport.endSeconds - viewport.startSeconds) / factor;
  const ratio = anchorTime(viewport, anchorSeconds);
  const startSeconds = anchorSeconds - span * ratio;
  return { ...viewport, startSeconds, endSeconds: startSeconds + span };
}

export function pan(viewport: Viewport, deltaSeconds: number): Viewport {
  return {
    ...viewport,
    startSeconds: viewport.startSeconds + deltaSeconds,
    endSeconds: viewport.endSeconds + deltaSeconds,
  };
}

/** The note whose rectangle contains the point, topmost (last drawn) first. */
export function hitTest(rects: NoteRect[], x: number, y: number): number | null {
  for (let i = rects.length - 1; i >= 0; i--) {
    const r = rects[i]!;
    if (x >= r.x && x <= r.x + r.width && y >= r.y && y <= r.y + r.height) {
      return r.noteId;
    }
  }
  return null;
}

function anchorTime(viewport: Viewport, anchorSeconds: number): number {
  const span = Math.max(viewport.endSeconds - viewport.startSeconds, MIN_SPAN_SECONDS);
  return (anchorSeconds - viewport.startSeconds) / span;
}
