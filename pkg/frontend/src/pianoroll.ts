/** Canvas renderer for the piano roll; scene math comes from geometry.ts. */

import {
  barLineXs,
  fitViewport,
  hitTest,
  NoteRect,
  noteRects,
  pan,
  secondsToX,
  Viewport,
  zoom,
} from "./geometry.js";
import { BarLine, NoteView } from "./types.js";

const BACKGROUND = "#14161c";
const GRID = "#2a2e3a";
const BAR = "#3c4254";
const NOTE = "#4f9cf5";
const NOTE_HIGHLIGHT = "#ffb454";
const CURSOR = "#e5534b";

export class PianoRoll {
  private viewport: Viewport;
  private rects: NoteRect[] = [];
  private notes: NoteView[] = [];
  private barLines: BarLine[] = [];
  private highlighted: ReadonlySet<number> = new Set();
  private cursorSeconds: number | null = null;
  private dragStartX: number | null = null;

  onNoteClick: ((noteId: number | null) => void) | null = null;

  constructor(private readonly canvas: HTMLCanvasElement) {
    this.viewport = fitViewport([], 1, canvas.width, canvas.height);
    canvas.addEventListener("click", (event) => this.handleClick(event));
    canvas.addEventListener("wheel", (event) => this.handleWheel(event), { passive: false });
    canvas.addEventListener("pointerdown", (event) => {
      this.dragStartX = event.offsetX;
    });
    canvas.addEventListener("pointermove", (event) => this.handleDrag(event));
    canvas.addEventListener("pointerup", () => {
      this.dragStartX = null;
    });
  }

  setScene(notes: NoteView[], barLines: BarLine[], durationSeconds: number): void {
    this.notes = notes;
    this.barLines = barLines;
    this.viewport = fitViewport(notes, durationSeconds, this.canvas.width, this.canvas.height);
    this.draw();
  }

  setHighlight(noteIds: ReadonlySet<number>): void {
    this.highlighted = noteIds;
    this.draw();
  }

  setCursor(seconds: number | null): void {
    this.cursorSeconds = seconds;
    this.draw();
  }

  private handleClick(event: MouseEvent): void {
    if (!this.onNoteClick) return;
    this.onNoteClick(hitTest(this.rects, event.offsetX, event.offsetY));
  }

  private handleWheel(event: WheelEvent): void {
    event.preventDefault();
    const anchor =
      this.viewport.startSeconds +
      (event.offsetX / this.viewport.widthPx) *
        (this.viewport.endSeconds - this.viewport.startSeconds);
    this.viewport = zoom(this.viewport, event.deltaY < 0 ? 1.2 : 1 / 1.2, anchor);
    this.draw();
  }

  private handleDrag(event: PointerEvent): void {
    if (this.dragStartX === null || event.buttons === 0) return;
    const deltaPx = this.dragStartX - event.offsetX;
    const span = this.viewport.endSeconds - this.viewport.startSeconds;
    this.viewport = pan(this.viewport, (deltaPx / this.viewport.widthPx) * span);
    this.dragStartX = event.offsetX;
    this.draw();
  }

  private draw(): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const { width, height } = this.canvas;
    ctx.fillStyle = BACKGROUND;
    ctx.fillRect(0, 0, width, height);

    const rows = this.viewport.pitchHigh - this.viewport.pitchLow + 1;
    const rowHeight = height / rows;
    ctx.strokeStyle = GRID;
    ctx.lineWidth = 1;
    for (let row = 0; row <= rows; row++) {
      const y = Math.round(row * rowHeight) + 0.5;
      ctx.beginPath();
      ctx.moveTo(0, y);
      ctx.lineTo(width, y);
      ctx.stroke();
    }

    ctx.strokeStyle = BAR;
    for (const x of barLineXs(this.barLines, this.viewport)) {
      ctx.beginPath();
      ctx.moveTo(Math.round(x) + 0.5, 0);
      ctx.lineTo(Math.round(x) + 0.5, height);
      ctx.stroke();
    }

    this.rects = noteRects(this.notes, this.viewport, this.highlighted);
    for (const rect of this.rects) {
      ctx.fillStyle = rect.highlighted ? NOTE_HIGHLIGHT : NOTE;
      ctx.globalAlpha = 0.4 + 0.6 * (rect.velocity / 127);
      ctx.fillRect(rect.x, rect.y, rect.width, rect.height);
    }
    ctx.globalAlpha = 1;

    if (this.cursorSeconds !== null) {
      const x = secondsToX(this.viewport, this.cursorSeconds);
      ctx.strokeStyle = CURSOR;
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.moveTo(x, 0);
      ctx.lineTo(x, height);
      ctx.stroke();
    }
  }
}
