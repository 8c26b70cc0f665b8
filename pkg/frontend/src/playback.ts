/** Client-side playback: one enveloped oscillator per note, a cursor
 *  callback per animation tick, and a clean disabled state when the
 *  browser has no audio. Scheduling math is pure for testing. */

import { NoteView } from "./types.js";

export interface ScheduledNote {
  startSeconds: number;
  endSeconds: number;
  frequency: number;
  gain: number;
}

export function pitchToFrequency(pitch: number): number {
  return 440 * Math.pow(2, (pitch - 69) / 12);
}

export function velocityToGain(velocity: number): number {
  // quiet enough that chords do not clip
  return 0.25 * (velocity / 127);
}

export function scheduleNotes(notes: NoteView[]): ScheduledNote[] {
  return notes
    .map((note) => ({
      startSeconds: note.startSeconds,
      endSeconds: Math.max(note.endSeconds, note.startSeconds + 0.02),
      frequency: pitchToFrequency(note.pitch),
      gain: velocityToGain(note.velocity),
    }))
    .sort((a, b) => a.startSeconds - b.startSeconds);
}

export function totalSeconds(schedule: ScheduledNote[]): number {
  return schedule.reduce((end, note) => Math.max(end, note.endSeconds), 0);
}

const ATTACK = 0.01;
const RELEASE = 0.05;

type ContextFactory = () => AudioContext | null;

function defaultContextFactory(): AudioContext | null {
  const Ctor =
    typeof AudioContext !== "undefined"
      ? AudioContext
      : (globalThis as { webkitAudioContext?: typeof AudioContext }).webkitAudioContext;
  return Ctor ? new Ctor() : null;
}

export class Player {
  readonly available: boolean;
  private context: AudioContext | null = null;
  private startedAt = 0;
  private offset = 0;
  private schedule: ScheduledNote[] = [];
  private sources: OscillatorNode[] = [];
  private ticker: number | null = null;
  private playing = false;

  onTick: ((seconds: number | null) => void) | null = null;

  constructor(private readonly contextFactory: ContextFactory = defaultContextFactory) {
    this.available = contextFactory() !== null;
  }

  load(notes: NoteView[]): void {
    this.stop();
    this.schedule = scheduleNotes(notes);
  }

  get durationSeconds(): number {
    return totalSeconds(this.schedule);
  }

  get positionSeconds(): number {
    if (!this.playing || !this.context) return this.offset;
    return this.offset + this.context.currentTime - this.startedAt;
  }

  play(): void {
    if (!this.available || this.playing || this.schedule.length === 0) return;
    this.context ??= this.contextFactory();
    const ctx = this.context;
    if (!ctx) return;
    void ctx.resume();
    this.startedAt = ctx.currentTime;
    this.playing = true;
    for (const note of this.schedule) {
      if (note.endSeconds <= this.offset) continue;
      const osc = ctx.createOscillator();
      const env = ctx.createGain();
      osc.type = "triangle";
      osc.frequency.value = note.frequency;
      const start = this.startedAt + Math.max(note.startSeconds - this.offset, 0);
      const stop = this.startedAt + (note.endSeconds - this.offset);
      env.gain.setValueAtTime(0, start);
      env.gain.linearRampToValueAtTime(note.gain, start + ATTACK);
      env.gain.setValueAtTime(note.gain, Math.max(stop - RELEASE, start + ATTACK));
      env.gain.linearRampToValueAtTime(0, stop);
      osc.connect(env).connect(ctx.destination);
      osc.start(start);
      osc.stop(stop + RELEASE);
      this.sources.push(osc);
    }
    this.tick();
  }

  pause(): void {
    if (!this.playing) return;
    this.offset = this.positionSeconds;
    this.silence();
    this.onTick?.(this.offset);
  }

  stop(): void {
    this.silence();
    this.offset = 0;
    this.onTick?.(null);
  }

  private silence(): void {
    this.playing = false;
    for (const source of this.sources) {
      try {
        source.stop();
      } catch {
        // already stopped
      }
    }
    this.sources = [];
    if (this.ticker !== null) {
      cancelAnimationFrame(this.ticker);
      this.ticker = null;
    }
  }

  private tick = (): void => {
    if (!this.playing) return;
    const position = this.positionSeconds;
    if (position >= this.durationSeconds) {
      this.stop();
      return;
    }
    this.onTick?.(position);
    this.ticker = requestAnimationFrame(this.tick);
  };
}
