/** Form model generated from the server's config field schema.
 *
 * Validation mirrors the server's 422 rules so bad values never leave the
 * browser: per-field type and bounds from the schema, plus the two
 * cross-field orderings (pitchMin < pitchMax, tempoMinBpm < tempoMaxBpm)
 * blamed on the same fields the server blames.
 */

import { ConfigField } from "./types.js";

export interface FormState {
  /** Raw text per field, as typed. */
  values: Record<string, string>;
  errors: Record<string, string>;
}

export function initialForm(schema: ConfigField[]): FormState {
  const values: Record<string, string> = {};
  for (const field of schema) {
    values[field.name] = String(field.default);
  }
  return { values, errors: {} };
}

export function setField(form: FormState, name: string, text: string): FormState {
  return { values: { ...form.values, [name]: text }, errors: form.errors };
}

function parseField(field: ConfigField, text: string): number | string {
  const trimmed = text.trim();
  if (trimmed === "") return "required";
  const value = Number(trimmed);
  if (!Number.isFinite(value)) return `not a ${field.type}`;
  if (field.type === "integer" && !Number.isInteger(value)) return "must be an integer";
  if (field.min !== null && value < field.min) return `must be at least ${field.min}`;
  if (field.max !== null && value > field.max) return `must be at most ${field.max}`;
  return value;
}

export interface ValidationResult {
  /** Present only when every field passed; includes non-default fields only. */
  config: Record<string, number> | null;
  errors: Record<string, string>;
}

export function validateForm(schema: ConfigField[], form: FormState): ValidationResult {
  const parsed: Record<string, number> = {};
  const errors: Record<string, string> = {};
  for (const field of schema) {
    const outcome = parseField(field, form.values[field.name] ?? "");
    if (typeof outcome === "string") {
      errors[field.name] = outcome;
    } else {
      parsed[field.name] = outcome;
    }
  }
  const { pitchMin, pitchMax, tempoMinBpm, tempoMaxBpm } = parsed;
  if (pitchMin !== undefined && pitchMax !== undefined && pitchMin >= pitchMax) {
    errors.pitchMin = "must be less than pitchMax";
  }
  if (tempoMinBpm !== undefined && tempoMaxBpm !== undefined && tempoMaxBpm <= tempoMinBpm) {
    errors.tempoMaxBpm = "must exceed tempoMinBpm";
  }
  if (Object.keys(errors).length > 0) {
    return { config: null, errors };
  }
  const config: Record<string, number> = {};
  for (const field of schema) {
    const value = parsed[field.name];
    if (value !== undefined && value !== field.default) {
      config[field.name] = value;
    }
  }
  return { config, errors: {} };
}

/** Server-side field errors (422) map straight back onto the form. */
export function applyServerError(form: FormState, field: string, reason: string): FormState {
  return { values: form.values, errors: { ...form.errors, [field]: reason } };
}
