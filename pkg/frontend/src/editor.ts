// Constraint-editor state and the POST /runs request it produces.
// State handling is pure so it can be unit-tested without a DOM.

import {
  ALL_CONFIGS,
  ConfigName,
  ConstraintsDoc,
  RunRequest,
  SystemDoc,
} from "./types.js";

export interface EditorState {
  constraints: ConstraintsDoc;
  enabled: Set<ConfigName>;
  placements: Record<string, ConfigName>; // module id -> locked configuration
}

function cloneConstraints(c: ConstraintsDoc): ConstraintsDoc {
  return {
    domain_f_min: { ...c.domain_f_min },
    p_total_max: c.p_total_max,
    p_trusted_max: c.p_trusted_max,
    p_untrusted_max: c.p_untrusted_max,
    io_bandwidth_max: c.io_bandwidth_max,
    external_io_baseline: c.external_io_baseline,
    latency: c.latency.map((lc) => ({ ...lc, path: [...lc.path] })),
    area_total_max: c.area_total_max,
    inter_chip_delay: c.inter_chip_delay,
  };
}

export function initEditor(system: SystemDoc): EditorState {
  return {
    constraints: cloneConstraints(system.constraints),
    enabled: new Set(ALL_CONFIGS),
    placements: {},
  };
}

export type FieldError = { field: string; message: string };

// Mirrors the server-side schema: bounds must be positive numbers or blank
// (blank = unconstrained), fixed parameters must be non-negative.
export function validateField(field: string, raw: string): FieldError | null {
  if (raw.trim() === "") {
    if (field === "external_io_baseline" || field === "inter_chip_delay") {
      return { field, message: "required" };
    }
    return null;
  }
  const value = Number(raw);
  if (!Number.isFinite(value)) return { field, message: "not a number" };
  if (field === "external_io_baseline" || field === "inter_chip_delay") {
    return value >= 0 ? null : { field, message: "must be >= 0" };
  }
  return value > 0 ? null : { field, message: "must be > 0" };
}

export function setScalar(
  state: EditorState,
  field:
    | "p_total_max"
    | "p_trusted_max"
    | "p_untrusted_max"
    | "io_bandwidth_max"
    | "area_total_max"
    | "external_io_baseline"
    | "inter_chip_delay",
  raw: string,
): FieldError | null {
  const err = validateField(field, raw);
  if (err) return err;
  const value = raw.trim() === "" ? null : Number(raw);
  if (field === "external_io_baseline" || field === "inter_chip_delay") {
    state.constraints[field] = value as number;
  } else {
    state.constraints[field] = value;
  }
  return null;
}

export function setDomainFloor(
  state: EditorState,
  domain: string,
  raw: string,
): FieldError | null {
  const field = `domain_f_min.${domain}`;
  const err = validateField(field, raw);
  if (err) return err;
  if (raw.trim() === "") {
    delete state.constraints.domain_f_min[domain];
  } else {
    state.constraints.domain_f_min[domain] = Number(raw);
  }
  return null;
}

export function setLatencyMax(
  state: EditorState,
  id: string,
  raw: string,
): FieldError | null {
  const err = validateField(`latency_max.${id}`, raw);
  if (err) return err;
  if (raw.trim() === "") return { field: `latency_max.${id}`, message: "required" };
  const lc = state.constraints.latency.find((l) => l.id === id);
  if (!lc) return { field: `latency_max.${id}`, message: "unknown constraint" };
  lc.max_latency = Number(raw);
  return null;
}

// TRUSTED and UNTRUSTED are mandatory; only the two obfuscated
// configurations can be toggled off.
export function toggleConfig(
  state: EditorState,
  config: ConfigName,
  on: boolean,
): void {
  if (config === "TRUSTED" || config === "UNTRUSTED") return;
  if (on) state.enabled.add(config);
  else state.enabled.delete(config);
}

export function setPlacement(
  state: EditorState,
  moduleId: string,
  config: ConfigName | "",
): void {
  if (config === "") delete state.placements[moduleId];
  else state.placements[moduleId] = config;
}

export function buildRunRequest(state: EditorState): RunRequest {
  const req: RunRequest = {
    constraints: cloneConstraints(state.constraints),
    enabled_configs: ALL_CONFIGS.filter((c) => state.enabled.has(c)),
  };
  if (Object.keys(state.placements).length > 0) {
    req.placements = { ...state.placements };
  }
  return req;
}
