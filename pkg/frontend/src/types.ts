// Wire types for the partitioning service API. The UI renders these
// documents as-is; it never recomputes a metric client-side.

export type ConfigName =
  | "TRUSTED"
  | "UNTRUSTED"
  | "UNTRUSTED_KEY_LOCKED"
  | "UNTRUSTED_FSM_OBF";

export const ALL_CONFIGS: ConfigName[] = [
  "TRUSTED",
  "UNTRUSTED",
  "UNTRUSTED_KEY_LOCKED",
  "UNTRUSTED_FSM_OBF",
];

export interface ModuleDoc {
  id: string;
  domain: string;
  criticality: number;
  placement?: ConfigName;
  characterization: Record<ConfigName, {
    fmax: number;
    area: number;
    p_dyn_at_fmax: number;
    p_static: number;
  }>;
}

export interface ChannelDoc {
  src: string;
  dst: string;
  bandwidth: number;
  latency_on_chip: number;
}

export interface LatencyDoc {
  id: string;
  path: Array<number | { src: string; dst: string }>;
  max_latency: number;
}

export interface ConstraintsDoc {
  domain_f_min: Record<string, number>;
  p_total_max: number | null;
  p_trusted_max: number | null;
  p_untrusted_max: number | null;
  io_bandwidth_max: number | null;
  external_io_baseline: number;
  latency: LatencyDoc[];
  area_total_max: number | null;
  inter_chip_delay: number;
}

export interface SystemDoc {
  modules: ModuleDoc[];
  domains: Array<{ id: string }>;
  channels: ChannelDoc[];
  exposure: Record<ConfigName, number>;
  constraints: ConstraintsDoc;
}

export interface ViolationDoc {
  constraint: string;
  required: number;
  actual: number;
}

export interface EvaluationDoc {
  domain_freq: Record<string, number>;
  power: { trusted: number; untrusted: number; total: number };
  io_bandwidth: number;
  latencies: Record<string, number>;
  area: { trusted: number; untrusted: number; total: number };
  vulnerability: number;
  feasible: boolean;
  violations: ViolationDoc[];
}

export interface RunRecordDoc {
  run_id: number;
  constraints: ConstraintsDoc;
  enabled_configs: ConfigName[];
  result: {
    best: Record<string, ConfigName> | null;
    best_eval: EvaluationDoc | null;
    nodes_visited: number;
    nodes_pruned: number;
    proven_optimal: boolean;
  };
  eval: EvaluationDoc | null;
  timestamp: string;
}

export interface RunRequest {
  constraints: ConstraintsDoc;
  enabled_configs: ConfigName[];
  placements?: Record<string, ConfigName>;
}
