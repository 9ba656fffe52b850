// Pure view-model construction: API documents in, renderable rows out.

import {
  ALL_CONFIGS,
  ConfigName,
  RunRecordDoc,
  SystemDoc,
} from "./types.js";

// One stable color per configuration (the partition legend).
export const CONFIG_COLORS: Record<ConfigName, string> = {
  TRUSTED: "#2e7d32",
  UNTRUSTED: "#c62828",
  UNTRUSTED_KEY_LOCKED: "#ef6c00",
  UNTRUSTED_FSM_OBF: "#f9a825",
};

export const CONFIG_SHORT: Record<ConfigName, string> = {
  TRUSTED: "trusted",
  UNTRUSTED: "untrusted",
  UNTRUSTED_KEY_LOCKED: "key-locked",
  UNTRUSTED_FSM_OBF: "fsm-obf",
};

export interface MetricRow {
  key: string; // stable identity, used for hide/show
  label: string;
  unit: string;
  constraint: number | null; // null = unconstrained
  achieved: number;
  violated: boolean;
  // frequency floors are lower bounds; everything else is an upper bound
  lowerBound: boolean;
}

export interface PartitionModule {
  id: string;
  config: ConfigName;
  color: string;
}

export interface PartitionGroup {
  domain: string;
  modules: PartitionModule[];
}

export interface RunPanel {
  runId: number;
  feasible: boolean;
  hasResult: boolean;
  vulnerability: number | null;
  enabled: ConfigName[];
  nodesVisited: number;
  nodesPruned: number;
  metrics: MetricRow[];
  partition: PartitionGroup[];
  violations: string[];
}

export function buildMetricRows(record: RunRecordDoc): MetricRow[] {
  const ev = record.eval;
  if (!ev) return [];
  const violated = new Set(ev.violations.map((v) => v.constraint));
  const c = record.constraints;
  const rows: MetricRow[] = [];
  for (const domain of Object.keys(ev.domain_freq)) {
    rows.push({
      key: `freq:${domain}`,
      label: `f(${domain})`,
      unit: "Hz",
      constraint: c.domain_f_min[domain] ?? null,
      achieved: ev.domain_freq[domain],
      violated: violated.has(`domain_f_min:${domain}`),
      lowerBound: true,
    });
  }
  rows.push({
    key: "power",
    label: "power",
    unit: "W",
    constraint: c.p_total_max,
    achieved: ev.power.total,
    violated: violated.has("p_total_max"),
    lowerBound: false,
  });
  if (c.p_trusted_max != null) {
    rows.push({
      key: "power_trusted",
      label: "power (trusted)",
      unit: "W",
      constraint: c.p_trusted_max,
      achieved: ev.power.trusted,
      violated: violated.has("p_trusted_max"),
      lowerBound: false,
    });
  }
  if (c.p_untrusted_max != null) {
    rows.push({
      key: "power_untrusted",
      label: "power (untrusted)",
      unit: "W",
      constraint: c.p_untrusted_max,
      achieved: ev.power.untrusted,
      violated: violated.has("p_untrusted_max"),
      lowerBound: false,
    });
  }
  rows.push({
    key: "bandwidth",
    label: "I/O bandwidth",
    unit: "bit/s",
    constraint: c.io_bandwidth_max,
    achieved: ev.io_bandwidth,
    violated: violated.has("io_bandwidth_max"),
    lowerBound: false,
  });
  for (const lc of c.latency) {
    rows.push({
      key: `latency:${lc.id}`,
      label: `latency ${lc.id}`,
      unit: "s",
      constraint: lc.max_latency,
      achieved: ev.latencies[lc.id],
      violated: violated.has(`latency:${lc.id}`),
      lowerBound: false,
    });
  }
  rows.push({
    key: "area",
    label: "area",
    unit: "um^2",
    constraint: c.area_total_max,
    achieved: ev.area.total,
    violated: violated.has("area_total_max"),
    lowerBound: false,
  });
  return rows;
}

export function buildPartition(
  system: SystemDoc,
  assignment: Record<string, ConfigName> | null,
): PartitionGroup[] {
  if (!assignment) return [];
  return system.domains.map((d) => ({
    domain: d.id,
    modules: system.modules
      .filter((m) => m.domain === d.id)
      .map((m) => ({
        id: m.id,
        config: assignment[m.id],
        color: CONFIG_COLORS[assignment[m.id]],
      })),
  }));
}

export function buildRunPanel(system: SystemDoc, record: RunRecordDoc): RunPanel {
  const ev = record.eval;
  return {
    runId: record.run_id,
    feasible: ev ? ev.feasible : false,
    hasResult: record.result.best != null,
    vulnerability: ev ? ev.vulnerability : null,
    enabled: record.enabled_configs,
    nodesVisited: record.result.nodes_visited,
    nodesPruned: record.result.nodes_pruned,
    metrics: buildMetricRows(record),
    partition: buildPartition(system, record.result.best),
    violations: ev ? ev.violations.map((v) => v.constraint) : [],
  };
}

export interface Comparison {
  panels: RunPanel[];
  vulnerabilityMax: number; // shared secondary axis across the panels
  nonIncreasing: boolean;
}

export function buildComparison(
  system: SystemDoc,
  records: RunRecordDoc[],
): Comparison {
  const panels = records.map((r) => buildRunPanel(system, r));
  const vulns = panels
    .map((p) => p.vulnerability)
    .filter((v): v is number => v != null);
  let nonIncreasing = true;
  for (let i = 1; i < vulns.length; i++) {
    if (vulns[i] > vulns[i - 1]) nonIncreasing = false;
  }
  return {
    panels,
    vulnerabilityMax: vulns.length ? Math.max(...vulns) : 1,
    nonIncreasing,
  };
}

// The legend is the fixed config -> color mapping, independent of data.
export function legendEntries(): Array<{ config: ConfigName; color: string }> {
  return ALL_CONFIGS.map((config) => ({ config, color: CONFIG_COLORS[config] }));
}

const UNIT_PREFIXES: Array<[number, string]> = [
  [1e12, "T"],
  [1e9, "G"],
  [1e6, "M"],
  [1e3, "k"],
  [1, ""],
  [1e-3, "m"],
  [1e-6, "u"],
  [1e-9, "n"],
  [1e-12, "p"],
];

export function formatSI(value: number | null, unit: string): string {
  if (value == null) return "unbounded";
  if (value === 0) return `0 ${unit}`;
  const mag = Math.abs(value);
  for (const [scale, prefix] of UNIT_PREFIXES) {
    if (mag >= scale) {
      return `${(value / scale).toPrecision(4)} ${prefix}${unit}`;
    }
  }
  return `${value.toExponential(3)} ${unit}`;
}
