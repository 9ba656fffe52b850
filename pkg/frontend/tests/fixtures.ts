// Hand-built API payloads shaped exactly like the service's JSON.

import {
  ConfigName,
  ConstraintsDoc,
  EvaluationDoc,
  RunRecordDoc,
  SystemDoc,
} from "../src/types.js";

const char = {
  fmax: 1e9,
  area: 1e5,
  p_dyn_at_fmax: 0.05,
  p_static: 0.005,
};

export function systemFixture(): SystemDoc {
  const mk = (id: string, domain: string, criticality: number) => ({
    id,
    domain,
    criticality,
    characterization: {
      TRUSTED: char,
      UNTRUSTED: char,
      UNTRUSTED_KEY_LOCKED: char,
      UNTRUSTED_FSM_OBF: char,
    },
  });
  return {
    modules: [
      mk("dsp", "fast", 0.9),
      mk("fir", "fast", 0.4),
      mk("cpu", "ctrl", 0.7),
      mk("uart", "ctrl", 0.1),
    ],
    domains: [{ id: "fast" }, { id: "ctrl" }],
    channels: [
      { src: "dsp", dst: "fir", bandwidth: 8e9, latency_on_chip: 2e-9 },
      { src: "fir", dst: "cpu", bandwidth: 1e9, latency_on_chip: 3e-9 },
      { src: "cpu", dst: "uart", bandwidth: 0.1e9, latency_on_chip: 5e-9 },
    ],
    exposure: {
      TRUSTED: 0.05,
      UNTRUSTED: 1.0,
      UNTRUSTED_KEY_LOCKED: 0.9,
      UNTRUSTED_FSM_OBF: 0.85,
    },
    constraints: constraintsFixture(),
  };
}

export function constraintsFixture(): ConstraintsDoc {
  return {
    domain_f_min: { fast: 0.9e9, ctrl: 0.4e9 },
    p_total_max: 2.0,
    p_trusted_max: null,
    p_untrusted_max: null,
    io_bandwidth_max: 12e9,
    external_io_baseline: 1e9,
    latency: [{ id: "cmd_path", path: [1, 2], max_latency: 9e-9 }],
    area_total_max: 4e5,
    inter_chip_delay: 5e-9,
  };
}

function evalFixture(
  vulnerability: number,
  feasible: boolean,
  violations: EvaluationDoc["violations"] = [],
): EvaluationDoc {
  return {
    domain_freq: { fast: 1e9, ctrl: 1e9 },
    power: { trusted: 0.1, untrusted: 1.2, total: 1.3 },
    io_bandwidth: 3e9,
    latencies: { cmd_path: 8e-9 },
    area: { trusted: 8e4, untrusted: 2e5, total: 2.8e5 },
    vulnerability,
    feasible,
    violations,
  };
}

export function runFixture(
  runId: number,
  vulnerability: number,
  assignment: Record<string, ConfigName>,
  opts: {
    feasible?: boolean;
    violations?: EvaluationDoc["violations"];
    enabled?: ConfigName[];
  } = {},
): RunRecordDoc {
  const feasible = opts.feasible ?? true;
  return {
    run_id: runId,
    constraints: constraintsFixture(),
    enabled_configs:
      opts.enabled ?? ["TRUSTED", "UNTRUSTED", "UNTRUSTED_KEY_LOCKED", "UNTRUSTED_FSM_OBF"],
    result: {
      best: assignment,
      best_eval: evalFixture(vulnerability, feasible, opts.violations ?? []),
      nodes_visited: 12,
      nodes_pruned: 40,
      proven_optimal: true,
    },
    eval: evalFixture(vulnerability, feasible, opts.violations ?? []),
    timestamp: "2026-01-01T00:00:00+00:00",
  };
}

export function fourRunFixture(): RunRecordDoc[] {
  const allU: Record<string, ConfigName> = {
    dsp: "UNTRUSTED",
    fir: "UNTRUSTED",
    cpu: "UNTRUSTED",
    uart: "UNTRUSTED",
  };
  return [
    runFixture(0, 2.1, allU, { enabled: ["TRUSTED", "UNTRUSTED"] }),
    runFixture(1, 1.5, { ...allU, cpu: "TRUSTED" }, { enabled: ["TRUSTED", "UNTRUSTED"] }),
    runFixture(2, 1.2, { ...allU, cpu: "TRUSTED", dsp: "UNTRUSTED_FSM_OBF" }),
    runFixture(3, 1.2, {
      ...allU,
      cpu: "TRUSTED",
      dsp: "UNTRUSTED_FSM_OBF",
      fir: "UNTRUSTED_KEY_LOCKED",
    }),
  ];
}
