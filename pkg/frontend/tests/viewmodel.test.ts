import { describe, expect, it } from "vitest";

import {
  CONFIG_COLORS,
  buildComparison,
  buildMetricRows,
  buildRunPanel,
  formatSI,
  legendEntries,
} from "../src/viewmodel.js";
import { renderMetricChart, renderPartitionDiagram } from "../src/charts.js";
import { fourRunFixture, runFixture, systemFixture } from "./fixtures.js";

describe("metric rows", () => {
  it("pairs every constrained metric with its achieved value", () => {
    const rec = fourRunFixture()[0];
    const rows = buildMetricRows(rec);
    const keys = rows.map((r) => r.key);
    expect(keys).toEqual([
      "freq:fast",
      "freq:ctrl",
      "power",
      "bandwidth",
      "latency:cmd_path",
      "area",
    ]);
    const power = rows.find((r) => r.key === "power")!;
    expect(power.constraint).toBe(2.0);
    expect(power.achieved).toBeCloseTo(1.3, 12);
    expect(power.violated).toBe(false);
  });

  it("keeps achieved at or below the bound for a feasible run", () => {
    const rows = buildMetricRows(fourRunFixture()[1]);
    for (const row of rows) {
      if (row.constraint == null) continue;
      if (row.lowerBound) expect(row.achieved).toBeGreaterThanOrEqual(row.constraint);
      else expect(row.achieved).toBeLessThanOrEqual(row.constraint);
    }
  });

  it("flags exactly the violated metrics from the API payload", () => {
    const rec = runFixture(
      9,
      3.0,
      { dsp: "TRUSTED", fir: "UNTRUSTED", cpu: "UNTRUSTED", uart: "UNTRUSTED" },
      {
        feasible: false,
        violations: [
          { constraint: "p_total_max", required: 2.0, actual: 2.5 },
          { constraint: "latency:cmd_path", required: 9e-9, actual: 1.4e-8 },
        ],
      },
    );
    const rows = buildMetricRows(rec);
    const flagged = rows.filter((r) => r.violated).map((r) => r.key);
    expect(flagged.sort()).toEqual(["latency:cmd_path", "power"]);
  });
});

describe("partition diagram model", () => {
  it("groups modules by clock domain and colors by configuration", () => {
    const sys = systemFixture();
    const panel = buildRunPanel(sys, fourRunFixture()[2]);
    expect(panel.partition.map((g) => g.domain)).toEqual(["fast", "ctrl"]);
    const fast = panel.partition[0];
    expect(fast.modules.map((m) => m.id)).toEqual(["dsp", "fir"]);
    expect(fast.modules[0].color).toBe(CONFIG_COLORS.UNTRUSTED_FSM_OBF);
    const ctrl = panel.partition[1];
    expect(ctrl.modules.find((m) => m.id === "cpu")!.color).toBe(
      CONFIG_COLORS.TRUSTED,
    );
  });

  it("uses exactly four colors with a stable legend", () => {
    const entries = legendEntries();
    expect(entries).toHaveLength(4);
    expect(new Set(entries.map((e) => e.color)).size).toBe(4);
    expect(entries.map((e) => e.config)).toEqual([
      "TRUSTED",
      "UNTRUSTED",
      "UNTRUSTED_KEY_LOCKED",
      "UNTRUSTED_FSM_OBF",
    ]);
  });
});

describe("run comparison", () => {
  it("builds one panel per selected run with non-increasing vulnerability", () => {
    const sys = systemFixture();
    const cmp = buildComparison(sys, fourRunFixture());
    expect(cmp.panels).toHaveLength(4);
    expect(cmp.nonIncreasing).toBe(true);
    expect(cmp.vulnerabilityMax).toBeCloseTo(2.1, 12);
    const vulns = cmp.panels.map((p) => p.vulnerability!);
    for (let i = 1; i < vulns.length; i++) {
      expect(vulns[i]).toBeLessThanOrEqual(vulns[i - 1]);
    }
  });

  it("detects an increase", () => {
    const sys = systemFixture();
    const runs = fourRunFixture();
    const bumped = [runs[1], runs[0]];
    expect(buildComparison(sys, bumped).nonIncreasing).toBe(false);
  });
});

describe("svg renderers", () => {
  it("renders a vulnerability marker on the secondary axis", () => {
    const sys = systemFixture();
    const cmp = buildComparison(sys, fourRunFixture());
    const svg = renderMetricChart(cmp.panels[0], new Set(), cmp.vulnerabilityMax);
    expect(svg).toContain("vuln-marker");
    expect(svg).toContain("2.100");
  });

  it("hides deselected metric columns", () => {
    const sys = systemFixture();
    const cmp = buildComparison(sys, fourRunFixture());
    const svg = renderMetricChart(
      cmp.panels[0],
      new Set(["bandwidth", "area"]),
      cmp.vulnerabilityMax,
    );
    expect(svg).not.toContain("I/O bandwidth");
    expect(svg).toContain("power");
  });

  it("renders one block per module with its configuration color", () => {
    const sys = systemFixture();
    const panel = buildRunPanel(sys, fourRunFixture()[3]);
    const svg = renderPartitionDiagram(panel);
    for (const m of sys.modules) {
      expect(svg).toContain(`data-module="${m.id}"`);
    }
    expect(svg).toContain(CONFIG_COLORS.UNTRUSTED_KEY_LOCKED);
  });
});

describe("formatSI", () => {
  it("scales with SI prefixes", () => {
    expect(formatSI(1.2e9, "Hz")).toBe("1.200 GHz");
    expect(formatSI(5e-9, "s")).toBe("5.000 ns");
    expect(formatSI(null, "W")).toBe("unbounded");
    expect(formatSI(0, "W")).toBe("0 W");
  });
});
