// Page wiring: constraint editor on the left, run history and the
// comparison view on the right. All numbers come from the service.

import { deleteRun, getRuns, getSystem, postRun } from "./api.js";
import {
  EditorState,
  buildRunRequest,
  initEditor,
  setDomainFloor,
  setLatencyMax,
  setPlacement,
  setScalar,
  toggleConfig,
} from "./editor.js";
import { renderMetricChart, renderPartitionDiagram } from "./charts.js";
import {
  CONFIG_SHORT,
  buildComparison,
  legendEntries,
} from "./viewmodel.js";
import { ALL_CONFIGS, ConfigName, RunRecordDoc, SystemDoc } from "./types.js";

let system: SystemDoc;
let editor: EditorState;
let runs: RunRecordDoc[] = [];
const selected = new Set<number>();
const hiddenMetrics = new Set<string>();

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text !== undefined) node.textContent = text;
  return node;
}

function numberField(
  label: string,
  field: string,
  value: number | null,
  onChange: (raw: string) => { message: string } | null,
): HTMLElement {
  const wrap = el("label", { class: "field" });
  wrap.append(el("span", {}, label));
  const input = el("input", {
    type: "text",
    value: value == null ? "" : String(value),
    "data-field": field,
    placeholder: "unbounded",
  });
  const err = el("span", { class: "field-error" });
  input.addEventListener("change", () => {
    const e = onChange(input.value);
    err.textContent = e ? e.message : "";
    input.classList.toggle("invalid", !!e);
  });
  wrap.append(input, err);
  return wrap;
}

function renderEditor(): void {
  const root = document.getElementById("editor")!;
  root.replaceChildren();

  const freqs = el("fieldset");
  freqs.append(el("legend", {}, "clock domain floors (Hz)"));
  for (const d of system.domains) {
    freqs.append(
      numberField(
        d.id,
        `domain_f_min.${d.id}`,
        editor.constraints.domain_f_min[d.id] ?? null,
        (raw) => setDomainFloor(editor, d.id, raw),
      ),
    );
  }
  root.append(freqs);

  const bounds = el("fieldset");
  bounds.append(el("legend", {}, "budgets"));
  const scalarFields: Array<[string, "p_total_max" | "p_trusted_max" | "p_untrusted_max" | "io_bandwidth_max" | "area_total_max" | "external_io_baseline" | "inter_chip_delay"]> = [
    ["total power (W)", "p_total_max"],
    ["trusted-IC power (W)", "p_trusted_max"],
    ["untrusted-IC power (W)", "p_untrusted_max"],
    ["I/O bandwidth (bit/s)", "io_bandwidth_max"],
    ["total area (um^2)", "area_total_max"],
    ["external I/O baseline (bit/s)", "external_io_baseline"],
    ["inter-chip delay (s)", "inter_chip_delay"],
  ];
  for (const [label, field] of scalarFields) {
    bounds.append(
      numberField(label, field, editor.constraints[field], (raw) =>
        setScalar(editor, field, raw),
      ),
    );
  }
  root.append(bounds);

  if (editor.constraints.latency.length) {
    const lat = el("fieldset");
    lat.append(el("legend", {}, "path latency bounds (s)"));
    for (const lc of editor.constraints.latency) {
      lat.append(
        numberField(lc.id, `latency_max.${lc.id}`, lc.max_latency, (raw) =>
          setLatencyMax(editor, lc.id, raw),
        ),
      );
    }
    root.append(lat);
  }

  const toggles = el("fieldset");
  toggles.append(el("legend", {}, "enabled configurations"));
  for (const cfg of ALL_CONFIGS) {
    const lab = el("label", { class: "toggle" });
    const box = el("input", { type: "checkbox", "data-config": cfg });
    box.checked = editor.enabled.has(cfg);
    box.disabled = cfg === "TRUSTED" || cfg === "UNTRUSTED";
    box.addEventListener("change", () => toggleConfig(editor, cfg, box.checked));
    lab.append(box, el("span", {}, CONFIG_SHORT[cfg]));
    toggles.append(lab);
  }
  root.append(toggles);

  const locks = el("fieldset");
  locks.append(el("legend", {}, "placement locks"));
  for (const m of system.modules) {
    const lab = el("label", { class: "lock" });
    lab.append(el("span", {}, `${m.id} (${m.domain})`));
    const sel = el("select", { "data-module": m.id });
    sel.append(el("option", { value: "" }, "free"));
    for (const cfg of ALL_CONFIGS) {
      sel.append(el("option", { value: cfg }, CONFIG_SHORT[cfg]));
    }
    sel.value = editor.placements[m.id] ?? "";
    sel.addEventListener("change", () =>
      setPlacement(editor, m.id, sel.value as ConfigName | ""),
    );
    lab.append(sel);
    locks.append(lab);
  }
  root.append(locks);

  const runBtn = el("button", { id: "run-btn" }, "Run optimization");
  const status = el("span", { id: "run-status" });
  runBtn.addEventListener("click", async () => {
    runBtn.setAttribute("disabled", "1");
    status.textContent = "running...";
    try {
      const record = await postRun(buildRunRequest(editor));
      status.textContent = record.result.best
        ? `run ${record.run_id}: vulnerability ${record.eval!.vulnerability.toPrecision(5)}`
        : `run ${record.run_id}: infeasible`;
      selected.add(record.run_id);
      await refreshRuns();
    } catch (e) {
      status.textContent = `error: ${(e as Error).message}`;
    } finally {
      runBtn.removeAttribute("disabled");
    }
  });
  root.append(runBtn, status);
}

function renderLegend(): void {
  const legend = document.getElementById("legend")!;
  legend.replaceChildren();
  for (const { config, color } of legendEntries()) {
    const item = el("span", { class: "legend-item" });
    const sw = el("span", { class: "swatch" });
    sw.style.background = color;
    item.append(sw, el("span", {}, CONFIG_SHORT[config]));
    legend.append(item);
  }
}

function renderRunList(): void {
  const list = document.getElementById("run-list")!;
  list.replaceChildren();
  if (!runs.length) {
    list.append(el("p", { class: "hint" }, "no runs yet"));
    return;
  }
  for (const r of runs) {
    const row = el("div", { class: "run-row" });
    const box = el("input", { type: "checkbox" });
    box.checked = selected.has(r.run_id);
    box.addEventListener("change", () => {
      if (box.checked) selected.add(r.run_id);
      else selected.delete(r.run_id);
      renderComparison();
    });
    const vuln =
      r.eval == null ? "infeasible" : `v=${r.eval.vulnerability.toPrecision(5)}`;
    row.append(
      box,
      el("span", { class: "run-name" }, `run ${r.run_id}`),
      el("span", { class: "run-vuln" }, vuln),
      el("span", { class: "run-cfgs" }, r.enabled_configs.length + " cfgs"),
    );
    const del = el("button", { class: "del" }, "x");
    del.addEventListener("click", async () => {
      await deleteRun(r.run_id);
      selected.delete(r.run_id);
      await refreshRuns();
    });
    row.append(del);
    list.append(row);
  }
}

function renderMetricToggles(keys: Array<{ key: string; label: string }>): void {
  const bar = document.getElementById("metric-toggles")!;
  bar.replaceChildren();
  if (!keys.length) return;
  bar.append(el("span", { class: "hint" }, "columns:"));
  for (const { key, label } of keys) {
    const lab = el("label", { class: "toggle" });
    const box = el("input", { type: "checkbox" });
    box.checked = !hiddenMetrics.has(key);
    box.addEventListener("change", () => {
      if (box.checked) hiddenMetrics.delete(key);
      else hiddenMetrics.add(key);
      renderComparison();
    });
    lab.append(box, el("span", {}, label));
    bar.append(lab);
  }
}

function renderComparison(): void {
  const host = document.getElementById("comparison")!;
  host.replaceChildren();
  const chosen = runs.filter((r) => selected.has(r.run_id));
  if (!chosen.length) {
    host.append(
      el("p", { class: "hint" }, "select one or more runs to compare them"),
    );
    renderMetricToggles([]);
    return;
  }
  const cmp = buildComparison(system, chosen);
  renderMetricToggles(
    cmp.panels[0].metrics.map((m) => ({ key: m.key, label: m.label })),
  );
  for (const panel of cmp.panels) {
    const card = el("div", { class: "panel" });
    const head = el("div", { class: "panel-head" });
    head.append(
      el("strong", {}, `run ${panel.runId}`),
      el(
        "span",
        { class: panel.feasible ? "ok" : "bad" },
        panel.feasible ? "feasible" : "infeasible",
      ),
      el(
        "span",
        { class: "nodes" },
        `${panel.nodesVisited} visited / ${panel.nodesPruned} pruned`,
      ),
    );
    card.append(head);
    if (panel.violations.length) {
      card.append(
        el(
          "p",
          { class: "violations" },
          "violated: " + panel.violations.join(", "),
        ),
      );
    }
    const chart = el("div", { class: "chart" });
    chart.innerHTML = renderMetricChart(panel, hiddenMetrics, cmp.vulnerabilityMax);
    card.append(chart);
    const diagram = el("div", { class: "diagram" });
    diagram.innerHTML = renderPartitionDiagram(panel);
    card.append(diagram);
    host.append(card);
  }
}

async function refreshRuns(): Promise<void> {
  runs = await getRuns();
  renderRunList();
  renderComparison();
}

async function boot(): Promise<void> {
  system = await getSystem();
  editor = initEditor(system);
  document.getElementById("title")!.textContent =
    `split-chip explorer: ${system.modules.length} modules, ` +
    `${system.domains.length} clock domains`;
  renderEditor();
  renderLegend();
  await refreshRuns();
}

boot().catch((e) => {
  document.body.append(el("pre", { class: "boot-error" }, String(e)));
});
