/**
 * Option builders: one per figure kind, mapping parsed CSV tables to an
 * echarts option object. Pure functions of the table content and spec, so
 * re-rendering the same inputs produces identical charts. All science
 * numbers come straight from the CSV; the only transforms here are axis
 * scales and grouping.
 */

import { FigureSpec } from "./config.js";
import { CsvError, Table, column, numericColumn } from "./csv.js";

export interface FigureBuild {
  option: Record<string, unknown>;
  meta: {
    /** q-grid dashed reference lines, as read from the CSV's t=0 columns. */
    dashedLines?: { ghzT0: number; mixT0: number };
    seriesCount: number;
  };
}

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#ff7f0e",
  "#9467bd",
  "#8c564b",
  "#17becf",
  "#e377c2",
];

function baseOption(spec: FigureSpec): Record<string, unknown> {
  return {
    animation: false,
    color: PALETTE,
    title: spec.title ? { text: spec.title, left: "center" } : undefined,
    legend: { bottom: 0, type: "plain" },
    backgroundColor: "#ffffff",
  };
}

function groupBy(keys: string[]): Map<string, number[]> {
  const groups = new Map<string, number[]>();
  keys.forEach((key, index) => {
    const bucket = groups.get(key);
    if (bucket) bucket.push(index);
    else groups.set(key, [index]);
  });
  return groups;
}

export function buildPurity(spec: FigureSpec, table: Table): FigureBuild {
  const sets = column(table, "set");
  const sizes = numericColumn(table, "N");
  const ghz = numericColumn(table, "purity_ghz_avg");
  const mix = numericColumn(table, "purity_mix_avg");
  const series: Record<string, unknown>[] = [];
  for (const [label, indices] of groupBy(sets)) {
    const ordered = [...indices].sort((a, b) => sizes[a] - sizes[b]);
    series.push({
      name: `set ${label}: GHZ avg`,
      type: "line",
      data: ordered.map((i) => [sizes[i], ghz[i]]),
      symbol: "circle",
      symbolSize: 8,
    });
    series.push({
      name: `set ${label}: mixture avg`,
      type: "line",
      lineStyle: { type: "dashed" },
      data: ordered.map((i) => [sizes[i], mix[i]]),
      symbol: "diamond",
      symbolSize: 8,
    });
  }
  return {
    option: {
      ...baseOption(spec),
      xAxis: { type: "value", name: "N", minInterval: 1 },
      yAxis: { type: "log", name: "purity of time-averaged state" },
      series,
    },
    meta: { seriesCount: series.length },
  };
}

export function buildDelta(spec: FigureSpec, table: Table): FigureBuild {
  const kinds = column(table, "kind");
  const sizes = numericColumn(table, "N");
  const t0 = numericColumn(table, "value_t0_max");
  const inf = numericColumn(table, "value_inf_max");
  const panels: Array<{ kind: string; log: boolean; index: number }> = [
    { kind: "local_additive", log: false, index: 0 },
    { kind: "fully_correlated", log: true, index: 1 },
  ];
  const series: Record<string, unknown>[] = [];
  for (const panel of panels) {
    const indices = kinds
      .map((kind, i) => (kind === panel.kind ? i : -1))
      .filter((i) => i >= 0)
      .sort((a, b) => sizes[a] - sizes[b]);
    if (indices.length === 0) {
      throw new CsvError(`no rows for kind '${panel.kind}'`);
    }
    const floor = panel.log ? 1e-16 : 0;
    series.push({
      name: `${panel.kind}: t = 0`,
      type: "scatter",
      xAxisIndex: panel.index,
      yAxisIndex: panel.index,
      symbol: "circle",
      symbolSize: 10,
      data: indices.map((i) => [sizes[i], Math.max(Math.abs(t0[i]), floor)]),
    });
    series.push({
      name: `${panel.kind}: t -> inf`,
      type: "scatter",
      xAxisIndex: panel.index,
      yAxisIndex: panel.index,
      symbol: "triangle",
      symbolSize: 10,
      data: indices.map((i) => [sizes[i], Math.max(Math.abs(inf[i]), floor)]),
    });
  }
  return {
    option: {
      ...baseOption(spec),
      grid: [
        { left: "8%", right: "55%", bottom: "15%" },
        { left: "55%", right: "5%", bottom: "15%" },
      ],
      xAxis: [
        { type: "value", gridIndex: 0, name: "N (a)", minInterval: 1 },
        { type: "value", gridIndex: 1, name: "N (b)", minInterval: 1 },
      ],
      yAxis: [
        { type: "value", gridIndex: 0, name: "max |Delta<A_L>|" },
        { type: "log", gridIndex: 1, name: "max Delta<A_NL>" },
      ],
      series,
    },
    meta: { seriesCount: series.length },
  };
}

export function buildQGrid(spec: FigureSpec, table: Table): FigureBuild {
  const hz = numericColumn(table, "h_z");
  const defect = numericColumn(table, "e");
  const ghzAvg = numericColumn(table, "q_ghz_avg");
  const mixAvg = numericColumn(table, "q_mix_avg");
  const ghzT0 = numericColumn(table, "q_ghz_t0");
  const mixT0 = numericColumn(table, "q_mix_t0");
  const labels = hz.map((value, i) => `hz=${value}\ne=${defect[i]}`);
  // the t=0 indices are Hamiltonian-independent: constant columns
  const dashedLines = { ghzT0: ghzT0[0], mixT0: mixT0[0] };
  const markLine = {
    silent: true,
    symbol: "none",
    lineStyle: { type: "dashed", width: 1.5 },
    data: [
      { yAxis: dashedLines.ghzT0, label: { formatter: "q_GHZ(t=0)" } },
      { yAxis: dashedLines.mixT0, label: { formatter: "q_mix(t=0)" } },
    ],
  };
  return {
    option: {
      ...baseOption(spec),
      xAxis: {
        type: "category",
        data: labels,
        axisLabel: { fontSize: 9, interval: 0, rotate: 60 },
      },
      yAxis: { type: "value", name: "index q", min: 0.8, max: 2.2 },
      series: [
        {
          name: "dephased GHZ",
          type: "scatter",
          symbol: "circle",
          symbolSize: 10,
          data: ghzAvg,
          markLine,
        },
        {
          name: "dephased mixture",
          type: "scatter",
          symbol: "rect",
          symbolSize: 10,
          data: mixAvg,
        },
      ],
    },
    meta: { dashedLines, seriesCount: 2 },
  };
}

export function buildQFit(spec: FigureSpec, table: Table): FigureBuild {
  const families = column(table, "family");
  const indexKind = column(table, "index");
  const sizes = numericColumn(table, "N");
  const values = numericColumn(table, "value");
  const exponents = numericColumn(table, "exponent");
  const intercepts = numericColumn(table, "intercept");
  const series: Record<string, unknown>[] = [];
  const qRows = indexKind
    .map((kind, i) => (kind === "q" ? i : -1))
    .filter((i) => i >= 0);
  if (qRows.length === 0) throw new CsvError("no rows with index 'q'");
  const byFamily = groupBy(qRows.map((i) => families[i]));
  let colorIndex = 0;
  for (const [family, positions] of byFamily) {
    const indices = positions.map((p) => qRows[p]).sort((a, b) => sizes[a] - sizes[b]);
    const color = PALETTE[colorIndex++ % PALETTE.length];
    series.push({
      name: family,
      type: "scatter",
      symbolSize: 9,
      itemStyle: { color },
      data: indices.map((i) => [sizes[i], values[i]]),
    });
    const exponent = exponents[indices[0]];
    const intercept = intercepts[indices[0]];
    const fitSizes = [sizes[indices[0]], sizes[indices[indices.length - 1]]];
    series.push({
      name: `${family} fit (q=${exponent.toFixed(2)})`,
      type: "line",
      showSymbol: false,
      lineStyle: { type: "dashed", color },
      itemStyle: { color },
      data: fitSizes.map((n) => [n, Math.exp(intercept) * Math.pow(n, exponent)]),
    });
  }
  return {
    option: {
      ...baseOption(spec),
      xAxis: { type: "log", name: "N" },
      yAxis: { type: "log", name: "max{N, ||[A,[A,rho]]||_1}" },
      series,
    },
    meta: { seriesCount: series.length },
  };
}

export function buildTimeseries(spec: FigureSpec, table: Table): FigureBuild {
  const sets = column(table, "set");
  const sizes = numericColumn(table, "N");
  const kinds = column(table, "kind");
  const times = numericColumn(table, "t");
  const values = numericColumn(table, "value");
  const keys = sets.map((set, i) => `${set} N=${sizes[i]} ${kinds[i]}`);
  const series: Record<string, unknown>[] = [];
  for (const [label, indices] of groupBy(keys)) {
    const ordered = [...indices].sort((a, b) => times[a] - times[b]);
    series.push({
      name: label,
      type: "line",
      showSymbol: false,
      data: ordered.map((i) => [times[i], values[i]]),
    });
  }
  return {
    option: {
      ...baseOption(spec),
      xAxis: { type: "value", name: "t" },
      yAxis: { type: "value", name: "Delta<A(t)>" },
      series,
    },
    meta: { seriesCount: series.length },
  };
}

export function buildFigure(spec: FigureSpec, tables: Table[]): FigureBuild {
  const [table] = tables;
  switch (spec.kind) {
    case "purity":
      return buildPurity(spec, table);
    case "delta":
      return buildDelta(spec, table);
    case "qgrid":
      return buildQGrid(spec, table);
    case "qfit":
      return buildQFit(spec, table);
    case "timeseries":
      return buildTimeseries(spec, table);
  }
}
