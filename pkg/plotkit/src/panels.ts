/** The three figure panels, as pure CSV-to-SVG transforms. */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

import { column, columnsWithPrefix, readCsv, type Table } from "./csv.js";
import { renderLineChart, type Series } from "./svg.js";

export type PanelKind = "eigenvalues" | "occupation_overlay" | "steady_state_scan";

export interface InputSpec {
  path: string;
  label?: string;
}

export interface PlotSpec {
  kind: PanelKind;
  inputs: InputSpec[];
  output: string;
  /** eigenvalues: dashed reference spectrum CSV; scan: flat reference level */
  reference?: string;
  referenceValue?: number;
  title?: string;
}

function writeSvg(path: string, svg: string): void {
  mkdirSync(dirname(path), { recursive: true });
  writeFileSync(path, svg, "utf8");
}

function magnitudeSeries(table: Table, dashed: boolean, prefix: string): Series[] {
  const t = column(table, "t");
  const cols = columnsWithPrefix(table, "abs_lambda_");
  if (cols.length === 0) {
    throw new Error("missing column: abs_lambda_0");
  }
  return cols.map(({ name, values }) => ({
    label: `${prefix}|λ_${name.slice("abs_lambda_".length)}|`,
    x: t,
    y: values,
    dashed,
  }));
}

/** Log-linear eigenvalue magnitudes against time (one curve per index). */
export function plotEigenvalues(spec: PlotSpec): string {
  const [main] = spec.inputs;
  if (!main) throw new Error("eigenvalues panel needs a spectrum CSV input");
  const series = magnitudeSeries(readCsv(main.path), false, "");
  if (spec.reference) {
    series.push(...magnitudeSeries(readCsv(spec.reference), true, "markovian "));
  }
  const svg = renderLineChart({
    title: spec.title ?? "propagator eigenvalue magnitudes",
    xLabel: "t",
    yLabel: "|lambda_i(t)|",
    logY: true,
    series,
  });
  writeSvg(spec.output, svg);
  return svg;
}

/** Overlay of occupation histories, one curve per input file. */
export function plotOccupation(spec: PlotSpec): string {
  if (spec.inputs.length === 0) {
    throw new Error("occupation panel needs at least one occupation CSV");
  }
  const series: Series[] = spec.inputs.map((input, i) => {
    const table = readCsv(input.path);
    return {
      label: input.label ?? `series ${i}`,
      x: column(table, "t"),
      y: column(table, "n"),
    };
  });
  const svg = renderLineChart({
    title: spec.title ?? "impurity occupation",
    xLabel: "t",
    yLabel: "n(t)",
    series,
  });
  writeSvg(spec.output, svg);
  return svg;
}

/** Final occupation against the swept level position, with a flat reference. */
export function plotScan(spec: PlotSpec): string {
  const [main] = spec.inputs;
  if (!main) throw new Error("scan panel needs a sweep CSV input");
  const table = readCsv(main.path);
  const xName = table.header[0];
  if (xName === undefined || xName === "n_final") {
    throw new Error("sweep CSV must lead with the swept parameter column");
  }
  const x = column(table, xName);
  const series: Series[] = [
    { label: main.label ?? "n_final", x, y: column(table, "n_final") },
  ];
  if (spec.reference) {
    const ref = readCsv(spec.reference);
    series.push({
      label: "reference (no bath)",
      x: column(ref, ref.header[0]!),
      y: column(ref, "n_final"),
      dashed: true,
    });
  } else if (spec.referenceValue !== undefined) {
    series.push({
      label: "reference (no bath)",
      x: [Math.min(...x), Math.max(...x)],
      y: [spec.referenceValue, spec.referenceValue],
      dashed: true,
    });
  }
  const svg = renderLineChart({
    title: spec.title ?? "stationary occupation vs level position",
    xLabel: xName,
    yLabel: "n_final",
    series,
  });
  writeSvg(spec.output, svg);
  return svg;
}

export function renderPanel(spec: PlotSpec): string {
  switch (spec.kind) {
    case "eigenvalues":
      return plotEigenvalues(spec);
    case "occupation_overlay":
      return plotOccupation(spec);
    case "steady_state_scan":
      return plotScan(spec);
  }
}
