export { parseCsv, readCsv, column, columnIndex, columnsWithPrefix } from "./csv.js";
export { renderLineChart } from "./svg.js";
export type { Series, ChartOptions } from "./svg.js";
export { plotEigenvalues, plotOccupation, plotScan, renderPanel } from "./panels.js";
export type { PanelKind, PlotSpec, InputSpec } from "./panels.js";
