/** Dependency-free SVG line charts (linear or log-y), deterministic output. */

export interface Series {
  label: string;
  x: number[];
  y: number[];
  dashed?: boolean;
  color?: string;
}

export interface ChartOptions {
  title?: string;
  xLabel: string;
  yLabel: string;
  logY?: boolean;
  width?: number;
  height?: number;
  series: Series[];
}

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"];
const MARGIN = { left: 64, right: 16, top: 28, bottom: 44 };

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function round(v: number): string {
  return (Math.round(v * 100) / 100).toString();
}

function linearTicks(lo: number, hi: number, n = 5): number[] {
  if (!(hi > lo)) return [lo];
  const raw = (hi - lo) / n;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => s >= raw) ?? raw;
  const first = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = first; v <= hi + 1e-12 * step; v += step) ticks.push(v);
  return ticks;
}

function decadeTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo)); Math.pow(10, e) <= hi * (1 + 1e-12); e++) {
    ticks.push(Math.pow(10, e));
  }
  return ticks.length > 0 ? ticks : [lo];
}

function formatTick(v: number): string {
  if (v !== 0 && (Math.abs(v) < 1e-3 || Math.abs(v) >= 1e4)) {
    return v.toExponential(0).replace("+", "");
  }
  return Number(v.toPrecision(6)).toString();
}

/** Render a line chart; log-scale charts drop non-positive points. */
export function renderLineChart(opts: ChartOptions): string {
  const width = opts.width ?? 640;
  const height = opts.height ?? 420;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  if (opts.series.length === 0) {
    throw new Error("at least one series is required");
  }

  const xs = opts.series.flatMap((s) => s.x);
  let xMin = Math.min(...xs);
  let xMax = Math.max(...xs);
  if (xMax === xMin) {
    xMin -= 0.5;
    xMax += 0.5;
  }

  const yVisible = opts.series
    .flatMap((s) => s.y)
    .filter((v) => (opts.logY ? v > 0 : Number.isFinite(v)));
  if (yVisible.length === 0) {
    throw new Error("no drawable points (log scale with no positive values?)");
  }
  let yMin = Math.min(...yVisible);
  let yMax = Math.max(...yVisible);
  if (opts.logY) {
    yMin = Math.pow(10, Math.floor(Math.log10(yMin)));
    yMax = Math.pow(10, Math.ceil(Math.log10(yMax)));
    if (yMax === yMin) yMax = yMin * 10;
  } else {
    if (yMax === yMin) {
      yMin -= 0.5;
      yMax += 0.5;
    }
    const pad = 0.05 * (yMax - yMin);
    yMin -= pad;
    yMax += pad;
  }

  const toX = (v: number) => MARGIN.left + ((v - xMin) / (xMax - xMin)) * plotW;
  const toY = (v: number) => {
    const t = opts.logY
      ? (Math.log10(v) - Math.log10(yMin)) / (Math.log10(yMax) - Math.log10(yMin))
      : (v - yMin) / (yMax - yMin);
    return MARGIN.top + (1 - t) * plotH;
  };

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="12">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  if (opts.title) {
    parts.push(
      `<text x="${width / 2}" y="18" text-anchor="middle" font-size="14">${esc(opts.title)}</text>`,
    );
  }

  const yTicks = opts.logY ? decadeTicks(yMin, yMax) : linearTicks(yMin, yMax);
  for (const v of yTicks) {
    const y = toY(v);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${round(y)}" x2="${width - MARGIN.right}" ` +
        `y2="${round(y)}" stroke="#ddd"/>`,
    );
    parts.push(
      `<text x="${MARGIN.left - 6}" y="${round(y + 4)}" text-anchor="end">${formatTick(v)}</text>`,
    );
  }
  for (const v of linearTicks(xMin, xMax)) {
    const x = toX(v);
    parts.push(
      `<line x1="${round(x)}" y1="${MARGIN.top}" x2="${round(x)}" ` +
        `y2="${height - MARGIN.bottom}" stroke="#eee"/>`,
    );
    parts.push(
      `<text x="${round(x)}" y="${height - MARGIN.bottom + 16}" text-anchor="middle">` +
        `${formatTick(v)}</text>`,
    );
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#333"/>`,
  );
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${height - 8}" text-anchor="middle">` +
      `${esc(opts.xLabel)}</text>`,
  );
  parts.push(
    `<text x="16" y="${MARGIN.top + plotH / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 16 ${MARGIN.top + plotH / 2})">${esc(opts.yLabel)}</text>`,
  );

  opts.series.forEach((s, i) => {
    if (s.x.length !== s.y.length) {
      throw new Error(`series ${s.label}: x and y lengths differ`);
    }
    const color = s.color ?? PALETTE[i % PALETTE.length]!;
    const dash = s.dashed ? ' stroke-dasharray="6 4"' : "";
    // break the polyline at points a log axis cannot show
    const segments: string[][] = [[]];
    s.x.forEach((xv, k) => {
      const yv = s.y[k]!;
      if (opts.logY && !(yv > 0)) {
        if (segments[segments.length - 1]!.length > 0) segments.push([]);
        return;
      }
      segments[segments.length - 1]!.push(`${round(toX(xv))},${round(toY(yv))}`);
    });
    for (const seg of segments) {
      if (seg.length === 0) continue;
      if (seg.length === 1) {
        const [pt] = seg;
        const [cx, cy] = pt!.split(",");
        parts.push(`<circle cx="${cx}" cy="${cy}" r="2.5" fill="${color}"/>`);
      } else {
        parts.push(
          `<polyline fill="none" stroke="${color}" stroke-width="1.5"${dash} ` +
            `points="${seg.join(" ")}"/>`,
        );
      }
    }
    const ly = MARGIN.top + 14 + 16 * i;
    const lx = width - MARGIN.right - 150;
    parts.push(
      `<line x1="${lx}" y1="${ly - 4}" x2="${lx + 22}" y2="${ly - 4}" ` +
        `stroke="${color}" stroke-width="1.5"${dash}/>`,
    );
    parts.push(`<text x="${lx + 28}" y="${ly}">${esc(s.label)}</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
