/**
 * End-to-end: regenerate the preset runs' CSVs through the solver CLI and
 * render the three figure panels from them.  Consumes the solver strictly
 * through its command-line and file interfaces.
 */

import assert from "node:assert/strict";
import { execFileSync } from "node:child_process";
import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { test } from "node:test";

import { column, readCsv } from "../src/csv.js";
import { main as cliMain } from "../src/cli.js";
import { plotEigenvalues, plotOccupation, plotScan } from "../src/panels.js";

const PYTHON = process.env.PYTHON ?? "python3";

function solver(args: string[], cwd: string): void {
  execFileSync(PYTHON, ["-m", "ncasolver", ...args], { cwd, stdio: "pipe" });
}

const work = mkdtempSync(join(tmpdir(), "plotkit-e2e-"));

// one shared generation pass: fig3 run, coupling sweep with per-run series,
// level scans with and without the structured bath
solver(["run", "--preset", "fig3", "--out-dir", join(work, "fig3")], work);
solver(
  ["sweep", "--preset", "fig4-eta", "--keep-runs", "--out-dir", join(work, "eta")],
  work,
);
solver(["sweep", "--preset", "fig4-scan", "--out-dir", join(work, "scan")], work);
const markovianScan = {
  model: { eps0: 1.0, gamma_l: 0.5, gamma_p: 0.5, gamma_d: 0.5 },
  bath: { kind: "flat_band", eta: 0.0, w: 10.0 },
  grid: { dt: 0.02, t_max: 10.0 },
  initial_state: { basis_label: 0 },
  outputs: { out_dir: join(work, "scan0") },
};
writeFileSync(join(work, "scan0.json"), JSON.stringify(markovianScan));
solver(
  ["sweep", "--config", join(work, "scan0.json"), "--param", "eps0",
   "--values=-8,-6,-4,-2,0,2,4,6,8"],
  work,
);

test("panel 1: eigenvalue trajectories with identical conjugate-pair series", () => {
  const spectrum = join(work, "fig3", "spectrum.csv");
  const svg = plotEigenvalues({
    kind: "eigenvalues",
    inputs: [{ path: spectrum }],
    output: join(work, "panels", "eigenvalues.svg"),
  });
  assert.ok(existsSync(join(work, "panels", "eigenvalues.svg")));

  // the two decaying conjugate partners carry identical magnitude columns
  const table = readCsv(spectrum);
  const l1 = column(table, "abs_lambda_1");
  const l2 = column(table, "abs_lambda_2");
  let worst = 0;
  for (let i = 0; i < l1.length; i++) {
    worst = Math.max(worst, Math.abs(l1[i]! - l2[i]!));
  }
  assert.ok(worst <= 1e-9, `conjugate pair magnitudes differ by ${worst}`);

  // and the rendered curves coincide point for point
  const points = [...svg.matchAll(/<polyline[^>]*points="([^"]*)"/g)].map((m) => m[1]!);
  assert.ok(points.length >= 3);
  assert.equal(points[1], points[2]);
});

test("panel 2: occupation overlay across coupling strengths", () => {
  const inputs = ["0.0", "1.0", "2.0"].map((v) => ({
    path: join(work, "eta", "runs", `eta_${v}`, "occupation.csv"),
    label: `eta = ${v}`,
  }));
  const svg = plotOccupation({
    kind: "occupation_overlay",
    inputs,
    output: join(work, "panels", "occupation.svg"),
  });
  assert.ok(existsSync(join(work, "panels", "occupation.svg")));
  assert.equal([...svg.matchAll(/<polyline/g)].length, 3);
  for (const input of inputs) {
    assert.match(svg, new RegExp(`>${input.label.replace(" = ", " = ")}<`));
  }
});

test("panel 3: steady-state scan with the markovian reference", () => {
  const svg = plotScan({
    kind: "steady_state_scan",
    inputs: [{ path: join(work, "scan", "sweep_eps0.csv"), label: "eta = 1" }],
    reference: join(work, "scan0", "sweep_eps0.csv"),
    output: join(work, "panels", "scan.svg"),
  });
  assert.ok(existsSync(join(work, "panels", "scan.svg")));
  assert.match(svg, /stroke-dasharray/);
  // the reference data itself is flat at the markovian rate ratio
  const ref = readCsv(join(work, "scan0", "sweep_eps0.csv"));
  for (const v of column(ref, "n_final")) {
    assert.ok(Math.abs(v - 0.5) < 1e-3);
  }
  const dressed = column(readCsv(join(work, "scan", "sweep_eps0.csv")), "n_final");
  assert.ok(dressed[0]! > dressed[dressed.length - 1]!);
});

test("command-line wrapper drives the same panels", () => {
  const out = join(work, "panels", "cli-eigenvalues.svg");
  const code = cliMain([
    "eigenvalues",
    "--out",
    out,
    join(work, "fig3", "spectrum.csv"),
  ]);
  assert.equal(code, 0);
  assert.ok(existsSync(out));
  assert.equal(cliMain(["bogus-panel", "--out", "x.svg"]), 1);
  assert.equal(cliMain(["eigenvalues"]), 1);
});
