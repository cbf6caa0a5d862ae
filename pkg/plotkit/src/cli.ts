#!/usr/bin/env node
/**
 * plotkit <eigenvalues|occupation_overlay|steady_state_scan>
 *         --out panel.svg [--title T] [--reference ref.csv]
 *         [--reference-value 0.5] input.csv[:label] ...
 */

import { renderPanel, type PanelKind, type PlotSpec } from "./panels.js";

const KINDS: PanelKind[] = ["eigenvalues", "occupation_overlay", "steady_state_scan"];

export function main(argv: string[]): number {
  try {
    const [kind, ...rest] = argv;
    if (!kind || !(KINDS as string[]).includes(kind)) {
      throw new Error(`first argument must be one of: ${KINDS.join(", ")}`);
    }
    let output: string | undefined;
    let reference: string | undefined;
    let referenceValue: number | undefined;
    let title: string | undefined;
    const inputs: { path: string; label?: string }[] = [];
    for (let i = 0; i < rest.length; i++) {
      const arg = rest[i]!;
      const next = () => {
        const v = rest[++i];
        if (v === undefined) throw new Error(`${arg} needs a value`);
        return v;
      };
      if (arg === "--out") output = next();
      else if (arg === "--reference") reference = next();
      else if (arg === "--reference-value") referenceValue = Number(next());
      else if (arg === "--title") title = next();
      else if (arg.startsWith("--")) throw new Error(`unknown option ${arg}`);
      else {
        const sep = arg.lastIndexOf(":");
        // windows-style drive letters are not a concern here; a colon splits label
        if (sep > 0 && !arg.slice(sep + 1).includes("/")) {
          inputs.push({ path: arg.slice(0, sep), label: arg.slice(sep + 1) });
        } else {
          inputs.push({ path: arg });
        }
      }
    }
    if (!output) throw new Error("--out is required");
    const spec: PlotSpec = {
      kind: kind as PanelKind,
      inputs,
      output,
      reference,
      referenceValue,
      title,
    };
    renderPanel(spec);
    console.log(`wrote ${output}`);
    return 0;
  } catch (err) {
    console.error(`plotkit: ${err instanceof Error ? err.message : String(err)}`);
    return 1;
  }
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
