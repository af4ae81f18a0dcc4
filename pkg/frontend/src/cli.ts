import { pathToFileURL } from "node:url";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { FigureKind, render } from "./render.js";

export function main(argv: string[]): number {
  const args = yargs(argv)
    .scriptName("aic-plots")
    .usage("$0 --kind se_vs_snr --input results/sweep.csv --out fig.svg")
    .option("kind", {
      choices: ["se_vs_snr", "cdf_d", "cdf_n"] as const,
      demandOption: true,
      describe: "figure kind",
    })
    .option("input", {
      type: "string",
      demandOption: true,
      describe: "sweep results CSV (se_vs_snr) or JSON sidecar (cdf_d, cdf_n)",
    })
    .option("overlay", {
      type: "string",
      array: true,
      default: [] as string[],
      describe: "external reference-curve CSV (columns x, y, optional label); repeatable",
    })
    .option("out", { type: "string", demandOption: true, describe: "output SVG path" })
    .strict()
    .exitProcess(false)
    .parseSync();

  render({
    kind: args.kind as FigureKind,
    input: args.input,
    overlays: args.overlay,
    output: args.out,
  });
  console.log(`wrote ${args.out}`);
  return 0;
}

const entry = process.argv[1];
if (entry !== undefined && import.meta.url === pathToFileURL(entry).href) {
  try {
    process.exitCode = main(hideBin(process.argv));
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    process.exitCode = 2;
  }
}
