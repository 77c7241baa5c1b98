#!/usr/bin/env node
import { readFileSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";

import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { buildFigureSvg, type FigureKind } from "./figure.js";
import { parseRecords, SchemaError } from "./schema.js";

export function render(csvPath: string, kind: FigureKind, outPath: string): void {
  const records = parseRecords(readFileSync(csvPath, "utf8"));
  const svg = buildFigureSvg(records, { kind }, (msg) => console.warn(msg));
  writeFileSync(outPath, svg + "\n");
}

export async function main(argv: string[]): Promise<number> {
  const parser = yargs(argv)
    .command("render", "render one sweep figure from a harness CSV", (y) =>
      y
        .option("csv", { type: "string", demandOption: true, describe: "input results CSV" })
        .option("figure", {
          choices: ["nmse", "power", "position"] as const,
          demandOption: true,
        })
        .option("out", { type: "string", demandOption: true, describe: "output .svg path" }),
    )
    .demandCommand(1)
    .strict()
    .fail((msg, err) => {
      throw err ?? new Error(msg);
    });

  try {
    const args = await parser.parse();
    render(args.csv as string, args.figure as FigureKind, args.out as string);
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 2;
    }
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
}

const isDirectRun =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;
if (isDirectRun) {
  main(hideBin(process.argv)).then((code) => {
    process.exitCode = code;
  });
}
