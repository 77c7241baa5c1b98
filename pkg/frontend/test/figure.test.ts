import { mkdtempSync, readFileSync, writeFileSync, existsSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { main, render } from "../src/cli.js";
import { buildFigureSvg } from "../src/figure.js";
import { CSV_HEADER, parseRecords, SchemaError } from "../src/schema.js";

const HEADER = CSV_HEADER.join(",");

function csvFor(sweepName: string, rows: Array<[number, string, number, number, number]>) {
  const body = rows
    .map(([v, m, b, s, w]) => `${sweepName},${v},${m},${b},${s},${w},10,1.0`)
    .join("\n");
  return `${HEADER}\n${body}`;
}

const SAMPLE = csvFor("nmse", [
  [0.0, "MM", 2, 0, 2.0],
  [0.0, "MM", 2, 1, 2.2],
  [0.1, "MM", 2, 0, 1.8],
  [0.1, "MM", 2, 1, 1.6],
  [0.0, "SCA", 2, 0, 2.4],
  [0.0, "SCA", 2, 1, 2.6],
  [0.1, "SCA", 2, 0, 2.0],
  [0.1, "SCA", 2, 1, 2.2],
]);

describe("buildFigureSvg", () => {
  it("draws one mean curve and one CI band per (method, bits) group", () => {
    const svg = buildFigureSvg(parseRecords(SAMPLE), { kind: "nmse" });
    expect(svg.match(/class="mean-line"/g)).toHaveLength(2);
    expect(svg.match(/class="ci-band"/g)).toHaveLength(2);
    expect(svg).toContain('data-group="MM/2"');
    expect(svg).toContain('data-group="SCA/2"');
  });

  it("renders a single two-point line for one group and two x-values", () => {
    const csv = csvFor("nmse", [
      [0.0, "MM", 2, 0, 1.0],
      [0.1, "MM", 2, 0, 2.0],
    ]);
    const svg = buildFigureSvg(parseRecords(csv), { kind: "nmse" });
    const lines = svg.match(/class="mean-line"[^>]* d="M([^"]*)"/);
    expect(lines).not.toBeNull();
    // a two-point path: one move plus one line segment
    expect(lines![1].split("L")).toHaveLength(2);
  });

  it("is deterministic for identical input", () => {
    const a = buildFigureSvg(parseRecords(SAMPLE), { kind: "nmse" });
    const b = buildFigureSvg(parseRecords(SAMPLE), { kind: "nmse" });
    expect(a).toBe(b);
  });

  it("labels continuous-phase groups distinctly", () => {
    const csv = csvFor("power", [
      [0.0, "MM", 2, 0, 1.0],
      [10.0, "MM", 2, 0, 2.0],
      [0.0, "MM", 0, 0, 1.2],
      [10.0, "MM", 0, 0, 2.3],
    ]);
    const svg = buildFigureSvg(parseRecords(csv), { kind: "power" });
    expect(svg).toContain("MM (2-bit)");
    expect(svg).toContain("MM (continuous)");
  });

  it("rejects input lacking the requested sweep", () => {
    expect(() => buildFigureSvg(parseRecords(SAMPLE), { kind: "power" })).toThrowError(
      SchemaError,
    );
  });
});

describe("cli", () => {
  it("renders a figure to an SVG file", () => {
    const dir = mkdtempSync(join(tmpdir(), "figs-"));
    const csv = join(dir, "in.csv");
    writeFileSync(csv, SAMPLE);
    const out = join(dir, "out.svg");
    render(csv, "nmse", out);
    expect(readFileSync(out, "utf8")).toContain("<svg");
  });

  it("exits 2 on schema errors and writes nothing", async () => {
    const dir = mkdtempSync(join(tmpdir(), "figs-"));
    const csv = join(dir, "bad.csv");
    writeFileSync(csv, "a,b\n1,2\n");
    const out = join(dir, "out.svg");
    const code = await main(["render", "--csv", csv, "--figure", "nmse", "--out", out]);
    expect(code).toBe(2);
    expect(existsSync(out)).toBe(false);
  });

  it("exits 2 on an empty CSV body and writes nothing", async () => {
    const dir = mkdtempSync(join(tmpdir(), "figs-"));
    const csv = join(dir, "empty.csv");
    writeFileSync(csv, `${HEADER}\n`);
    const out = join(dir, "out.svg");
    const code = await main(["render", "--csv", csv, "--figure", "nmse", "--out", out]);
    expect(code).toBe(2);
    expect(existsSync(out)).toBe(false);
  });

  it("exits 1 on a missing input file", async () => {
    const code = await main([
      "render", "--csv", "/no/such/file.csv", "--figure", "nmse", "--out", "/tmp/x.svg",
    ]);
    expect(code).toBe(1);
  });
});
