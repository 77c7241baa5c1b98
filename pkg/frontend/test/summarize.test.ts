import { describe, expect, it } from "vitest";

import type { SweepRecord } from "../src/schema.js";
import { summarize } from "../src/summarize.js";

function rec(
  sweepValue: number,
  method: SweepRecord["method"],
  bits: number,
  wsr: number,
): SweepRecord {
  return { sweepName: "nmse", sweepValue, method, bits, seed: 0, wsr };
}

describe("summarize", () => {
  it("computes the mean and the normal-approximation 95% CI", () => {
    const groups = summarize([
      rec(0.05, "MM", 2, 1),
      rec(0.05, "MM", 2, 2),
      rec(0.05, "MM", 2, 3),
      rec(0.05, "MM", 2, 4),
    ]);
    expect(groups).toHaveLength(1);
    const [p] = groups[0].points;
    expect(p.n).toBe(4);
    expect(p.meanWsr).toBeCloseTo(2.5, 12);
    // sample sd of [1,2,3,4] is sqrt(5/3); ci = 1.96 * sd / sqrt(4)
    expect(p.ci95).toBeCloseTo((1.96 * Math.sqrt(5 / 3)) / 2, 12);
  });

  it("gives a zero CI for single samples", () => {
    const [g] = summarize([rec(0.0, "SCA", 2, 3)]);
    expect(g.points[0].ci95).toBe(0);
  });

  it("reproduces the harness summarize values exactly", () => {
    // oracle computed with the primary package's `irsbf summarize` on the
    // same values: wsr = [1.25, 2.5, 3.125, 4.0625, 5.5] and 0.8x of each
    const vals = [1.25, 2.5, 3.125, 4.0625, 5.5];
    const records = vals.flatMap((w, i) => [
      rec(0.05, "MM", 2, w),
      rec(0.1, "MM", 2, 0.8 * w),
    ]);
    const [g] = summarize(records);
    expect(g.points[0].meanWsr).toBeCloseTo(3.2875, 12);
    expect(g.points[0].ci95).toBeCloseTo(1.4061377955236107, 12);
    expect(g.points[1].meanWsr).toBeCloseTo(2.63, 12);
    expect(g.points[1].ci95).toBeCloseTo(1.1249102364188888, 12);
  });

  it("groups by (method, bits) and sorts points by sweep value", () => {
    const groups = summarize([
      rec(0.1, "MM", 2, 1),
      rec(0.0, "MM", 2, 2),
      rec(0.0, "MM", 0, 5),
      rec(0.0, "SCA", 2, 4),
    ]);
    expect(groups.map((g) => `${g.method}/${g.bits}`)).toEqual([
      "MM/0",
      "MM/2",
      "SCA/2",
    ]);
    const mm2 = groups.find((g) => g.method === "MM" && g.bits === 2)!;
    expect(mm2.points.map((p) => p.sweepValue)).toEqual([0.0, 0.1]);
  });
});
