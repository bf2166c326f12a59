import { describe, expect, it } from "vitest";

import { buildPatternTable, schemaIndex } from "../src/views/patterns.js";
import { CATEGORY_COLORS } from "../src/palette.js";
import { buildSummaryCards, sortRows } from "../src/views/summary.js";
import type { GroupDoc, PatternRow } from "../src/types.js";

const schema = schemaIndex([
  { id: "DI", label: "Definition Inquiry", abbr: "DI", category: "learning", bloom: "remember" },
  { id: "DR", label: "Design Request", abbr: "DR", category: "learning", bloom: "create" },
  { id: "FQ", label: "Follow up Questions", abbr: "FQ", category: "chatgpt_effective" },
]);

const rows: PatternRow[] = [
  { kind: "sequence", codes: ["DI", "FQ"], L: 2, C: 9, avg: 0.81, supporters: [["aa", "T1"]] },
  { kind: "set", codes: ["DR"], L: 1, C: 4, avg: 0.5, supporters: [["bb", "T2"]] },
];

describe("pattern table model", () => {
  it("chips carry category colors and abbreviations", () => {
    const models = buildPatternTable(rows, schema, null);
    expect(models[0]!.chips.map((c) => c.abbr)).toEqual(["DI", "FQ"]);
    expect(models[0]!.chips[0]!.color).toBe(CATEGORY_COLORS.remember);
    expect(models[0]!.chips[1]!.color).toBe(CATEGORY_COLORS.chatgpt_effective);
    expect(models[1]!.chips[0]!.color).toBe(CATEGORY_COLORS.create);
  });

  it("sequences join with arrows, sets wrap in braces", () => {
    const models = buildPatternTable(rows, schema, null);
    expect(models[0]!.joiner).toBe(" → ");
    expect(models[0]!.wrapped).toBe(false);
    expect(models[1]!.wrapped).toBe(true);
  });

  it("marks the selected row", () => {
    const models = buildPatternTable(rows, schema, { kind: "set", codes: ["DR"] });
    expect(models.map((m) => m.selected)).toEqual([false, true]);
  });

  it("columns mirror the served metrics", () => {
    const models = buildPatternTable(rows, schema, null);
    expect(models[0]!.length).toBe(2);
    expect(models[0]!.support).toBe(9);
    expect(models[0]!.avgScore).toBeCloseTo(0.81);
  });
});

const groups: GroupDoc[] = [
  {
    key: "none",
    mode: "student_grouping",
    members: ["aa", "bb"],
    distribution: { remember: 0.5, create: 0.25, chatgpt_effective: 0.25 },
    mean_ig: 0.2,
    mean_rl: 40,
    mean_score: 0.6,
    rows: [
      { member: "aa", distribution: { remember: 1 }, mean_ig: 0.3, mean_rl: 50, mean_score: 0.9 },
      { member: "bb", distribution: { create: 1 }, mean_ig: 0.1, mean_rl: 30, mean_score: 0.3 },
    ],
  },
  {
    key: "some",
    mode: "student_grouping",
    members: ["cc"],
    distribution: { chatgpt_other: 1 },
    mean_ig: 0.4,
    mean_rl: 20,
    mean_score: 0.8,
    rows: [{ member: "cc", distribution: { chatgpt_other: 1 }, mean_ig: 0.4, mean_rl: 20, mean_score: 0.8 }],
  },
];

describe("summary cards model", () => {
  it("stacked fractions equal the served distribution", () => {
    const cards = buildSummaryCards(groups, null);
    const stacked = cards[0]!.stacked;
    expect(stacked.map((s) => s.fraction)).toEqual([0.5, 0.25, 0.25]);
    expect(stacked.map((s) => s.category)).toEqual(["remember", "create", "chatgpt_effective"]);
  });

  it("metric bars normalize against the largest group", () => {
    const cards = buildSummaryCards(groups, null);
    expect(cards[1]!.metrics.igFraction).toBeCloseTo(1.0);
    expect(cards[0]!.metrics.igFraction).toBeCloseTo(0.5);
    expect(cards[0]!.metrics.rlFraction).toBeCloseTo(1.0);
    expect(cards[0]!.metrics.scoreFraction).toBeCloseTo(0.6);
  });

  it("marks the selected group", () => {
    const cards = buildSummaryCards(groups, "some");
    expect(cards.map((c) => c.selected)).toEqual([false, true]);
  });

  it("member rows sort by the chosen metric with id tiebreak", () => {
    const sorted = sortRows(groups[0]!.rows, { key: "mean_score", direction: "asc" });
    expect(sorted.map((r) => r.member)).toEqual(["bb", "aa"]);
    const tied = sortRows(
      [
        { member: "zz", distribution: {}, mean_ig: 0, mean_rl: 0, mean_score: 0.5 },
        { member: "aa", distribution: {}, mean_ig: 0, mean_rl: 0, mean_score: 0.5 },
      ],
      { key: "mean_score", direction: "desc" },
    );
    expect(tied.map((r) => r.member)).toEqual(["aa", "zz"]);
  });
});
