import { CATEGORY_COLORS, CATEGORY_ORDER } from "../palette.js";
import type { GroupDoc, MemberRowDoc, SummaryCategory } from "../types.js";
import { donutSegments, type DonutSegment } from "./donut.js";

export interface StackedSegment {
  category: SummaryCategory;
  fraction: number;
  color: string;
}

export interface MetricBars {
  // two light grey bars (response quality) and one dark grey bar (outcome),
  // widths normalized against the largest value across the rendered cards
  igFraction: number;
  rlFraction: number;
  scoreFraction: number;
  meanIg: number;
  meanRl: number;
  meanScore: number;
}

export interface MemberRowModel {
  member: string;
  stacked: StackedSegment[];
  metrics: MetricBars;
}

export interface GroupCardModel {
  key: string;
  memberCount: number;
  donut: DonutSegment[];
  stacked: StackedSegment[];
  metrics: MetricBars;
  rows: MemberRowModel[];
  selected: boolean;
}

function stackedSegments(distribution: Record<string, number>): StackedSegment[] {
  return CATEGORY_ORDER.filter((category) => (distribution[category] ?? 0) > 0).map(
    (category) => ({
      category,
      fraction: distribution[category] ?? 0,
      color: CATEGORY_COLORS[category],
    }),
  );
}

function metricBars(
  doc: { mean_ig: number; mean_rl: number; mean_score: number },
  maxIg: number,
  maxRl: number,
): MetricBars {
  return {
    igFraction: maxIg > 0 ? doc.mean_ig / maxIg : 0,
    rlFraction: maxRl > 0 ? doc.mean_rl / maxRl : 0,
    scoreFraction: doc.mean_score, // scores are already in [0, 1]
    meanIg: doc.mean_ig,
    meanRl: doc.mean_rl,
    meanScore: doc.mean_score,
  };
}

export interface MemberSort {
  key: "mean_score" | "mean_ig" | "mean_rl";
  direction: "asc" | "desc";
}

/** Reorder member rows by one metric; ties fall back to the member id.
 * Pure presentation: the values themselves come from the API. */
export function sortRows(rows: MemberRowDoc[], sort: MemberSort): MemberRowDoc[] {
  const sign = sort.direction === "desc" ? -1 : 1;
  return [...rows].sort((a, b) => {
    const diff = a[sort.key] - b[sort.key];
    if (diff !== 0) return sign * diff;
    return a.member < b.member ? -1 : a.member > b.member ? 1 : 0;
  });
}

/** Card models for all groups under the current grouping. */
export function buildSummaryCards(
  groups: GroupDoc[],
  selectedGroup: string | null,
  memberSort?: MemberSort,
): GroupCardModel[] {
  const maxIg = Math.max(0, ...groups.map((g) => g.mean_ig));
  const maxRl = Math.max(0, ...groups.map((g) => g.mean_rl));
  return groups.map((group) => {
    const rowDocs = memberSort ? sortRows(group.rows, memberSort) : group.rows;
    const rowMaxIg = Math.max(maxIg, ...group.rows.map((r) => r.mean_ig));
    const rowMaxRl = Math.max(maxRl, ...group.rows.map((r) => r.mean_rl));
    return {
      key: group.key,
      memberCount: group.members.length,
      donut: donutSegments(group.distribution),
      stacked: stackedSegments(group.distribution),
      metrics: metricBars(group, maxIg, maxRl),
      rows: rowDocs.map((row) => ({
        member: row.member,
        stacked: stackedSegments(row.distribution),
        metrics: metricBars(row, rowMaxIg, rowMaxRl),
      })),
      selected: group.key === selectedGroup,
    };
  });
}
