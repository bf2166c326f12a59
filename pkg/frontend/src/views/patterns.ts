import { codeColor } from "../palette.js";
import type { CodeEntry, PatternRow } from "../types.js";
import type { PatternSelection } from "../state.js";

export interface CodeChip {
  code: string;
  abbr: string;
  label: string;
  color: string;
}

export interface PatternRowModel {
  kind: PatternRow["kind"];
  codes: string[];
  chips: CodeChip[];
  joiner: " → " | ", ";
  wrapped: boolean; // set patterns render inside curly braces
  length: number;
  support: number;
  avgScore: number;
  selected: boolean;
}

function chip(codeId: string, schema: Map<string, CodeEntry>): CodeChip {
  const entry = schema.get(codeId);
  if (!entry) {
    return { code: codeId, abbr: codeId, label: codeId, color: "#999999" };
  }
  return { code: codeId, abbr: entry.abbr, label: entry.label, color: codeColor(entry) };
}

export function schemaIndex(schema: CodeEntry[]): Map<string, CodeEntry> {
  return new Map(schema.map((entry) => [entry.id, entry]));
}

/** Table rows in API order (the server already applied the sort spec). */
export function buildPatternTable(
  rows: PatternRow[],
  schema: Map<string, CodeEntry>,
  selected: PatternSelection | null,
): PatternRowModel[] {
  return rows.map((row) => ({
    kind: row.kind,
    codes: row.codes,
    chips: row.codes.map((code) => chip(code, schema)),
    joiner: row.kind === "sequence" ? " → " : ", ",
    wrapped: row.kind === "set",
    length: row.L,
    support: row.C,
    avgScore: row.avg,
    selected:
      selected !== null &&
      selected.kind === row.kind &&
      selected.codes.length === row.codes.length &&
      selected.codes.every((code, i) => code === row.codes[i]),
  }));
}
