import type { Criteria, PatternKind } from "./types.js";

// Linked-view state. The views form a pipeline (filter -> summary ->
// table/tree -> detail); whenever something upstream changes, every
// selection downstream of it resets so no view shows stale context.

export type GroupingMode = "student_grouping" | "task_grouping";

export interface PatternSelection {
  kind: PatternKind;
  codes: string[];
}

export interface LeafSelection {
  student: string;
  task: string;
}

export interface PatternSortState {
  key: "length" | "support" | "avg_score";
  direction: "asc" | "desc";
}

export interface ViewState {
  criteria: Criteria;
  groupingMode: GroupingMode;
  groupBy: string;
  selectedGroup: string | null;
  patternSort: PatternSortState;
  selectedPattern: PatternSelection | null;
  selectedLeaf: LeafSelection | null;
}

export const initialState: ViewState = {
  criteria: {},
  groupingMode: "student_grouping",
  groupBy: "dv_experience",
  selectedGroup: null,
  patternSort: { key: "support", direction: "desc" },
  selectedPattern: null,
  selectedLeaf: null,
};

export type Action =
  | { type: "set-criteria"; criteria: Criteria }
  | { type: "set-grouping"; mode: GroupingMode; groupBy: string }
  | { type: "select-group"; key: string | null }
  | { type: "set-pattern-sort"; key: PatternSortState["key"] }
  | { type: "select-pattern"; pattern: PatternSelection | null }
  | { type: "select-leaf"; leaf: LeafSelection | null };

export function reduce(state: ViewState, action: Action): ViewState {
  switch (action.type) {
    case "set-criteria":
      return {
        ...state,
        criteria: action.criteria,
        selectedGroup: null,
        selectedPattern: null,
        selectedLeaf: null,
      };
    case "set-grouping":
      return {
        ...state,
        groupingMode: action.mode,
        groupBy: action.mode === "task_grouping" ? "task_type" : action.groupBy,
        selectedGroup: null,
        selectedPattern: null,
        selectedLeaf: null,
      };
    case "select-group":
      return {
        ...state,
        selectedGroup: action.key,
        selectedPattern: null,
        selectedLeaf: null,
      };
    case "set-pattern-sort": {
      // clicking the active column flips its direction
      const direction =
        state.patternSort.key === action.key && state.patternSort.direction === "desc"
          ? "asc"
          : "desc";
      return { ...state, patternSort: { key: action.key, direction } };
    }
    case "select-pattern":
      return { ...state, selectedPattern: action.pattern };
    case "select-leaf":
      return { ...state, selectedLeaf: action.leaf };
  }
}

/** Toggle helper: selecting the already-selected pattern deselects it. */
export function togglePattern(
  state: ViewState,
  pattern: PatternSelection,
): Action {
  const current = state.selectedPattern;
  const same =
    current !== null &&
    current.kind === pattern.kind &&
    current.codes.length === pattern.codes.length &&
    current.codes.every((code, i) => code === pattern.codes[i]);
  return { type: "select-pattern", pattern: same ? null : pattern };
}
