import type { Criteria, Overview } from "../types.js";

// Criteria editing is pure: every interaction maps (criteria, click) to a
// new criteria object, which the shell re-posts to refresh downstream views.

function toggleMember(values: string[] | undefined, value: string): string[] | undefined {
  const current = new Set(values ?? []);
  if (current.has(value)) {
    current.delete(value);
  } else {
    current.add(value);
  }
  return current.size ? [...current].sort() : undefined;
}

function withField(criteria: Criteria, field: keyof Criteria, value: unknown): Criteria {
  const next: Criteria = { ...criteria };
  if (value === undefined) {
    delete next[field];
  } else {
    (next as Record<string, unknown>)[field] = value;
  }
  return next;
}

export function toggleTaskType(criteria: Criteria, taskType: string): Criteria {
  return withField(criteria, "task_types", toggleMember(criteria.task_types, taskType));
}

export function toggleCognitiveLevel(criteria: Criteria, level: string): Criteria {
  return withField(criteria, "cognitive_levels", toggleMember(criteria.cognitive_levels, level));
}

export function toggleBackground(
  criteria: Criteria,
  attribute: "dv_experience" | "cs_background" | "gpt_familiarity",
  level: string,
): Criteria {
  return withField(criteria, attribute, toggleMember(criteria[attribute], level));
}

/**
 * Difficulty bars toggle individual values; the API models difficulty as a
 * closed interval, so the selected set is sent as [min, max].
 */
export function toggleDifficulty(selected: number[], value: number): number[] {
  return selected.includes(value)
    ? selected.filter((v) => v !== value)
    : [...selected, value].sort((a, b) => a - b);
}

export function criteriaWithDifficulty(criteria: Criteria, selected: number[]): Criteria {
  if (!selected.length) return withField(criteria, "difficulty_range", undefined);
  return withField(criteria, "difficulty_range", [
    Math.min(...selected),
    Math.max(...selected),
  ]);
}

export function setStudentScoreRange(criteria: Criteria, lo: number, hi: number): Criteria {
  return withField(criteria, "score_range", [lo, hi]);
}

export function setTaskScoreRange(criteria: Criteria, lo: number, hi: number): Criteria {
  return withField(criteria, "task_score_range", [lo, hi]);
}

/** Search box: a non-empty query pins the id list to exactly that entity. */
export function searchTask(criteria: Criteria, query: string): Criteria {
  const trimmed = query.trim();
  return withField(criteria, "task_ids", trimmed ? [trimmed] : undefined);
}

export function searchStudent(criteria: Criteria, query: string): Criteria {
  const trimmed = query.trim();
  return withField(criteria, "student_aliases", trimmed ? [trimmed] : undefined);
}

export function clearAll(): Criteria {
  return {};
}

export interface HistogramBar {
  label: string;
  count: number;
  heightFraction: number;
  selected: boolean;
}

export interface FilterViewModel {
  difficulty: HistogramBar[];
  taskTypes: HistogramBar[];
  taskScoreDensity: number[];
  backgrounds: Record<string, HistogramBar[]>;
  studentScoreDensity: number[];
}

function bars(
  counts: Record<string, number>,
  isSelected: (label: string) => boolean,
): HistogramBar[] {
  const max = Math.max(1, ...Object.values(counts));
  return Object.keys(counts)
    .sort()
    .map((label) => ({
      label,
      count: counts[label] ?? 0,
      heightFraction: (counts[label] ?? 0) / max,
      selected: isSelected(label),
    }));
}

/** Histogram bundle for the filter panel, selection flags included. */
export function buildFilterView(
  overview: Overview,
  criteria: Criteria,
  difficultySelection: number[],
): FilterViewModel {
  const backgrounds: Record<string, HistogramBar[]> = {};
  for (const [attribute, counts] of Object.entries(overview.students.backgrounds)) {
    const active = criteria[attribute as "dv_experience"] ?? [];
    backgrounds[attribute] = bars(counts, (label) => active.includes(label));
  }
  return {
    difficulty: bars(overview.tasks.difficulty, (label) =>
      difficultySelection.includes(Number(label)),
    ),
    taskTypes: bars(overview.tasks.types, (label) =>
      (criteria.task_types ?? []).includes(label),
    ),
    taskScoreDensity: overview.tasks.score_density,
    backgrounds,
    studentScoreDensity: overview.students.score_density,
  };
}
