import type { CodeEntry, SummaryCategory } from "./types.js";

/** Fixed order of the eight summary categories: cognitive stages low to
 * high, then the two ChatGPT-proficiency buckets. */
export const CATEGORY_ORDER: SummaryCategory[] = [
  "remember",
  "understand",
  "apply",
  "analyze",
  "evaluate",
  "create",
  "chatgpt_effective",
  "chatgpt_other",
];

// Sequential ramp, light yellow to dark brown, one step per cognitive stage.
const BLOOM_RAMP = ["#fdeec5", "#f9d488", "#eeae4e", "#d48233", "#a55a22", "#6e3a12"];

export const CHATGPT_EFFECTIVE_COLOR = "#4d7fbe"; // literature-backed strategies
export const CHATGPT_OTHER_COLOR = "#63a375";

export const CATEGORY_COLORS: Record<SummaryCategory, string> = {
  remember: BLOOM_RAMP[0]!,
  understand: BLOOM_RAMP[1]!,
  apply: BLOOM_RAMP[2]!,
  analyze: BLOOM_RAMP[3]!,
  evaluate: BLOOM_RAMP[4]!,
  create: BLOOM_RAMP[5]!,
  chatgpt_effective: CHATGPT_EFFECTIVE_COLOR,
  chatgpt_other: CHATGPT_OTHER_COLOR,
};

/** Category bucket a code contributes to (bloom stage for learning codes). */
export function codeCategory(code: CodeEntry): SummaryCategory {
  if (code.category === "learning") {
    return code.bloom ?? "remember";
  }
  return code.category;
}

export function codeColor(code: CodeEntry): string {
  return CATEGORY_COLORS[codeCategory(code)];
}

/** Grey-scale intensity for score chips: 0 renders light, 1 dark. */
export function scoreColor(score: number): string {
  const clamped = Math.min(1, Math.max(0, score));
  const level = Math.round(224 - clamped * 150);
  return `rgb(${level}, ${level}, ${level})`;
}
