import { codeColor } from "../palette.js";
import type { CodeEntry, ConversationDetail } from "../types.js";
import type { CodeChip } from "./patterns.js";

export interface TranscriptTurnModel {
  index: number;
  prompt: string;
  response: string;
  chips: CodeChip[];
  relevance: number;
  relevanceIsFallback: boolean;
  correctness: number;
  responseLength: number;
  informationGain: number;
}

export interface TranscriptModel {
  student: string;
  task: string;
  taskType: string;
  taskDescription: string;
  score: number;
  turns: TranscriptTurnModel[];
}

/** Detail-view model: task description pane plus the turn-by-turn log. */
export function buildTranscript(
  detail: ConversationDetail,
  schema: Map<string, CodeEntry>,
): TranscriptModel {
  return {
    student: detail.student,
    task: detail.task,
    taskType: detail.task_type,
    taskDescription: detail.task_description,
    score: detail.score,
    turns: detail.turns.map((turn) => ({
      index: turn.index,
      prompt: turn.prompt,
      response: turn.response,
      chips: turn.codes.map((code) => {
        const entry = schema.get(code);
        return entry
          ? { code, abbr: entry.abbr, label: entry.label, color: codeColor(entry) }
          : { code, abbr: code, label: code, color: "#999999" };
      }),
      relevance: turn.relevance,
      relevanceIsFallback: turn.relevance_is_fallback,
      correctness: turn.correctness,
      responseLength: turn.response_length,
      informationGain: turn.information_gain,
    })),
  };
}
