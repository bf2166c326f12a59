// Payload shapes of the analytics API. Every number the dashboard renders
// comes straight from these fields; the client never recomputes metrics.

export type BloomLevel =
  | "remember"
  | "understand"
  | "apply"
  | "analyze"
  | "evaluate"
  | "create";

export type CodeCategory = "learning" | "chatgpt_effective" | "chatgpt_other";

export type SummaryCategory = BloomLevel | "chatgpt_effective" | "chatgpt_other";

export interface CodeEntry {
  id: string;
  label: string;
  abbr: string;
  category: CodeCategory;
  bloom?: BloomLevel;
}

export interface Criteria {
  task_ids?: string[];
  student_aliases?: string[];
  difficulty_range?: [number, number];
  score_range?: [number, number];
  task_score_range?: [number, number];
  task_types?: string[];
  cognitive_levels?: string[];
  dv_experience?: string[];
  cs_background?: string[];
  gpt_familiarity?: string[];
}

export interface Overview {
  criteria_hash: string;
  conversations: number;
  turns: number;
  schema: CodeEntry[];
  tasks: {
    count: number;
    difficulty: Record<string, number>;
    types: Record<string, number>;
    score_density: number[];
  };
  students: {
    count: number;
    backgrounds: Record<string, Record<string, number>>;
    score_density: number[];
  };
}

export interface MemberRowDoc {
  member: string;
  distribution: Record<string, number>;
  mean_ig: number;
  mean_rl: number;
  mean_score: number;
}

export interface GroupDoc {
  key: string;
  mode: string;
  members: string[];
  distribution: Record<string, number>;
  mean_ig: number;
  mean_rl: number;
  mean_score: number;
  rows: MemberRowDoc[];
}

export interface SummaryResponse {
  criteria_hash: string;
  groups: GroupDoc[];
}

export type PatternKind = "sequence" | "set";

export interface PatternRow {
  kind: PatternKind;
  codes: string[];
  L: number;
  C: number;
  avg: number;
  supporters: [string, string][];
}

export interface PatternsResponse {
  criteria_hash: string;
  params: { max_seq_len: number; max_set_size: number; min_support: number };
  patterns: PatternRow[];
}

export interface TreeNodeDoc {
  id: string;
  depth: number;
  codes: string[];
  count: number;
  pie: Record<string, number>;
  leaves: { student: string; task: string; score: number }[];
}

export interface TreeEdgeDoc {
  from: string;
  to: string;
  mean_ig: number;
  mean_rl: number;
  x_extent: number;
  width_weight: number;
  opacity_weight: number;
  member_count: number;
}

export interface TreeDoc {
  nodes: TreeNodeDoc[];
  edges: TreeEdgeDoc[];
  elided: { parent: string; count: number }[];
}

export interface HighlightDoc {
  nodes: string[];
  edges: string[];
  leaves: [string, string][];
}

export interface TreeResponse {
  criteria_hash: string;
  total_conversations: number;
  tree: TreeDoc;
  highlight: HighlightDoc | null;
}

export interface TurnDoc {
  index: number;
  prompt: string;
  response: string;
  codes: string[];
  relevance: number;
  relevance_is_fallback: boolean;
  correctness: number;
  response_length: number;
  information_gain: number;
}

export interface ConversationDetail {
  student: string;
  task: string;
  task_description: string;
  task_type: string;
  score: number;
  turns: TurnDoc[];
}

export interface ApiErrorBody {
  code: string;
  detail: string;
}
