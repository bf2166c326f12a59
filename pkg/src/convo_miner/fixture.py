"""Deterministic fixture corpus generator at the reference dataset shape.

Emits a corpus document with exactly 48 students, 27 tasks across seven task
types, 744 conversations and 2507 turns, coded against the reference schema
of 15 learning codes (with cognitive stages) and 12 ChatGPT-usage codes.
Everything is drawn from one seeded generator, so the same seed always
produces byte-identical documents.
"""

from __future__ import annotations

import argparse
import json
import random
from typing import Optional

__all__ = ["REFERENCE_SCHEMA", "TASK_TYPES", "generate_fixture", "DEFAULT_SEED"]

DEFAULT_SEED = 20240501

MAX_TURNS_PER_CONVERSATION = 8

# 15 learning codes across the six cognitive stages, then 12 ChatGPT-usage
# codes split into literature-backed effective strategies and the rest
# (including the reserved EMPTY code for uncodable prompts).
REFERENCE_SCHEMA: list[dict] = [
    {"id": "definition_inquiry", "label": "Definition Inquiry", "abbr": "DI", "category": "learning", "bloom": "remember"},
    {"id": "fact_check", "label": "Fact Check", "abbr": "FC", "category": "learning", "bloom": "remember"},
    {"id": "resource_request", "label": "Resource Request", "abbr": "RR", "category": "learning", "bloom": "remember"},
    {"id": "concept_explanation", "label": "Concept Explanation", "abbr": "CE", "category": "learning", "bloom": "understand"},
    {"id": "example_request", "label": "Example Request", "abbr": "ER", "category": "learning", "bloom": "understand"},
    {"id": "clarification", "label": "Clarification", "abbr": "CL", "category": "learning", "bloom": "understand"},
    {"id": "application_inquiry", "label": "Application Inquiry", "abbr": "AP", "category": "learning", "bloom": "apply"},
    {"id": "procedure_request", "label": "Procedure Request", "abbr": "PR", "category": "learning", "bloom": "apply"},
    {"id": "comparison_inquiry", "label": "Comparison Inquiry", "abbr": "CI", "category": "learning", "bloom": "analyze"},
    {"id": "interpretation_request", "label": "Interpretation Request", "abbr": "IR", "category": "learning", "bloom": "analyze"},
    {"id": "error_diagnosis", "label": "Error Diagnosis", "abbr": "ED", "category": "learning", "bloom": "analyze"},
    {"id": "critique_request", "label": "Critique Request", "abbr": "CQ", "category": "learning", "bloom": "evaluate"},
    {"id": "verification_request", "label": "Verification Request", "abbr": "VR", "category": "learning", "bloom": "evaluate"},
    {"id": "design_request", "label": "Design Request", "abbr": "DR", "category": "learning", "bloom": "create"},
    {"id": "alternative_solicitation", "label": "Alternative Solicitation", "abbr": "AS", "category": "learning", "bloom": "create"},
    {"id": "follow_up_question", "label": "Follow up Questions", "abbr": "FQ", "category": "chatgpt_effective"},
    {"id": "output_restriction", "label": "Output Restrictions", "abbr": "OR", "category": "chatgpt_effective"},
    {"id": "role_assignment", "label": "Role Assignment", "abbr": "RA", "category": "chatgpt_effective"},
    {"id": "context_provision", "label": "Context Provision", "abbr": "CP", "category": "chatgpt_effective"},
    {"id": "step_by_step_request", "label": "Step-by-step Request", "abbr": "SS", "category": "chatgpt_effective"},
    {"id": "format_specification", "label": "Format Specification", "abbr": "FS", "category": "chatgpt_effective"},
    {"id": "question_inquiry", "label": "Question Inquiry", "abbr": "QI", "category": "chatgpt_other"},
    {"id": "answer_solicitation", "label": "Answer Solicitation", "abbr": "AN", "category": "chatgpt_other"},
    {"id": "chit_chat", "label": "Chit Chat", "abbr": "CC", "category": "chatgpt_other"},
    {"id": "regenerate_request", "label": "Regenerate Request", "abbr": "RG", "category": "chatgpt_other"},
    {"id": "settings_adjustment", "label": "Settings Adjustment", "abbr": "SA", "category": "chatgpt_other"},
    {"id": "EMPTY", "label": "Empty", "abbr": "EM", "category": "chatgpt_other"},
]

# Seven task types; the count per type sums to the 27 reference tasks.
TASK_TYPES: list[tuple[str, str, int]] = [
    ("self_learning", "remember", 3),
    ("remember", "remember", 4),
    ("understand", "understand", 4),
    ("apply", "apply", 4),
    ("analyze", "analyze", 4),
    ("evaluate", "evaluate", 4),
    ("create", "create", 4),
]

_TOPICS = [
    "scatter plots", "bar charts", "line charts", "heatmaps", "treemaps",
    "parallel coordinates", "choropleth maps", "box plots", "network diagrams",
    "color scales", "axis design", "visual encodings", "interaction design",
    "dashboard layout", "data transformations", "perception principles",
    "chart junk", "small multiples", "animation", "uncertainty visualization",
]

_VOCABULARY = [
    "chart", "data", "visual", "encoding", "color", "axis", "scale", "value",
    "mark", "channel", "position", "length", "area", "hue", "saturation",
    "legend", "label", "grid", "point", "line", "bar", "plot", "map", "tree",
    "node", "link", "graph", "table", "field", "series", "trend", "pattern",
    "cluster", "outlier", "variance", "mean", "median", "range", "bin",
    "histogram", "density", "distribution", "correlation", "comparison",
    "dimension", "measure", "categorical", "ordinal", "quantitative",
    "temporal", "spatial", "interactive", "filter", "zoom", "brush", "hover",
    "tooltip", "selection", "highlight", "focus", "context", "overview",
    "detail", "layout", "hierarchy", "network", "flow", "stack", "group",
    "facet", "panel", "view", "design", "principle", "perception", "attention",
    "memory", "task", "user", "reader", "audience", "story", "insight",
    "analysis", "exploration", "presentation", "effective", "accurate",
    "clear", "simple", "complex", "dense", "sparse", "redundant", "salient",
    "contrast", "alignment", "proximity", "similarity", "continuity",
    "closure", "figure", "ground", "gestalt", "preattentive", "popout",
    "ratio", "interval", "nominal", "sequence", "order", "rank", "magnitude",
    "proportion", "percentage", "aggregate", "summarize", "transform",
    "normalize", "derive", "compute", "render", "draw", "display", "screen",
    "pixel", "resolution", "svg", "canvas", "interface", "widget", "control",
    "slider", "button", "menu", "toolbar", "coordinate", "projection",
    "transformation", "rotation", "translation", "morphing", "transition",
    "duration", "easing", "frame", "state", "update", "bind", "join",
]


def _alias_pool(rng: random.Random, count: int) -> list[str]:
    letters = "abcdefghijklmnopqrstuvwxyz"
    pool = [a + b for a in letters for b in letters]
    return rng.sample(pool, count)


def _text(rng: random.Random, min_tokens: int, max_tokens: int) -> str:
    length = rng.randint(min_tokens, max_tokens)
    weights = [1.0 / (i + 1) for i in range(len(_VOCABULARY))]
    words = rng.choices(_VOCABULARY, weights=weights, k=length)
    return " ".join(words)


def generate_fixture(
    seed: int = DEFAULT_SEED,
    n_students: int = 48,
    n_tasks: int = 27,
    n_conversations: int = 744,
    n_turns: int = 2507,
) -> dict:
    """Build the fixture corpus document. Raises if the requested shape is
    unsatisfiable (too many conversations for the student/task grid, or a
    turn total outside [conversations, conversations * cap])."""
    if n_conversations > n_students * n_tasks:
        raise ValueError("more conversations than (student, task) pairs")
    if not n_conversations <= n_turns <= n_conversations * MAX_TURNS_PER_CONVERSATION:
        raise ValueError("turn total not achievable with the per-conversation cap")

    rng = random.Random(seed)

    students = [
        {
            "alias": alias,
            "dv_experience": rng.choices(["none", "some", "experienced"], weights=[5, 3, 2])[0],
            "cs_background": rng.choices(["none", "some", "experienced"], weights=[2, 4, 4])[0],
            "gpt_familiarity": rng.choices(["none", "some", "experienced"], weights=[3, 4, 3])[0],
        }
        for alias in _alias_pool(rng, n_students)
    ]

    tasks = []
    type_cycle = [t for t, _, count in TASK_TYPES for t in [t] * count]
    level_of = {t: level for t, level, _ in TASK_TYPES}
    for i in range(n_tasks):
        task_type = type_cycle[i % len(type_cycle)]
        topic = _TOPICS[i % len(_TOPICS)]
        tasks.append(
            {
                "id": f"T{i + 1}",
                "type": task_type,
                "cognitive_level": level_of[task_type],
                "difficulty": rng.randint(1, 5),
                "description": f"{task_type.replace('_', ' ').title()} exercise on {topic}: "
                + _text(rng, 12, 30),
            }
        )

    pairs = [(s["alias"], t["id"]) for s in students for t in tasks]
    chosen = rng.sample(pairs, n_conversations)

    turn_counts = [1] * n_conversations
    remaining = n_turns - n_conversations
    while remaining > 0:
        i = rng.randrange(n_conversations)
        if turn_counts[i] < MAX_TURNS_PER_CONVERSATION:
            turn_counts[i] += 1
            remaining -= 1

    non_empty = [c["id"] for c in REFERENCE_SCHEMA if c["id"] != "EMPTY"]
    code_weights = [3 if c["category"] == "learning" else 2 for c in REFERENCE_SCHEMA if c["id"] != "EMPTY"]

    def pick_codes(k: int) -> list[str]:
        codes: list[str] = []
        while len(codes) < k:
            code = rng.choices(non_empty, weights=code_weights)[0]
            if code not in codes:
                codes.append(code)
        return codes

    conversations = []
    for (alias, task_id), count in zip(chosen, turn_counts):
        turns = []
        correctness_sum = 0.0
        for _ in range(count):
            if rng.random() < 0.02:
                codes = ["EMPTY"]
                prompt = _text(rng, 1, 3)
            else:
                k = rng.choices([1, 2, 3], weights=[70, 25, 5])[0]
                codes = pick_codes(k)
                prompt = _text(rng, 4, 25)
            correctness = rng.choices([0.0, 0.5, 1.0], weights=[15, 35, 50])[0]
            correctness_sum += correctness
            turn = {
                "prompt": prompt,
                "response": _text(rng, 15, 90),
                "codes": codes,
                "correctness": correctness,
            }
            if rng.random() < 0.9:
                turn["relevance"] = round(rng.uniform(0.25, 1.0), 3)
            turns.append(turn)
        base = correctness_sum / count
        score = min(1.0, max(0.0, round(base * 0.7 + rng.uniform(0.0, 0.3), 2)))
        conversations.append({"student": alias, "task": task_id, "score": score, "turns": turns})

    return {
        "schema": list(REFERENCE_SCHEMA),
        "students": students,
        "tasks": tasks,
        "conversations": conversations,
    }


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Write the fixture corpus to a JSON file.")
    parser.add_argument("out", help="output path")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    args = parser.parse_args(argv)
    document = generate_fixture(seed=args.seed)
    with open(args.out, "w", encoding="utf-8") as handle:
        json.dump(document, handle, indent=1)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
