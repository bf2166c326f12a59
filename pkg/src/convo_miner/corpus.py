"""Corpus ingestion, validation, serialization, filtering and overview stats.

The corpus file is UTF-8 JSON with top-level keys ``schema``, ``students``,
``tasks`` and ``conversations`` (see README for the field-by-field layout).
Loading validates the document, computes every derived field (token lengths,
relevance fallbacks, information gain, per-student and per-task average
scores) and returns an immutable :class:`~convo_miner.model.Corpus`.

Structural problems (bad JSON, missing or mistyped fields) raise
:class:`CorpusParseError` with a locus; semantic problems (dangling refs,
duplicate ids, out-of-range values) are collected into one
:class:`CorpusValidationError` naming every offending entity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Any, Optional, Union

from . import metrics
from .model import (
    BACKGROUND_ATTRIBUTES,
    BloomLevel,
    CodeCategory,
    CodeDefinition,
    CodeSchema,
    Conversation,
    Corpus,
    ExperienceLevel,
    FilterCriteria,
    Selection,
    Student,
    Task,
    Turn,
)

__all__ = [
    "CorpusError",
    "CorpusParseError",
    "CorpusValidationError",
    "load_corpus",
    "load_corpus_path",
    "serialize_corpus",
    "apply_filter",
    "background_distributions",
    "BackgroundDistributions",
    "SCORE_DENSITY_BINS",
]

SCORE_DENSITY_BINS = 10

CORRECTNESS_VALUES = (0.0, 0.5, 1.0)


class CorpusError(Exception):
    pass


class CorpusParseError(CorpusError):
    """Malformed corpus file; message carries the line/field locus."""


class CorpusValidationError(CorpusError):
    """Well-formed file that violates corpus invariants."""

    def __init__(self, findings: list[str]):
        self.findings = findings
        preview = "; ".join(findings[:3])
        more = f" (+{len(findings) - 3} more)" if len(findings) > 3 else ""
        super().__init__(f"{len(findings)} validation finding(s): {preview}{more}")


# -- structural helpers -------------------------------------------------------


def _require(obj: dict, key: str, path: str) -> Any:
    if not isinstance(obj, dict):
        raise CorpusParseError(f"{path}: expected an object")
    if key not in obj:
        raise CorpusParseError(f"{path}: missing key {key!r}")
    return obj[key]


def _as_list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise CorpusParseError(f"{path}: expected a list")
    return value


def _as_str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise CorpusParseError(f"{path}: expected a string")
    return value


def _as_number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise CorpusParseError(f"{path}: expected a number")
    return float(value)


# -- loading ------------------------------------------------------------------


def load_corpus(
    source: Union[bytes, str, IO],
    ig_mode: str = "inclusive",
    alpha: float = 1.0,
) -> Corpus:
    """Parse, validate and enrich a corpus document.

    ``source`` may be raw bytes, JSON text, or a readable file object.
    ``ig_mode``/``alpha`` select the information-gain cumulative reading.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw

    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise CorpusParseError("top level: expected an object")
    return corpus_from_document(doc, ig_mode=ig_mode, alpha=alpha)


def load_corpus_path(path: str, ig_mode: str = "inclusive", alpha: float = 1.0) -> Corpus:
    with open(path, "rb") as handle:
        return load_corpus(handle, ig_mode=ig_mode, alpha=alpha)


def corpus_from_document(doc: dict, ig_mode: str = "inclusive", alpha: float = 1.0) -> Corpus:
    findings: list[str] = []

    schema = _parse_schema(_as_list(_require(doc, "schema", "top level"), "schema"), findings)
    background_mapping = _parse_background_mapping(doc.get("background_mapping"))
    raw_students = _parse_students(
        _as_list(_require(doc, "students", "top level"), "students"), background_mapping, findings
    )
    raw_tasks = _parse_tasks(_as_list(_require(doc, "tasks", "top level"), "tasks"), findings)
    raw_conversations = _parse_conversations(
        _as_list(_require(doc, "conversations", "top level"), "conversations")
    )

    _validate_refs(schema, raw_students, raw_tasks, raw_conversations, findings)
    if findings:
        raise CorpusValidationError(findings)

    return _enrich(schema, raw_students, raw_tasks, raw_conversations, ig_mode, alpha)


def _parse_background_mapping(raw: Any) -> dict[str, str]:
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise CorpusParseError("background_mapping: expected an object of string pairs")
    mapping = {}
    for key, value in raw.items():
        mapping[_as_str(key, "background_mapping key")] = _as_str(value, f"background_mapping[{key!r}]")
    return mapping


def _parse_schema(entries: list, findings: list[str]) -> CodeSchema:
    codes = []
    seen_ids: set[str] = set()
    seen_abbrs: set[str] = set()
    for i, entry in enumerate(entries):
        path = f"schema[{i}]"
        code_id = _as_str(_require(entry, "id", path), f"{path}.id")
        label = _as_str(_require(entry, "label", path), f"{path}.label")
        abbr = _as_str(_require(entry, "abbr", path), f"{path}.abbr")
        category_raw = _as_str(_require(entry, "category", path), f"{path}.category")
        bloom_raw = entry.get("bloom")

        try:
            category = CodeCategory(category_raw)
        except ValueError:
            findings.append(f"code {code_id!r}: unknown category {category_raw!r}")
            continue
        bloom: Optional[BloomLevel] = None
        if bloom_raw is not None:
            try:
                bloom = BloomLevel(_as_str(bloom_raw, f"{path}.bloom"))
            except ValueError:
                findings.append(f"code {code_id!r}: unknown bloom level {bloom_raw!r}")
                continue

        if code_id in seen_ids:
            findings.append(f"code {code_id!r}: duplicate id")
        seen_ids.add(code_id)
        if abbr in seen_abbrs:
            findings.append(f"code {code_id!r}: duplicate abbreviation {abbr!r}")
        seen_abbrs.add(abbr)
        if not 2 <= len(abbr) <= 4:
            findings.append(f"code {code_id!r}: abbreviation {abbr!r} must be 2-4 characters")
        if (category is CodeCategory.LEARNING) != (bloom is not None):
            findings.append(
                f"code {code_id!r}: bloom level must be present exactly for learning codes"
            )
        codes.append(CodeDefinition(code_id, label, abbr, category, bloom))

    if not codes:
        findings.append("schema: must contain at least one code")
    return CodeSchema(codes=tuple(codes))


def _parse_students(entries: list, mapping: dict[str, str], findings: list[str]) -> list[Student]:
    students = []
    seen: set[str] = set()
    for i, entry in enumerate(entries):
        path = f"students[{i}]"
        alias = _as_str(_require(entry, "alias", path), f"{path}.alias")
        if alias in seen:
            findings.append(f"student {alias!r}: duplicate alias")
        seen.add(alias)

        levels = {}
        bad = False
        for attr in BACKGROUND_ATTRIBUTES:
            raw = _as_str(_require(entry, attr, path), f"{path}.{attr}")
            raw = mapping.get(raw, raw)
            try:
                levels[attr] = ExperienceLevel(raw)
            except ValueError:
                findings.append(f"student {alias!r}: unknown {attr} value {raw!r}")
                bad = True
        if not bad:
            students.append(Student(alias=alias, **levels))
    return students


def _parse_tasks(entries: list, findings: list[str]) -> list[Task]:
    tasks = []
    seen: set[str] = set()
    for i, entry in enumerate(entries):
        path = f"tasks[{i}]"
        task_id = _as_str(_require(entry, "id", path), f"{path}.id")
        task_type = _as_str(_require(entry, "type", path), f"{path}.type")
        level_raw = _as_str(_require(entry, "cognitive_level", path), f"{path}.cognitive_level")
        difficulty = _as_number(_require(entry, "difficulty", path), f"{path}.difficulty")
        description = _as_str(_require(entry, "description", path), f"{path}.description")

        if task_id in seen:
            findings.append(f"task {task_id!r}: duplicate id")
        seen.add(task_id)
        try:
            level = BloomLevel(level_raw)
        except ValueError:
            findings.append(f"task {task_id!r}: unknown cognitive level {level_raw!r}")
            continue
        if difficulty != int(difficulty) or not 1 <= difficulty <= 5:
            findings.append(f"task {task_id!r}: difficulty {difficulty} not an integer in [1, 5]")
            continue
        tasks.append(Task(task_id, task_type, level, int(difficulty), description))
    return tasks


@dataclass
class _RawTurn:
    prompt: str
    response: str
    codes: tuple[str, ...]
    relevance: Optional[float]
    correctness: float


@dataclass
class _RawConversation:
    student: str
    task: str
    score: float
    turns: list[_RawTurn]

    def key(self) -> tuple[str, str]:
        return (self.student, self.task)


def _parse_conversations(entries: list) -> list[_RawConversation]:
    conversations = []
    for i, entry in enumerate(entries):
        path = f"conversations[{i}]"
        student = _as_str(_require(entry, "student", path), f"{path}.student")
        task = _as_str(_require(entry, "task", path), f"{path}.task")
        score = _as_number(_require(entry, "score", path), f"{path}.score")
        turns = []
        for j, raw_turn in enumerate(_as_list(_require(entry, "turns", path), f"{path}.turns")):
            turn_path = f"{path}.turns[{j}]"
            prompt = _as_str(_require(raw_turn, "prompt", turn_path), f"{turn_path}.prompt")
            response = _as_str(_require(raw_turn, "response", turn_path), f"{turn_path}.response")
            codes_raw = _as_list(_require(raw_turn, "codes", turn_path), f"{turn_path}.codes")
            codes = tuple(dict.fromkeys(_as_str(c, f"{turn_path}.codes") for c in codes_raw))
            relevance = raw_turn.get("relevance")
            if relevance is not None:
                relevance = _as_number(relevance, f"{turn_path}.relevance")
            correctness = _as_number(_require(raw_turn, "correctness", turn_path), f"{turn_path}.correctness")
            turns.append(_RawTurn(prompt, response, codes, relevance, correctness))
        conversations.append(_RawConversation(student, task, score, turns))
    return conversations


def _validate_refs(
    schema: CodeSchema,
    students: list[Student],
    tasks: list[Task],
    conversations: list[_RawConversation],
    findings: list[str],
) -> None:
    aliases = {s.alias for s in students}
    task_ids = {t.id for t in tasks}
    seen_pairs: set[tuple[str, str]] = set()

    for conv in conversations:
        name = f"conversation {conv.student}/{conv.task}"
        if conv.student not in aliases:
            findings.append(f"{name}: unknown student {conv.student!r}")
        if conv.task not in task_ids:
            findings.append(f"{name}: unknown task {conv.task!r}")
        if conv.key() in seen_pairs:
            findings.append(f"{name}: duplicate (student, task) pair")
        seen_pairs.add(conv.key())
        if not 0.0 <= conv.score <= 1.0:
            findings.append(f"{name}: score {conv.score} outside [0, 1]")
        if not conv.turns:
            findings.append(f"{name}: has no turns")
        for j, turn in enumerate(conv.turns):
            where = f"{name} turn {j}"
            if not turn.codes:
                findings.append(f"{where}: has no codes (uncodable prompts take the reserved EMPTY code)")
            for code in turn.codes:
                if code not in schema:
                    findings.append(f"{where}: code {code!r} not in schema")
            if turn.correctness not in CORRECTNESS_VALUES:
                findings.append(f"{where}: correctness {turn.correctness} not in {{0, 0.5, 1}}")
            if turn.relevance is not None and not 0.0 <= turn.relevance <= 1.0:
                findings.append(f"{where}: relevance {turn.relevance} outside [0, 1]")


def _enrich(
    schema: CodeSchema,
    students: list[Student],
    tasks: list[Task],
    raw_conversations: list[_RawConversation],
    ig_mode: str,
    alpha: float,
) -> Corpus:
    conversations = []
    for raw in raw_conversations:
        relevances = []
        fallback_flags = []
        for turn in raw.turns:
            if turn.relevance is None:
                relevances.append(metrics.relevance_fallback(turn.prompt, turn.response))
                fallback_flags.append(True)
            else:
                relevances.append(turn.relevance)
                fallback_flags.append(False)
        gains = metrics.information_gain(
            [t.response for t in raw.turns],
            relevances,
            [t.correctness for t in raw.turns],
            mode=ig_mode,
            alpha=alpha,
        )
        turns = tuple(
            Turn(
                index=j,
                prompt_text=t.prompt,
                response_text=t.response,
                codes=t.codes,
                relevance=relevances[j],
                correctness=t.correctness,
                relevance_is_fallback=fallback_flags[j],
                response_length=metrics.response_length(t.response),
                information_gain=gains[j],
            )
            for j, t in enumerate(raw.turns)
        )
        conversations.append(Conversation(raw.student, raw.task, raw.score, turns))

    by_student: dict[str, list[float]] = {}
    by_task: dict[str, list[float]] = {}
    for conv in conversations:
        by_student.setdefault(conv.student, []).append(conv.score)
        by_task.setdefault(conv.task, []).append(conv.score)

    def _mean(scores: list[float]) -> float:
        return sum(scores) / len(scores) if scores else 0.0

    enriched_students = tuple(
        Student(
            alias=s.alias,
            dv_experience=s.dv_experience,
            cs_background=s.cs_background,
            gpt_familiarity=s.gpt_familiarity,
            avg_score=_mean(by_student.get(s.alias, [])),
        )
        for s in students
    )
    enriched_tasks = tuple(
        Task(
            id=t.id,
            task_type=t.task_type,
            cognitive_level=t.cognitive_level,
            difficulty=t.difficulty,
            description=t.description,
            avg_score=_mean(by_task.get(t.id, [])),
        )
        for t in tasks
    )
    return Corpus(
        schema=schema,
        students=enriched_students,
        tasks=enriched_tasks,
        conversations=tuple(conversations),
    )


# -- serialization ------------------------------------------------------------


def serialize_corpus(corpus: Corpus) -> dict:
    """Original-field document for the corpus; derived fields are omitted so
    loading the result reproduces the corpus exactly (fallback-scored
    relevance is recomputed rather than persisted)."""
    schema = []
    for code in corpus.schema.codes:
        entry: dict[str, Any] = {
            "id": code.id,
            "label": code.label,
            "abbr": code.abbreviation,
            "category": code.category.value,
        }
        if code.bloom_level is not None:
            entry["bloom"] = code.bloom_level.value
        schema.append(entry)

    students = [
        {
            "alias": s.alias,
            "dv_experience": s.dv_experience.value,
            "cs_background": s.cs_background.value,
            "gpt_familiarity": s.gpt_familiarity.value,
        }
        for s in corpus.students
    ]
    tasks = [
        {
            "id": t.id,
            "type": t.task_type,
            "cognitive_level": t.cognitive_level.value,
            "difficulty": t.difficulty,
            "description": t.description,
        }
        for t in corpus.tasks
    ]
    conversations = []
    for conv in corpus.conversations:
        turns = []
        for turn in conv.turns:
            entry = {
                "prompt": turn.prompt_text,
                "response": turn.response_text,
                "codes": list(turn.codes),
                "correctness": turn.correctness,
            }
            if not turn.relevance_is_fallback:
                entry["relevance"] = turn.relevance
            turns.append(entry)
        conversations.append(
            {"student": conv.student, "task": conv.task, "score": conv.score, "turns": turns}
        )
    return {"schema": schema, "students": students, "tasks": tasks, "conversations": conversations}


# -- filtering and overview distributions -------------------------------------


def apply_filter(corpus: Corpus, criteria: FilterCriteria) -> Selection:
    """Conjunction of all provided criteria; a conversation is kept iff both
    its student and its task pass. Over-constrained criteria yield an empty
    (still valid) selection."""
    students = frozenset(s.alias for s in corpus.students if criteria.matches_student(s))
    tasks = frozenset(t.id for t in corpus.tasks if criteria.matches_task(t))
    conversations = tuple(
        sorted(
            (c for c in corpus.conversations if c.student in students and c.task in tasks),
            key=lambda c: c.key,
        )
    )
    return Selection(students=students, tasks=tasks, conversations=conversations)


def _density_bin(score: float) -> int:
    return min(int(score * SCORE_DENSITY_BINS), SCORE_DENSITY_BINS - 1)


@dataclass(frozen=True)
class BackgroundDistributions:
    """Histogram bundle behind the filter view, over the selected subset."""

    task_difficulty: dict[int, int]
    task_types: dict[str, int]
    task_score_density: tuple[int, ...]
    student_backgrounds: dict[str, dict[str, int]]
    student_score_density: tuple[int, ...]
    task_count: int
    student_count: int

    def to_dict(self) -> dict:
        return {
            "tasks": {
                "count": self.task_count,
                "difficulty": {str(k): v for k, v in self.task_difficulty.items()},
                "types": dict(self.task_types),
                "score_density": list(self.task_score_density),
            },
            "students": {
                "count": self.student_count,
                "backgrounds": {k: dict(v) for k, v in self.student_backgrounds.items()},
                "score_density": list(self.student_score_density),
            },
        }


def background_distributions(corpus: Corpus, criteria: FilterCriteria) -> BackgroundDistributions:
    selection = apply_filter(corpus, criteria)
    selected_tasks = [t for t in corpus.tasks if t.id in selection.tasks]
    selected_students = [s for s in corpus.students if s.alias in selection.students]

    difficulty = {d: 0 for d in range(1, 6)}
    # Keep every type the corpus knows about, so empty bars stay visible.
    types = {t: 0 for t in sorted({t.task_type for t in corpus.tasks})}
    task_density = [0] * SCORE_DENSITY_BINS
    for task in selected_tasks:
        difficulty[task.difficulty] += 1
        types[task.task_type] += 1
        task_density[_density_bin(task.avg_score)] += 1

    backgrounds = {
        attr: {level.value: 0 for level in ExperienceLevel} for attr in BACKGROUND_ATTRIBUTES
    }
    student_density = [0] * SCORE_DENSITY_BINS
    for student in selected_students:
        for attr in BACKGROUND_ATTRIBUTES:
            backgrounds[attr][student.background(attr).value] += 1
        student_density[_density_bin(student.avg_score)] += 1

    return BackgroundDistributions(
        task_difficulty=difficulty,
        task_types=types,
        task_score_density=tuple(task_density),
        student_backgrounds=backgrounds,
        student_score_density=tuple(student_density),
        task_count=len(selected_tasks),
        student_count=len(selected_students),
    )
