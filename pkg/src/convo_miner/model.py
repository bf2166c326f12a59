"""Core domain model: code schema, students, tasks, conversations, filters.

Everything here is immutable after construction. Loaders build these values
once (computing the derived fields in the process) and downstream analytics
treat them as read-only snapshots, so concurrent readers never need locks.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from enum import Enum
from functools import cached_property
from typing import Iterable, Optional


class CodeCategory(str, Enum):
    """Top-level split of the prompt-code vocabulary."""

    LEARNING = "learning"
    CHATGPT_EFFECTIVE = "chatgpt_effective"
    CHATGPT_OTHER = "chatgpt_other"


class BloomLevel(str, Enum):
    """Cognitive stages, ordered from lowest to highest."""

    REMEMBER = "remember"
    UNDERSTAND = "understand"
    APPLY = "apply"
    ANALYZE = "analyze"
    EVALUATE = "evaluate"
    CREATE = "create"

    @property
    def rank(self) -> int:
        return _BLOOM_ORDER[self]


_BLOOM_ORDER = {level: i for i, level in enumerate(BloomLevel)}


class ExperienceLevel(str, Enum):
    """Ordinal background attribute (survey answers are mapped onto these)."""

    NONE = "none"
    SOME = "some"
    EXPERIENCED = "experienced"

    @property
    def rank(self) -> int:
        return _EXPERIENCE_ORDER[self]


_EXPERIENCE_ORDER = {level: i for i, level in enumerate(ExperienceLevel)}

#: Reserved code id assigned to prompts that carry no codable content.
#: Keeps the "every turn has at least one code" invariant without empty sets.
EMPTY_CODE_ID = "EMPTY"

#: The eight category buckets used by group summaries: six cognitive stages
#: for learning codes, plus the two ChatGPT-proficiency buckets.
SUMMARY_CATEGORIES: tuple[str, ...] = tuple(level.value for level in BloomLevel) + (
    CodeCategory.CHATGPT_EFFECTIVE.value,
    CodeCategory.CHATGPT_OTHER.value,
)


@dataclass(frozen=True)
class CodeDefinition:
    """One entry of the prompt-code vocabulary.

    ``bloom_level`` is present exactly when ``category`` is ``learning``.
    """

    id: str
    label: str
    abbreviation: str
    category: CodeCategory
    bloom_level: Optional[BloomLevel] = None

    @property
    def summary_category(self) -> str:
        """Bucket used by group summaries: bloom stage or ChatGPT split."""
        if self.category is CodeCategory.LEARNING:
            assert self.bloom_level is not None
            return self.bloom_level.value
        return self.category.value


@dataclass(frozen=True)
class CodeSchema:
    codes: tuple[CodeDefinition, ...]

    @cached_property
    def by_id(self) -> dict[str, CodeDefinition]:
        return {c.id: c for c in self.codes}

    @cached_property
    def by_abbreviation(self) -> dict[str, CodeDefinition]:
        return {c.abbreviation: c for c in self.codes}

    def __contains__(self, code_id: str) -> bool:
        return code_id in self.by_id

    def category_counts(self) -> dict[str, int]:
        counts = {cat.value: 0 for cat in CodeCategory}
        for code in self.codes:
            counts[code.category.value] += 1
        return counts


@dataclass(frozen=True)
class Student:
    alias: str
    dv_experience: ExperienceLevel
    cs_background: ExperienceLevel
    gpt_familiarity: ExperienceLevel
    avg_score: float = 0.0  # derived: mean of this student's conversation scores

    def background(self, attribute: str) -> ExperienceLevel:
        value = getattr(self, attribute, None)
        if not isinstance(value, ExperienceLevel):
            raise KeyError(f"unknown background attribute {attribute!r}")
        return value


#: Background attributes a student carries, in display order.
BACKGROUND_ATTRIBUTES: tuple[str, ...] = (
    "dv_experience",
    "cs_background",
    "gpt_familiarity",
)


@dataclass(frozen=True)
class Task:
    id: str
    task_type: str
    cognitive_level: BloomLevel
    difficulty: int
    description: str
    avg_score: float = 0.0  # derived: mean of this task's conversation scores


@dataclass(frozen=True)
class Turn:
    """One prompt-response exchange, with per-turn quality metrics.

    ``codes`` preserves the order they were listed in the source file (the
    first one is the turn's primary code); ``code_set`` is the order-free
    view used for merging and pattern matching. ``relevance_is_fallback``
    marks turns whose relevance was not ingested but computed by the
    term-overlap fallback scorer.
    """

    index: int
    prompt_text: str
    response_text: str
    codes: tuple[str, ...]
    relevance: float
    correctness: float
    relevance_is_fallback: bool = False
    response_length: int = 0  # derived: token count of the response
    information_gain: float = 0.0  # derived: KL novelty x relevance x correctness

    @property
    def code_set(self) -> frozenset[str]:
        return frozenset(self.codes)


@dataclass(frozen=True)
class Conversation:
    student: str
    task: str
    score: float
    turns: tuple[Turn, ...]

    @property
    def key(self) -> tuple[str, str]:
        return (self.student, self.task)

    @property
    def code_union(self) -> frozenset[str]:
        union: set[str] = set()
        for turn in self.turns:
            union.update(turn.codes)
        return frozenset(union)

    def code_path(self) -> tuple[frozenset[str], ...]:
        """Per-turn code sets, in turn order."""
        return tuple(turn.code_set for turn in self.turns)


@dataclass(frozen=True)
class Corpus:
    schema: CodeSchema
    students: tuple[Student, ...]
    tasks: tuple[Task, ...]
    conversations: tuple[Conversation, ...]

    @cached_property
    def students_by_alias(self) -> dict[str, Student]:
        return {s.alias: s for s in self.students}

    @cached_property
    def tasks_by_id(self) -> dict[str, Task]:
        return {t.id: t for t in self.tasks}

    @cached_property
    def conversations_by_key(self) -> dict[tuple[str, str], Conversation]:
        return {c.key: c for c in self.conversations}

    @property
    def turn_count(self) -> int:
        return sum(len(c.turns) for c in self.conversations)

    def conversation(self, student: str, task: str) -> Optional[Conversation]:
        return self.conversations_by_key.get((student, task))


def _check_interval(name: str, interval: Optional[tuple[float, float]]) -> None:
    if interval is None:
        return
    lo, hi = interval
    if lo > hi:
        raise ValueError(f"{name} interval is not well-ordered: [{lo}, {hi}]")


@dataclass(frozen=True)
class FilterCriteria:
    """Conjunction of optional constraints on students and tasks.

    Empty criteria select everything. Intervals are closed; ``score_range``
    constrains student average scores and ``task_score_range`` task average
    scores (the filter view has one score slider per overview panel).
    """

    task_ids: Optional[frozenset[str]] = None
    student_aliases: Optional[frozenset[str]] = None
    difficulty_range: Optional[tuple[float, float]] = None
    score_range: Optional[tuple[float, float]] = None
    task_score_range: Optional[tuple[float, float]] = None
    task_types: Optional[frozenset[str]] = None
    cognitive_levels: Optional[frozenset[BloomLevel]] = None
    dv_experience: Optional[frozenset[ExperienceLevel]] = None
    cs_background: Optional[frozenset[ExperienceLevel]] = None
    gpt_familiarity: Optional[frozenset[ExperienceLevel]] = None

    def __post_init__(self) -> None:
        _check_interval("difficulty_range", self.difficulty_range)
        _check_interval("score_range", self.score_range)
        _check_interval("task_score_range", self.task_score_range)

    def is_empty(self) -> bool:
        return all(getattr(self, f.name) is None for f in fields(self))

    def matches_student(self, student: Student) -> bool:
        if self.student_aliases is not None and student.alias not in self.student_aliases:
            return False
        if self.score_range is not None:
            lo, hi = self.score_range
            if not lo <= student.avg_score <= hi:
                return False
        for attr in BACKGROUND_ATTRIBUTES:
            allowed = getattr(self, attr)
            if allowed is not None and student.background(attr) not in allowed:
                return False
        return True

    def matches_task(self, task: Task) -> bool:
        if self.task_ids is not None and task.id not in self.task_ids:
            return False
        if self.difficulty_range is not None:
            lo, hi = self.difficulty_range
            if not lo <= task.difficulty <= hi:
                return False
        if self.task_score_range is not None:
            lo, hi = self.task_score_range
            if not lo <= task.avg_score <= hi:
                return False
        if self.task_types is not None and task.task_type not in self.task_types:
            return False
        if self.cognitive_levels is not None and task.cognitive_level not in self.cognitive_levels:
            return False
        return True

    def to_dict(self) -> dict:
        """JSON-ready form with sorted members; omits unset constraints."""
        out: dict = {}
        for name in ("task_ids", "student_aliases", "task_types"):
            value = getattr(self, name)
            if value is not None:
                out[name] = sorted(value)
        for name in ("difficulty_range", "score_range", "task_score_range"):
            value = getattr(self, name)
            if value is not None:
                out[name] = [value[0], value[1]]
        if self.cognitive_levels is not None:
            out["cognitive_levels"] = sorted(v.value for v in self.cognitive_levels)
        for attr in BACKGROUND_ATTRIBUTES:
            value = getattr(self, attr)
            if value is not None:
                out[attr] = sorted(v.value for v in value)
        return out

    @classmethod
    def from_dict(cls, raw: Optional[dict]) -> "FilterCriteria":
        """Parse a criteria object from a request body; strict on keys."""
        if raw is None:
            return cls()
        if not isinstance(raw, dict):
            raise ValueError("criteria must be an object")
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown criteria keys: {sorted(unknown)}")

        def interval(name: str) -> Optional[tuple[float, float]]:
            value = raw.get(name)
            if value is None:
                return None
            if not isinstance(value, (list, tuple)) or len(value) != 2:
                raise ValueError(f"{name} must be a [lo, hi] pair")
            return (float(value[0]), float(value[1]))

        def str_set(name: str) -> Optional[frozenset[str]]:
            value = raw.get(name)
            if value is None:
                return None
            return frozenset(str(v) for v in value)

        def enum_set(name: str, enum_cls) -> Optional[frozenset]:
            value = raw.get(name)
            if value is None:
                return None
            try:
                return frozenset(enum_cls(v) for v in value)
            except ValueError as exc:
                raise ValueError(f"bad value in {name}: {exc}") from exc

        return cls(
            task_ids=str_set("task_ids"),
            student_aliases=str_set("student_aliases"),
            difficulty_range=interval("difficulty_range"),
            score_range=interval("score_range"),
            task_score_range=interval("task_score_range"),
            task_types=str_set("task_types"),
            cognitive_levels=enum_set("cognitive_levels", BloomLevel),
            dv_experience=enum_set("dv_experience", ExperienceLevel),
            cs_background=enum_set("cs_background", ExperienceLevel),
            gpt_familiarity=enum_set("gpt_familiarity", ExperienceLevel),
        )


@dataclass(frozen=True)
class Selection:
    """Result of applying filter criteria to a corpus.

    ``students`` and ``tasks`` are the entities passing their side of the
    criteria; ``conversations`` are exactly the pairs where both sides pass,
    ordered by (student, task) for determinism.
    """

    students: frozenset[str]
    tasks: frozenset[str]
    conversations: tuple[Conversation, ...]

    @property
    def conversation_keys(self) -> frozenset[tuple[str, str]]:
        return frozenset(c.key for c in self.conversations)

    def __len__(self) -> int:
        return len(self.conversations)
