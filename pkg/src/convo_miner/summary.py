"""Macro-level summaries: grouping, category distributions, metric bars.

Groups partition the selected students (by a background attribute or score
band) or the selected tasks (by task type). A group's distribution counts
every (turn, code) assignment in the group's selected conversations - a turn
with k codes contributes k counts - bucketed into the six cognitive stages
plus the two ChatGPT-proficiency categories, then normalized. The three
metric bars are mean information gain, mean response token length, and mean
conversation score.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .model import (
    BACKGROUND_ATTRIBUTES,
    Conversation,
    Corpus,
    ExperienceLevel,
    Selection,
    SUMMARY_CATEGORIES,
)

__all__ = [
    "GroupingMode",
    "UnknownGroupKeyError",
    "GroupSummary",
    "MemberRow",
    "SCORE_BANDS",
    "group_members",
    "summarize_group",
    "member_rows",
    "sort_members",
    "summary_document",
]


class GroupingMode(str, Enum):
    STUDENT = "student_grouping"
    TASK = "task_grouping"


class UnknownGroupKeyError(ValueError):
    pass


#: Score bands used when grouping students by performance; the thresholds
#: mirror the "below 0.5" / "above 0.8" cut-offs instructors reach for.
SCORE_BANDS: tuple[tuple[str, float, float], ...] = (
    ("0.0-0.5", 0.0, 0.5),
    ("0.5-0.8", 0.5, 0.8),
    ("0.8-1.0", 0.8, 1.0),
)

STUDENT_GROUP_KEYS = BACKGROUND_ATTRIBUTES + ("score_band",)


def _score_band(score: float) -> str:
    for name, lo, hi in SCORE_BANDS:
        if lo <= score < hi:
            return name
    return SCORE_BANDS[-1][0]  # 1.0 falls in the closed top band


@dataclass(frozen=True)
class GroupSummary:
    group_key: str
    grouping_mode: GroupingMode
    members: tuple[str, ...]
    category_distribution: dict[str, float]
    mean_ig: float
    mean_rl: float
    mean_score: float


@dataclass(frozen=True)
class MemberRow:
    member: str
    category_distribution: dict[str, float]
    mean_ig: float
    mean_rl: float
    mean_score: float


def group_members(
    corpus: Corpus,
    selection: Selection,
    mode: GroupingMode,
    group_by: str | None = None,
) -> list[tuple[str, tuple[str, ...]]]:
    """Partition the selected students or tasks; deterministic group order
    (ascending attribute value), empty groups omitted."""
    if mode is GroupingMode.TASK:
        if group_by not in (None, "task_type"):
            raise UnknownGroupKeyError(f"task grouping only supports task_type, got {group_by!r}")
        buckets: dict[str, list[str]] = {}
        for task in corpus.tasks:
            if task.id in selection.tasks:
                buckets.setdefault(task.task_type, []).append(task.id)
        return [(key, tuple(sorted(buckets[key]))) for key in sorted(buckets)]

    group_by = group_by or "dv_experience"
    if group_by not in STUDENT_GROUP_KEYS:
        raise UnknownGroupKeyError(
            f"unknown student group key {group_by!r}; expected one of {sorted(STUDENT_GROUP_KEYS)}"
        )

    if group_by == "score_band":
        order = [name for name, _, _ in SCORE_BANDS]
        key_of = lambda student: _score_band(student.avg_score)
    else:
        order = [level.value for level in ExperienceLevel]
        key_of = lambda student: student.background(group_by).value

    buckets = {}
    for student in corpus.students:
        if student.alias in selection.students:
            buckets.setdefault(key_of(student), []).append(student.alias)
    return [(key, tuple(sorted(buckets[key]))) for key in order if key in buckets]


def _group_conversations(
    selection: Selection, mode: GroupingMode, members: Iterable[str]
) -> list[Conversation]:
    member_set = set(members)
    if mode is GroupingMode.TASK:
        return [c for c in selection.conversations if c.task in member_set]
    return [c for c in selection.conversations if c.student in member_set]


def _distribution_and_means(
    corpus: Corpus, conversations: Sequence[Conversation]
) -> tuple[dict[str, float], float, float, float]:
    counts = {cat: 0 for cat in SUMMARY_CATEGORIES}
    ig_sum = 0.0
    rl_sum = 0.0
    turn_count = 0
    for conv in conversations:
        for turn in conv.turns:
            turn_count += 1
            ig_sum += turn.information_gain
            rl_sum += turn.response_length
            for code_id in turn.codes:
                counts[corpus.schema.by_id[code_id].summary_category] += 1

    total_codes = sum(counts.values())
    if total_codes:
        distribution = {cat: counts[cat] / total_codes for cat in SUMMARY_CATEGORIES}
    else:
        distribution = {cat: 0.0 for cat in SUMMARY_CATEGORIES}
    mean_ig = ig_sum / turn_count if turn_count else 0.0
    mean_rl = rl_sum / turn_count if turn_count else 0.0
    mean_score = (
        sum(c.score for c in conversations) / len(conversations) if conversations else 0.0
    )
    return distribution, mean_ig, mean_rl, mean_score


def summarize_group(
    corpus: Corpus,
    selection: Selection,
    mode: GroupingMode,
    group_key: str,
    members: Sequence[str],
) -> GroupSummary:
    conversations = _group_conversations(selection, mode, members)
    distribution, mean_ig, mean_rl, mean_score = _distribution_and_means(corpus, conversations)
    return GroupSummary(
        group_key=group_key,
        grouping_mode=mode,
        members=tuple(members),
        category_distribution=distribution,
        mean_ig=mean_ig,
        mean_rl=mean_rl,
        mean_score=mean_score,
    )


def member_rows(
    corpus: Corpus,
    selection: Selection,
    mode: GroupingMode,
    members: Sequence[str],
) -> list[MemberRow]:
    rows = []
    for member in members:
        conversations = _group_conversations(selection, mode, [member])
        distribution, mean_ig, mean_rl, mean_score = _distribution_and_means(corpus, conversations)
        rows.append(
            MemberRow(
                member=member,
                category_distribution=distribution,
                mean_ig=mean_ig,
                mean_rl=mean_rl,
                mean_score=mean_score,
            )
        )
    return rows


_MEMBER_SORT_KEYS = {
    "mean_score": lambda row: row.mean_score,
    "mean_ig": lambda row: row.mean_ig,
    "mean_rl": lambda row: row.mean_rl,
}


def sort_members(rows: Sequence[MemberRow], key: str, direction: str = "asc") -> list[MemberRow]:
    """Stable sort with an alphabetical member-id tiebreak."""
    if key not in _MEMBER_SORT_KEYS:
        raise ValueError(f"unknown member sort key {key!r}; expected one of {sorted(_MEMBER_SORT_KEYS)}")
    if direction not in ("asc", "desc"):
        raise ValueError(f"direction must be 'asc' or 'desc', got {direction!r}")
    by_id = sorted(rows, key=lambda row: row.member)
    return sorted(by_id, key=_MEMBER_SORT_KEYS[key], reverse=direction == "desc")


def summary_document(
    corpus: Corpus,
    selection: Selection,
    mode: GroupingMode,
    group_by: str | None = None,
) -> dict:
    """JSON-ready summary for the whole selection under one grouping."""
    groups = []
    for group_key, members in group_members(corpus, selection, mode, group_by):
        summary = summarize_group(corpus, selection, mode, group_key, members)
        rows = member_rows(corpus, selection, mode, members)
        groups.append(
            {
                "key": summary.group_key,
                "mode": summary.grouping_mode.value,
                "members": list(summary.members),
                "distribution": summary.category_distribution,
                "mean_ig": summary.mean_ig,
                "mean_rl": summary.mean_rl,
                "mean_score": summary.mean_score,
                "rows": [
                    {
                        "member": row.member,
                        "distribution": row.category_distribution,
                        "mean_ig": row.mean_ig,
                        "mean_rl": row.mean_rl,
                        "mean_score": row.mean_score,
                    }
                    for row in rows
                ],
            }
        )
    return {"groups": groups}
