"""Mining of interaction patterns from coded conversations.

Two pattern kinds are mined per conversation:

* ordered code sequences: subsequences of the turn stream (gaps allowed,
  order preserved, one code per turn per position, so a multi-coded turn
  can serve one position only);
* unordered code sets: subsets of the union of codes in the conversation.

Support counts distinct conversations containing a pattern (occurrence
multiplicity inside one conversation does not matter), which keeps the
per-pattern average score well defined.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterable, Sequence

from .model import Conversation

__all__ = [
    "PatternKind",
    "Pattern",
    "PatternCatalog",
    "MiningParams",
    "EmptySelectionError",
    "extract_sequences",
    "extract_sets",
    "mine_patterns",
    "sort_patterns",
    "match_pattern",
]


class EmptySelectionError(ValueError):
    """Mining requires at least one conversation."""


class PatternKind(str, Enum):
    SEQUENCE = "sequence"
    SET = "set"


@dataclass(frozen=True)
class MiningParams:
    max_seq_len: int = 4
    max_set_size: int = 3
    min_support: int = 2

    def __post_init__(self) -> None:
        for name in ("max_seq_len", "max_set_size", "min_support"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")

    def to_dict(self) -> dict:
        return {
            "max_seq_len": self.max_seq_len,
            "max_set_size": self.max_set_size,
            "min_support": self.min_support,
        }

    @classmethod
    def from_dict(cls, raw: dict | None) -> "MiningParams":
        if raw is None:
            return cls()
        known = {"max_seq_len", "max_set_size", "min_support"}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown mining params: {sorted(unknown)}")
        defaults = cls()
        return cls(
            max_seq_len=int(raw.get("max_seq_len", defaults.max_seq_len)),
            max_set_size=int(raw.get("max_set_size", defaults.max_set_size)),
            min_support=int(raw.get("min_support", defaults.min_support)),
        )


@dataclass(frozen=True)
class Pattern:
    """One mined pattern with its support statistics.

    ``codes`` is the ordered code list for sequences and the sorted member
    list for sets. ``supporters`` are (student, task) conversation keys.
    """

    kind: PatternKind
    codes: tuple[str, ...]
    support: int
    avg_score: float
    supporters: tuple[tuple[str, str], ...]

    @property
    def length(self) -> int:
        return len(self.codes)

    @classmethod
    def query(cls, kind: PatternKind | str, codes: Sequence[str]) -> "Pattern":
        """Pattern used purely for matching/highlighting, with empty stats."""
        kind = PatternKind(kind)
        ordered = tuple(sorted(codes)) if kind is PatternKind.SET else tuple(codes)
        if not ordered:
            raise ValueError("pattern codes must be non-empty")
        return cls(kind=kind, codes=ordered, support=0, avg_score=0.0, supporters=())

    def to_row(self) -> dict:
        return {
            "kind": self.kind.value,
            "codes": list(self.codes),
            "L": self.length,
            "C": self.support,
            "avg": self.avg_score,
            "supporters": [list(key) for key in self.supporters],
        }


@dataclass(frozen=True)
class PatternCatalog:
    patterns: tuple[Pattern, ...]
    params: MiningParams


def extract_sequences(conversation: Conversation, max_seq_len: int) -> frozenset[tuple[str, ...]]:
    """All distinct ordered code sequences up to ``max_seq_len``.

    Enumerates each distinct sequence exactly once by extending every
    sequence from the earliest turn index where it can end (extensions from
    the earliest embedding dominate all later ones).
    """
    if max_seq_len < 1:
        raise ValueError("max_seq_len must be >= 1")
    turns = [turn.code_set for turn in conversation.turns]
    n = len(turns)
    if n == 0:
        return frozenset()

    # first_at[i][code]: smallest j >= i with code in turns[j]
    first_at: list[dict[str, int]] = [{} for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        nxt = dict(first_at[i + 1])
        for code in turns[i]:
            nxt[code] = i
        first_at[i] = nxt

    found: set[tuple[str, ...]] = set()
    frontier: dict[tuple[str, ...], int] = {(code,): i for code, i in first_at[0].items()}
    length = 1
    while frontier:
        found.update(frontier)
        if length == max_seq_len:
            break
        extended: dict[tuple[str, ...], int] = {}
        for seq, end in frontier.items():
            for code, i in first_at[end + 1].items():
                extended[seq + (code,)] = i
        frontier = extended
        length += 1
    return frozenset(found)


def extract_sets(conversation: Conversation, max_set_size: int) -> frozenset[frozenset[str]]:
    """All non-empty subsets of the conversation's code union, capped in size."""
    if max_set_size < 1:
        raise ValueError("max_set_size must be >= 1")
    union = sorted(conversation.code_union)
    out: set[frozenset[str]] = set()
    for size in range(1, min(max_set_size, len(union)) + 1):
        for combo in combinations(union, size):
            out.add(frozenset(combo))
    return frozenset(out)


def mine_patterns(conversations: Sequence[Conversation], params: MiningParams | None = None) -> PatternCatalog:
    """Mine both pattern kinds over a selection and keep those meeting
    ``min_support``; output order is deterministic (kind, length, codes)."""
    if not conversations:
        raise EmptySelectionError("cannot mine an empty selection")
    params = params or MiningParams()

    supporters: dict[tuple[PatternKind, tuple[str, ...]], set[tuple[str, str]]] = {}
    scores: dict[tuple[str, str], float] = {}
    for conv in conversations:
        scores[conv.key] = conv.score
        for seq in extract_sequences(conv, params.max_seq_len):
            supporters.setdefault((PatternKind.SEQUENCE, seq), set()).add(conv.key)
        for code_set in extract_sets(conv, params.max_set_size):
            key = (PatternKind.SET, tuple(sorted(code_set)))
            supporters.setdefault(key, set()).add(conv.key)

    patterns = []
    for (kind, codes), conv_keys in supporters.items():
        if len(conv_keys) < params.min_support:
            continue
        ordered = tuple(sorted(conv_keys))
        avg = sum(scores[k] for k in ordered) / len(ordered)
        patterns.append(
            Pattern(kind=kind, codes=codes, support=len(ordered), avg_score=avg, supporters=ordered)
        )
    patterns.sort(key=lambda p: (p.kind.value, p.length, p.codes))
    return PatternCatalog(patterns=tuple(patterns), params=params)


_SORT_KEYS = {
    "length": lambda p: p.length,
    "support": lambda p: p.support,
    "avg_score": lambda p: p.avg_score,
}


def sort_patterns(catalog: PatternCatalog, key: str, direction: str = "desc") -> list[Pattern]:
    """Stable sort of the catalog; ties keep the catalog's deterministic order."""
    if key not in _SORT_KEYS:
        raise ValueError(f"unknown sort key {key!r}; expected one of {sorted(_SORT_KEYS)}")
    if direction not in ("asc", "desc"):
        raise ValueError(f"direction must be 'asc' or 'desc', got {direction!r}")
    return sorted(catalog.patterns, key=_SORT_KEYS[key], reverse=direction == "desc")


def _contains_sequence(conversation: Conversation, codes: Sequence[str]) -> bool:
    position = 0
    for turn in conversation.turns:
        if position < len(codes) and codes[position] in turn.code_set:
            position += 1
    return position == len(codes)


def match_pattern(pattern: Pattern, conversation: Conversation) -> bool:
    """True iff the conversation contains the pattern, under the same
    semantics the extractors use (and therefore agreeing with supporter
    membership from mining)."""
    if pattern.kind is PatternKind.SEQUENCE:
        return _contains_sequence(conversation, pattern.codes)
    return frozenset(pattern.codes) <= conversation.code_union
