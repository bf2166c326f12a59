"""Per-turn response-quality metrics.

The novelty metric treats each response as a token frequency distribution P
and compares it against the cumulative distribution Q of the conversation's
responses so far; the KL divergence of P from Q, scaled by the turn's
relevance R and correctness C, quantifies how much new, useful information
the response contributed.

Two cumulative readings are supported:

* ``inclusive`` (default): Q covers responses 1..t including the current
  one. Every token of P then also appears in Q, so the divergence is finite
  without any smoothing, and the first turn always scores 0.
* ``exclusive_smoothed``: Q covers responses 1..t-1 only, add-alpha smoothed
  over the union vocabulary of the history and the current response.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

__all__ = [
    "tokenize",
    "TokenDistribution",
    "kl_divergence",
    "information_gain",
    "relevance_fallback",
]

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

Tokenizer = Callable[[str], list[str]]


def tokenize(text: str) -> list[str]:
    """Lowercased alphanumeric runs; punctuation and whitespace separate tokens."""
    return _TOKEN_RE.findall(text.lower())


def response_length(text: str, tokenizer: Tokenizer = tokenize) -> int:
    return len(tokenizer(text))


@dataclass(frozen=True)
class TokenDistribution:
    """Token counts plus their total; ``probability`` normalizes on demand."""

    counts: dict[str, int]
    total: int

    @classmethod
    def from_tokens(cls, tokens: Iterable[str]) -> "TokenDistribution":
        counts = dict(Counter(tokens))
        return cls(counts=counts, total=sum(counts.values()))

    def probability(self, token: str) -> float:
        if self.total == 0:
            return 0.0
        return self.counts.get(token, 0) / self.total


def kl_divergence(p: TokenDistribution, q_prob: Callable[[str], float]) -> float:
    """KL(P || Q) in nats over the support of P; clamped at 0 against
    float round-off (mathematically the sum is non-negative whenever Q is a
    distribution over a superset of P's support)."""
    if p.total == 0:
        return 0.0
    acc = 0.0
    for token, count in p.counts.items():
        p_i = count / p.total
        q_i = q_prob(token)
        acc += p_i * math.log(p_i / q_i)
    return max(acc, 0.0)


def information_gain(
    responses: Sequence[str],
    relevance: Sequence[float],
    correctness: Sequence[float],
    mode: str = "inclusive",
    alpha: float = 1.0,
    tokenizer: Tokenizer = tokenize,
) -> list[float]:
    """Per-turn information gain for one conversation's responses.

    ``relevance`` and ``correctness`` must be populated for every turn.
    Empty responses and turns with correctness 0 score exactly 0.
    """
    if not len(responses) == len(relevance) == len(correctness):
        raise ValueError("responses, relevance and correctness must align")
    if mode not in ("inclusive", "exclusive_smoothed"):
        raise ValueError(f"unknown information-gain mode {mode!r}")
    if mode == "exclusive_smoothed" and alpha <= 0:
        raise ValueError("alpha must be positive in exclusive_smoothed mode")

    gains: list[float] = []
    cumulative: Counter[str] = Counter()
    cumulative_total = 0
    for text, r, c in zip(responses, relevance, correctness):
        tokens = tokenizer(text)
        p = TokenDistribution.from_tokens(tokens)
        if p.total == 0 or c == 0:
            divergence = 0.0
        elif mode == "inclusive":
            total = cumulative_total + p.total

            def q_inclusive(token: str) -> float:
                return (cumulative[token] + p.counts.get(token, 0)) / total

            divergence = kl_divergence(p, q_inclusive)
        else:
            vocab_size = len(set(cumulative) | set(p.counts))
            denom = cumulative_total + alpha * vocab_size

            def q_smoothed(token: str) -> float:
                return (cumulative[token] + alpha) / denom

            divergence = kl_divergence(p, q_smoothed)
        gains.append(divergence * r * c)
        cumulative.update(p.counts)
        cumulative_total += p.total
    return gains


def relevance_fallback(prompt: str, response: str, tokenizer: Tokenizer = tokenize) -> float:
    """Cosine similarity of the term-frequency vectors of prompt and response.

    Used only for turns whose relevance was not ingested; such turns are
    flagged so consumers can tell fallback scores from scorer output.
    """
    p_counts = Counter(tokenizer(prompt))
    r_counts = Counter(tokenizer(response))
    if not p_counts or not r_counts:
        return 0.0
    dot = sum(count * r_counts[token] for token, count in p_counts.items())
    norm_p = math.sqrt(sum(c * c for c in p_counts.values()))
    norm_r = math.sqrt(sum(c * c for c in r_counts.values()))
    return dot / (norm_p * norm_r)
