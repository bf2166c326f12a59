"""Inter-rater reliability for double-coded samples.

Agreement is measured with Cohen's kappa on each item's primary code:
kappa = (p_o - p_e) / (1 - p_e), where p_o is the observed agreement rate
and p_e the chance agreement implied by each coder's marginal label
frequencies. The degenerate all-agreeing single-label case (p_e = 1) is
defined as perfect agreement.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from typing import IO, Mapping, Union

__all__ = ["IrrInputError", "compute_irr", "read_irr_csv"]


class IrrInputError(ValueError):
    """Raised for label sets that kappa is not defined over."""


def compute_irr(labels_a: Mapping[str, str], labels_b: Mapping[str, str]) -> float:
    """Cohen's kappa between two labelings of the same items."""
    if set(labels_a) != set(labels_b):
        only_a = sorted(set(labels_a) - set(labels_b))[:5]
        only_b = sorted(set(labels_b) - set(labels_a))[:5]
        raise IrrInputError(
            f"coders labeled different item sets (only first: {only_a}, only second: {only_b})"
        )
    n = len(labels_a)
    if n < 2:
        raise IrrInputError(f"need at least 2 items, got {n}")

    agreements = sum(1 for item, code in labels_a.items() if labels_b[item] == code)
    p_observed = agreements / n

    marginal_a = Counter(labels_a.values())
    marginal_b = Counter(labels_b.values())
    p_expected = sum(
        (marginal_a[code] / n) * (marginal_b[code] / n) for code in set(marginal_a) | set(marginal_b)
    )
    if p_expected == 1.0:
        return 1.0
    return (p_observed - p_expected) / (1.0 - p_expected)


def read_irr_csv(source: Union[str, bytes, IO]) -> tuple[dict[str, str], dict[str, str]]:
    """Parse a double-coding CSV with columns item_id, coder, code_id.

    Exactly two distinct coder values are expected; returns one
    item -> code mapping per coder, in first-appearance coder order.
    """
    if isinstance(source, bytes):
        text: IO[str] = io.StringIO(source.decode("utf-8"))
    elif isinstance(source, str):
        text = io.StringIO(source)
    else:
        raw = source.read()
        text = io.StringIO(raw.decode("utf-8") if isinstance(raw, bytes) else raw)

    reader = csv.DictReader(text)
    required = {"item_id", "coder", "code_id"}
    if reader.fieldnames is None or not required.issubset(reader.fieldnames):
        raise IrrInputError(f"IRR CSV must have columns {sorted(required)}, got {reader.fieldnames}")

    by_coder: dict[str, dict[str, str]] = {}
    for row_number, row in enumerate(reader, start=2):
        coder = row["coder"]
        item = row["item_id"]
        labels = by_coder.setdefault(coder, {})
        if item in labels:
            raise IrrInputError(f"line {row_number}: duplicate label for item {item!r} by coder {coder!r}")
        labels[item] = row["code_id"]

    if len(by_coder) != 2:
        raise IrrInputError(f"expected exactly 2 coders, got {sorted(by_coder)}")
    first, second = by_coder.values()
    return first, second
