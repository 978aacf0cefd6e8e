"""Factor-token extraction, frequency analysis, and report diffing.

A factor token is written parenthesized inside assertion prose, e.g.
``(sun_position)``. The grammar: letters, digits, and underscores only,
at least two non-empty underscore-separated segments, first character a
letter. Single-segment parentheticals like ``(AVP)`` are entity
abbreviations, not factors, and are ignored. Normalization lowercases.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .errors import InputError

if TYPE_CHECKING:  # pragma: no cover
    from .engine import Session

# Inner parenthetical candidates; nested/unbalanced parens never match.
_PAREN_RE = re.compile(r"\(([^()]*)\)")
# Leading letter, then alnum segments joined by single underscores.
_TOKEN_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*(?:_[A-Za-z0-9]+)+")

MOST_INFLUENTIAL = "most_influential"
ORDINARY = "ordinary"
RED_FLAG = "red_flag"

DEFAULT_RED_FLAG_THRESHOLD = 1


def normalize_token(token: str) -> str:
    return token.lower()


def is_factor_token(candidate: str) -> bool:
    """True if ``candidate`` (without parentheses) matches the grammar."""
    return _TOKEN_RE.fullmatch(candidate) is not None


def extract_factors(text: str) -> list[str]:
    """Every factor token in ``text``, normalized, in order of appearance.

    Duplicates are preserved; parentheticals that do not match the grammar
    are silently ignored.
    """
    return [
        normalize_token(m.group(1))
        for m in _PAREN_RE.finditer(text)
        if is_factor_token(m.group(1))
    ]


@dataclass
class FactorEntry:
    token: str
    frequency: int
    steps: list[int]
    classification: str

    def to_dict(self) -> dict:
        return {
            "token": self.token,
            "frequency": self.frequency,
            "steps": self.steps,
            "classification": self.classification,
        }


@dataclass
class FactorReport:
    session_id: str
    session_version: int
    threshold: int
    entries: list[FactorEntry] = field(default_factory=list)

    @property
    def total_factors(self) -> int:
        return len(self.entries)

    @property
    def total_mentions(self) -> int:
        return sum(e.frequency for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "session_version": self.session_version,
            "threshold": self.threshold,
            "total_factors": self.total_factors,
            "total_mentions": self.total_mentions,
            "entries": [e.to_dict() for e in self.entries],
        }


def classify(frequency: int, max_frequency: int, threshold: int) -> str:
    if frequency == max_frequency:
        return MOST_INFLUENTIAL
    if frequency <= threshold:
        return RED_FLAG
    return ORDINARY


def compute_factor_report(session: "Session", threshold: int | None = None) -> FactorReport:
    """Frequency report over all current assertions of ``session``.

    Superseded assertions are excluded; current assertions on stale steps
    still count. Entries sort by frequency descending, ties by token
    ascending.
    """
    if threshold is None:
        threshold = session.config.red_flag_threshold
    if threshold < 1:
        raise InputError(f"red-flag threshold must be >= 1, got {threshold}")

    counts: dict[str, int] = {}
    steps: dict[str, set[int]] = {}
    for assertion in session.assertions:
        if assertion.status != "current":
            continue
        for token in assertion.factor_tokens:
            counts[token] = counts.get(token, 0) + 1
            steps.setdefault(token, set()).add(assertion.step_index)

    report = FactorReport(
        session_id=session.id, session_version=session.version, threshold=threshold
    )
    if not counts:
        return report

    max_frequency = max(counts.values())
    for token in sorted(counts, key=lambda t: (-counts[t], t)):
        report.entries.append(
            FactorEntry(
                token=token,
                frequency=counts[token],
                steps=sorted(steps[token]),
                classification=classify(counts[token], max_frequency, threshold),
            )
        )
    return report


def diff_reports(before: FactorReport, after: FactorReport) -> list[dict]:
    """One change record per token whose frequency or classification differs.

    Tokens absent from one side carry frequency 0 and no classification.
    """
    if before.session_id != after.session_id:
        raise InputError(
            f"cannot diff reports from different sessions "
            f"({before.session_id!r} vs {after.session_id!r})"
        )
    old = {e.token: e for e in before.entries}
    new = {e.token: e for e in after.entries}
    changes = []
    for token in sorted(set(old) | set(new)):
        old_freq = old[token].frequency if token in old else 0
        new_freq = new[token].frequency if token in new else 0
        old_cls = old[token].classification if token in old else None
        new_cls = new[token].classification if token in new else None
        if old_freq != new_freq or old_cls != new_cls:
            changes.append(
                {
                    "token": token,
                    "old_frequency": old_freq,
                    "new_frequency": new_freq,
                    "old_classification": old_cls,
                    "new_classification": new_cls,
                }
            )
    return changes
