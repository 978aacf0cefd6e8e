"""Canonical session documents, Markdown reports, and graph export.

Documents are single JSON files (conventionally ``*.aic.json``), UTF-8,
with sorted keys and a fixed layout so identical sessions serialize to
byte-identical documents. Superseded assertions and the full revision log
are persisted forever: the revision trail is the audit value of the
method.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from . import factors, steps
from .engine import Session
from .errors import DocumentParseError, UnsupportedVersionError
from .model import PurposeKind
from .validation import Finding, validate_session

FORMAT_VERSION = 1
DOCUMENT_EXTENSION = ".aic.json"


def save_session(session: Session) -> bytes:
    """Canonical document bytes for ``session``."""
    document = {"format_version": FORMAT_VERSION, "session": session.to_dict()}
    text = json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def load_session(data: bytes) -> Session:
    """Reconstruct a session from document bytes.

    Write-time invariants are re-audited; findings (if any) are attached
    as ``session.load_findings`` so batch lint callers can surface them.
    Loading succeeds even with findings.
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DocumentParseError(f"document is not valid UTF-8: {exc}") from exc
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentParseError(
            f"document is not valid JSON at line {exc.lineno}, "
            f"column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(document, dict) or "format_version" not in document:
        raise DocumentParseError("document must be an object with a format_version")
    if document["format_version"] != FORMAT_VERSION:
        raise UnsupportedVersionError(
            f"unsupported format_version {document['format_version']!r}; "
            f"this build reads version {FORMAT_VERSION}"
        )
    try:
        session = Session.from_dict(document["session"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentParseError(f"malformed session payload: {exc}") from exc
    session.load_findings = validate_session(session)
    return session


def save_session_to_path(session: Session, path: str | Path) -> None:
    """Atomic write: temp file in the target directory, then rename."""
    path = Path(path)
    data = save_session(session)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_session_from_path(path: str | Path) -> Session:
    with open(path, "rb") as handle:
        return load_session(handle.read())


def _finding_lines(findings: list[Finding]) -> list[str]:
    if not findings:
        return ["No findings."]
    return [
        f"- [{f.severity}] {f.code} ({f.entity}): {f.message}" for f in findings
    ]


def render_report(session: Session) -> str:
    """Deterministic Markdown report over a session snapshot."""
    lines: list[str] = []
    lines.append(f"# Articulation report: {session.name}")
    lines.append("")
    lines.append(f"- Session id: `{session.id}`")
    lines.append(f"- Version: {session.version}")
    lines.append(f"- Red-flag threshold: {session.config.red_flag_threshold}")
    lines.append("")

    superseded_by_step: dict[int, list] = {}
    current_by_step: dict[int, list] = {}
    for assertion in session.assertions:
        bucket = current_by_step if assertion.status == "current" else superseded_by_step
        bucket.setdefault(assertion.step_index, []).append(assertion)

    for definition in steps.list_steps():
        k = definition.index
        status = session.steps[k - 1]
        lines.append(f"## Step {k}: {definition.name} ({status})")
        lines.append("")
        lines.append(f"*{definition.predictive_question}*")
        lines.append("")
        current = current_by_step.get(k, [])
        if current:
            lines.append("### Current assertions")
            lines.append("")
            for assertion in current:
                lines.append(f"- `{assertion.id}` (revision {assertion.revision}): "
                             f"{assertion.text}")
            lines.append("")
        history = superseded_by_step.get(k, [])
        if history:
            lines.append("### Revision history")
            lines.append("")
            for assertion in history:
                lines.append(
                    f"- superseded `{assertion.id}` (revision "
                    f"{assertion.revision}): {assertion.text}"
                )
            lines.append("")
        if k == 4:
            primaries = sorted(
                (
                    p
                    for p in session.purposes.values()
                    if p.kind is PurposeKind.PRIMARY
                ),
                key=lambda p: p.id,
            )
            if primaries:
                lines.append("### Primary purposes")
                lines.append("")
                for purpose in primaries:
                    owner = session.systems.get(purpose.owner_system)
                    owner_name = owner.name if owner else purpose.owner_system
                    lines.append(
                        f"- {owner_name}: {purpose.verb_phrase} ({purpose.status})"
                    )
                lines.append("")

    findings = validate_session(session)
    lines.append("## Validation findings")
    lines.append("")
    lines.extend(_finding_lines(findings))
    lines.append("")

    report = factors.compute_factor_report(session)
    lines.append("## Factor table")
    lines.append("")
    if report.entries:
        lines.append("| token | frequency | steps | classification |")
        lines.append("| --- | --- | --- | --- |")
        for entry in report.entries:
            step_list = ", ".join(str(s) for s in entry.steps)
            lines.append(
                f"| {entry.token} | {entry.frequency} | {step_list} | "
                f"{entry.classification} |"
            )
        lines.append("")
        lines.append(
            f"{report.total_factors} distinct factors, "
            f"{report.total_mentions} mentions in total."
        )
    else:
        lines.append("No factors mentioned yet.")
    lines.append("")

    lines.append("## Red flags")
    lines.append("")
    red_flags = [e for e in report.entries if e.classification == factors.RED_FLAG]
    if red_flags:
        for entry in red_flags:
            lines.append(
                f"- {entry.token} ({entry.frequency} mention"
                f"{'s' if entry.frequency != 1 else ''}): potential source of "
                "surprising emergence"
            )
    else:
        lines.append("No red flags at the current threshold.")
    lines.append("")

    return "\n".join(lines)


def export_graph(session: Session) -> dict:
    """Nodes and edges of the articulation, deterministically ordered."""
    nodes = []
    for system in session.systems.values():
        nodes.append(
            {"id": system.id, "type": "system", "kind": system.kind.value,
             "label": system.name}
        )
    for aspect in session.aspects.values():
        nodes.append(
            {"id": aspect.id, "type": "aspect", "kind": "aspect",
             "label": aspect.token}
        )
    for purpose in session.purposes.values():
        nodes.append(
            {"id": purpose.id, "type": "purpose", "kind": purpose.kind.value,
             "label": purpose.verb_phrase, "status": purpose.status}
        )
    for action in session.actions.values():
        nodes.append(
            {"id": action.id, "type": "action", "kind": action.kind.value,
             "label": action.description}
        )
    nodes.sort(key=lambda n: n["id"])

    edges = []
    for purpose in sorted(session.purposes.values(), key=lambda p: p.id):
        if purpose.serves is not None:
            edges.append({"type": "serves", "source": purpose.id,
                          "target": purpose.serves})
    for action in sorted(session.actions.values(), key=lambda a: a.id):
        if action.fulfills is not None:
            edges.append({"type": "fulfills", "source": action.id,
                          "target": action.fulfills})
        edges.append({"type": "source", "source": action.source_system,
                      "target": action.id})
        if action.target_system is not None:
            edges.append({"type": "target_system", "source": action.id,
                          "target": action.target_system})
        if action.target_aspect is not None:
            edges.append({"type": "target_aspect", "source": action.id,
                          "target": action.target_aspect})
    for system in sorted(session.systems.values(), key=lambda s: s.id):
        for aspect_id in system.sphere_of_control:
            edges.append({"type": "sphere", "source": system.id,
                          "target": aspect_id})
    edges.sort(key=lambda e: (e["type"], e["source"], e["target"]))
    return {"nodes": nodes, "edges": edges}
