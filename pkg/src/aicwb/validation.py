"""Whole-session structural audit producing deterministic, ordered findings.

The engine already enforces these rules at write time; this module
re-checks them over a complete session so documents produced or edited
elsewhere can be loaded and linted instead of rejected. Validation never
mutates and is a pure function of session state.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import COMPLETE, STEP_COUNT, Session
from .errors import NotFoundError
from .model import ASSERTION_PREFIX, ActionKind, PurposeKind

ERROR = "error"
WARNING = "warning"

FINDING_CODES = (
    "PRIMEP_UNIQUE",
    "PRIMEP_REVISION",
    "CHAIN_INFLUENCE",
    "CHAIN_CONTROL",
    "CHAIN_APPRECIATION",
    "SPHERE_INFLUENCE",
    "SPHERE_CONTROL",
    "TEMPLATE_PREFIX",
    "GATING",
    "DANGLING_REF",
)


@dataclass(frozen=True)
class Finding:
    code: str
    severity: str
    entity: str
    message: str

    def to_dict(self) -> dict:
        return {
            "code": self.code,
            "severity": self.severity,
            "entity": self.entity,
            "message": self.message,
        }


_CHAIN_CODE_FOR_ACTION = {
    ActionKind.INFLUENCE: ("CHAIN_INFLUENCE", PurposeKind.INFLUENCE),
    ActionKind.CONTROL: ("CHAIN_CONTROL", PurposeKind.CONTROL),
    ActionKind.APPRECIATIVE: ("CHAIN_APPRECIATION", PurposeKind.APPRECIATION),
}


def validate_session(session: Session) -> list[Finding]:
    """All rule violations in ``session``, ordered by (code, entity)."""
    findings: list[Finding] = []
    known = session.entity_ids()

    def add(code: str, severity: str, entity: str, message: str) -> None:
        findings.append(Finding(code, severity, entity, message))

    # dangling references
    for assertion in session.assertions:
        for ref in assertion.referenced_entities:
            if ref not in known:
                add(
                    "DANGLING_REF",
                    ERROR,
                    assertion.id,
                    f"assertion {assertion.id} references unknown entity {ref!r}",
                )
    for system in session.systems.values():
        for aspect_id in system.sphere_of_control:
            if aspect_id not in session.aspects:
                add(
                    "DANGLING_REF",
                    ERROR,
                    system.id,
                    f"sphere of {system.id} names unknown aspect {aspect_id!r}",
                )
        if system.prime_purpose is not None and system.prime_purpose not in session.purposes:
            add(
                "DANGLING_REF",
                ERROR,
                system.id,
                f"system {system.id} points at unknown purpose "
                f"{system.prime_purpose!r}",
            )
    for purpose in session.purposes.values():
        if purpose.owner_system not in session.systems:
            add(
                "DANGLING_REF",
                ERROR,
                purpose.id,
                f"purpose {purpose.id} is owned by unknown system "
                f"{purpose.owner_system!r}",
            )
        if purpose.serves is not None and purpose.serves not in known:
            add(
                "DANGLING_REF",
                ERROR,
                purpose.id,
                f"purpose {purpose.id} serves unknown element {purpose.serves!r}",
            )
    for action in session.actions.values():
        for label, ref, store in (
            ("source system", action.source_system, session.systems),
            ("target system", action.target_system, session.systems),
            ("target aspect", action.target_aspect, session.aspects),
            ("fulfilled purpose", action.fulfills, session.purposes),
        ):
            if ref is not None and ref not in store:
                add(
                    "DANGLING_REF",
                    ERROR,
                    action.id,
                    f"action {action.id} names unknown {label} {ref!r}",
                )

    # PrimeP uniqueness and revision audit trail
    current_primaries: dict[str, list[str]] = {}
    for purpose in session.purposes.values():
        if purpose.kind is PurposeKind.PRIMARY and purpose.status == "current":
            current_primaries.setdefault(purpose.owner_system, []).append(purpose.id)
    for system_id, purpose_ids in current_primaries.items():
        if len(purpose_ids) > 1:
            add(
                "PRIMEP_UNIQUE",
                ERROR,
                system_id,
                f"system {system_id} has {len(purpose_ids)} current primary "
                f"purposes ({', '.join(sorted(purpose_ids))}); at most one is allowed",
            )
    revised_ids = {
        event["target_id"]
        for event in session.revision_log
        if event.get("event") == "prime_purpose_revision"
    }
    for purpose in session.purposes.values():
        if (
            purpose.kind is PurposeKind.PRIMARY
            and purpose.status == "superseded"
            and purpose.id not in revised_ids
        ):
            add(
                "PRIMEP_REVISION",
                ERROR,
                purpose.id,
                f"primary purpose {purpose.id} was superseded without a "
                "recorded revision event",
            )

    # purpose chains: serves links point at the right kind of element
    for purpose in session.purposes.values():
        if purpose.kind is PurposeKind.PRIMARY:
            continue
        if purpose.kind is PurposeKind.INFLUENCE:
            code = "CHAIN_INFLUENCE"
            target = session.purposes.get(purpose.serves or "")
            ok = target is not None and target.kind is PurposeKind.PRIMARY
            expected = "a primary purpose"
        else:
            code = (
                "CHAIN_CONTROL"
                if purpose.kind is PurposeKind.CONTROL
                else "CHAIN_APPRECIATION"
            )
            wanted = (
                ActionKind.INFLUENCE
                if purpose.kind is PurposeKind.CONTROL
                else ActionKind.CONTROL
            )
            target = session.actions.get(purpose.serves or "")
            ok = target is not None and target.kind is wanted
            expected = f"an {wanted.value} action"
        if purpose.serves is not None and purpose.serves not in known:
            continue  # already reported as DANGLING_REF
        if not ok:
            add(
                code,
                ERROR,
                purpose.id,
                f"{purpose.kind.value} purpose {purpose.id} must serve "
                f"{expected}",
            )

    # action fulfills links
    for action in session.actions.values():
        if action.kind is ActionKind.UNSAFE:
            continue
        code, wanted = _CHAIN_CODE_FOR_ACTION[action.kind]
        if action.fulfills is None:
            add(
                code,
                ERROR,
                action.id,
                f"{action.kind.value} action {action.id} does not fulfill "
                "any purpose",
            )
            continue
        purpose = session.purposes.get(action.fulfills)
        if purpose is None:
            continue  # already reported as DANGLING_REF
        if purpose.kind is not wanted:
            add(
                code,
                ERROR,
                action.id,
                f"{action.kind.value} action {action.id} must fulfill a "
                f"{wanted.value} purpose; {action.fulfills!r} is "
                f"{purpose.kind.value}",
            )

    # missing downstream analysis (iterative workflow: warnings, not errors)
    served_primaries = {
        p.serves
        for p in session.purposes.values()
        if p.kind is PurposeKind.INFLUENCE and p.status == "current"
    }
    for purpose in session.purposes.values():
        if (
            purpose.kind is PurposeKind.PRIMARY
            and purpose.status == "current"
            and purpose.id not in served_primaries
        ):
            add(
                "CHAIN_INFLUENCE",
                WARNING,
                purpose.id,
                f"primary purpose {purpose.id} has no influence purpose yet",
            )
    appreciated_actions = {
        p.serves
        for p in session.purposes.values()
        if p.kind is PurposeKind.APPRECIATION and p.status == "current"
    }
    step7_complete = session.steps[6] == COMPLETE
    for action in session.actions.values():
        if action.kind is ActionKind.CONTROL and action.id not in appreciated_actions:
            add(
                "CHAIN_APPRECIATION",
                ERROR if step7_complete else WARNING,
                action.id,
                f"control action {action.id} has no appreciation purpose yet",
            )

    # sphere boundaries
    for action in session.actions.values():
        source = session.systems.get(action.source_system)
        if source is None:
            continue  # already reported as DANGLING_REF
        if action.kind is ActionKind.INFLUENCE:
            if action.target_aspect is None:
                add(
                    "SPHERE_INFLUENCE",
                    ERROR,
                    action.id,
                    f"influence action {action.id} has no target aspect",
                )
            elif action.target_aspect in session.aspects:
                if action.target_aspect in source.sphere_of_control:
                    add(
                        "SPHERE_INFLUENCE",
                        ERROR,
                        action.id,
                        f"influence action {action.id} targets aspect "
                        f"{action.target_aspect!r} inside its own sphere of "
                        "direct control",
                    )
                elif action.target_system in session.systems and (
                    action.target_aspect
                    not in session.systems[action.target_system].sphere_of_control
                ):
                    add(
                        "SPHERE_INFLUENCE",
                        ERROR,
                        action.id,
                        f"influence action {action.id} targets aspect "
                        f"{action.target_aspect!r} outside the sink's sphere of "
                        "direct control",
                    )
        elif action.kind is ActionKind.CONTROL:
            if action.target_aspect is None:
                add(
                    "SPHERE_CONTROL",
                    ERROR,
                    action.id,
                    f"control action {action.id} has no target aspect",
                )
            elif (
                action.target_aspect in session.aspects
                and action.target_aspect not in source.sphere_of_control
            ):
                add(
                    "SPHERE_CONTROL",
                    ERROR,
                    action.id,
                    f"control action {action.id} targets aspect "
                    f"{action.target_aspect!r} outside its sphere of direct "
                    "control",
                )

    # assertion template
    for assertion in session.assertions:
        if not assertion.text.startswith(ASSERTION_PREFIX):
            add(
                "TEMPLATE_PREFIX",
                ERROR,
                assertion.id,
                f'assertion {assertion.id} does not begin with '
                f'"{ASSERTION_PREFIX}"',
            )

    # step gating
    for k in range(1, STEP_COUNT + 1):
        status = session.steps[k - 1]
        if k == 1 and status == "locked":
            add("GATING", ERROR, "step-1", "step 1 must never be locked")
            continue
        if status in ("in_progress", "complete", "stale"):
            blocked = [
                j
                for j in range(1, k)
                if session.steps[j - 1] not in ("complete", "stale")
            ]
            if blocked:
                add(
                    "GATING",
                    ERROR,
                    f"step-{k}",
                    f"step {k} is {status} but steps "
                    f"{', '.join(str(j) for j in blocked)} are not complete or stale",
                )

    findings.sort(key=lambda f: (f.code, f.entity))
    return findings


def validate_chain(session: Session, purpose_id: str) -> dict:
    """Trace a purpose's serves-chain down to a primary purpose.

    Returns ``{"chain": [...]}`` on success, where the list alternates
    purposes and the actions they serve, ending at a primary purpose; or
    ``{"findings": [...]}`` naming the first broken link.
    """
    purpose = session.purposes.get(purpose_id)
    if purpose is None:
        raise NotFoundError(f"no purpose with id {purpose_id!r}")

    chain: list[dict] = []
    findings: list[Finding] = []
    seen: set[str] = set()
    current = purpose
    while True:
        if current.id in seen:
            findings.append(
                Finding(
                    "CHAIN_INFLUENCE",
                    ERROR,
                    current.id,
                    f"serves-chain through {current.id} is cyclic",
                )
            )
            break
        seen.add(current.id)
        chain.append(
            {"id": current.id, "type": "purpose", "kind": current.kind.value,
             "label": current.verb_phrase}
        )
        if current.kind is PurposeKind.PRIMARY:
            return {"chain": chain}

        if current.kind is PurposeKind.INFLUENCE:
            nxt = session.purposes.get(current.serves or "")
            if nxt is None or nxt.kind is not PurposeKind.PRIMARY:
                findings.append(
                    Finding(
                        "CHAIN_INFLUENCE",
                        ERROR,
                        current.id,
                        f"influence purpose {current.id} must serve a primary "
                        "purpose",
                    )
                )
                break
            current = nxt
            continue

        code = (
            "CHAIN_CONTROL"
            if current.kind is PurposeKind.CONTROL
            else "CHAIN_APPRECIATION"
        )
        wanted = (
            ActionKind.INFLUENCE
            if current.kind is PurposeKind.CONTROL
            else ActionKind.CONTROL
        )
        action = session.actions.get(current.serves or "")
        if action is None or action.kind is not wanted:
            findings.append(
                Finding(
                    code,
                    ERROR,
                    current.id,
                    f"{current.kind.value} purpose {current.id} must serve "
                    f"an {wanted.value} action",
                )
            )
            break
        chain.append(
            {"id": action.id, "type": "action", "kind": action.kind.value,
             "label": action.description}
        )
        nxt = session.purposes.get(action.fulfills or "")
        if nxt is None:
            findings.append(
                Finding(
                    code,
                    ERROR,
                    action.id,
                    f"action {action.id} does not fulfill a known purpose",
                )
            )
            break
        current = nxt

    return {"findings": findings}
