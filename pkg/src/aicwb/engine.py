"""Eight-step session state machine and all entity/assertion mutations.

Single-writer contract: every mutation goes through the functions here,
checks all preconditions before touching the session, and bumps the
session version by exactly one on success. A rejected call raises and
leaves the session object untouched. Optimistic concurrency: every
mutating function accepts ``expected_version``; a mismatch is rejected
before any other check.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable, Iterable

from . import factors
from .errors import (
    ChainError,
    ConflictError,
    DanglingReferenceError,
    EmptyStepError,
    FixednessError,
    GatingError,
    IdempotencyError,
    InputError,
    NotFoundError,
    SphereConstraintError,
    StaleReferenceError,
    StateError,
    TemplateError,
    VersionConflictError,
)
from .model import (
    ASSERTION_PREFIX,
    ActionKind,
    ActionRecord,
    Aspect,
    Assertion,
    Purpose,
    PurposeKind,
    SystemEntity,
    SystemKind,
)

LOCKED = "locked"
IN_PROGRESS = "in_progress"
COMPLETE = "complete"
STALE = "stale"

STEP_COUNT = 8

Clock = Callable[[], datetime]

# Step 4 is where primary purposes are asserted; PrimeP revisions
# propagate staleness from there.
PRIME_PURPOSE_STEP = 4


def _default_clock() -> datetime:
    return datetime.now(timezone.utc)


@dataclass
class SessionConfig:
    red_flag_threshold: int = factors.DEFAULT_RED_FLAG_THRESHOLD

    def to_dict(self) -> dict:
        return {"red_flag_threshold": self.red_flag_threshold}

    @classmethod
    def from_dict(cls, d: dict) -> "SessionConfig":
        return cls(red_flag_threshold=d["red_flag_threshold"])


@dataclass
class Session:
    id: str
    name: str
    steps: list[str]
    config: SessionConfig
    version: int = 1
    systems: dict[str, SystemEntity] = field(default_factory=dict)
    aspects: dict[str, Aspect] = field(default_factory=dict)
    purposes: dict[str, Purpose] = field(default_factory=dict)
    actions: dict[str, ActionRecord] = field(default_factory=dict)
    assertions: list[Assertion] = field(default_factory=list)
    revision_log: list[dict] = field(default_factory=list)
    id_counter: int = 0
    clock: Clock = field(default=_default_clock, repr=False, compare=False)

    def next_id(self, prefix: str) -> str:
        self.id_counter += 1
        return f"{prefix}-{self.id_counter}"

    def entity_ids(self) -> set[str]:
        return (
            set(self.systems)
            | set(self.aspects)
            | set(self.purposes)
            | set(self.actions)
        )

    def find_assertion(self, assertion_id: str) -> Assertion:
        for a in self.assertions:
            if a.id == assertion_id:
                return a
        raise NotFoundError(f"no assertion with id {assertion_id!r}")

    def current_assertions(self, step_index: int | None = None) -> list[Assertion]:
        return [
            a
            for a in self.assertions
            if a.status == "current"
            and (step_index is None or a.step_index == step_index)
        ]

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "version": self.version,
            "steps": list(self.steps),
            "config": self.config.to_dict(),
            "systems": [self.systems[k].to_dict() for k in sorted(self.systems)],
            "aspects": [self.aspects[k].to_dict() for k in sorted(self.aspects)],
            "purposes": [self.purposes[k].to_dict() for k in sorted(self.purposes)],
            "actions": [self.actions[k].to_dict() for k in sorted(self.actions)],
            "assertions": [a.to_dict() for a in self.assertions],
            "revision_log": [dict(e) for e in self.revision_log],
            "id_counter": self.id_counter,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Session":
        return cls(
            id=d["id"],
            name=d["name"],
            version=d["version"],
            steps=list(d["steps"]),
            config=SessionConfig.from_dict(d["config"]),
            systems={s["id"]: SystemEntity.from_dict(s) for s in d["systems"]},
            aspects={a["id"]: Aspect.from_dict(a) for a in d["aspects"]},
            purposes={p["id"]: Purpose.from_dict(p) for p in d["purposes"]},
            actions={a["id"]: ActionRecord.from_dict(a) for a in d["actions"]},
            assertions=[Assertion.from_dict(a) for a in d["assertions"]],
            revision_log=[dict(e) for e in d["revision_log"]],
            id_counter=d["id_counter"],
        )


# ---------------------------------------------------------------------------
# internals
# ---------------------------------------------------------------------------


def _check_version(session: Session, expected_version: int | None) -> None:
    if expected_version is not None and expected_version != session.version:
        raise VersionConflictError(expected_version, session.version)


def _check_step_index(step_index: int) -> None:
    if not isinstance(step_index, int) or not 1 <= step_index <= STEP_COUNT:
        raise NotFoundError(f"no step with index {step_index!r}; valid indices are 1..8")


def _timestamp(session: Session) -> str:
    # UTC, second precision: audit ordering without clock-resolution disputes.
    dt = session.clock().astimezone(timezone.utc).replace(microsecond=0)
    return dt.strftime("%Y-%m-%dT%H:%M:%SZ")


def _require_entities(session: Session, ids: Iterable[str]) -> None:
    known = session.entity_ids()
    for entity_id in ids:
        if entity_id not in known:
            raise DanglingReferenceError(f"unknown entity id {entity_id!r}")


def _mark_downstream_stale(session: Session, step_index: int) -> None:
    for k in range(step_index + 1, STEP_COUNT + 1):
        if session.steps[k - 1] == COMPLETE:
            session.steps[k - 1] = STALE


# ---------------------------------------------------------------------------
# session lifecycle
# ---------------------------------------------------------------------------


def create_session(
    name: str,
    red_flag_threshold: int = factors.DEFAULT_RED_FLAG_THRESHOLD,
    session_id: str | None = None,
    clock: Clock | None = None,
) -> Session:
    """New session with step 1 in progress and steps 2..8 locked."""
    if not name or not name.strip():
        raise InputError("session name must be non-empty")
    if red_flag_threshold < 1:
        raise InputError(
            f"red-flag threshold must be >= 1, got {red_flag_threshold}"
        )
    return Session(
        id=session_id if session_id is not None else uuid.uuid4().hex,
        name=name,
        steps=[IN_PROGRESS] + [LOCKED] * (STEP_COUNT - 1),
        config=SessionConfig(red_flag_threshold=red_flag_threshold),
        clock=clock if clock is not None else _default_clock,
    )


# ---------------------------------------------------------------------------
# entity mutations
# ---------------------------------------------------------------------------


def create_system(
    session: Session,
    name: str,
    kind: SystemKind | str,
    expected_version: int | None = None,
) -> SystemEntity:
    _check_version(session, expected_version)
    if not name or not name.strip():
        raise InputError("system name must be non-empty")
    try:
        kind = SystemKind(kind)
    except ValueError:
        raise InputError(
            f"invalid system kind {kind!r}; expected one of "
            f"{[k.value for k in SystemKind]}"
        ) from None
    if any(s.name == name for s in session.systems.values()):
        raise ConflictError(f"a system named {name!r} already exists")

    system = SystemEntity(id=session.next_id("sys"), name=name, kind=kind)
    session.systems[system.id] = system
    session.version += 1
    return system


def create_aspect(
    session: Session,
    token: str,
    description: str | None = None,
    expected_version: int | None = None,
) -> Aspect:
    _check_version(session, expected_version)
    if not factors.is_factor_token(token):
        raise InputError(
            f"aspect token {token!r} does not match the factor-token grammar"
        )
    normalized = factors.normalize_token(token)
    if any(a.token == normalized for a in session.aspects.values()):
        raise ConflictError(f"an aspect with token {normalized!r} already exists")

    aspect = Aspect(id=session.next_id("asp"), token=normalized, description=description)
    session.aspects[aspect.id] = aspect
    session.version += 1
    return aspect


def add_to_sphere(
    session: Session,
    system_id: str,
    aspect_id: str,
    expected_version: int | None = None,
) -> SystemEntity:
    """Place an aspect inside a system's sphere of direct control."""
    _check_version(session, expected_version)
    system = session.systems.get(system_id)
    if system is None:
        raise NotFoundError(f"no system with id {system_id!r}")
    if aspect_id not in session.aspects:
        raise NotFoundError(f"no aspect with id {aspect_id!r}")
    if aspect_id in system.sphere_of_control:
        raise ConflictError(
            f"aspect {aspect_id!r} is already in the sphere of {system_id!r}"
        )
    system.sphere_of_control.append(aspect_id)
    system.sphere_of_control.sort()
    session.version += 1
    return system


def set_prime_purpose(
    session: Session,
    system_id: str,
    verb_phrase: str,
    revision: bool = False,
    rationale: str | None = None,
    expected_version: int | None = None,
) -> Purpose:
    """Set (or, with ``revision=True``, archive-and-replace) a system's PrimeP.

    A system holds at most one current primary purpose; replacing it
    without the revision flag is a fixedness violation. A revision
    archives the old purpose, records a revision event, and marks every
    complete downstream step stale.
    """
    _check_version(session, expected_version)
    system = session.systems.get(system_id)
    if system is None:
        raise NotFoundError(f"no system with id {system_id!r}")
    if not verb_phrase or not verb_phrase.strip():
        raise InputError("verb phrase must be non-empty")

    if revision:
        if system.prime_purpose is None:
            raise StateError(
                f"system {system_id!r} has no primary purpose to revise"
            )
        if not rationale or not rationale.strip():
            raise InputError("a primary-purpose revision requires a rationale")
        old = session.purposes[system.prime_purpose]
        new = Purpose(
            id=session.next_id("pur"),
            kind=PurposeKind.PRIMARY,
            owner_system=system_id,
            verb_phrase=verb_phrase,
        )
        old.status = "superseded"
        session.purposes[new.id] = new
        system.prime_purpose = new.id
        session.revision_log.append(
            {
                "step_index": PRIME_PURPOSE_STEP,
                "target_id": old.id,
                "event": "prime_purpose_revision",
                "rationale": rationale,
                "timestamp": _timestamp(session),
            }
        )
        _mark_downstream_stale(session, PRIME_PURPOSE_STEP)
        session.version += 1
        return new

    if system.prime_purpose is not None:
        raise FixednessError(
            f"system {system_id!r} already has a primary purpose; "
            "a PrimeP is fixed and may only change through a revision"
        )
    purpose = Purpose(
        id=session.next_id("pur"),
        kind=PurposeKind.PRIMARY,
        owner_system=system_id,
        verb_phrase=verb_phrase,
    )
    session.purposes[purpose.id] = purpose
    system.prime_purpose = purpose.id
    session.version += 1
    return purpose


def add_purpose(
    session: Session,
    kind: PurposeKind | str,
    owner_system: str,
    verb_phrase: str,
    serves: str,
    expected_version: int | None = None,
) -> Purpose:
    """Add an auxiliary (influence/control/appreciation) purpose.

    The serves link must point at the right kind of upstream element:
    influence -> primary Purpose, control -> influence ActionRecord,
    appreciation -> control ActionRecord.
    """
    _check_version(session, expected_version)
    try:
        kind = PurposeKind(kind)
    except ValueError:
        raise InputError(f"invalid purpose kind {kind!r}") from None
    if kind is PurposeKind.PRIMARY:
        raise InputError("primary purposes are set via set_prime_purpose")
    if owner_system not in session.systems:
        raise NotFoundError(f"no system with id {owner_system!r}")
    if not verb_phrase or not verb_phrase.strip():
        raise InputError("verb phrase must be non-empty")

    if kind is PurposeKind.INFLUENCE:
        target = session.purposes.get(serves)
        if target is None:
            raise DanglingReferenceError(f"unknown purpose id {serves!r}")
        if target.kind is not PurposeKind.PRIMARY:
            raise ChainError(
                f"an influence purpose must serve a primary purpose; "
                f"{serves!r} is {target.kind.value}"
            )
    else:
        expected_action = (
            ActionKind.INFLUENCE if kind is PurposeKind.CONTROL else ActionKind.CONTROL
        )
        target_action = session.actions.get(serves)
        if target_action is None:
            raise DanglingReferenceError(f"unknown action id {serves!r}")
        if target_action.kind is not expected_action:
            raise ChainError(
                f"a {kind.value} purpose must serve an {expected_action.value} "
                f"action; {serves!r} is {target_action.kind.value}"
            )

    purpose = Purpose(
        id=session.next_id("pur"),
        kind=kind,
        owner_system=owner_system,
        verb_phrase=verb_phrase,
        serves=serves,
    )
    session.purposes[purpose.id] = purpose
    session.version += 1
    return purpose


_FULFILLS_KIND = {
    ActionKind.INFLUENCE: PurposeKind.INFLUENCE,
    ActionKind.CONTROL: PurposeKind.CONTROL,
    ActionKind.APPRECIATIVE: PurposeKind.APPRECIATION,
}


def add_action(
    session: Session,
    kind: ActionKind | str,
    source_system: str,
    description: str,
    target_system: str | None = None,
    target_aspect: str | None = None,
    fulfills: str | None = None,
    expected_version: int | None = None,
) -> ActionRecord:
    """Record an action, enforcing sphere boundaries and purpose-chain kinds.

    Influence actions target an aspect outside the source's sphere (and
    inside the sink's, when a sink system is named); control actions
    target an aspect inside the source's own sphere.
    """
    _check_version(session, expected_version)
    try:
        kind = ActionKind(kind)
    except ValueError:
        raise InputError(f"invalid action kind {kind!r}") from None
    source = session.systems.get(source_system)
    if source is None:
        raise NotFoundError(f"no system with id {source_system!r}")
    if not description or not description.strip():
        raise InputError("action description must be non-empty")
    if target_system is not None and target_system not in session.systems:
        raise DanglingReferenceError(f"unknown system id {target_system!r}")
    if target_aspect is not None and target_aspect not in session.aspects:
        raise DanglingReferenceError(f"unknown aspect id {target_aspect!r}")

    if kind is ActionKind.INFLUENCE:
        if target_aspect is None:
            raise InputError("an influence action requires a target aspect")
        if target_aspect in source.sphere_of_control:
            raise SphereConstraintError(
                f"aspect {target_aspect!r} is inside the source's sphere of "
                "direct control; acting on it is control, not influence"
            )
        if target_system is not None:
            sink = session.systems[target_system]
            if target_aspect not in sink.sphere_of_control:
                raise SphereConstraintError(
                    f"aspect {target_aspect!r} is not in the sink system's "
                    "sphere of direct control"
                )
    elif kind is ActionKind.CONTROL:
        if target_aspect is None:
            raise InputError("a control action requires a target aspect")
        if target_aspect not in source.sphere_of_control:
            raise SphereConstraintError(
                f"aspect {target_aspect!r} is outside the source's sphere of "
                "direct control; acting on it is influence, not control"
            )

    if kind is ActionKind.UNSAFE:
        if fulfills is not None:
            raise ChainError("an unsafe action does not fulfill a purpose")
    else:
        if fulfills is None:
            raise ChainError(f"a {kind.value} action must fulfill a purpose")
        purpose = session.purposes.get(fulfills)
        if purpose is None:
            raise DanglingReferenceError(f"unknown purpose id {fulfills!r}")
        if purpose.kind is not _FULFILLS_KIND[kind]:
            raise ChainError(
                f"a {kind.value} action must fulfill a "
                f"{_FULFILLS_KIND[kind].value} purpose; {fulfills!r} is "
                f"{purpose.kind.value}"
            )

    action = ActionRecord(
        id=session.next_id("act"),
        kind=kind,
        source_system=source_system,
        description=description,
        target_system=target_system,
        target_aspect=target_aspect,
        fulfills=fulfills,
    )
    session.actions[action.id] = action
    session.version += 1
    return action


# ---------------------------------------------------------------------------
# workflow mutations
# ---------------------------------------------------------------------------


def submit_assertion(
    session: Session,
    step_index: int,
    text: str,
    referenced_entities: Iterable[str] = (),
    expected_version: int | None = None,
) -> Assertion:
    _check_version(session, expected_version)
    _check_step_index(step_index)
    status = session.steps[step_index - 1]
    if status not in (IN_PROGRESS, STALE):
        raise GatingError(
            f"step {step_index} is {status}; assertions may only be submitted "
            "to a step that is in progress or stale"
        )
    if not text.startswith(ASSERTION_PREFIX):
        raise TemplateError(
            f'assertion text must begin with "{ASSERTION_PREFIX}"'
        )
    refs = sorted(set(referenced_entities))
    _require_entities(session, refs)

    assertion = Assertion(
        id=session.next_id("ast"),
        step_index=step_index,
        revision=1,
        text=text,
        referenced_entities=refs,
        factor_tokens=factors.extract_factors(text),
    )
    session.assertions.append(assertion)
    session.version += 1
    return assertion


def complete_step(session: Session, step_index: int, expected_version: int | None = None) -> str:
    _check_version(session, expected_version)
    _check_step_index(step_index)
    status = session.steps[step_index - 1]
    if status == COMPLETE:
        raise IdempotencyError(f"step {step_index} is already complete")
    if status == LOCKED:
        raise GatingError(f"step {step_index} is locked")
    if not session.current_assertions(step_index):
        raise EmptyStepError(
            f"step {step_index} has no current assertion; record at least one "
            "before completing"
        )
    session.steps[step_index - 1] = COMPLETE
    for k in range(step_index + 1, STEP_COUNT + 1):
        if session.steps[k - 1] == LOCKED:
            session.steps[k - 1] = IN_PROGRESS
            break
    session.version += 1
    return COMPLETE


def revise_step(
    session: Session,
    step_index: int,
    superseded_assertion_id: str,
    new_text: str,
    rationale: str,
    referenced_entities: Iterable[str] | None = None,
    expected_version: int | None = None,
) -> Assertion:
    """Supersede one assertion and mark complete downstream steps stale."""
    _check_version(session, expected_version)
    _check_step_index(step_index)
    old = session.find_assertion(superseded_assertion_id)
    if old.status != "current":
        raise StaleReferenceError(
            f"assertion {superseded_assertion_id!r} is already superseded"
        )
    if old.step_index != step_index:
        raise InputError(
            f"assertion {superseded_assertion_id!r} belongs to step "
            f"{old.step_index}, not step {step_index}"
        )
    if not rationale or not rationale.strip():
        raise InputError("a revision requires a non-empty rationale")
    if not new_text.startswith(ASSERTION_PREFIX):
        raise TemplateError(
            f'assertion text must begin with "{ASSERTION_PREFIX}"'
        )
    refs = (
        sorted(set(referenced_entities))
        if referenced_entities is not None
        else list(old.referenced_entities)
    )
    _require_entities(session, refs)

    new = Assertion(
        id=session.next_id("ast"),
        step_index=step_index,
        revision=old.revision + 1,
        text=new_text,
        referenced_entities=refs,
        factor_tokens=factors.extract_factors(new_text),
        revision_rationale=rationale,
        supersedes=old.id,
    )
    old.status = "superseded"
    session.assertions.append(new)
    session.revision_log.append(
        {
            "step_index": step_index,
            "target_id": old.id,
            "event": "assertion_revision",
            "rationale": rationale,
            "timestamp": _timestamp(session),
        }
    )
    _mark_downstream_stale(session, step_index)
    session.version += 1
    return new


def reconfirm_step(session: Session, step_index: int, expected_version: int | None = None) -> str:
    """Re-judge a stale step as still valid, without content change."""
    _check_version(session, expected_version)
    _check_step_index(step_index)
    status = session.steps[step_index - 1]
    if status != STALE:
        raise StateError(
            f"step {step_index} is {status}; only a stale step can be reconfirmed"
        )
    session.steps[step_index - 1] = COMPLETE
    session.revision_log.append(
        {
            "step_index": step_index,
            "target_id": None,
            "event": "reconfirmation",
            "rationale": None,
            "timestamp": _timestamp(session),
        }
    )
    session.version += 1
    return COMPLETE


def session_status(session: Session) -> dict:
    """Read-only summary: per-step status, assertion counts, version,
    pending validation finding count."""
    from .validation import validate_session  # avoid import cycle

    findings = validate_session(session)
    stale = [k for k in range(1, STEP_COUNT + 1) if session.steps[k - 1] == STALE]
    return {
        "session_id": session.id,
        "name": session.name,
        "version": session.version,
        "red_flag_threshold": session.config.red_flag_threshold,
        "finished": all(s == COMPLETE for s in session.steps),
        "steps": [
            {
                "index": k,
                "status": session.steps[k - 1],
                "assertion_count": len(session.current_assertions(k)),
            }
            for k in range(1, STEP_COUNT + 1)
        ],
        "stale_steps": stale,
        "pending_findings": len(findings),
    }
