"""Typed entities of an articulation: systems, aspects, purposes, actions,
assertions.

These are plain data records. Construction-time rule enforcement (sphere
constraints, purpose-chain kinds, PrimeP fixedness, template prefix) lives
in the engine; whole-session re-auditing of loaded documents lives in the
validation module. Keeping the records permissive lets externally produced
documents load and then surface findings instead of failing to parse.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class SystemKind(str, Enum):
    AGENT = "agent"
    NON_AGENT = "non_agent"
    ENVIRONMENTAL = "environmental"


class PurposeKind(str, Enum):
    PRIMARY = "primary"
    INFLUENCE = "influence"
    CONTROL = "control"
    APPRECIATION = "appreciation"


class ActionKind(str, Enum):
    UNSAFE = "unsafe"
    INFLUENCE = "influence"
    CONTROL = "control"
    APPRECIATIVE = "appreciative"


ASSERTION_PREFIX = "The architect asserts that"


@dataclass
class SystemEntity:
    id: str
    name: str
    kind: SystemKind
    sphere_of_control: list[str] = field(default_factory=list)  # aspect ids, sorted
    prime_purpose: str | None = None  # current primary Purpose id

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "kind": self.kind.value,
            "sphere_of_control": sorted(self.sphere_of_control),
            "prime_purpose": self.prime_purpose,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SystemEntity":
        return cls(
            id=d["id"],
            name=d["name"],
            kind=SystemKind(d["kind"]),
            sphere_of_control=list(d["sphere_of_control"]),
            prime_purpose=d.get("prime_purpose"),
        )


@dataclass
class Aspect:
    id: str
    token: str
    description: str | None = None

    def to_dict(self) -> dict:
        return {"id": self.id, "token": self.token, "description": self.description}

    @classmethod
    def from_dict(cls, d: dict) -> "Aspect":
        return cls(id=d["id"], token=d["token"], description=d.get("description"))


@dataclass
class Purpose:
    id: str
    kind: PurposeKind
    owner_system: str
    verb_phrase: str
    serves: str | None = None  # Purpose id (influence) or ActionRecord id
    status: str = "current"  # current | superseded

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "owner_system": self.owner_system,
            "verb_phrase": self.verb_phrase,
            "serves": self.serves,
            "status": self.status,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Purpose":
        return cls(
            id=d["id"],
            kind=PurposeKind(d["kind"]),
            owner_system=d["owner_system"],
            verb_phrase=d["verb_phrase"],
            serves=d.get("serves"),
            status=d.get("status", "current"),
        )


@dataclass
class ActionRecord:
    id: str
    kind: ActionKind
    source_system: str
    description: str
    target_system: str | None = None
    target_aspect: str | None = None
    fulfills: str | None = None  # Purpose id

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "source_system": self.source_system,
            "description": self.description,
            "target_system": self.target_system,
            "target_aspect": self.target_aspect,
            "fulfills": self.fulfills,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ActionRecord":
        return cls(
            id=d["id"],
            kind=ActionKind(d["kind"]),
            source_system=d["source_system"],
            description=d["description"],
            target_system=d.get("target_system"),
            target_aspect=d.get("target_aspect"),
            fulfills=d.get("fulfills"),
        )


@dataclass
class Assertion:
    id: str
    step_index: int
    revision: int
    text: str
    referenced_entities: list[str] = field(default_factory=list)  # sorted ids
    factor_tokens: list[str] = field(default_factory=list)
    status: str = "current"  # current | superseded
    revision_rationale: str | None = None
    supersedes: str | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "step_index": self.step_index,
            "revision": self.revision,
            "text": self.text,
            "referenced_entities": sorted(self.referenced_entities),
            "factor_tokens": list(self.factor_tokens),
            "status": self.status,
            "revision_rationale": self.revision_rationale,
            "supersedes": self.supersedes,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Assertion":
        return cls(
            id=d["id"],
            step_index=d["step_index"],
            revision=d["revision"],
            text=d["text"],
            referenced_entities=list(d["referenced_entities"]),
            factor_tokens=list(d["factor_tokens"]),
            status=d.get("status", "current"),
            revision_rationale=d.get("revision_rationale"),
            supersedes=d.get("supersedes"),
        )
