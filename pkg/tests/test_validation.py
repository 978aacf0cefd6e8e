import json

import pytest

from aicwb import engine, persistence
from aicwb.errors import NotFoundError
from aicwb.validation import validate_chain, validate_session

from conftest import fixed_clock


def doc_of(session):
    return json.loads(persistence.save_session(session).decode("utf-8"))


def load_doc(doc):
    return persistence.load_session(
        json.dumps(doc, sort_keys=True).encode("utf-8")
    )


def entity(doc, store, entity_id):
    for item in doc["session"][store]:
        if item["id"] == entity_id:
            return item
    raise KeyError(entity_id)


class TestCleanSessions:
    def test_case_study_fixture_has_no_findings(self, case_study):
        session, _ = case_study
        assert validate_session(session) == []

    def test_validation_is_deterministic(self, case_study):
        session, _ = case_study
        assert validate_session(session) == validate_session(session)

    def test_engine_built_sessions_have_no_error_findings(self, session):
        avp = engine.create_system(session, "AVP", "agent")
        prime = engine.set_prime_purpose(session, avp.id, "assist the pilot")
        engine.add_purpose(session, "influence", avp.id, "enhance", prime.id)
        engine.submit_assertion(
            session, 1, "The architect asserts that something is unsafe"
        )
        findings = validate_session(session)
        assert [f for f in findings if f.severity == "error"] == []

    def test_validation_never_mutates(self, case_study):
        session, _ = case_study
        before = persistence.save_session(session)
        validate_session(session)
        assert persistence.save_session(session) == before

    def test_findings_ordered_by_code_then_entity(self, case_study):
        session, ids = case_study
        doc = doc_of(session)
        first, second = doc["session"]["assertions"][:2]
        first["referenced_entities"].append("zz-1")
        first["text"] = "broken"
        second["referenced_entities"].append("zz-2")
        findings = validate_session(load_doc(doc))
        keys = [(f.code, f.entity) for f in findings]
        assert keys == sorted(keys)


def seed_primep_unique(doc, ids):
    entity(doc, "purposes", ids["prime_v1"])["status"] = "current"


def seed_primep_revision(doc, ids):
    doc["session"]["revision_log"] = [
        e
        for e in doc["session"]["revision_log"]
        if e["event"] != "prime_purpose_revision"
    ]


def seed_chain_influence(doc, ids):
    entity(doc, "actions", ids["influence_action"])["fulfills"] = ids[
        "control_purpose"
    ]


def seed_chain_control(doc, ids):
    entity(doc, "actions", ids["control_action"])["fulfills"] = ids[
        "influence_purpose"
    ]


def seed_chain_appreciation(doc, ids):
    entity(doc, "actions", ids["appreciative_action"])["fulfills"] = ids[
        "control_purpose"
    ]


def seed_sphere_influence(doc, ids):
    sphere = entity(doc, "systems", ids["avp"])["sphere_of_control"]
    sphere.append(ids["awareness"])
    sphere.sort()


def seed_sphere_control(doc, ids):
    sphere = entity(doc, "systems", ids["avp"])["sphere_of_control"]
    sphere.remove(ids["threat_model"])


def seed_template_prefix(doc, ids):
    assertion = doc["session"]["assertions"][0]
    assertion["text"] = assertion["text"].replace("The architect asserts", "We claim")


def seed_gating(doc, ids):
    doc["session"]["steps"][6] = "in_progress"


def seed_dangling_ref(doc, ids):
    doc["session"]["assertions"][0]["referenced_entities"].append("sys-999")


SEEDS = {
    "PRIMEP_UNIQUE": seed_primep_unique,
    "PRIMEP_REVISION": seed_primep_revision,
    "CHAIN_INFLUENCE": seed_chain_influence,
    "CHAIN_CONTROL": seed_chain_control,
    "CHAIN_APPRECIATION": seed_chain_appreciation,
    "SPHERE_INFLUENCE": seed_sphere_influence,
    "SPHERE_CONTROL": seed_sphere_control,
    "TEMPLATE_PREFIX": seed_template_prefix,
    "GATING": seed_gating,
    "DANGLING_REF": seed_dangling_ref,
}


class TestSeededDefects:
    @pytest.mark.parametrize("code", sorted(SEEDS))
    def test_each_seeded_defect_yields_exactly_one_finding(self, case_study, code):
        session, ids = case_study
        doc = doc_of(session)
        SEEDS[code](doc, ids)
        loaded = load_doc(doc)
        matching = [f for f in loaded.load_findings if f.code == code]
        assert len(matching) == 1, loaded.load_findings
        assert matching[0].severity == "error"

    def test_appreciation_purpose_serving_influence_action(self, case_study):
        session, ids = case_study
        doc = doc_of(session)
        entity(doc, "purposes", ids["appreciation_purpose"])["serves"] = ids[
            "influence_action"
        ]
        loaded = load_doc(doc)
        assert any(
            f.code == "CHAIN_APPRECIATION" and f.entity == ids["appreciation_purpose"]
            for f in loaded.load_findings
        )


class TestWarningSeverity:
    def _session_with_bare_control_action(self, complete_step7):
        s = engine.create_session("warn", session_id="warn", clock=fixed_clock)
        avp = engine.create_system(s, "AVP", "agent")
        pilot = engine.create_system(s, "pilot", "agent")
        awareness = engine.create_aspect(s, "pilot_situation_awareness")
        model = engine.create_aspect(s, "threat_predictive_model")
        engine.add_to_sphere(s, pilot.id, awareness.id)
        engine.add_to_sphere(s, avp.id, model.id)
        prime = engine.set_prime_purpose(s, avp.id, "assist the pilot")
        influence = engine.add_purpose(s, "influence", avp.id, "enhance", prime.id)
        inf_action = engine.add_action(
            s, "influence", avp.id, "augment awareness",
            target_system=pilot.id, target_aspect=awareness.id,
            fulfills=influence.id,
        )
        control = engine.add_purpose(s, "control", avp.id, "deliver", inf_action.id)
        action = engine.add_action(
            s, "control", avp.id, "employ model",
            target_aspect=model.id, fulfills=control.id,
        )
        if complete_step7:
            for k in range(1, 8):
                engine.submit_assertion(
                    s, k, "The architect asserts that step content exists"
                )
                engine.complete_step(s, k)
        return s, action

    def test_missing_appreciation_is_warning_mid_flight(self):
        s, action = self._session_with_bare_control_action(complete_step7=False)
        findings = [f for f in validate_session(s) if f.entity == action.id]
        assert [f.severity for f in findings] == ["warning"]
        assert findings[0].code == "CHAIN_APPRECIATION"

    def test_missing_appreciation_is_error_once_step7_complete(self):
        s, action = self._session_with_bare_control_action(complete_step7=True)
        findings = [f for f in validate_session(s) if f.entity == action.id]
        assert [f.severity for f in findings] == ["error"]

    def test_primary_without_influence_purpose_is_warning(self, session):
        avp = engine.create_system(session, "AVP", "agent")
        prime = engine.set_prime_purpose(session, avp.id, "assist")
        findings = validate_session(session)
        assert [(f.code, f.severity) for f in findings if f.entity == prime.id] == [
            ("CHAIN_INFLUENCE", "warning")
        ]


class TestChainTrace:
    def test_full_chain_from_appreciation(self, case_study):
        session, ids = case_study
        result = validate_chain(session, ids["appreciation_purpose"])
        chain = result["chain"]
        assert [(n["type"], n["kind"]) for n in chain] == [
            ("purpose", "appreciation"),
            ("action", "control"),
            ("purpose", "control"),
            ("action", "influence"),
            ("purpose", "influence"),
            ("purpose", "primary"),
        ]
        assert chain[1]["id"] == ids["control_action"]
        assert chain[3]["id"] == ids["influence_action"]
        assert chain[-1]["id"] == ids["prime_v2"]

    def test_primary_purpose_is_trivial_chain(self, case_study):
        session, ids = case_study
        result = validate_chain(session, ids["prime_v2"])
        assert [n["id"] for n in result["chain"]] == [ids["prime_v2"]]

    def test_broken_link_reports_finding(self, case_study):
        session, ids = case_study
        doc = doc_of(session)
        entity(doc, "purposes", ids["appreciation_purpose"])["serves"] = ids[
            "influence_action"
        ]
        loaded = load_doc(doc)
        result = validate_chain(loaded, ids["appreciation_purpose"])
        assert "chain" not in result
        assert result["findings"][0].code == "CHAIN_APPRECIATION"

    def test_unknown_purpose_id(self, case_study):
        session, _ = case_study
        with pytest.raises(NotFoundError):
            validate_chain(session, "pur-999")
