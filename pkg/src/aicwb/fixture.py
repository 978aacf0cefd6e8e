"""Bundled mid-air collision-avoidance walkthrough.

Builds a complete eight-step session for a perception-based collision
avoidance (AVP) scenario, exercising the full workflow: an early revision
of step 1, a primary-purpose revision mid-analysis, the influence /
control / appreciation chain, and the closing factor analysis. Used by
tests and as a ready-made demo document for the CLI and service.
"""

from __future__ import annotations

from . import engine
from .engine import Clock, Session


def build_fixture(
    session_id: str | None = None,
    clock: Clock | None = None,
    red_flag_threshold: int = 1,
) -> tuple[Session, dict[str, str]]:
    """Run the scripted walkthrough; returns the session and a name->id map."""
    s = engine.create_session(
        "collision-avoidance",
        red_flag_threshold=red_flag_threshold,
        session_id=session_id,
        clock=clock,
    )
    ids: dict[str, str] = {}

    # Step 1: unsafe behaviour
    step1 = engine.submit_assertion(
        s,
        1,
        "The architect asserts that the initial observation of the problem is "
        "the following unsafe behaviour: two or more aircraft come into "
        "unplanned contact during flight. One aircraft is equipped with a "
        "computer perception-based collision avoidance system. The intruder "
        "aircraft is following a flight path that intersects with another "
        "aircraft.",
    )
    engine.complete_step(s, 1)

    # Step 2: contributing systems
    avp = engine.create_system(
        s, "perception-based collision avoidance system (AVP)", "agent"
    )
    intruder = engine.create_system(s, "intruder aircraft", "non_agent")
    ownship = engine.create_system(s, "ownship aircraft", "non_agent")
    ids.update(avp=avp.id, intruder=intruder.id, ownship=ownship.id)
    step2 = engine.submit_assertion(
        s,
        2,
        "The architect asserts that the following is a valid list of purposed "
        "systems of concern: perception-based collision avoidance system "
        "(AVP), the intruder aircraft, and the ownship aircraft.",
        referenced_entities=[avp.id, intruder.id, ownship.id],
    )
    engine.complete_step(s, 2)

    # Considering the intruder's motion exposed a missing assumption in
    # step 1; revising it makes step 2 stale, which is then reconfirmed.
    engine.revise_step(
        s,
        1,
        step1.id,
        "The architect asserts that the initial observation of the problem is "
        "the following unsafe behaviour: two or more aircraft come into "
        "unplanned contact during flight. One aircraft is equipped with a "
        "computer perception-based collision avoidance system. The intruder "
        "aircraft is in constant motion, following a flight path that "
        "intersects with another aircraft.",
        rationale="The impact of the intruder aircraft's motion on the "
        "perception system requires the extra assumption that the intruder is "
        "in constant motion.",
    )
    engine.reconfirm_step(s, 2)

    # Step 3: unsafe action of the AVP
    unsafe = engine.add_action(
        s,
        "unsafe",
        avp.id,
        "the perception model fails to detect an intruding aircraft",
    )
    ids["unsafe_action"] = unsafe.id
    engine.submit_assertion(
        s,
        3,
        "The architect asserts that the only potential unsafe action of AVP is "
        "the failure of the perception model to detect an intruding aircraft.",
        referenced_entities=[avp.id, unsafe.id],
    )
    engine.complete_step(s, 3)

    # Step 4: primary purpose
    prime_v1 = engine.set_prime_purpose(
        s,
        avp.id,
        "govern the capability to detect intruder aircraft reliably and correctly",
    )
    ids["prime_v1"] = prime_v1.id
    step4 = engine.submit_assertion(
        s,
        4,
        "The architect asserts that the one and only primary purpose of the "
        "AVP system is to govern the capability to detect intruder aircraft "
        "reliably and correctly. There is no other possible primary purpose "
        "besides that in any given scenario.",
        referenced_entities=[avp.id, prime_v1.id],
    )
    engine.complete_step(s, 4)

    # Step 5 analysis questioned the chosen PrimeP as too thought-restraining
    # for a general purpose; revise step 4 before predicting influence.
    prime_v2 = engine.set_prime_purpose(
        s,
        avp.id,
        "assisting the ownship pilot in appreciating the open airspace safety",
        revision=True,
        rationale="Detecting intruder aircraft is too thought-restraining for "
        "a general purpose; it becomes an auxiliary step towards assisting "
        "the pilot.",
    )
    ids["prime_v2"] = prime_v2.id
    engine.revise_step(
        s,
        4,
        step4.id,
        "The architect asserts that the one and only primary purpose of the "
        "AVP system is assisting the ownship pilot in appreciating the open "
        "airspace safety. There is no other possible primary purpose besides "
        "that in any given scenario.",
        rationale="The primary purpose was reconsidered from a broader "
        "perspective during the influence analysis.",
        referenced_entities=[avp.id, prime_v2.id],
    )

    pilot = engine.create_system(s, "ownship pilot", "agent")
    ids["pilot"] = pilot.id
    awareness = engine.create_aspect(
        s,
        "own_aircraft_pilot_situation_awareness",
        "the pilot's situational safety awareness of their surroundings",
    )
    decision = engine.create_aspect(
        s,
        "own_aircraft_pilot_decision_making_process",
        "the pilot's decision-making process",
    )
    airspace = engine.create_aspect(
        s, "surrounding_airspace_safety", "safety of the surrounding airspace"
    )
    engine.add_to_sphere(s, pilot.id, awareness.id)
    engine.add_to_sphere(s, pilot.id, decision.id)
    ids.update(awareness=awareness.id, decision=decision.id, airspace=airspace.id)

    influence_purpose = engine.add_purpose(
        s,
        "influence",
        avp.id,
        "enhancing the ownship pilot's decision-making process",
        serves=prime_v2.id,
    )
    influence_action = engine.add_action(
        s,
        "influence",
        avp.id,
        "augment the pilot's awareness of their surrounding environment",
        target_system=pilot.id,
        target_aspect=awareness.id,
        fulfills=influence_purpose.id,
    )
    ids.update(
        influence_purpose=influence_purpose.id, influence_action=influence_action.id
    )
    engine.submit_assertion(
        s,
        5,
        "The architect asserts that a valid auxiliary influence purpose for "
        "AVP to achieve its primary purpose, the (AVP) must at least aim to "
        "enhance the (own_aircraft_pilot_decision_making_process). To achieve "
        "the purpose of influence, AVP must at least perform the following "
        "influence action: AVP augments the pilot's awareness "
        "(own_aircraft_pilot_situation_awareness) of their surrounding "
        "environment (surrounding_airspace_safety).",
        referenced_entities=[
            avp.id,
            pilot.id,
            awareness.id,
            airspace.id,
            influence_purpose.id,
            influence_action.id,
        ],
    )
    engine.complete_step(s, 5)

    # Step 6: control interaction
    threat_model = engine.create_aspect(
        s, "threat_predictive_model", "collision threat predictive model"
    )
    intruder_pos = engine.create_aspect(
        s, "intruder_aircraft_position", "position of the intruder aircraft"
    )
    collision_risk = engine.create_aspect(
        s, "risk_of_potential_collision", "evaluated risk of a potential collision"
    )
    engine.add_to_sphere(s, avp.id, threat_model.id)
    engine.add_to_sphere(s, avp.id, collision_risk.id)
    engine.add_to_sphere(s, intruder.id, intruder_pos.id)
    ids.update(
        threat_model=threat_model.id,
        intruder_pos=intruder_pos.id,
        collision_risk=collision_risk.id,
    )

    control_purpose = engine.add_purpose(
        s,
        "control",
        avp.id,
        "enhance the ownship pilot's decision-making process",
        serves=influence_action.id,
    )
    control_action = engine.add_action(
        s,
        "control",
        avp.id,
        "employ the threat predictive model to forecast subsequent intruder "
        "positions and evaluate the risk of a potential collision",
        target_aspect=threat_model.id,
        fulfills=control_purpose.id,
    )
    ids.update(control_purpose=control_purpose.id, control_action=control_action.id)
    engine.submit_assertion(
        s,
        6,
        "The architect asserts that a valid control purpose would be to "
        "enhance (own_aircraft_pilot_decision_making_process). To achieve the "
        "valid control purpose, AVP must at least perform a control action of "
        "employing (threat_predictive_model) to forecast subsequent positions "
        "of (intruder_aircraft_position) and evaluate the risk of a potential "
        "collision (risk_of_potential_collision).",
        referenced_entities=[avp.id, control_purpose.id, control_action.id],
    )
    engine.complete_step(s, 6)

    # Step 7: appreciation interaction
    sun = engine.create_system(s, "sun", "environmental")
    camera = engine.create_aspect(
        s, "own_aircraft_camera", "the ownship's imaging sensors"
    )
    own_camera = engine.create_aspect(
        s, "own_camera", "direction of the ownship camera"
    )
    sun_position = engine.create_aspect(
        s, "sun_position", "position of the sun in the sky"
    )
    engine.add_to_sphere(s, avp.id, camera.id)
    engine.add_to_sphere(s, avp.id, own_camera.id)
    engine.add_to_sphere(s, sun.id, sun_position.id)
    ids.update(
        sun=sun.id,
        camera=camera.id,
        own_camera=own_camera.id,
        sun_position=sun_position.id,
    )

    appreciation_purpose = engine.add_purpose(
        s,
        "appreciation",
        avp.id,
        "account for the sun's position relative to the camera direction",
        serves=control_action.id,
    )
    appreciative_action = engine.add_action(
        s,
        "appreciative",
        avp.id,
        "account for the sun position in the sky relative to the direction of "
        "the camera",
        target_system=sun.id,
        target_aspect=sun_position.id,
        fulfills=appreciation_purpose.id,
    )
    ids.update(
        appreciation_purpose=appreciation_purpose.id,
        appreciative_action=appreciative_action.id,
    )
    engine.submit_assertion(
        s,
        7,
        "The architect asserts that in order to ensure the effectiveness of "
        "the identified control behaviour in achieving the intended impact of "
        "the control purpose, the AVP must acknowledge the context and "
        "potential limitations of visual information received from imaging "
        "sensors (own_aircraft_camera). The AVP needs to acquire the following "
        "appreciative behaviour: account for (sun_position) in the sky "
        "relative to the direction of the camera (own_camera).",
        referenced_entities=[
            avp.id,
            sun.id,
            camera.id,
            own_camera.id,
            sun_position.id,
            appreciation_purpose.id,
            appreciative_action.id,
        ],
    )
    engine.complete_step(s, 7)

    # Step 8: factor collation
    engine.submit_assertion(
        s,
        8,
        "The architect asserts that "
        "(own_aircraft_pilot_decision_making_process) is the most critical "
        "factor in the problem domain, and that the least mentioned factors "
        "indicate potential red flags for sources of surprising emergence.",
        referenced_entities=[decision.id],
    )
    engine.complete_step(s, 8)

    return s, ids
