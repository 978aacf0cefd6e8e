"""Fixed catalog of the eight articulation steps.

Each step carries the predictive question that triggers the thinking
operation, the guiding prompt that assists with solving it, and the
completion criterion. The criterion is display text only: completion is
always an explicit architect action, never inferred by the engine.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotFoundError


@dataclass(frozen=True)
class StepDefinition:
    index: int
    name: str
    predictive_question: str
    guiding_prompt: str
    completion_criterion: str


_CATALOG: tuple[StepDefinition, ...] = (
    StepDefinition(
        index=1,
        name="Identify a list of unsafe behaviours",
        predictive_question=(
            "Given the input information provided in the problem brief, what is "
            "the list of all possible unsafe appreciative, influence or control "
            "interactions?"
        ),
        guiding_prompt=(
            "Describe the unsafe behaviours in the observed systems phenomenon."
        ),
        completion_criterion=(
            "The step is complete when the architect judges that all the unsafe "
            "behaviours have been identified."
        ),
    ),
    StepDefinition(
        index=2,
        name="Observe and identify the systems contributing to the unsafe behaviour",
        predictive_question=(
            "Given the output from step 1, what are the systems involved in the "
            "unsafe behaviour?"
        ),
        guiding_prompt=(
            "Considering the unsafe behaviour as a system of systems, identify "
            "the systems that contribute to the unsafe behaviour."
        ),
        completion_criterion=(
            "The step is considered complete when all contributing systems have "
            "been identified."
        ),
    ),
    StepDefinition(
        index=3,
        name="Define actions of the contributing systems that cause unsafe behaviour",
        predictive_question=(
            "Given the output from steps 1-2, what are the unsafe appreciative, "
            "influencing, or control actions?"
        ),
        guiding_prompt=(
            "Infer the identified systems' immediate unsafe actions that "
            "contribute to the unsafe interaction. The unsafe action provides an "
            "answer to what makes the overall interaction unsafe."
        ),
        completion_criterion=(
            "The step is considered complete when the architect judges that all "
            "system actions have been defined."
        ),
    ),
    StepDefinition(
        index=4,
        name="Determine the primary purpose behind the unsafe action",
        predictive_question=(
            "Given steps 1-3 outputs, what is the contributing system's original "
            "primary purpose (PrimeP)?"
        ),
        guiding_prompt=(
            "Envision that the identified systems have a purpose to master a "
            "skill that mitigates the unsafe action. With that in mind, define "
            "systems' primary purpose (PrimeP) as if it has the intent to govern "
            "or master such a skill. A purpose can be defined as a verb that "
            "describes a system-level action done by a system unto another "
            "system. One implicit assumption (which must be made explicit in the "
            "architect's assertion statement) is that a system's PrimeP is fixed "
            "in any given scenario. This assumption is crucial, as it forms the "
            "basis for justifying and predicting auxiliary purposes in any other "
            "context. Systems' auxiliary interactions may change based on the "
            "situation at hand; however, the driving PrimeP remains constant "
            "regardless of the situation. Therefore, it is important that the "
            "architect chooses a PrimeP carefully."
        ),
        completion_criterion=(
            "The step is considered complete when the architect judges that all "
            "PrimePs have been derived."
        ),
    ),
    StepDefinition(
        index=5,
        name="Predict auxiliary Influence interaction",
        predictive_question=(
            "Given the output from steps 1-4, which other system, capability, or "
            "behaviour must the identified systems indirectly control to achieve "
            "their respective PrimePs?"
        ),
        guiding_prompt=(
            "For each system, determine an auxiliary indirect influence purpose "
            "to achieve the respective PrimeP. Once the purpose of auxiliary "
            "influence has been identified, a list of influential actions should "
            "be determined. Recognizing the subtle difference between a direct "
            "control action and an indirect influence action is important. "
            "Influence action is an action from the source system unto an aspect "
            "that is outside the source's sphere of possible direct control and "
            "within the target-influenced sink's sphere of possible direct "
            "control. On the other hand, a control action would be an action that "
            "the source system performs on an aspect within its own sphere of "
            "direct control to achieve an influence action. Therefore, when "
            "choosing an influence action, it is important to consider something "
            "about the sink that can only be indirectly controlled by the source "
            "system."
        ),
        completion_criterion=(
            "The step is considered complete when the architect judges that all "
            "auxiliary influence interactions have been identified."
        ),
    ),
    StepDefinition(
        index=6,
        name="Predict auxiliary Control interaction",
        predictive_question=(
            "Given the output from steps 1-5, which capability, system, or "
            "behaviour should the identified systems aim to control to achieve "
            "their respective auxiliary influence purpose?"
        ),
        guiding_prompt=(
            "Consider every influence action as the auxiliary control purpose, "
            "then define a list of control actions that deliver the control "
            "purpose."
        ),
        completion_criterion=(
            "The step is considered complete when the architect judges that all "
            "auxiliary control interactions have been identified."
        ),
    ),
    StepDefinition(
        index=7,
        name="Predict auxiliary Appreciation interaction",
        predictive_question=(
            "Given the output from steps 1-6, what other systems must the "
            "identified systems appreciate to ensure the success of their control "
            "behaviours in delivering the required control purposes?"
        ),
        guiding_prompt=(
            "For every control action, infer the appreciation purpose of some "
            "third-party appreciated system, which impacts the success of the "
            "control action in manifesting its control purpose. Appreciated "
            "system behaviours directly impact the identified system control "
            "behaviour."
        ),
        completion_criterion=(
            "The step is considered complete when the architect identifies all "
            "possible appreciated systems and appreciative actions."
        ),
    ),
    StepDefinition(
        index=8,
        name="Predict and analyse factors and challenges",
        predictive_question=(
            "Given the output from steps 1-7, what are the factors or challenges "
            "involved in the problem domain, the most influential factors or "
            "challenges, and potential sources of surprising emergence?"
        ),
        guiding_prompt=(
            "Highlight all possible factors or challenges (systems and "
            "capabilities) involved in the situation from the predicted "
            "knowledge. After collating all factors or challenges, define each "
            "factor and compute its frequency of mentioning in the analyses. The "
            "most mentioned factors or challenges are the most influential "
            "factors or challenges. However, the least mentioned are not the "
            "last to worry about, they indicate potential red flags for sources "
            "of potential surprising emergence."
        ),
        completion_criterion=(
            "The step is considered complete when all factors are captured, "
            "defined and evaluated for frequency."
        ),
    ),
)

STEP_COUNT = len(_CATALOG)


def get_step(index: int) -> StepDefinition:
    """Return the catalog entry for ``index`` (1..8)."""
    if not isinstance(index, int) or not 1 <= index <= STEP_COUNT:
        raise NotFoundError(f"no step with index {index!r}; valid indices are 1..8")
    return _CATALOG[index - 1]


def list_steps() -> list[StepDefinition]:
    """All eight step definitions in index order."""
    return list(_CATALOG)
