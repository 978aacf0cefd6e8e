import json

import pytest

from aicwb import steps
from aicwb.errors import NotFoundError

from conftest import SHARED_DIR


def test_catalog_has_exactly_eight_steps_in_order():
    catalog = steps.list_steps()
    assert len(catalog) == 8
    assert [s.index for s in catalog] == list(range(1, 9))


def test_all_text_fields_non_empty():
    for step in steps.list_steps():
        assert step.name
        assert step.predictive_question
        assert step.guiding_prompt
        assert step.completion_criterion


def test_get_step_returns_catalog_entry():
    assert steps.get_step(3) is steps.list_steps()[2]


@pytest.mark.parametrize("index", [0, 9, -1, 100])
def test_out_of_range_index_is_not_found(index):
    with pytest.raises(NotFoundError):
        steps.get_step(index)


@pytest.mark.parametrize(
    "index,fragment",
    [
        (1, "Describe the unsafe behaviours in the observed systems phenomenon"),
        (2, "identify the systems that contribute to the unsafe behaviour"),
        (3, "immediate unsafe actions"),
        (4, "A purpose can be defined as a verb"),
        (5, "outside the source's sphere of possible direct control"),
        (6, "Consider every influence action as the auxiliary control purpose"),
        (7, "infer the appreciation purpose"),
        (8, "compute its frequency of mentioning"),
    ],
)
def test_guiding_prompts_carry_expected_phrases(index, fragment):
    assert fragment in steps.get_step(index).guiding_prompt


def test_catalog_is_immutable():
    step = steps.get_step(1)
    with pytest.raises(AttributeError):
        step.name = "changed"


def test_golden_catalog_file_matches():
    golden = json.loads((SHARED_DIR / "step-catalog.json").read_text("utf-8"))
    assert golden == [vars(s) for s in steps.list_steps()]
