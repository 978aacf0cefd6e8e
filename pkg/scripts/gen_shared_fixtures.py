#!/usr/bin/env python3
"""Regenerate the shared conformance fixtures in shared/.

The token-grammar vectors keep the server-side extractor and the
frontend's live-highlighting reimplementation in lockstep; the step
catalog export lets the frontend tests check verbatim rendering without a
running service.
"""

import json
from datetime import datetime, timezone
from pathlib import Path

from aicwb import factors, persistence
from aicwb.factors import extract_factors
from aicwb.fixture import build_fixture
from aicwb.steps import list_steps

ROOT = Path(__file__).resolve().parent.parent
SHARED = ROOT / "shared"
FRONTEND_FIXTURES = ROOT / "frontend" / "tests" / "fixtures"


def _fixed_clock() -> datetime:
    return datetime(2026, 3, 1, 12, 0, 0, tzinfo=timezone.utc)

VECTOR_TEXTS = [
    "",
    "no factors here",
    "account for (sun_position) in the sky relative to the direction of the "
    "camera (own_camera)",
    "the (AVP) augments (Own_Aircraft_Pilot_Situation_Awareness)",
    "employing (threat_predictive_model) to forecast subsequent positions of "
    "(intruder_aircraft_position) and evaluate the risk of a potential "
    "collision (risk_of_potential_collision)",
    "(a_b) twice (a_b) counts twice",
    "(A_B) and (a_b) normalize to the same token",
    "(x_y_z)",
    "(x_y_z) with digits (alt2_mode3) and (k9_unit)",
    "(2fast_lane) leading digit is not a factor",
    "(_leading_underscore) and (trailing_underscore_) and (double__underscore)",
    "(singleword) is an abbreviation, not a factor",
    "(with space_inside) and (hyphen-ated_token) do not match",
    "nested ((inner_token)) parentheses",
    "unbalanced (open_token and close_token) mix",
    "(tab\t_sep) control characters do not match",
    "(a_) and (_b) and (_) degenerate segments",
    "mixed (Sun_Position) CASE and (sun_position) again",
    "(factor_one)(factor_two)(factor_three) back to back",
    "parens () empty and ( spaced_out ) padded",
]


def main() -> None:
    SHARED.mkdir(exist_ok=True)
    vectors = [{"text": t, "tokens": extract_factors(t)} for t in VECTOR_TEXTS]
    (SHARED / "token-grammar-vectors.json").write_text(
        json.dumps(vectors, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    catalog = [vars(s) for s in list_steps()]
    (SHARED / "step-catalog.json").write_text(
        json.dumps(catalog, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    FRONTEND_FIXTURES.mkdir(parents=True, exist_ok=True)
    session, _ = build_fixture(session_id="uifixture", clock=_fixed_clock)
    (FRONTEND_FIXTURES / "session.json").write_bytes(
        persistence.save_session(session)
    )
    (FRONTEND_FIXTURES / "factors.json").write_text(
        json.dumps(
            factors.compute_factor_report(session).to_dict(),
            indent=2, sort_keys=True,
        ) + "\n",
        encoding="utf-8",
    )
    (FRONTEND_FIXTURES / "graph.json").write_text(
        json.dumps(persistence.export_graph(session), indent=2, sort_keys=True)
        + "\n",
        encoding="utf-8",
    )
    print(
        f"wrote {len(vectors)} vectors, {len(catalog)} catalog entries, "
        "and 3 frontend fixture payloads"
    )


if __name__ == "__main__":
    main()
