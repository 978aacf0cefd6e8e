"""Problem-articulation workbench for the eight-step AIC workflow."""

from .engine import (
    Session,
    add_action,
    add_purpose,
    add_to_sphere,
    complete_step,
    create_aspect,
    create_session,
    create_system,
    reconfirm_step,
    revise_step,
    session_status,
    set_prime_purpose,
    submit_assertion,
)
from .factors import compute_factor_report, diff_reports, extract_factors
from .persistence import (
    export_graph,
    load_session,
    render_report,
    save_session,
)
from .steps import get_step, list_steps
from .validation import validate_chain, validate_session

__all__ = [
    "Session",
    "add_action",
    "add_purpose",
    "add_to_sphere",
    "complete_step",
    "compute_factor_report",
    "create_aspect",
    "create_session",
    "create_system",
    "diff_reports",
    "export_graph",
    "extract_factors",
    "get_step",
    "list_steps",
    "load_session",
    "reconfirm_step",
    "render_report",
    "revise_step",
    "save_session",
    "session_status",
    "set_prime_purpose",
    "submit_assertion",
    "validate_chain",
    "validate_session",
]

__version__ = "0.1.0"
