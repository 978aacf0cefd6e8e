"""Command-line front door for the articulation workflow.

Exit codes: 0 success, 1 when a rule is violated or ``validate`` reports
error-severity findings, 2 on usage errors or a missing session file.
Mutating commands hold an advisory file lock and persist atomically, so a
failed command leaves the session file byte-identical.
"""

from __future__ import annotations

import contextlib
import fcntl
import json
import os
import sys
from pathlib import Path

import click

from . import engine, factors, persistence, steps
from .errors import WorkbenchError
from .validation import validate_session

THRESHOLD_ENV_VAR = "AICWB_RED_FLAG_THRESHOLD"


def _default_threshold() -> int | None:
    raw = os.environ.get(THRESHOLD_ENV_VAR)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise click.UsageError(
            f"{THRESHOLD_ENV_VAR} must be an integer, got {raw!r}"
        ) from None


def _load(path: str) -> engine.Session:
    if not Path(path).exists():
        click.echo(f"error: session file {path!r} does not exist", err=True)
        sys.exit(2)
    try:
        return persistence.load_session_from_path(path)
    except WorkbenchError as exc:
        click.echo(f"error: {exc.message}", err=True)
        sys.exit(2)


@contextlib.contextmanager
def _session_lock(path: str):
    """Advisory exclusive lock for mutating commands (single-writer)."""
    lock_path = path + ".lock"
    with open(lock_path, "w") as handle:
        fcntl.flock(handle, fcntl.LOCK_EX)
        try:
            yield
        finally:
            fcntl.flock(handle, fcntl.LOCK_UN)


def _read_text(text: str | None) -> str:
    if text is not None:
        return text
    return sys.stdin.read().strip()


@contextlib.contextmanager
def _engine_errors():
    try:
        yield
    except WorkbenchError as exc:
        click.echo(f"error: {exc.message}", err=True)
        sys.exit(1)


@click.group()
def main():
    """Problem-articulation workbench for the eight-step AIC workflow."""


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--name", required=True, help="Session name.")
@click.option(
    "--red-flag-threshold",
    type=int,
    default=None,
    help=f"Red-flag threshold (default 1, or {THRESHOLD_ENV_VAR}).",
)
def init(path: str, name: str, red_flag_threshold: int | None):
    """Create a new session document at PATH."""
    if Path(path).exists():
        click.echo(f"error: {path!r} already exists", err=True)
        sys.exit(2)
    threshold = (
        red_flag_threshold
        if red_flag_threshold is not None
        else _default_threshold() or factors.DEFAULT_RED_FLAG_THRESHOLD
    )
    with _engine_errors():
        session = engine.create_session(name, red_flag_threshold=threshold)
        persistence.save_session_to_path(session, path)
    click.echo(f"created session {session.id} ({name}) at {path}")


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--json", "as_json", is_flag=True)
def status(path: str, as_json: bool):
    """Per-step status, assertion counts, version, pending findings."""
    session = _load(path)
    summary = engine.session_status(session)
    if as_json:
        click.echo(json.dumps(summary, indent=2, sort_keys=True))
        return
    click.echo(f"session {summary['session_id']} ({summary['name']})")
    click.echo(
        f"version {summary['version']}, red-flag threshold "
        f"{summary['red_flag_threshold']}"
    )
    for step in summary["steps"]:
        click.echo(
            f"  step {step['index']}: {step['status']} "
            f"({step['assertion_count']} assertion"
            f"{'s' if step['assertion_count'] != 1 else ''})"
        )
    if summary["stale_steps"]:
        stale = ", ".join(str(k) for k in summary["stale_steps"])
        click.echo(f"stale steps: {stale}")
    click.echo(f"pending findings: {summary['pending_findings']}")
    if summary["finished"]:
        click.echo("session finished: all 8 steps complete")


@main.command(name="steps")
@click.option("--json", "as_json", is_flag=True)
def steps_cmd(as_json: bool):
    """List the eight step definitions."""
    catalog = steps.list_steps()
    if as_json:
        click.echo(
            json.dumps(
                [vars(step) for step in catalog], indent=2, sort_keys=True
            )
        )
        return
    for step in catalog:
        click.echo(f"{step.index}. {step.name}")
        click.echo(f"   Q: {step.predictive_question}")


@main.command(name="step-open")
@click.argument("path", type=click.Path(dir_okay=False))
@click.argument("index", type=int)
@click.option("--json", "as_json", is_flag=True)
def step_open(path: str, index: int, as_json: bool):
    """Show a step's question, prompt, criterion, state, and assertions."""
    session = _load(path)
    with _engine_errors():
        definition = steps.get_step(index)
    current = session.current_assertions(index)
    if as_json:
        click.echo(
            json.dumps(
                {
                    "definition": vars(definition),
                    "status": session.steps[index - 1],
                    "assertions": [a.to_dict() for a in current],
                },
                indent=2,
                sort_keys=True,
            )
        )
        return
    click.echo(f"Step {definition.index}: {definition.name} "
               f"[{session.steps[index - 1]}]")
    click.echo(f"Predictive question: {definition.predictive_question}")
    click.echo(f"Guiding prompt: {definition.guiding_prompt}")
    click.echo(f"Completion criterion: {definition.completion_criterion}")
    if current:
        click.echo("Current assertions:")
        for assertion in current:
            click.echo(f"  {assertion.id} (rev {assertion.revision}): "
                       f"{assertion.text}")


@main.command(name="step-submit")
@click.argument("path", type=click.Path(dir_okay=False))
@click.argument("index", type=int)
@click.option("--text", default=None, help="Assertion text (stdin if omitted).")
@click.option("--ref", "refs", multiple=True, help="Referenced entity id.")
@click.option("--expected-version", type=int, default=None)
def step_submit(path, index, text, refs, expected_version):
    """Record an assertion on a step."""
    with _session_lock(path):
        session = _load(path)
        with _engine_errors():
            assertion = engine.submit_assertion(
                session,
                index,
                _read_text(text),
                referenced_entities=refs,
                expected_version=expected_version,
            )
            persistence.save_session_to_path(session, path)
    click.echo(
        f"recorded assertion {assertion.id} on step {index} "
        f"(session version {session.version})"
    )
    if assertion.factor_tokens:
        click.echo("factors: " + ", ".join(assertion.factor_tokens))


@main.command(name="step-complete")
@click.argument("path", type=click.Path(dir_okay=False))
@click.argument("index", type=int)
@click.option("--expected-version", type=int, default=None)
def step_complete(path, index, expected_version):
    """Mark a step complete and open the next one."""
    with _session_lock(path):
        session = _load(path)
        with _engine_errors():
            engine.complete_step(session, index, expected_version=expected_version)
            persistence.save_session_to_path(session, path)
    click.echo(f"step {index} complete (session version {session.version})")


@main.command(name="step-revise")
@click.argument("path", type=click.Path(dir_okay=False))
@click.argument("index", type=int)
@click.argument("assertion_id")
@click.option("--rationale", required=True)
@click.option("--text", default=None, help="New assertion text (stdin if omitted).")
@click.option("--expected-version", type=int, default=None)
def step_revise(path, index, assertion_id, rationale, text, expected_version):
    """Supersede an assertion; complete downstream steps become stale."""
    with _session_lock(path):
        session = _load(path)
        with _engine_errors():
            new = engine.revise_step(
                session,
                index,
                assertion_id,
                _read_text(text),
                rationale,
                expected_version=expected_version,
            )
            persistence.save_session_to_path(session, path)
    click.echo(
        f"assertion {assertion_id} superseded by {new.id} "
        f"(revision {new.revision}, session version {session.version})"
    )
    stale = [
        str(k)
        for k in range(1, engine.STEP_COUNT + 1)
        if session.steps[k - 1] == engine.STALE
    ]
    if stale:
        click.echo("stale steps awaiting reconfirmation: " + ", ".join(stale))


@main.command(name="step-reconfirm")
@click.argument("path", type=click.Path(dir_okay=False))
@click.argument("index", type=int)
@click.option("--expected-version", type=int, default=None)
def step_reconfirm(path, index, expected_version):
    """Re-judge a stale step as still valid."""
    with _session_lock(path):
        session = _load(path)
        with _engine_errors():
            engine.reconfirm_step(session, index, expected_version=expected_version)
            persistence.save_session_to_path(session, path)
    click.echo(f"step {index} reconfirmed (session version {session.version})")


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--json", "as_json", is_flag=True)
def validate(path: str, as_json: bool):
    """Audit the session; exits 1 if any error-severity finding exists."""
    session = _load(path)
    findings = validate_session(session)
    if as_json:
        click.echo(json.dumps([f.to_dict() for f in findings], indent=2))
    elif not findings:
        click.echo("no findings")
    else:
        for finding in findings:
            click.echo(
                f"[{finding.severity}] {finding.code} ({finding.entity}): "
                f"{finding.message}"
            )
    if any(f.severity == "error" for f in findings):
        sys.exit(1)


@main.command(name="factors")
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--threshold", type=int, default=None)
@click.option("--json", "as_json", is_flag=True)
def factors_cmd(path: str, threshold: int | None, as_json: bool):
    """Factor-frequency table with influence and red-flag classification."""
    session = _load(path)
    if threshold is None:
        threshold = _default_threshold()
    with _engine_errors():
        report = factors.compute_factor_report(session, threshold)
    if as_json:
        click.echo(json.dumps(report.to_dict(), indent=2))
        return
    if not report.entries:
        click.echo("no factors mentioned yet")
        return
    width = max(len(e.token) for e in report.entries)
    for entry in report.entries:
        step_list = ",".join(str(s) for s in entry.steps)
        click.echo(
            f"{entry.token.ljust(width)}  {entry.frequency:>3}  "
            f"steps {step_list:<12} {entry.classification}"
        )
    click.echo(
        f"{report.total_factors} distinct factors, {report.total_mentions} "
        f"mentions (red-flag threshold {report.threshold})"
    )


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
def report(path: str):
    """Render the full Markdown report to stdout."""
    session = _load(path)
    click.echo(persistence.render_report(session), nl=False)


@main.command()
@click.option("--host", default="127.0.0.1", envvar="AICWB_HOST")
@click.option("--port", type=int, default=8800, envvar="AICWB_PORT")
@click.option(
    "--storage-dir",
    type=click.Path(file_okay=False),
    default=".",
    envvar="AICWB_STORAGE_DIR",
)
@click.option("--cors-origin", "cors_origins", multiple=True)
def serve(host, port, storage_dir, cors_origins):
    """Run the HTTP service over a directory of session documents."""
    import uvicorn

    from .api import create_app

    Path(storage_dir).mkdir(parents=True, exist_ok=True)
    app = create_app(storage_dir, cors_origins=list(cors_origins) or None)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
