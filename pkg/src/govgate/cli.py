"""Operator command line.

Exit codes: 0 success, 1 validation failure, 2 usage error (click's default),
3 runtime failure.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from govgate.errors import GovgateError, PolicyFileError
from govgate.harness.builtin import BUILTIN_SUITES, builtin_suite_path
from govgate.harness.scenario import Scenario
from govgate.harness.suite import Suite, compute_metrics, load_suite, run_suite
from govgate.model.parsing import parse_policy_file
from govgate.model.validation import validate_policy
from govgate.store.store import PolicyStore
from govgate.triggers.embeddings import HashedBagOfWordsEmbedder

EXIT_VALIDATION = 1
EXIT_RUNTIME = 3


@click.group()
def main():
    """Runtime governance engine for tool-using agents."""


@main.command()
@click.argument("paths", nargs=-1, required=True, type=click.Path(exists=True, path_type=Path))
def validate(paths: tuple[Path, ...]):
    """Validate policy files; silent and exit 0 when all are valid."""
    failed = False
    for path in paths:
        try:
            policy = parse_policy_file(path.read_text(encoding="utf-8"))
        except PolicyFileError as exc:
            click.echo(f"{path}: {exc}")
            failed = True
            continue
        for violation in validate_policy(policy):
            click.echo(f"{path}: {violation.field}: {violation.rule}")
            failed = True
    if failed:
        sys.exit(EXIT_VALIDATION)


@main.group()
def store():
    """Policy store maintenance."""


@store.command("load")
@click.argument("directory", type=click.Path(exists=True, file_okay=False, path_type=Path))
def store_load(directory: Path):
    """Build the store from a policy directory and write the embeddings cache."""
    try:
        loaded = PolicyStore.load(directory, HashedBagOfWordsEmbedder())
    except PolicyFileError as exc:
        click.echo(f"{directory}: {exc}")
        sys.exit(EXIT_VALIDATION)
    except GovgateError as exc:
        click.echo(f"error: {exc}")
        sys.exit(EXIT_RUNTIME)
    loaded.save(directory)
    click.echo(f"loaded {len(loaded)} policies from {directory}")


def _resolve_suite(target: str) -> tuple[Suite, Path | None]:
    if target in BUILTIN_SUITES:
        return load_suite(builtin_suite_path(target)), None
    path = Path(target)
    if path.is_dir():
        return load_suite(path), None
    if path.is_file():
        return load_suite(path.parent.parent), path
    raise click.UsageError(
        f"{target!r} is not a suite directory, scenario file, or builtin suite "
        f"{BUILTIN_SUITES}"
    )


@main.command()
@click.argument("target")
@click.option("--policies", "configs", default="all", show_default=True,
              help="Config name from suite.json, or comma-separated names.")
@click.option("--repetitions", default=1, show_default=True, type=int)
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
def run(target: str, configs: str, repetitions: int, as_json: bool):
    """Run one scenario file, a suite directory, or a builtin suite."""
    try:
        suite, scenario_path = _resolve_suite(target)
        config_names = [c.strip() for c in configs.split(",") if c.strip()]
        if scenario_path is not None:
            scenario = Scenario.from_dict(
                json.loads(scenario_path.read_text(encoding="utf-8"))
            )
            suite = Suite(
                name=suite.name,
                scenarios=(scenario,),
                configs=suite.configs,
                policy_sources=suite.policy_sources,
                tools=suite.tools,
                tool_returns=suite.tool_returns,
            )
        results = [run_suite(suite, name, repetitions=repetitions) for name in config_names]
    except (KeyError, GovgateError) as exc:
        click.echo(f"error: {exc}")
        sys.exit(EXIT_RUNTIME)

    metrics = compute_metrics(results)
    if as_json:
        payload = {
            "suite": suite.name,
            "repetitions": repetitions,
            "results": [result.to_dict() for result in results],
            "metrics": metrics,
        }
        click.echo(json.dumps(payload, indent=2, sort_keys=True))
        return

    for result in results:
        click.echo(
            f"{suite.name}[{result.config}] passes per run: {result.per_run_passes()} "
            f"of {len(result.scenario_ids)} (SR {result.success_rate:.1%})"
        )
        for run_outcomes in result.runs[:1]:
            for outcome in run_outcomes:
                mark = "pass" if outcome.passed else "FAIL"
                click.echo(f"  [{mark}] {outcome.scenario_id}")
    for row in metrics["rows"]:
        delta = f" ({row['delta_pp']} pp)" if row["delta_pp"] is not None else ""
        click.echo(
            f"{row['config']}: {row['mean_passes']}/{row['scenarios']} "
            f"({row['success_rate_percent']}%){delta}"
        )


@main.command()
@click.argument("export", type=click.Path(exists=True, dir_okay=False, path_type=Path))
def trace(export: Path):
    """Pretty-print a session trace exported as NDJSON."""
    try:
        for line in export.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            event = json.loads(line)
            decision = event.get("decision") or {}
            selected = decision.get("selected")
            suffix = f" policy={selected}" if selected else ""
            detail = event.get("detail", {})
            name = detail.get("event", "")
            extras = ", ".join(
                f"{k}={v}" for k, v in detail.items() if k != "event" and v is not None
            )
            body = f" {extras}" if extras else ""
            click.echo(
                f"#{event['sequence']:>3} {event['at']} [{event['checkpoint']}] "
                f"{name}{suffix}{body}"
            )
    except (json.JSONDecodeError, KeyError) as exc:
        click.echo(f"error: not a trace export: {exc}")
        sys.exit(EXIT_RUNTIME)


@main.command()
@click.option("--bind", default="127.0.0.1:8080", show_default=True,
              help="host:port to listen on.")
@click.option("--store", "store_dir", envvar="GOVGATE_STORE", required=True,
              type=click.Path(file_okay=False, path_type=Path),
              help="Policy store directory (env: GOVGATE_STORE).")
@click.option("--persist", is_flag=True, help="Paused sessions survive restart.")
@click.option("--scenario-bank", type=click.Path(exists=True, file_okay=False, path_type=Path),
              default=None, help="Suite directory driving scripted sessions.")
@click.option("--console", "console_dir", type=click.Path(exists=True, file_okay=False, path_type=Path),
              default=None, help="Static approval-console build to serve at /console.")
def serve(bind: str, store_dir: Path, persist: bool, scenario_bank: Path | None,
          console_dir: Path | None):
    """Start the governance gateway."""
    import uvicorn

    from govgate.gateway.app import create_app
    from govgate.gateway.runtime import GatewayRuntime

    try:
        host, _, port_text = bind.rpartition(":")
        port = int(port_text)
        if not host:
            raise ValueError(bind)
    except ValueError:
        raise click.UsageError(f"--bind must be host:port, got {bind!r}")

    try:
        runtime = GatewayRuntime(
            store_dir, persist_paused=persist, scenario_bank=scenario_bank
        )
    except (PolicyFileError, GovgateError) as exc:
        click.echo(f"error: failed to load store: {exc}")
        sys.exit(EXIT_RUNTIME)
    app = create_app(runtime)
    if console_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/console", StaticFiles(directory=console_dir, html=True))
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except OSError as exc:
        click.echo(f"error: failed to bind {bind}: {exc}")
        sys.exit(EXIT_RUNTIME)


if __name__ == "__main__":
    main()
