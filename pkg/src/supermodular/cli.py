"""Command-line client for the compute service.

Commands build a JSON request and post it to the service: against a remote
instance when --server is given, otherwise against an in-process copy of the
app (no network, same wire format).  Exit status is nonzero whenever the
checked property fails.
"""

from __future__ import annotations

import asyncio
import json

import click
import httpx


def _post(server: str | None, path: str, payload: dict) -> dict:
    if server:
        with httpx.Client(base_url=server, timeout=None) as client:
            response = client.post(path, json=payload)
    else:
        from .service.app import create_app

        async def go():
            transport = httpx.ASGITransport(app=create_app())
            async with httpx.AsyncClient(transport=transport, base_url="http://supermodular", timeout=None) as client:
                return await client.post(path, json=payload)

        response = asyncio.run(go())
    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise click.ClickException(f"service error ({response.status_code}): {detail}")
    return response.json()


def _echo_json(data: dict | list) -> None:
    click.echo(json.dumps(data, indent=2))


@click.group()
@click.option("--server", default=None, envvar="SUPERMODULAR_SERVER", help="Base URL of a running service; defaults to in-process execution.")
@click.pass_context
def main(ctx: click.Context, server: str | None) -> None:
    """Exact modular-data computations."""
    ctx.obj = server


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("supermodular.service.app:app", host=host, port=port)


@main.command("export-data")
@click.option("--m", required=True, type=int)
@click.option("--kind", type=click.Choice(["su2", "psu2-hat"]), default="su2", show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Write JSON here instead of stdout.")
@click.pass_obj
def export_data(server: str | None, m: int, kind: str, output: str | None) -> None:
    """Export exact modular data as JSON."""
    path = "/modular-data/su2" if kind == "su2" else "/hat-data/psu2"
    data = _post(server, path, {"m": m})
    text = json.dumps(data, indent=2)
    if output:
        with open(output, "w") as fh:
            fh.write(text)
        click.echo(f"wrote {output}")
    else:
        click.echo(text)


@main.command("verify-axioms")
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), default=None, help="Serialized modular data (JSON).")
@click.option("--m", type=int, default=None, help="Construct the rank-(4m+3) family data instead of reading a file.")
@click.pass_obj
def verify_axioms(server: str | None, input_path: str | None, m: int | None) -> None:
    """Check the S/T relations; nonzero exit on any axiom failure."""
    if (input_path is None) == (m is None):
        raise click.UsageError("provide exactly one of --input or --m")
    payload: dict = {"m": m}
    if input_path:
        with open(input_path) as fh:
            payload = {"modular_data": json.load(fh)}
    report = _post(server, "/verify-axioms", payload)
    _echo_json(report)
    if not report["all_ok"]:
        raise SystemExit(1)


@main.command("spin-decompose")
@click.option("--m", type=int, default=None)
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--fermion", type=int, default=None, help="Fermion label; autodetected when omitted.")
@click.option("--include-matrices", is_flag=True, default=False)
@click.pass_obj
def spin_decompose_cmd(server: str | None, m: int | None, input_path: str | None, fermion: int | None, include_matrices: bool) -> None:
    """Grade, partition and block-decompose spin data; emits a JSON report."""
    if (input_path is None) == (m is None):
        raise click.UsageError("provide exactly one of --input or --m")
    payload: dict = {"m": m, "fermion": fermion, "include_matrices": include_matrices}
    if input_path:
        with open(input_path) as fh:
            payload = {"modular_data": json.load(fh), "fermion": fermion, "include_matrices": include_matrices}
    report = _post(server, "/spin-decompose", payload)
    _echo_json(report)
    if not report["all_ok"]:
        raise SystemExit(1)


@main.command("congruence-level")
@click.option("--m", required=True, type=int)
@click.option("--bound", type=int, default=None, help="Even search bound; defaults to 16(m+1).")
@click.option("--cap", type=int, default=2_000_000, show_default=True)
@click.pass_obj
def congruence_level(server: str | None, m: int, bound: int | None, cap: int) -> None:
    """Minimal even level whose principal congruence subgroup is in the kernel."""
    report = _post(server, "/congruence-level", {"m": m, "bound": bound, "cap": cap})
    _echo_json(report)
    if report["minimal_level"] is None:
        raise SystemExit(1)


@main.command("lemma-check")
@click.option("--n", required=True, type=int)
@click.pass_obj
def lemma_check(server: str | None, n: int) -> None:
    """Verify the index-3 order split of the mod-n theta quotient."""
    report = _post(server, "/lemma-check", {"n": n})
    _echo_json(report)
    if not report["ok"]:
        raise SystemExit(1)


@main.command()
@click.option("--m-max", default=6, show_default=True, type=int)
@click.option("--m-limit", default=8, show_default=True, type=int, help="Guard rail for the largest permitted m.")
@click.option("--format", "fmt", type=click.Choice(["text", "csv", "json"]), default="text", show_default=True)
@click.option("--no-levels", is_flag=True, default=False, help="Skip the minimal-level column.")
@click.option("--cap", type=int, default=2_000_000, show_default=True)
@click.pass_obj
def table1(server: str | None, m_max: int, m_limit: int, fmt: str, no_levels: bool, cap: int) -> None:
    """Survey table: group orders, fingerprints and congruence levels per m."""
    data = _post(
        server,
        "/table1",
        {"m_max": m_max, "m_limit": m_limit, "format": fmt, "include_levels": not no_levels, "cap": cap},
    )
    click.echo(data["rendered"])


@main.command()
@click.option("--m-max", default=6, show_default=True, type=int)
@click.option("--m-limit", default=8, show_default=True, type=int)
@click.option("--cap", type=int, default=2_000_000, show_default=True)
@click.pass_obj
def conjectures(server: str | None, m_max: int, m_limit: int, cap: int) -> None:
    """Evaluate the structure clauses (a)-(f); nonzero exit if any fails."""
    data = _post(server, "/conjectures", {"m_max": m_max, "m_limit": m_limit, "cap": cap})
    for v in data["verdicts"]:
        status = "PASS" if v["passed"] else "FAIL"
        click.echo(f"({v['clause']}) m={v['m']}: {status}  expected {v['expected']}; computed {v['computed']}")
    if not data["all_passed"]:
        raise SystemExit(1)


@main.command("certify-infinite")
@click.option("--cap", type=int, default=100_000, show_default=True)
@click.pass_obj
def certify_infinite(server: str | None, cap: int) -> None:
    """Exact annihilation identity plus closure evidence at m=1."""
    report = _post(server, "/certify-infinite", {"cap": cap})
    _echo_json(report)
    if not report["ok"]:
        raise SystemExit(1)


@main.command("run-all")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.pass_obj
def run_all_cmd(server: str | None, config_path: str) -> None:
    """Run every suite per a key=value config file; artifacts go to output_dir."""
    from .survey import RunAllConfig

    with open(config_path) as fh:
        try:
            config = RunAllConfig.from_text(fh.read())
        except ValueError as exc:
            raise click.ClickException(str(exc))
    data = _post(server, "/run-all", config.as_dict())
    for warning in data["warnings"]:
        click.echo(f"warning: {warning}", err=True)
    for failure in data["failures"]:
        click.echo(f"FAIL: {failure}", err=True)
    click.echo(f"artifacts: {', '.join(data['artifacts'])}")
    click.echo("all checks passed" if data["ok"] else "checks FAILED")
    raise SystemExit(data["exit_code"])


if __name__ == "__main__":
    main()
