"""Thin command-line client for the QFI service.

By default commands run against an in-process copy of the service; pass
``--server URL`` (or set MZQFI_SERVER) to target a running instance.
Exit codes: 0 success, 1 bad flags or state specs, 2 numeric or
truncation failure.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys

import click


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


def _make_client(server: str | None):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        # environment-specific deprecation chatter from the test client import
        warnings.filterwarnings("ignore", message="Using `httpx` with `starlette.testclient`")
        from fastapi.testclient import TestClient

    from .service.app import app

    return TestClient(app, raise_server_exceptions=False)


def _request(server: str | None, path: str, payload: dict) -> dict:
    with _make_client(server) as client:
        try:
            resp = client.post(path, json=payload)
        except Exception as exc:  # connection refused, DNS, ...
            raise CliError(2, f"request to {path} failed: {exc}") from exc
    if resp.status_code == 200:
        return resp.json()
    try:
        detail = resp.json().get("detail")
    except ValueError:
        detail = resp.text
    if isinstance(detail, dict):
        kind = detail.get("kind", "error")
        message = f"{kind}: {detail.get('message', '')}"
        raise CliError(1 if kind == "usage" else 2, message)
    if resp.status_code in (400, 422):
        raise CliError(1, f"invalid request: {detail}")
    raise CliError(2, f"service error {resp.status_code}: {detail}")


def _fmt_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return str(value)
    return str(value)


def _fmt_meta_value(value) -> str:
    if isinstance(value, (list, tuple)):
        return ";".join(_fmt_cell(v) for v in value)
    return _fmt_cell(value)


def render_scan_csv(payload: dict) -> str:
    buf = io.StringIO()
    for key, value in payload["meta"].items():
        buf.write(f"# {key}={_fmt_meta_value(value)}\r\n")
    writer = csv.writer(buf)
    writer.writerow(payload["columns"])
    for row in payload["rows"]:
        writer.writerow([_fmt_cell(v) for v in row])
    for key, value in payload["footer"].items():
        buf.write(f"# {key}={_fmt_meta_value(value)}\r\n")
    return buf.getvalue()


def render_report_text(report: dict) -> str:
    lines = []
    for key, value in report.items():
        lines.append(f"{key}: {_fmt_cell(value) if value is not None else 'n/a'}")
    return "\n".join(lines) + "\n"


def render_report_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(report.keys())
    writer.writerow([_fmt_cell(v) for v in report.values()])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_scan(payload: dict, fmt: str, out: str | None) -> None:
    if fmt == "json":
        _emit(json.dumps(payload, indent=2) + "\n", out)
    else:
        _emit(render_scan_csv(payload), out)


server_option = click.option(
    "--server", envvar="MZQFI_SERVER", default=None, help="remote service URL (default: in-process)"
)
dim_option = click.option("--dim", type=int, default=None, help="override Fock cutoff")
seed_option = click.option("--seed", type=int, default=0, show_default=True)
out_option = click.option("--out", type=click.Path(dir_okay=False), default=None)


@click.group()
def cli():
    """Two-mode interferometer QFI toolkit (service client)."""


@cli.command("qfi")
@click.option("--a", "a", required=True, help="port-A state, kind:param[:dim]")
@click.option("--b", "b", required=True, help="port-B state, kind:param[:dim]")
@click.option("--tau", type=float, default=math.pi / 2, show_default="pi/2")
@click.option("--loss-T", "loss_t", type=float, default=None, help="arm transmission in [0,1]")
@dim_option
@click.option("--format", "fmt", type=click.Choice(["text", "csv", "json"]), default="text")
@out_option
@server_option
def cmd_qfi(a, b, tau, loss_t, dim, fmt, out, server):
    """Single QFI evaluation with analytic cross-check and PMC verdict."""
    payload = {"a": a, "b": b, "tau": tau, "loss_T": loss_t, "dim": dim}
    report = _request(server, "/qfi", payload)
    if fmt == "json":
        _emit(json.dumps(report, indent=2) + "\n", out)
    elif fmt == "csv":
        _emit(render_report_csv(report), out)
    else:
        _emit(render_report_text(report), out)


@cli.command("pmc-scan")
@click.option("--a", "a", required=True)
@click.option("--b", "b", required=True)
@click.option("--scan", type=click.Choice(["a-phase", "b-phase"]), default="a-phase", show_default=True)
@click.option("--points", type=int, default=180, show_default=True)
@click.option("--phi-min", type=float, default=0.0, show_default=True)
@click.option("--phi-max", type=float, default=math.pi, show_default="pi")
@click.option("--tau", type=float, default=math.pi / 2, show_default="pi/2")
@click.option("--loss-T", "loss_t", type=float, default=None)
@dim_option
@seed_option
@click.option("--workers", type=int, default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@out_option
@server_option
def cmd_pmc_scan(a, b, scan, points, phi_min, phi_max, tau, loss_t, dim, seed, workers, fmt, out, server):
    """Sweep one port's parameter phase; locate the phase-matched maximum."""
    payload = {
        "a": a, "b": b, "scan": scan, "points": points, "phi_min": phi_min,
        "phi_max": phi_max, "tau": tau, "loss_T": loss_t, "dim": dim,
        "seed": seed, "workers": workers,
    }
    _emit_scan(_request(server, "/scan/phase", payload), fmt, out)


@cli.command("loss-scan")
@click.option("--a", "a", required=True)
@click.option("--b", "b", required=True)
@click.option("--t-min", type=float, default=0.05, show_default=True)
@click.option("--t-max", type=float, default=1.0, show_default=True)
@click.option("--points", type=int, default=20, show_default=True)
@dim_option
@seed_option
@click.option("--workers", type=int, default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@out_option
@server_option
def cmd_loss_scan(a, b, t_min, t_max, points, dim, seed, workers, fmt, out, server):
    """Sweep transmission for the coherent x even-cat pair; compare closed forms."""
    payload = {
        "a": a, "b": b, "t_min": t_min, "t_max": t_max, "points": points,
        "dim": dim, "seed": seed, "workers": workers,
    }
    _emit_scan(_request(server, "/scan/loss", payload), fmt, out)


@cli.command("heatmap")
@click.option("--family", type=click.Choice(["squeezed", "cat"]), default="squeezed", show_default=True)
@click.option("--n-min", type=float, default=0.5, show_default=True)
@click.option("--n-max", type=float, default=24.0, show_default=True)
@click.option("--points", type=int, default=50, show_default=True)
@seed_option
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@out_option
@server_option
def cmd_heatmap(family, n_min, n_max, points, seed, fmt, out, server):
    """Matched-QFI ratio F_m/N^2 over a mean-photon-number grid."""
    payload = {"family": family, "n_min": n_min, "n_max": n_max, "points": points, "seed": seed}
    _emit_scan(_request(server, "/heatmap", payload), fmt, out)


@cli.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def cmd_serve(host, port):
    """Run the QFI service with uvicorn."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except CliError as exc:
        click.echo(f"error: {exc.message}", err=True)
        return exc.code
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 1
    except click.Abort:
        return 1


if __name__ == "__main__":
    sys.exit(main())
