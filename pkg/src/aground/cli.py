"""Command-line interface: batch assessment, the HTTP service, bundled case
studies and flow-rate ingestion."""

from __future__ import annotations

import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import click

from . import cases as case_mod
from . import session as sess
from .errors import AgroundError
from .ingest import LevelSeries, VolumeCurve, flow_rate_from_levels
from .ship import incident_from_json, model_from_json, ship_from_json

DATA_DIR_ENV = "AGROUND_DATA_DIR"


def _apply_flags(model, seed, samples, bins):
    if seed is not None:
        model = replace(model, seed=int(seed))
    if samples is not None:
        model = replace(model, samples_per_cell=int(samples))
    if bins:
        overrides = dict(model.bins)
        for part in bins.split(","):
            node, _, count = part.partition("=")
            if not count:
                raise click.BadParameter(f"--bins expects NODE=N, got {part!r}")
            overrides[node.strip()] = int(count)
        model = replace(model, bins=overrides)
    return model


@click.group()
def main():
    """Probabilistic grounding damage assessment."""


@main.command()
@click.option("--ship", "ship_path", required=True, type=click.Path(exists=True))
@click.option("--incident", "incident_path", required=True, type=click.Path(exists=True))
@click.option("--model", "model_path", type=click.Path(exists=True))
@click.option("--evidence", "evidence_path", type=click.Path(exists=True),
              help="JSON Lines file, one observation per line.")
@click.option("--query", default="D_t,D_v,Y_D", show_default=True)
@click.option("--seed", type=int, default=None, help="Table synthesis seed.")
@click.option("--samples", type=int, default=None, help="Samples per parent cell.")
@click.option("--bins", default="", help="Per-node bin overrides, e.g. Q=128,E=64.")
@click.option("--out", "out_path", type=click.Path(), help="Write the report JSON here.")
def assess(ship_path, incident_path, model_path, evidence_path, query, seed, samples, bins, out_path):
    """One-shot assessment from config and evidence files."""
    try:
        ship = ship_from_json(json.loads(Path(ship_path).read_text()))
        model = model_from_json(json.loads(Path(model_path).read_text()) if model_path else {})
        model = _apply_flags(model, seed, samples, bins)
        incident = incident_from_json(json.loads(Path(incident_path).read_text()))
        session = sess.create_session(ship, model, incident)
        if evidence_path:
            for line in Path(evidence_path).read_text().splitlines():
                if not line.strip():
                    continue
                rec = json.loads(line)
                sess.add_evidence(session, sess.Evidence(
                    node=rec["node"], value=rec["value"],
                    timestamp=rec.get("timestamp", ""), source=rec.get("source", "")))
        nodes = [n.strip() for n in query.split(",") if n.strip()]
        nodes = [n for n in nodes if n in session.network.nodes]
        report = session.report(nodes)
        payload = json.dumps({"session_id": session.id, "posteriors": report},
                             indent=2, sort_keys=True)
        if out_path:
            Path(out_path).write_text(payload)
        click.echo(payload)
    except AgroundError as exc:
        raise click.ClickException(f"{type(exc).__name__}: {exc}") from None


@main.command()
@click.option("--port", default=8800, show_default=True, type=int)
@click.option("--data-dir", default=None, type=click.Path(),
              help=f"Session storage directory (default ${DATA_DIR_ENV} or ./data).")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--ui-dir", default=None, type=click.Path(),
              help="Serve the operator console from this directory at /ui "
                   "(defaults to ./frontend when it holds an index.html).")
def serve(port, data_dir, host, ui_dir):
    """Run the HTTP JSON service."""
    from .service import serve as run_service

    data_dir = data_dir or os.environ.get(DATA_DIR_ENV, "data")
    if ui_dir is None and Path("frontend/index.html").exists():
        ui_dir = "frontend"
    try:
        run_service(port=port, data_dir=data_dir, host=host, ui_dir=ui_dir)
    except AgroundError as exc:
        raise click.ClickException(f"{type(exc).__name__}: {exc}") from None


@main.group()
def case():
    """Bundled case studies."""


@case.command("show")
@click.argument("name")
def case_show(name):
    """Print a case's configuration and evidence script as JSON."""
    from .ship import incident_to_json, model_to_json, ship_to_json

    try:
        fx = case_mod.case_fixture(name)
    except AgroundError as exc:
        raise click.ClickException(f"{type(exc).__name__}: {exc}") from None
    click.echo(json.dumps({
        "name": fx["name"],
        "ship": ship_to_json(fx["ship"]),
        "model": model_to_json(fx["model"]),
        "incident": incident_to_json(fx["incident"]),
        "evidence": [{"node": n, "value": v} for n, v in fx["evidence"]],
        "query": fx["query"],
    }, indent=2, sort_keys=True))


@case.command("run")
@click.argument("name")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--samples", default=256, show_default=True, type=int)
@click.option("--out", "out_dir", type=click.Path(), default=None,
              help="Directory for the report JSON and histogram CSV.")
def case_run(name, seed, samples, out_dir):
    """Run a case's evidence script and check its tolerances."""
    try:
        result, passed = case_mod.run_case(name, seed=seed, samples_per_cell=samples,
                                           out_dir=out_dir)
    except AgroundError as exc:
        raise click.ClickException(f"{type(exc).__name__}: {exc}") from None
    click.echo(json.dumps(result, indent=2, sort_keys=True))
    for check in result["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        click.echo(f"[{status}] {name}: {check['check']}", err=True)
    sys.exit(0 if passed else 1)


@main.command()
@click.option("--levels", "levels_path", required=True, type=click.Path(exists=True),
              help="CSV with time_s,level_m columns.")
@click.option("--volume-curve", "volume_path", required=True, type=click.Path(exists=True),
              help="CSV with level_m,volume_m3 columns.")
@click.option("--window", default=60.0, show_default=True, type=float)
@click.option("--quality", default="good", show_default=True,
              type=click.Choice(["good", "poor"]))
def flow(levels_path, volume_path, window, quality):
    """Flow rate from a tank level time series."""
    try:
        series = LevelSeries.from_csv(levels_path, VolumeCurve.from_csv(volume_path))
        est = flow_rate_from_levels(series, window=window, quality=quality)
    except AgroundError as exc:
        raise click.ClickException(f"{type(exc).__name__}: {exc}") from None
    click.echo(json.dumps({"rate_m3_s": est.rate, "sd_m3_s": est.sd,
                           "quality": est.quality, "flags": list(est.flags)}, sort_keys=True))


if __name__ == "__main__":
    main()
