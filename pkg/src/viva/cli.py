"""Command line entry points: serve the app, generate demo data, check logs."""

from __future__ import annotations

import os
import sys
import webbrowser
from pathlib import Path

import click

from .configio import load_config
from .core import dataset_fingerprint
from .engine import Engine, replay
from .errors import VivaError
from .ingest import parse_csv
from .synthdata import GeneratorSpec, generate


def _resolve_config_dir(config_dir: str | None) -> Path:
    value = config_dir or os.environ.get("VIVA_CONFIG_DIR") or "./viva-config"
    path = Path(value)
    path.mkdir(parents=True, exist_ok=True)
    return path


@click.group()
def main():
    """Interactive attribute analytics for tabular usage data."""


@main.command()
@click.option("--port", default=8799, show_default=True, help="Port to listen on.")
@click.option("--config-dir", default=None, help="Config directory (default: $VIVA_CONFIG_DIR or ./viva-config).")
@click.option("--static-dir", default=None, help="Directory with the built web UI to serve at /.")
@click.option("--open", "open_browser", is_flag=True, help="Open the upload page in a browser.")
def serve(port: int, config_dir: str | None, static_dir: str | None, open_browser: bool):
    """Run the local single-session server on 127.0.0.1."""
    import uvicorn

    from .server import create_app

    directory = _resolve_config_dir(config_dir)
    app = create_app(directory, static_dir=static_dir)
    click.echo(f"config dir: {directory}")
    if open_browser:
        webbrowser.open(f"http://127.0.0.1:{port}/")
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")


@main.command()
@click.option("--seed", default=1, show_default=True, help="RNG seed.")
@click.option("--months", default=12, show_default=True, help="Months of data to generate.")
@click.option("--scale", default=1.0, show_default=True, help="Multiplier on monthly row counts.")
@click.option("--out", required=True, type=click.Path(), help="Output directory.")
def synth(seed: int, months: int, scale: float, out: str):
    """Generate the four synthetic CSV sources plus matching config files."""
    bundle = generate(GeneratorSpec(seed=seed, months=months, scale=scale))
    written = bundle.write_to(out)
    for path in written:
        click.echo(f"wrote {path}")


@main.command("replay-check")
@click.option("--config-dir", default=None, help="Config directory holding the logs.")
@click.option("--data", "data_dir", required=True, type=click.Path(exists=True), help="Directory of CSVs (one per dataset).")
def replay_check(config_dir: str | None, data_dir: str):
    """Verify that the persisted operation log replays deterministically.

    Ingests the CSVs, replays the log from scratch twice, and additionally
    replays a prefix then applies the remainder incrementally; all three
    derived states must be identical.
    """
    directory = _resolve_config_dir(config_dir)
    store, diagnostics = load_config(directory)
    for diagnostic in diagnostics:
        click.echo(f"config: {diagnostic.file}:{diagnostic.line_no}: {diagnostic.message}")

    base = {}
    for csv_path in sorted(Path(data_dir).glob("*.csv")):
        name = csv_path.stem
        base[name] = parse_csv(csv_path.read_bytes(), name, store.schema, store.merges)
        click.echo(f"ingested {name}: {base[name].num_rows} rows")

    try:
        full_a = replay(base, store.logged_ops)
        full_b = replay(base, store.logged_ops)
        half = len(store.logged_ops) // 2
        incremental = replay(base, store.logged_ops[:half])
        for op in store.logged_ops[half:]:
            incremental._apply_replayed(op.copy())
    except VivaError as exc:
        click.echo(f"REPLAY FAILED: {exc.code}: {exc.message}")
        sys.exit(1)

    mismatches = []
    for name in base:
        prints = {
            "full-a": dataset_fingerprint(full_a.derived[name]),
            "full-b": dataset_fingerprint(full_b.derived[name]),
            "incremental": dataset_fingerprint(incremental.derived[name]),
        }
        if len(set(prints.values())) != 1:
            mismatches.append((name, prints))

    if mismatches:
        click.echo("REPLAY MISMATCH:")
        for name, prints in mismatches:
            for label, value in prints.items():
                click.echo(f"  {name} {label}: {value}")
        sys.exit(1)
    click.echo(f"replay OK: {len(store.logged_ops)} ops over {len(base)} dataset(s)")


def engine_fingerprint(engine: Engine) -> str:
    """Combined digest of every derived dataset, for state comparisons."""
    import hashlib

    digest = hashlib.sha256()
    for name in engine.derived:
        digest.update(name.encode("utf-8"))
        digest.update(dataset_fingerprint(engine.derived[name]).encode("ascii"))
    return digest.hexdigest()


if __name__ == "__main__":
    main()
