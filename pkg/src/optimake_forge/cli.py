"""Command-line interface: convert, serve, and validate datasets."""

from __future__ import annotations

import logging
import os
import socket
import sys
import threading
from pathlib import Path

import click
import uvicorn

from .config import MANIFEST_NAME
from .convert import convert_dataset, dry_run_dataset
from .errors import OptimakeError
from .jsonl import read_archive_file, write_archive_file
from .server import MountRegistry, create_app
from .store import DatasetSnapshot, load_snapshot
from .watcher import (
    DEFAULT_POLL_INTERVAL,
    DirectoryWatcher,
    convert_with_cache,
    slug_for,
)

_LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def _configure_logging() -> None:
    name = os.environ.get("OPTIMAKE_LOG", "info").lower()
    level = _LOG_LEVELS.get(name, logging.INFO)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def _poll_interval() -> float:
    raw = os.environ.get("OPTIMAKE_POLL_INTERVAL")
    if raw is None:
        return DEFAULT_POLL_INTERVAL
    try:
        return max(1.0, float(raw))
    except ValueError:
        return DEFAULT_POLL_INTERVAL


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


@click.group()
def main() -> None:
    """Convert raw structure datasets and serve them as OPTIMADE APIs."""
    _configure_logging()


@main.command()
@click.argument(
    "dataset", type=click.Path(exists=True, file_okay=False, path_type=Path)
)
@click.option(
    "--output",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Destination JSONL file (default: structures.jsonl beside the manifest).",
)
def convert(dataset: Path, output: Path | None) -> None:
    """Convert the dataset at DATASET into a JSON Lines archive."""
    destination = output or dataset / "structures.jsonl"
    try:
        archive = convert_dataset(dataset)
        write_archive_file(archive, destination)
    except OptimakeError as exc:
        _fail(str(exc))
    click.echo(f"converted {len(archive.entries)} structures")
    click.echo(str(destination))


@main.command()
@click.argument("dataset", type=click.Path(exists=True, file_okay=False, path_type=Path))
def validate(dataset: Path) -> None:
    """Check the manifest and parse every matched file, reporting problems."""
    diagnostics = dry_run_dataset(dataset)
    for diagnostic in diagnostics:
        click.echo(str(diagnostic), err=True)
    errors = sum(1 for d in diagnostics if d.severity == "error")
    warnings = sum(1 for d in diagnostics if d.severity == "warning")
    click.echo(f"{errors} errors, {warnings} warnings")
    if errors:
        sys.exit(1)


def _dataset_slug(path: Path) -> str:
    slug = slug_for(path.resolve().stem if path.is_file() else path.resolve().name)
    if slug is None:
        _fail(f"cannot derive a mount slug from {path}")
        raise AssertionError("unreachable")
    return slug


def _load_single(path: Path) -> DatasetSnapshot:
    slug = _dataset_slug(path)
    if path.is_file():
        return load_snapshot(read_archive_file(path), slug)
    if not (path / MANIFEST_NAME).is_file():
        _fail(f"{path} contains no {MANIFEST_NAME}; not a dataset directory")
    return convert_with_cache(slug, path)


@main.command()
@click.argument("path", type=click.Path(exists=True, path_type=Path))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=5000, show_default=True, type=int)
@click.option(
    "--watch-root",
    is_flag=True,
    help="Treat PATH as a root of dataset directories and keep it in sync.",
)
@click.option(
    "--prepare-only",
    is_flag=True,
    help="Run the conversion pipeline (filling caches) and exit without serving.",
)
def serve(path: Path, host: str, port: int, watch_root: bool, prepare_only: bool) -> None:
    """Serve PATH: a dataset directory, a converted JSONL file, or a watch root."""
    registry = MountRegistry()
    watcher: DirectoryWatcher | None = None

    if watch_root:
        if not path.is_dir():
            _fail("--watch-root requires a directory")
        watcher = DirectoryWatcher(path, registry, interval=_poll_interval())
        report = watcher.poll()
        for failure in report.failures:
            click.echo(str(failure), err=True)
        for slug in report.added:
            snapshot = registry.get(slug)
            assert snapshot is not None
            click.echo(f"mounted {slug}: {snapshot.total} structures")
        if prepare_only:
            sys.exit(1 if report.failed else 0)
    else:
        try:
            snapshot = _load_single(path)
        except OptimakeError as exc:
            _fail(str(exc))
        if prepare_only:
            click.echo(f"prepared {snapshot.database_id}: {snapshot.total} structures")
            return
        registry.mount(snapshot.database_id, snapshot)
        click.echo(f"mounted {snapshot.database_id}: {snapshot.total} structures")

    try:
        sock = socket.create_server((host, port))
    except OSError as exc:
        _fail(f"cannot bind {host}:{port}: {exc}")
        raise AssertionError("unreachable")

    stop = threading.Event()
    if watcher is not None:
        thread = threading.Thread(target=watcher.run, args=(stop,), daemon=True)
        thread.start()

    app = create_app(registry)
    config = uvicorn.Config(app, host=host, port=port, log_level="warning")
    server = uvicorn.Server(config)
    try:
        server.run(sockets=[sock])
    finally:
        stop.set()
        sock.close()


if __name__ == "__main__":
    main()
