"""Polling reconciler: scans a root directory for datasets and keeps a
mount registry in sync with what is on disk.

Conversion results are cached per dataset under ``.optimade-cache/`` next to
the manifest, keyed by a fingerprint of the manifest and data bytes, so an
unchanged dataset is never converted twice.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import re
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from .config import MANIFEST_NAME
from .convert import convert_dataset
from .errors import Diagnostic, OptimakeError
from .jsonl import read_archive_file, write_archive_file
from .server import MountRegistry
from .store import DatasetSnapshot, load_snapshot

logger = logging.getLogger(__name__)

DEFAULT_POLL_INTERVAL = 30.0
CACHE_DIR_NAME = ".optimade-cache"
CACHE_ARCHIVE_NAME = "structures.jsonl"
CACHE_FINGERPRINT_NAME = "fingerprint.json"

_SLUG_KEEP_RE = re.compile(r"[^a-z0-9-]")

Converter = Callable[[str, Path], DatasetSnapshot]


@dataclass(frozen=True)
class DatasetFingerprint:
    """Byte-level identity of a dataset directory; equal iff inputs are identical.

    The directory name and conversion timestamp are carried along but do not
    take part in equality: renaming a directory to an equivalent slug or
    re-converting unchanged bytes does not constitute a change.
    """

    slug: str
    manifest_digest: str
    content_digest: str
    directory: str = field(default="", compare=False)
    converted_at: str | None = field(default=None, compare=False)


@dataclass
class ReconcileReport:
    added: list[str] = field(default_factory=list)
    updated: list[str] = field(default_factory=list)
    removed: list[str] = field(default_factory=list)
    failed: list[str] = field(default_factory=list)
    failures: list[Diagnostic] = field(default_factory=list)

    def changed(self) -> bool:
        return bool(self.added or self.updated or self.removed or self.failed)


def slug_for(directory_name: str) -> str | None:
    slug = _SLUG_KEEP_RE.sub("-", directory_name.lower()).lstrip("-")
    return slug or None


def _file_digest(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _content_digest(dataset_dir: Path) -> str:
    digest = hashlib.sha256()
    files = sorted(
        (
            path
            for path in dataset_dir.rglob("*")
            if path.is_file() and CACHE_DIR_NAME not in path.relative_to(dataset_dir).parts
        ),
        key=lambda path: path.relative_to(dataset_dir).as_posix(),
    )
    for path in files:
        relative = path.relative_to(dataset_dir).as_posix()
        digest.update(relative.encode("utf-8"))
        digest.update(b"\0")
        digest.update(str(path.stat().st_size).encode("ascii"))
        digest.update(b"\0")
        digest.update(_file_digest(path).encode("ascii"))
        digest.update(b"\0")
    return digest.hexdigest()


def fingerprint_dataset(slug: str, dataset_dir: Path) -> DatasetFingerprint:
    return DatasetFingerprint(
        slug=slug,
        manifest_digest=_file_digest(dataset_dir / MANIFEST_NAME),
        content_digest=_content_digest(dataset_dir),
        directory=dataset_dir.name,
    )


def scan(root: Path) -> dict[str, DatasetFingerprint]:
    """Fingerprint every immediate subdirectory of ``root`` holding a manifest."""
    candidates: dict[str, DatasetFingerprint] = {}
    try:
        children = sorted(path for path in root.iterdir() if path.is_dir())
    except OSError as exc:
        logger.warning("cannot list %s: %s", root, exc)
        return candidates
    for child in children:
        if not (child / MANIFEST_NAME).is_file():
            continue
        slug = slug_for(child.name)
        if slug is None:
            logger.warning("skipping %s: name yields no valid slug", child)
            continue
        if slug in candidates:
            logger.warning("skipping %s: slug %r already taken", child, slug)
            continue
        try:
            candidates[slug] = fingerprint_dataset(slug, child)
        except OSError as exc:
            logger.warning("skipping %s: %s", child, exc)
    return candidates


def _write_json_atomic(path: Path, payload: dict) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", "utf-8")
    os.replace(tmp, path)


def _cached_fingerprint(cache_dir: Path) -> DatasetFingerprint | None:
    meta_path = cache_dir / CACHE_FINGERPRINT_NAME
    if not meta_path.is_file():
        return None
    try:
        payload = json.loads(meta_path.read_text("utf-8"))
        return DatasetFingerprint(
            slug=payload["slug"],
            manifest_digest=payload["manifest_digest"],
            content_digest=payload["content_digest"],
            converted_at=payload.get("converted_at"),
        )
    except (OSError, ValueError, KeyError):
        return None


def convert_with_cache(slug: str, dataset_dir: Path) -> DatasetSnapshot:
    """Convert a dataset, reusing the cached archive when its inputs are unchanged."""
    current = fingerprint_dataset(slug, dataset_dir)
    cache_dir = dataset_dir / CACHE_DIR_NAME
    archive_path = cache_dir / CACHE_ARCHIVE_NAME

    if archive_path.is_file() and _cached_fingerprint(cache_dir) == current:
        logger.debug("%s: cache hit, loading %s", slug, archive_path)
        return load_snapshot(read_archive_file(archive_path), slug)

    archive = convert_dataset(dataset_dir)
    cache_dir.mkdir(exist_ok=True)
    write_archive_file(archive, archive_path)
    stamped = DatasetFingerprint(
        slug=current.slug,
        manifest_digest=current.manifest_digest,
        content_digest=current.content_digest,
        converted_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )
    _write_json_atomic(
        cache_dir / CACHE_FINGERPRINT_NAME,
        {
            "slug": stamped.slug,
            "manifest_digest": stamped.manifest_digest,
            "content_digest": stamped.content_digest,
            "converted_at": stamped.converted_at,
        },
    )
    return load_snapshot(archive, slug)


class DirectoryWatcher:
    """Reconciles one root directory against a mount registry."""

    def __init__(
        self,
        root: Path,
        registry: MountRegistry,
        interval: float = DEFAULT_POLL_INTERVAL,
        converter: Converter | None = None,
    ):
        if interval < 1:
            raise ValueError("poll interval must be at least 1 second")
        self.root = root
        self.registry = registry
        self.interval = interval
        self.converter = converter or convert_with_cache
        # Fingerprints of the last conversion attempt per slug, including
        # failed ones, so an unchanged broken dataset is not retried each cycle.
        self._attempted: dict[str, DatasetFingerprint] = {}

    def poll(self) -> ReconcileReport:
        current = scan(self.root)
        report = reconcile(
            self._attempted, current, self.converter, self.registry, self.root
        )
        self._attempted = current
        return report

    def run(self, stop: threading.Event) -> None:
        while not stop.is_set():
            try:
                report = self.poll()
            except Exception:
                logger.exception("reconcile cycle failed")
            else:
                if report.changed():
                    logger.info(
                        "reconciled: +%s ~%s -%s !%s",
                        report.added,
                        report.updated,
                        report.removed,
                        report.failed,
                    )
            stop.wait(self.interval)


def reconcile(
    previous: dict[str, DatasetFingerprint],
    current: dict[str, DatasetFingerprint],
    converter: Converter,
    registry: MountRegistry,
    root: Path,
) -> ReconcileReport:
    """Convert new or changed datasets and swap the registry's table once.

    A conversion failure leaves any previously mounted snapshot in place;
    vanished datasets are unmounted.
    """
    report = ReconcileReport()
    table = dict(registry.table())

    for slug in sorted(set(table) - set(current)):
        del table[slug]
        report.removed.append(slug)

    for slug in sorted(current):
        fingerprint = current[slug]
        if previous.get(slug) == fingerprint:
            continue  # unchanged since the last attempt, mounted or not
        dataset_dir = root / fingerprint.directory
        try:
            snapshot = converter(slug, dataset_dir)
        except (OptimakeError, OSError) as exc:
            report.failed.append(slug)
            report.failures.append(Diagnostic("error", str(dataset_dir), str(exc)))
            continue
        if slug in table:
            report.updated.append(slug)
        else:
            report.added.append(slug)
        table[slug] = snapshot

    if report.changed():
        registry.swap(table)
    return report
