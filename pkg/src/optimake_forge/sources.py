"""Enumerate raw entry files from directories and common archive formats."""

from __future__ import annotations

import fnmatch
import re
import tarfile
import zipfile
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from .errors import SourceError

ARCHIVE_SUFFIXES = (".zip", ".tar.gz", ".tgz", ".tar.bz2")


@dataclass(frozen=True)
class RawEntrySource:
    """One member file: path relative to the manifest plus its raw bytes."""

    relative_path: str
    content: bytes


def _check_member_path(name: str) -> str:
    path = name.replace("\\", "/")
    if path.startswith("/") or re.match(r"^[A-Za-z]:", path):
        raise SourceError(f"absolute member path {name!r} rejected")
    segments = [seg for seg in path.split("/") if seg not in ("", ".")]
    if ".." in segments:
        raise SourceError(f"path-traversal member {name!r} rejected")
    return "/".join(segments)


def _compile_globs(matches: list[str]) -> list[re.Pattern[str]]:
    return [re.compile(fnmatch.translate(pattern)) for pattern in matches]


def _matches_any(path: str, patterns: list[re.Pattern[str]]) -> bool:
    return any(p.match(path) for p in patterns)


def iter_member_paths(path: Path) -> list[str]:
    """All member file paths inside an archive or directory, unsorted."""
    if path.is_dir():
        return [
            p.relative_to(path).as_posix()
            for p in path.rglob("*")
            if p.is_file()
        ]
    name = path.name.lower()
    if name.endswith(".zip"):
        try:
            with zipfile.ZipFile(path) as zf:
                return [
                    _check_member_path(info.filename)
                    for info in zf.infolist()
                    if not info.is_dir()
                ]
        except zipfile.BadZipFile as exc:
            raise SourceError(f"corrupt zip archive {path.name}: {exc}") from exc
    if name.endswith((".tar.gz", ".tgz", ".tar.bz2")):
        try:
            with tarfile.open(path, "r:*") as tf:
                return [
                    _check_member_path(member.name)
                    for member in tf.getmembers()
                    if member.isfile()
                ]
        except tarfile.TarError as exc:
            raise SourceError(f"corrupt tar archive {path.name}: {exc}") from exc
    raise SourceError(f"unsupported source kind: {path.name}")


def _read_members(path: Path, wanted: list[str]) -> dict[str, bytes]:
    if path.is_dir():
        return {inner: (path / inner).read_bytes() for inner in wanted}
    if path.name.lower().endswith(".zip"):
        with zipfile.ZipFile(path) as zf:
            by_clean = {
                _check_member_path(info.filename): info.filename
                for info in zf.infolist()
                if not info.is_dir()
            }
            return {inner: zf.read(by_clean[inner]) for inner in wanted}
    with tarfile.open(path, "r:*") as tf:
        by_clean = {
            _check_member_path(member.name): member
            for member in tf.getmembers()
            if member.isfile()
        }
        out = {}
        for inner in wanted:
            fileobj = tf.extractfile(by_clean[inner])
            if fileobj is None:
                raise SourceError(f"unreadable member {inner!r} in {path.name}")
            out[inner] = fileobj.read()
        return out


def open_source(
    path: Path, matches: list[str], *, prefix: str | None = None
) -> Iterator[RawEntrySource]:
    """Yield matching members of an archive or directory.

    Member paths are prefixed with the source's own relative path (for example
    ``structures.zip/cifs/x.cif``) and come out in lexicographic order of that
    prefixed path. Empty members are data errors, not silently skipped.
    """
    if not path.exists():
        raise SourceError(f"source not found: {path}")
    if prefix is None:
        prefix = path.name
    prefix = prefix.strip("/")
    patterns = _compile_globs(matches)
    inner_paths = sorted(p for p in iter_member_paths(path) if _matches_any(p, patterns))
    contents = _read_members(path, inner_paths)
    for inner in inner_paths:
        data = contents[inner]
        if not data:
            raise SourceError(f"empty member {inner!r} in {path.name}")
        relative = f"{prefix}/{inner}" if prefix else inner
        yield RawEntrySource(relative_path=relative, content=data)
