"""End-to-end acceptance checks, one test per headline guarantee.

Each test prints a single ``PASS:``/``FAIL:`` scorecard line (bypassing
pytest's capture) so a full run doubles as a human-readable report. The
checks exercise the public surface only: the CLI, the HTTP API, and the
documented conversion entry points, with expectations computed by the
independent oracles in :mod:`tests.oracles`.
"""

from __future__ import annotations

import random
import shutil
import socket
import statistics
import threading
import time
from contextlib import contextmanager
from io import BytesIO

import httpx
import pytest
import uvicorn
from click.testing import CliRunner
from fastapi.testclient import TestClient

from optimake_forge.attributes import derive_attributes
from optimake_forge.cli import main
from optimake_forge.convert import assign_ids, convert_dataset
from optimake_forge.demo import write_demo_dataset, write_scale_dataset
from optimake_forge.filters import parse_filter, selectivity_filter
from optimake_forge.jsonl import (
    JsonLinesArchive,
    read_archive_file,
    read_jsonl,
    write_jsonl,
)
from optimake_forge.server import MountRegistry, create_app
from optimake_forge.store import load_snapshot
from optimake_forge.structures import ParsedStructure, Site
from optimake_forge.watcher import DirectoryWatcher

from .conftest import FILTER_POOLS, FILTER_SCHEMA, build_fifty_entries
from .oracles import (
    FilterGenerator,
    anonymous_formula_oracle,
    ratios_oracle,
    reduced_formula_oracle,
    select_ids,
)

_FIFTY_INFO = {
    "type": "info",
    "id": "structures",
    "provider_prefix": "local",
    "properties": {
        "id": {"type": "string"},
        "type": {"type": "string"},
        "elements": {"type": "list"},
        "nelements": {"type": "integer"},
        "nsites": {"type": "integer"},
        "chemical_formula_reduced": {"type": "string"},
        "dimension_types": {"type": "list"},
        "nperiodic_dimensions": {"type": "integer"},
        "lattice_vectors": {"type": "list"},
        "structure_features": {"type": "list"},
        "last_modified": {"type": "timestamp"},
        "_local_energy": {"type": "float"},
        "_local_tag": {"type": "string"},
    },
}


@contextmanager
def _scored(capsys, name: str):
    """Print one scorecard line for the enclosed criterion."""
    verdict = "FAIL"
    try:
        yield
        verdict = "PASS"
    finally:
        with capsys.disabled():
            print(f"{verdict}: {name}")


@contextmanager
def _http_server(app):
    """Serve ``app`` with uvicorn on an ephemeral local port."""
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.bind(("127.0.0.1", 0))
    port = sock.getsockname()[1]
    server = uvicorn.Server(uvicorn.Config(app, log_level="warning"))
    thread = threading.Thread(
        target=server.run, kwargs={"sockets": [sock]}, daemon=True
    )
    thread.start()
    deadline = time.monotonic() + 15
    while not server.started:
        if time.monotonic() > deadline:
            raise RuntimeError("server did not start")
        time.sleep(0.01)
    try:
        yield f"http://127.0.0.1:{port}"
    finally:
        server.should_exit = True
        thread.join(timeout=10)


def _fifty_archive() -> tuple[JsonLinesArchive, list[dict]]:
    entries, rows = build_fifty_entries()
    archive = JsonLinesArchive(
        description="fifty synthetic entries",
        info={"structures": _FIFTY_INFO},
        entries=tuple(entries),
    )
    return archive, rows


def test_id_derivation_reproduces_worked_example(capsys):
    with _scored(capsys, "ids drop shared leading segments and trailing characters"):
        paths = [
            "structures.zip/cifs/set1/101.cif",
            "structures.zip/cifs/set2/102.cif",
        ]
        assert assign_ids(paths) == {
            "structures.zip/cifs/set1/101.cif": "set1/101",
            "structures.zip/cifs/set2/102.cif": "set2/102",
        }


def test_convert_then_serve_answers_binary_query_quickly(tmp_path, capsys):
    with _scored(capsys, "demo dataset converts, serves, and filters in under 5 s"):
        demo = write_demo_dataset(tmp_path / "demo")
        started = time.perf_counter()
        result = CliRunner().invoke(main, ["convert", str(demo.root)])
        assert result.exit_code == 0, result.output
        archive = read_archive_file(demo.root / "structures.jsonl")
        registry = MountRegistry()
        registry.mount("demo", load_snapshot(archive, "demo"))
        with _http_server(create_app(registry)) as base:
            response = httpx.get(
                f"{base}/archives/demo/v1/structures",
                params={"filter": "nelements=2"},
            )
        elapsed = time.perf_counter() - started
        assert response.status_code == 200
        body = response.json()
        assert body["meta"]["data_returned"] == 8
        assert body["meta"]["data_available"] == 20
        assert len(body["data"]) == 8
        assert {item["id"] for item in body["data"]} == set(demo.binary_ids)
        assert elapsed < 5.0, f"convert + serve + query took {elapsed:.2f}s"


def test_filter_engine_agrees_with_brute_force_evaluator(capsys):
    with _scored(capsys, "1000 random filters match the brute-force evaluator"):
        entries, rows = build_fifty_entries()
        generator = FilterGenerator(random.Random(2024), FILTER_SCHEMA, FILTER_POOLS)
        disagreements: list[str] = []
        for _ in range(1000):
            text, tree = generator.filter_pair()
            node = parse_filter(text)
            got = [entry.id for entry in selectivity_filter(node, entries)]
            if got != select_ids(tree, rows):
                disagreements.append(text)
        assert not disagreements, f"{len(disagreements)} mismatches: {disagreements[:5]}"


def test_archive_round_trip_and_deterministic_conversion(tmp_path, capsys):
    with _scored(capsys, "archives round-trip losslessly; conversion is byte-stable"):
        demo = write_demo_dataset(tmp_path / "demo")
        hull = write_demo_dataset(
            tmp_path / "hull",
            properties={"convex_hull_distance": (0.0, 0.05), "elf_max": (0.0, 1.0)},
        )
        fixtures = [
            convert_dataset(demo.root),
            convert_dataset(hull.root),
            _fifty_archive()[0],
        ]
        for archive in fixtures:
            first = BytesIO()
            write_jsonl(archive, first)
            reread = read_jsonl(BytesIO(first.getvalue()))
            assert reread == archive
            second = BytesIO()
            write_jsonl(reread, second)
            assert second.getvalue() == first.getvalue()

        twin = write_demo_dataset(tmp_path / "demo-twin")
        once, again = BytesIO(), BytesIO()
        write_jsonl(convert_dataset(demo.root), once)
        write_jsonl(convert_dataset(twin.root), again)
        assert once.getvalue() == again.getvalue()


def test_formula_attributes_match_reference_arithmetic(capsys):
    with _scored(capsys, "500 random compositions reproduce oracle formulas"):
        rng = random.Random(500)
        pool = ["H", "C", "N", "O", "F", "Na", "Mg", "Al", "Si", "P", "S", "Fe", "Cu", "W"]
        for _ in range(500):
            chosen = rng.sample(pool, rng.randint(1, 5))
            counts = {element: rng.randint(1, 12) for element in chosen}
            sites: list[Site] = []
            for element, count in counts.items():
                for _ in range(count):
                    sites.append(Site(element, (0.37 * len(sites), 0.0, 0.0)))
            attrs = derive_attributes(ParsedStructure(sites=tuple(sites)))
            assert attrs["chemical_formula_reduced"] == reduced_formula_oracle(counts)
            assert attrs["chemical_formula_anonymous"] == anonymous_formula_oracle(counts)
            assert attrs["elements_ratios"] == pytest.approx(
                ratios_oracle(counts), rel=1e-12
            )
            assert abs(sum(attrs["elements_ratios"]) - 1.0) <= 1e-9


def test_pagination_crawl_visits_every_match_exactly_once(capsys):
    with _scored(capsys, "20 filtered crawls via links.next cover each match once"):
        archive, rows = _fifty_archive()
        registry = MountRegistry()
        registry.mount("fifty", load_snapshot(archive, "fifty"))
        client = TestClient(create_app(registry))
        generator = FilterGenerator(random.Random(77), FILTER_SCHEMA, FILTER_POOLS)
        for _ in range(20):
            text, tree = generator.filter_pair()
            expected = select_ids(tree, rows)
            seen: list[str] = []
            url: str | None = "/archives/fifty/v1/structures"
            params = {"filter": text, "page_limit": "7"}
            while url is not None:
                response = client.get(url, params=params)
                assert response.status_code == 200, (text, response.text)
                body = response.json()
                seen.extend(item["id"] for item in body["data"])
                url = body["links"]["next"]
                params = None
            assert seen == expected, text
            assert len(set(seen)) == len(seen)


def test_watched_root_add_corrupt_delete_lifecycle(tmp_path, capsys):
    with _scored(capsys, "watcher mounts, survives corruption, unmounts on delete"):
        root = tmp_path / "watched"
        root.mkdir()
        registry = MountRegistry()
        watcher = DirectoryWatcher(root, registry, interval=1)
        reports: list = []
        bare_poll = watcher.poll

        def recording_poll():
            report = bare_poll()
            reports.append(report)
            return report

        watcher.poll = recording_poll
        stop = threading.Event()
        thread = threading.Thread(target=watcher.run, args=(stop,), daemon=True)
        client = TestClient(create_app(registry))
        window = 2 * watcher.interval

        def wait_for(predicate, deadline: float) -> bool:
            while time.monotonic() < deadline:
                if predicate():
                    return True
                time.sleep(0.05)
            return predicate()

        try:
            staged = write_demo_dataset(tmp_path / "staging" / "alpha")
            thread.start()
            staged.root.rename(root / "alpha")
            assert wait_for(
                lambda: client.get("/archives/alpha/v1/structures").status_code == 200,
                time.monotonic() + window,
            ), "dataset was not mounted within two poll intervals"
            body = client.get("/archives/alpha/v1/structures").json()
            assert body["meta"]["data_available"] == 20

            before_corruption = len(reports)
            (root / "alpha" / "structures.zip").write_bytes(b"this is not a zip")
            assert wait_for(
                lambda: any(
                    "alpha" in report.failed
                    for report in reports[before_corruption:]
                ),
                time.monotonic() + window,
            ), "corruption was not reported within two poll intervals"
            failing = next(
                report
                for report in reports[before_corruption:]
                if "alpha" in report.failed
            )
            assert failing.failures, "failed reconcile should carry diagnostics"
            response = client.get("/archives/alpha/v1/structures")
            assert response.status_code == 200, "old snapshot should keep serving"
            assert response.json()["meta"]["data_available"] == 20

            shutil.rmtree(root / "alpha")
            assert wait_for(
                lambda: client.get("/archives/alpha/v1/structures").status_code == 404,
                time.monotonic() + window,
            ), "dataset was not unmounted within two poll intervals"
        finally:
            stop.set()
            thread.join(timeout=5)


def test_scale_conversion_and_query_latency(tmp_path, capsys):
    with _scored(capsys, "10,000 structures convert <60 s, query median <100 ms"):
        root = tmp_path / "scale"
        write_scale_dataset(root, count=10_000)
        started = time.perf_counter()
        archive = convert_dataset(root)
        convert_seconds = time.perf_counter() - started
        assert len(archive.entries) == 10_000
        assert convert_seconds < 60.0, f"conversion took {convert_seconds:.1f}s"

        registry = MountRegistry()
        registry.mount("scale", load_snapshot(archive, "scale"))
        client = TestClient(create_app(registry))
        latencies: list[float] = []
        for _ in range(21):
            begin = time.perf_counter()
            response = client.get(
                "/archives/scale/v1/structures",
                params={"filter": 'nelements=2 AND elements HAS "Na"'},
            )
            latencies.append(time.perf_counter() - begin)
            assert response.status_code == 200
        assert response.json()["meta"]["data_available"] == 10_000
        median_ms = statistics.median(latencies) * 1000
        assert median_ms < 100.0, f"median latency was {median_ms:.1f} ms"


def test_custom_property_filter_matches_ground_truth(tmp_path, capsys):
    with _scored(capsys, "custom-property filter returns exactly the true matches"):
        demo = write_demo_dataset(
            tmp_path / "hull",
            properties={"convex_hull_distance": (0.0, 0.05), "elf_max": (0.0, 1.0)},
        )
        expected = [
            entry_id
            for entry_id in demo.ids
            if demo.property_values[entry_id]["convex_hull_distance"] < 0.025
            and demo.property_values[entry_id]["elf_max"] > 0.5
        ]
        assert expected, "fixture must produce at least one match"
        assert len(expected) < len(demo.ids), "fixture must exclude some entries"

        archive = convert_dataset(demo.root)
        registry = MountRegistry()
        registry.mount("hull", load_snapshot(archive, "hull"))
        client = TestClient(create_app(registry))
        response = client.get(
            "/archives/hull/v1/structures",
            params={
                "filter": "_local_convex_hull_distance < 0.025 AND _local_elf_max > 0.5",
                "page_limit": "100",
            },
        )
        assert response.status_code == 200
        body = response.json()
        assert [item["id"] for item in body["data"]] == expected
        assert body["meta"]["data_returned"] == len(expected)
        assert body["links"]["next"] is None
