"""REST server exposing mounted dataset snapshots under OPTIMADE-style routes.

Each dataset mounts at ``/archives/<slug>/v1/...``; the root serves
``/v1/links`` as an index over the mounted children. The mount table is
replaced atomically as a whole, so every request observes one consistent
set of datasets.
"""

from __future__ import annotations

import re
import threading
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from .errors import FilterSyntaxError, FilterTypeError, StoreError
from .filters import parse_filter
from .jsonl import API_VERSION, StructureEntry
from .store import DEFAULT_PAGE_LIMIT, MAX_PAGE_LIMIT, DatasetSnapshot, query

MEDIA_TYPE = "application/vnd.api+json"

_SLUG_RE = re.compile(r"[a-z0-9][a-z0-9-]*")

_KNOWN_PARAMS = frozenset(
    {"filter", "page_offset", "page_limit", "sort", "response_fields", "response_format"}
)

_HTTP_TITLES = {
    400: "Bad Request",
    404: "Not Found",
    422: "Unprocessable Entity",
    500: "Internal Server Error",
}


class MountRegistry:
    """Slug → snapshot table, replaced only as a whole.

    Readers take a reference to the current table once per request; the swap
    rebinds the attribute, so in-flight requests keep serving the table they
    started with.
    """

    def __init__(self) -> None:
        self._table: dict[str, DatasetSnapshot] = {}
        self._lock = threading.Lock()

    def table(self) -> dict[str, DatasetSnapshot]:
        return self._table

    def get(self, slug: str) -> DatasetSnapshot | None:
        return self._table.get(slug)

    def swap(self, new_table: dict[str, DatasetSnapshot]) -> None:
        for slug in new_table:
            if not _SLUG_RE.fullmatch(slug):
                raise ValueError(f"invalid mount slug {slug!r}")
        frozen = dict(new_table)
        with self._lock:
            self._table = frozen

    def mount(self, slug: str, snapshot: DatasetSnapshot) -> None:
        if not _SLUG_RE.fullmatch(slug):
            raise ValueError(f"invalid mount slug {slug!r}")
        with self._lock:
            table = dict(self._table)
            table[slug] = snapshot
            self._table = table

    def unmount(self, slug: str) -> None:
        with self._lock:
            table = dict(self._table)
            table.pop(slug, None)
            self._table = table


class ApiResponse(JSONResponse):
    media_type = MEDIA_TYPE


def _error_document(status: int, detail: str) -> dict[str, Any]:
    return {
        "errors": [
            {
                "status": str(status),
                "title": _HTTP_TITLES.get(status, "Error"),
                "detail": detail,
            }
        ],
        "meta": {"api_version": API_VERSION},
    }


def _error(status: int, detail: str) -> ApiResponse:
    return ApiResponse(_error_document(status, detail), status_code=status)


def _provider_meta(snapshot: DatasetSnapshot) -> dict[str, Any]:
    return {
        "name": snapshot.database_id,
        "description": snapshot.description,
        "prefix": snapshot.info.get("provider_prefix", "local"),
    }


def _representation(request: Request, base: str) -> str:
    path = request.url.path
    suffix = path[len(base) :] if path.startswith(base) else path
    if not suffix.startswith("/"):
        suffix = "/" + suffix
    if request.url.query:
        return f"{suffix}?{request.url.query}"
    return suffix


def _meta(
    request: Request,
    base: str,
    *,
    data_returned: int,
    data_available: int,
    more: bool,
    provider: dict[str, Any],
    warnings: list[dict[str, str]] | None = None,
) -> dict[str, Any]:
    meta: dict[str, Any] = {
        "api_version": API_VERSION,
        "query": {"representation": _representation(request, base)},
        "data_returned": data_returned,
        "data_available": data_available,
        "more_data_available": more,
        "provider": provider,
    }
    if warnings:
        meta["warnings"] = warnings
    return meta


def _unknown_param_warnings(request: Request) -> list[dict[str, str]]:
    return [
        {"type": "warning", "detail": f"unknown query parameter {name!r} ignored"}
        for name in request.query_params
        if name not in _KNOWN_PARAMS
    ]


class _ParamError(Exception):
    def __init__(self, status: int, detail: str):
        self.status = status
        self.detail = detail
        super().__init__(detail)


def _int_param(request: Request, name: str, default: int) -> int:
    raw = request.query_params.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise _ParamError(422, f"{name} must be an integer, got {raw!r}") from None


def _paging(request: Request) -> tuple[int, int]:
    offset = _int_param(request, "page_offset", 0)
    limit = _int_param(request, "page_limit", DEFAULT_PAGE_LIMIT)
    if offset < 0:
        raise _ParamError(422, "page_offset must be non-negative")
    if not 1 <= limit <= MAX_PAGE_LIMIT:
        raise _ParamError(422, f"page_limit must be between 1 and {MAX_PAGE_LIMIT}")
    return offset, limit


def _check_response_format(request: Request) -> None:
    fmt = request.query_params.get("response_format")
    if fmt is not None and fmt != "json":
        raise _ParamError(400, f"response_format {fmt!r} is not supported; only 'json'")


def _projection(request: Request) -> frozenset[str] | None:
    raw = request.query_params.get("response_fields")
    if raw is None:
        return None
    return frozenset(name.strip() for name in raw.split(",") if name.strip())


def _entry_resource(entry: StructureEntry, fields: frozenset[str] | None) -> dict[str, Any]:
    attributes = entry.attributes
    if fields is not None:
        attributes = {
            name: value for name, value in attributes.items() if name in fields
        }
    return {"id": entry.id, "type": entry.type, "attributes": attributes}


def create_app(registry: MountRegistry | None = None) -> FastAPI:
    registry = registry or MountRegistry()
    app = FastAPI(openapi_url=None, docs_url=None, redoc_url=None)
    app.state.registry = registry

    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(StarletteHTTPException)
    async def _http_error(request: Request, exc: StarletteHTTPException) -> ApiResponse:
        return _error(exc.status_code, str(exc.detail))

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError) -> ApiResponse:
        return _error(422, str(exc.errors()))

    def _snapshot_or_none(slug: str) -> DatasetSnapshot | None:
        return registry.get(slug)

    @app.get("/v1/links")
    async def root_links(request: Request) -> ApiResponse:
        table = registry.table()
        base_url = str(request.base_url).rstrip("/")
        data = [
            {
                "id": slug,
                "type": "links",
                "attributes": {
                    "name": slug,
                    "description": table[slug].description,
                    "base_url": f"{base_url}/archives/{slug}",
                    "link_type": "child",
                },
            }
            for slug in sorted(table)
        ]
        meta = _meta(
            request,
            "/v1",
            data_returned=len(data),
            data_available=len(data),
            more=False,
            provider={
                "name": "index",
                "description": "index meta-database over mounted archives",
                "prefix": "local",
            },
        )
        return ApiResponse({"data": data, "meta": meta, "links": {"next": None}})

    @app.get("/versions")
    async def root_versions() -> PlainTextResponse:
        return PlainTextResponse(
            "version\n1",
            media_type="text/csv; header=present",
        )

    @app.get("/archives/{slug}/versions")
    async def dataset_versions(slug: str) -> Response:
        if _snapshot_or_none(slug) is None:
            return _error(404, f"no dataset mounted at {slug!r}")
        return PlainTextResponse("version\n1", media_type="text/csv; header=present")

    @app.get("/archives/{slug}/v1/info")
    async def dataset_info(request: Request, slug: str) -> ApiResponse:
        snapshot = _snapshot_or_none(slug)
        if snapshot is None:
            return _error(404, f"no dataset mounted at {slug!r}")
        base = f"/archives/{slug}/v1"
        base_url = str(request.base_url).rstrip("/")
        data = {
            "id": "/",
            "type": "info",
            "attributes": {
                "api_version": API_VERSION,
                "available_api_versions": [
                    {"url": f"{base_url}{base}", "version": API_VERSION}
                ],
                "formats": ["json"],
                "available_endpoints": ["info", "links", "structures", "versions"],
                "entry_types_by_format": {"json": ["structures"]},
                "is_index": False,
            },
        }
        meta = _meta(
            request,
            base,
            data_returned=1,
            data_available=snapshot.total,
            more=False,
            provider=_provider_meta(snapshot),
        )
        return ApiResponse({"data": data, "meta": meta, "links": {"next": None}})

    @app.get("/archives/{slug}/v1/info/structures")
    async def dataset_info_structures(request: Request, slug: str) -> ApiResponse:
        snapshot = _snapshot_or_none(slug)
        if snapshot is None:
            return _error(404, f"no dataset mounted at {slug!r}")
        properties = snapshot.info.get("properties", {})
        data = {
            "id": "structures",
            "type": "info",
            "description": snapshot.description,
            "properties": properties,
            "formats": ["json"],
            "output_fields_by_format": {"json": sorted(properties)},
        }
        meta = _meta(
            request,
            f"/archives/{slug}/v1",
            data_returned=1,
            data_available=snapshot.total,
            more=False,
            provider=_provider_meta(snapshot),
        )
        return ApiResponse({"data": data, "meta": meta, "links": {"next": None}})

    @app.get("/archives/{slug}/v1/links")
    async def dataset_links(request: Request, slug: str) -> ApiResponse:
        snapshot = _snapshot_or_none(slug)
        if snapshot is None:
            return _error(404, f"no dataset mounted at {slug!r}")
        meta = _meta(
            request,
            f"/archives/{slug}/v1",
            data_returned=0,
            data_available=snapshot.total,
            more=False,
            provider=_provider_meta(snapshot),
        )
        return ApiResponse({"data": [], "meta": meta, "links": {"next": None}})

    @app.get("/archives/{slug}/v1/structures")
    async def dataset_structures(request: Request, slug: str) -> ApiResponse:
        snapshot = _snapshot_or_none(slug)
        if snapshot is None:
            return _error(404, f"no dataset mounted at {slug!r}")
        try:
            _check_response_format(request)
            offset, limit = _paging(request)
        except _ParamError as exc:
            return _error(exc.status, exc.detail)

        ast = None
        filter_text = request.query_params.get("filter")
        if filter_text:
            try:
                ast = parse_filter(filter_text)
            except FilterSyntaxError as exc:
                return _error(400, f"filter syntax error: {exc}")

        sort_key = request.query_params.get("sort")
        if sort_key is not None and "," in sort_key:
            return _error(400, "multi-key sorting is not supported")

        try:
            page = query(snapshot, ast, offset=offset, limit=limit, sort_key=sort_key)
        except FilterTypeError as exc:
            return _error(400, f"filter type error: {exc}")
        except StoreError as exc:
            return _error(400, str(exc))

        fields = _projection(request)
        data = [_entry_resource(entry, fields) for entry in page.items]
        next_url: str | None = None
        if page.more:
            next_url = str(
                request.url.include_query_params(page_offset=offset + len(page.items))
            )
        meta = _meta(
            request,
            f"/archives/{slug}/v1",
            data_returned=len(data),
            data_available=snapshot.total,
            more=page.more,
            provider=_provider_meta(snapshot),
            warnings=_unknown_param_warnings(request),
        )
        return ApiResponse({"data": data, "meta": meta, "links": {"next": next_url}})

    @app.get("/archives/{slug}/v1/structures/{entry_id:path}")
    async def dataset_structure_by_id(
        request: Request, slug: str, entry_id: str
    ) -> ApiResponse:
        snapshot = _snapshot_or_none(slug)
        if snapshot is None:
            return _error(404, f"no dataset mounted at {slug!r}")
        try:
            _check_response_format(request)
        except _ParamError as exc:
            return _error(exc.status, exc.detail)
        entry = snapshot.get(entry_id)
        if entry is None:
            return _error(404, f"no structure with id {entry_id!r}")
        fields = _projection(request)
        meta = _meta(
            request,
            f"/archives/{slug}/v1",
            data_returned=1,
            data_available=snapshot.total,
            more=False,
            provider=_provider_meta(snapshot),
            warnings=_unknown_param_warnings(request),
        )
        return ApiResponse(
            {
                "data": _entry_resource(entry, fields),
                "meta": meta,
                "links": {"next": None},
            }
        )

    return app
