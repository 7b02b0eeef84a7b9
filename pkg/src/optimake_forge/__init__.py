"""Convert raw atomistic-structure datasets into OPTIMADE JSON Lines archives
and serve them as queryable REST APIs.

The public surface mirrors the pipeline: manifest loading (`load_config`),
conversion (`convert_dataset`), the filter language (`parse_filter`,
`selectivity_filter`), the in-memory store (`load_snapshot`, `query`), and
the HTTP layer (`create_app`, `MountRegistry`, `DirectoryWatcher`).
"""

from .config import DatasetConfig, dump_config, load_config, load_config_file, validate_config
from .convert import assign_ids, build_info_document, convert_dataset, dry_run_dataset
from .errors import (
    ConfigError,
    ConvertError,
    Diagnostic,
    FilterSyntaxError,
    FilterTypeError,
    JsonlError,
    OptimakeError,
    SourceError,
    StoreError,
    StructureParseError,
)
from .filters import EvalResult, evaluate, parse_filter, selectivity_filter
from .jsonl import (
    JsonLinesArchive,
    StructureEntry,
    read_archive_file,
    read_jsonl,
    write_archive_file,
    write_jsonl,
)
from .server import MountRegistry, create_app
from .store import DatasetSnapshot, Page, load_snapshot, query
from .watcher import DatasetFingerprint, DirectoryWatcher, reconcile, scan

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ConvertError",
    "DatasetConfig",
    "DatasetFingerprint",
    "DatasetSnapshot",
    "Diagnostic",
    "DirectoryWatcher",
    "EvalResult",
    "FilterSyntaxError",
    "FilterTypeError",
    "JsonLinesArchive",
    "JsonlError",
    "MountRegistry",
    "OptimakeError",
    "Page",
    "SourceError",
    "StoreError",
    "StructureEntry",
    "StructureParseError",
    "assign_ids",
    "build_info_document",
    "convert_dataset",
    "create_app",
    "dry_run_dataset",
    "dump_config",
    "evaluate",
    "load_config",
    "load_config_file",
    "load_snapshot",
    "parse_filter",
    "query",
    "read_archive_file",
    "read_jsonl",
    "reconcile",
    "scan",
    "selectivity_filter",
    "validate_config",
    "write_archive_file",
    "write_jsonl",
    "__version__",
]
