"""Deterministic serialization of results to JSON and CSV files."""

import csv
import hashlib
import io
import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .errors import InvalidArgumentError, PeriodRHError
from .zeros import DEFAULT_TOLERANCE

SCHEMA_VERSION = 1
OUTPUT_MODES = ("json", "csv", "both")
CACHE_ENV = "PERIODRH_CACHE_DIR"


class ReportIOError(PeriodRHError):
    """Writing a report failed; the message names the path."""


@dataclass(frozen=True)
class RunConfig:
    precision: int = None  # None: max(64, 2k) per weight
    tolerance: float = DEFAULT_TOLERANCE
    cache_dir: str = None
    seed: int = 0
    budget: int = 100_000
    output: str = "json"
    out_dir: str = None
    content_addressed: bool = False
    timestamp: bool = True
    threads: int = 1

    def __post_init__(self):
        if self.precision is not None and self.precision < 32:
            raise InvalidArgumentError(f"precision must be >= 32 digits, got {self.precision}")
        if not 0 < self.tolerance < 1e-4:
            raise InvalidArgumentError(f"tolerance must lie in (0, 1e-4), got {self.tolerance}")
        if self.budget < 1:
            raise InvalidArgumentError("budget must be >= 1")
        if self.seed < 0:
            raise InvalidArgumentError("seed must be non-negative")
        if self.output not in OUTPUT_MODES:
            raise InvalidArgumentError(f"output must be one of {OUTPUT_MODES}")
        if self.threads < 1:
            raise InvalidArgumentError("threads must be >= 1")


@dataclass(frozen=True)
class Result:
    """A payload of JSON-ready values plus an optional CSV view."""

    kind: str
    name: str
    payload: dict
    csv_header: tuple = ()
    csv_rows: list = field(default_factory=list)
    precision: int = None


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([str(x) for x in row])
    return buf.getvalue()


def sha256(text):
    return hashlib.sha256(text.encode()).hexdigest()


def build_document(result, config, csv_digest=None):
    """The JSON document; ``digest`` covers everything except the timestamp."""
    meta = {
        "tool": "periodrh",
        "tool_version": __version__,
        "schema_version": SCHEMA_VERSION,
        "precision": result.precision if result.precision is not None else config.precision,
        "seed": config.seed,
        "tolerance": repr(config.tolerance),
    }
    if csv_digest is not None:
        meta["csv_sha256"] = csv_digest
    doc = {"schema_version": SCHEMA_VERSION, "kind": result.kind, "metadata": meta, "result": result.payload}
    doc["digest"] = sha256(canonical_json(doc))
    if config.timestamp:
        doc["metadata"] = dict(meta, generated_at=datetime.now(timezone.utc).isoformat(timespec="seconds"))
    return doc


def strip_timestamp(doc):
    """Copy of a document without the timestamp, for comparisons."""
    out = dict(doc)
    out["metadata"] = {k: v for k, v in doc["metadata"].items() if k != "generated_at"}
    return out


def _write(path, text):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise ReportIOError(f"cannot write {path}: {exc.strerror or exc}") from exc


def emit_report(result, config, stream=None):
    """Write ``result`` per ``config``; returns the list of written paths.

    Without ``config.out_dir`` the text goes to ``stream`` (JSON, or CSV in
    csv mode; "both" prints the JSON, which records the CSV digest).
    """
    has_csv = bool(result.csv_header)
    mode = config.output
    if mode in ("csv", "both") and not has_csv:
        raise InvalidArgumentError(f"{result.kind} has no CSV form")
    csv_body = csv_text(result.csv_header, result.csv_rows) if has_csv and mode != "json" else None
    csv_digest = sha256(csv_body) if csv_body is not None else None
    doc = build_document(result, config, csv_digest if mode == "both" else None)
    json_body = canonical_json(doc)

    if config.out_dir is None:
        if stream is not None:
            stream.write(csv_body if mode == "csv" else json_body)
        return []

    out = Path(config.out_dir)
    stem = f"{result.name}-{doc['digest'][:16]}" if config.content_addressed else result.name
    paths = []
    if mode in ("csv", "both"):
        paths.append(out / f"{stem}.csv")
        _write(paths[-1], csv_body)
    if mode in ("json", "both"):
        paths.append(out / f"{stem}.json")
        _write(paths[-1], json_body)
    return paths
